fn main() {
    std::process::exit(orbitplan::cli::run());
}
