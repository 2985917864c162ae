//! Max-min orbit optimization on the desk-scale two-agent benchmark.
//!
//! The `toy-2agent` preset pins everything except the two true anomalies, so
//! the whole design space is a 2-D plane and the multi-start solver's
//! behavior is easy to inspect. Prints the per-start outcomes and the
//! winning phasing.
//!
//! Run with: `cargo run --release --example optimize_toy`

use orbitplan::scenario::presets;
use orbitplan::solver::solve_maxmin;

fn main() {
    let scenario = presets::build("toy-2agent").expect("built-in preset");
    let evaluator = scenario.build_evaluator().expect("valid scenario");

    let mut opts = scenario.maxmin_options();
    opts.n_starts = 8;
    opts.nlp.max_outer = 12;
    opts.nlp.max_inner = 80;

    let report = solve_maxmin(&evaluator, &opts).expect("solve");
    println!(
        "objective (min cumulative quality over faces): {:.6}",
        report.objective
    );
    println!("feasible: {}   min separation: {:.1} km", report.feasible, report.d_min_km);
    println!("nu_1 = {:.2} deg, nu_2 = {:.2} deg", report.params[5], report.params[11]);
    println!();
    println!("start   initial obj   final obj    violation   termination");
    for s in &report.starts {
        println!(
            "{:>5}   {:>11.6}   {:>9.6}   {:>9.2e}   {:?}",
            s.index, s.start_objective, s.objective, s.max_violation, s.termination
        );
    }
}
