//! Propagate an elliptic orbit and check what the integrator conserves.
//!
//! Converts a Keplerian element set to a Cartesian state, integrates five
//! orbital periods with the fixed-step RK4 propagator, and prints the drift
//! in specific energy and angular momentum along with a few sampled states.
//!
//! Run with: `cargo run --example propagate_orbit`

use orbitplan::astro::{
    kepler_to_state, orbital_period, propagate, state_to_kepler, Constants, KeplerianElements,
    TimeGrid,
};

fn main() {
    let c = Constants::default();
    let el = KeplerianElements {
        a: 8033.72,                  // semi-major axis, km
        e: 0.126,                    // eccentricity
        inc: 12.0_f64.to_radians(),  // inclination
        raan: 40.0_f64.to_radians(), // right ascension of the ascending node
        argp: 68.0_f64.to_radians(), // argument of perigee
        nu: 247.0_f64.to_radians(),  // true anomaly at epoch
    };
    let period = orbital_period(el.a, &c).expect("positive semi-major axis");
    println!("orbital period: {period:.1} s ({:.2} h)", period / 3600.0);

    let sv0 = kepler_to_state(&el, &c).expect("valid elements");
    println!("epoch state: r = {:?} km", sv0.r.as_slice());
    println!("             v = {:?} km/s", sv0.v.as_slice());

    // Round trip back to elements: the conversion pair is exact to
    // floating-point round-off.
    let back = state_to_kepler(&sv0, &c).expect("valid state");
    println!("round-trip semi-major axis error: {:.2e} km", (back.a - el.a).abs());

    let grid = TimeGrid::new(0.0, 5.0 * period, 101).expect("valid grid");
    let eph = propagate(&sv0, &grid, None, None, &c).expect("propagation");

    let e0 = sv0.specific_energy(&c);
    let h0 = sv0.angular_momentum();
    let mut worst_energy = 0.0_f64;
    let mut worst_h = 0.0_f64;
    for sv in &eph.states {
        worst_energy = worst_energy.max(((sv.specific_energy(&c) - e0) / e0).abs());
        worst_h = worst_h.max(((sv.angular_momentum() - h0) / h0).abs());
    }
    println!("over 5 periods ({} samples):", grid.n_samples);
    println!("  max relative specific-energy drift:   {worst_energy:.2e}");
    println!("  max relative angular-momentum drift:  {worst_h:.2e}");

    for k in [1, 26, 51, 76, 101] {
        let sv = eph.state_at(k);
        println!(
            "  sample {k:>3}: t = {:8.1} s  |r| = {:9.2} km",
            grid.time_at(k),
            sv.r.norm()
        );
    }
}
