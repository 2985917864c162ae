//! Compare a co-orbital formation against two independently designed orbits.
//!
//! Solves the illustrative scenario twice: first with both agents forced
//! onto one shared orbit with 180-degree spacing, then with the formation
//! constraints dropped and the co-orbital optimum injected as a warm start.
//! Relaxing constraints can only help, so the free design's objective is at
//! least the co-orbital one — the printout shows by how much.
//!
//! Run with: `cargo run --release --example relaxation_comparison`

use orbitplan::constraints::ParamVector;
use orbitplan::scenario::presets;
use orbitplan::solver::{solve_maxmin, warm_start};

fn main() {
    let quick = |name: &str| {
        let s = presets::build(name).expect("built-in preset");
        let mut opts = s.maxmin_options();
        opts.n_starts = 3;
        opts.nlp.max_outer = 8;
        opts.nlp.max_inner = 25;
        (s, opts)
    };

    let (co, co_opts) = quick("illustrative-coorbital");
    let co_report = solve_maxmin(&co.build_evaluator().expect("valid"), &co_opts).expect("solve");
    println!("co-orbital objective: {:.6} (feasible: {})", co_report.objective, co_report.feasible);

    let (free, mut free_opts) = quick("illustrative-2d");
    free_opts.extra_starts = vec![warm_start(
        &ParamVector(co_report.params.clone()),
        &free.agents.bounds,
    )
    .expect("co-orbital solution lies inside the free bounds")];
    let free_report =
        solve_maxmin(&free.build_evaluator().expect("valid"), &free_opts).expect("solve");
    println!("free-orbit objective: {:.6} (feasible: {})", free_report.objective, free_report.feasible);

    let gain = free_report.objective - co_report.objective;
    println!("relaxation gain: {gain:+.6} ({:+.2}%)", 100.0 * gain / co_report.objective);
    for (label, r) in [("co-orbital", &co_report), ("free", &free_report)] {
        println!();
        println!("{label} agent orbits (a km, e, raan, argp, inc, nu deg):");
        for j in 0..2 {
            let b = &r.params[6 * j..6 * j + 6];
            println!(
                "  agent {}: a={:.1} e={:.4} raan={:.1} argp={:.1} inc={:.2} nu={:.1}",
                j + 1,
                b[0],
                b[1],
                b[2],
                b[3],
                b[4],
                b[5]
            );
        }
    }
}
