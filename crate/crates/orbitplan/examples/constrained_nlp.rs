//! The augmented-Lagrangian local solver on a hand-checkable program.
//!
//! Maximize x + y subject to x^2 + y^2 = 1 inside the unit box: the optimum
//! is (1/sqrt(2), 1/sqrt(2)) with objective sqrt(2). Also shows the
//! epigraph trick the max-min driver uses, on a two-piece toy: maximize
//! min(3 + x, 5 - x) over x in [0, 1] becomes maximize t with t bounded by
//! both pieces, giving t* = 4 at x* = 1.
//!
//! Run with: `cargo run --example constrained_nlp`

use orbitplan::solver::{solve_local, NlpEval, NlpOptions};

fn main() {
    // Equality-constrained program on the unit circle.
    let circle = |v: &[f64]| {
        Ok(NlpEval {
            objective: v[0] + v[1],
            eq: vec![v[0] * v[0] + v[1] * v[1] - 1.0],
            ineq: vec![],
        })
    };
    let r = solve_local(circle, &[0.3, 0.1], &[0.0, 0.0], &[1.0, 1.0], &NlpOptions::default())
        .expect("solve");
    println!("maximize x + y on the unit circle:");
    println!("  x = ({:.8}, {:.8})", r.x[0], r.x[1]);
    println!("  objective = {:.8} (exact: {:.8})", r.objective, 2.0_f64.sqrt());
    println!("  constraint violation = {:.2e}", r.max_violation);
    println!("  termination: {:?} after {} evaluations", r.termination, r.n_evals);
    println!();

    // Epigraph reformulation of a max-min.
    let epigraph = |v: &[f64]| {
        let (x, t) = (v[0], v[1]);
        Ok(NlpEval {
            objective: t,
            eq: vec![],
            ineq: vec![t - (3.0 + x), t - (5.0 - x)],
        })
    };
    let r = solve_local(epigraph, &[0.2, 0.5], &[0.0, 0.0], &[1.0, 8.0], &NlpOptions::default())
        .expect("solve");
    println!("maximize min(3 + x, 5 - x) via the epigraph variable t:");
    println!("  x = {:.6}, t = {:.6} (exact: x = 1, t = 4)", r.x[0], r.x[1]);
    println!(
        "  objective history (last 5 outer iterations): {:?}",
        &r.history[r.history.len().saturating_sub(5)..]
    );
}
