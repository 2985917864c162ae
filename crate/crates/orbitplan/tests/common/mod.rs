//! Shared test oracles: analytic two-body propagation via Kepler's equation,
//! independent of the RK4 integrator under test.

use orbitplan::astro::{kepler_to_state, Constants, KeplerianElements, StateVector};

/// Eccentric anomaly from true anomaly.
fn ecc_anomaly(nu: f64, e: f64) -> f64 {
    2.0 * ((1.0 - e).sqrt() * (nu / 2.0).sin()).atan2((1.0 + e).sqrt() * (nu / 2.0).cos())
}

/// True anomaly from eccentric anomaly.
fn true_anomaly(ea: f64, e: f64) -> f64 {
    2.0 * ((1.0 + e).sqrt() * (ea / 2.0).sin()).atan2((1.0 - e).sqrt() * (ea / 2.0).cos())
}

/// Solve Kepler's equation E - e sin E = M by Newton iteration.
fn solve_kepler(m: f64, e: f64) -> f64 {
    let mut ea = if e < 0.8 { m } else { std::f64::consts::PI };
    for _ in 0..100 {
        let f = ea - e * ea.sin() - m;
        let fp = 1.0 - e * ea.cos();
        let d = f / fp;
        ea -= d;
        if d.abs() < 1e-14 {
            break;
        }
    }
    ea
}

/// Exact (to round-off) state `dt` seconds after the epoch elements.
pub fn analytic_state(el0: &KeplerianElements, dt: f64, c: &Constants) -> StateVector {
    let n = (c.mu_km3_s2 / el0.a.powi(3)).sqrt();
    let e0 = ecc_anomaly(el0.nu, el0.e);
    let m0 = e0 - el0.e * e0.sin();
    let m = m0 + n * dt;
    let ea = solve_kepler(m, el0.e);
    let nu = true_anomaly(ea, el0.e);
    let el = KeplerianElements { nu, ..*el0 };
    kepler_to_state(&el, c).expect("oracle elements are valid")
}
