//! Integrator checks against the analytic Kepler-equation oracle.

mod common;

use common::analytic_state;
use orbitplan::astro::{
    kepler_to_state, orbital_period, propagate, rk4_step, Constants, KeplerianElements, TimeGrid,
};
use orbitplan::Vec3;

fn c() -> Constants {
    Constants::default()
}

fn elliptic() -> KeplerianElements {
    KeplerianElements {
        a: 8000.0,
        e: 0.1,
        inc: 0.4,
        raan: 1.0,
        argp: 0.7,
        nu: 0.3,
    }
}

/// Integrate a fixed 200 s window with n equal RK4 steps; return the final
/// position error against the analytic solution.
fn window_error(n_steps: usize) -> f64 {
    let cst = c();
    let el = elliptic();
    let window = 200.0;
    let h = window / n_steps as f64;
    let accel = |_t: f64, r: &Vec3| -> Vec3 {
        let rm = r.norm();
        -cst.mu_km3_s2 / (rm * rm * rm) * r
    };
    let mut sv = kepler_to_state(&el, &cst).unwrap();
    for i in 0..n_steps {
        sv = rk4_step(&sv, i as f64 * h, h, &accel).unwrap();
    }
    let exact = analytic_state(&el, window, &cst);
    (sv.r - exact.r).norm()
}

#[test]
fn rk4_is_fourth_order_against_kepler_oracle() {
    // Halving the step over a fixed window shrinks the error ~16x.
    let e1 = window_error(20);
    let e2 = window_error(40);
    let ratio = e1 / e2;
    assert!(
        (11.0..24.0).contains(&ratio),
        "convergence ratio {ratio} (errors {e1:.3e} / {e2:.3e})"
    );
}

#[test]
fn propagation_tracks_analytic_solution_over_one_period() {
    let cst = c();
    let el = elliptic();
    let t = orbital_period(el.a, &cst).unwrap();
    let grid = TimeGrid::new(0.0, t, 50).unwrap();
    let sv0 = kepler_to_state(&el, &cst).unwrap();
    let eph = propagate(&sv0, &grid, None, None, &cst).unwrap();
    for (k, dt) in grid.times().enumerate() {
        let exact = analytic_state(&el, dt, &cst);
        let err = (eph.states[k].r - exact.r).norm() / exact.r.norm();
        assert!(err < 1e-8, "sample {k}: relative position error {err:.3e}");
    }
}

#[test]
fn circularized_reference_orbit_returns_after_five_periods() {
    let cst = c();
    let el = KeplerianElements {
        a: 8033.72,
        e: 0.0,
        inc: 0.0,
        raan: 0.0,
        argp: 0.0,
        nu: 0.0,
    };
    let t = orbital_period(el.a, &cst).unwrap();
    let grid = TimeGrid::new(0.0, 5.0 * t, 11).unwrap();
    let sv0 = kepler_to_state(&el, &cst).unwrap();
    let eph = propagate(&sv0, &grid, None, None, &cst).unwrap();
    let err = (eph.states[10].r - eph.states[0].r).norm() / eph.states[0].r.norm();
    assert!(err < 1e-5, "five-period closure error {err:.3e}");
}
