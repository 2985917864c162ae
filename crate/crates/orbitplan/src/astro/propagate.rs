//! Fixed-step RK4 propagation of the two-body equations of motion.

use super::{
    orbital_period, state_to_kepler, AstroError, Constants, Ephemeris, StateVector, TimeGrid,
};
use crate::Vec3;

/// Disturbance acceleration hook d(t, r) -> km/s^2. Models attitude-control
/// actions and unmodeled perturbations; the default (absent hook) is zero.
pub type DisturbanceFn<'a> = dyn Fn(f64, &Vec3) -> Vec3 + 'a;

/// Point-mass gravity plus disturbance: -mu * r / |r|^3 + d.
pub fn two_body_accel(r: &Vec3, d: &Vec3, c: &Constants) -> Result<Vec3, AstroError> {
    let r_mag = r.norm();
    if r_mag == 0.0 {
        return Err(AstroError::ZeroRadius);
    }
    Ok(-c.mu_km3_s2 / r_mag.powi(3) * r + d)
}

/// One classical 4-stage Runge-Kutta step of the state ODE.
///
/// `accel_fn(t, r) -> km/s^2` supplies the full acceleration field.
pub fn rk4_step<F>(sv: &StateVector, t: f64, h: f64, accel_fn: &F) -> Result<StateVector, AstroError>
where
    F: Fn(f64, &Vec3) -> Vec3,
{
    if !sv.is_finite() {
        return Err(AstroError::NonFiniteState { t });
    }
    let k1r = sv.v;
    let k1v = accel_fn(t, &sv.r);
    let k2r = sv.v + 0.5 * h * k1v;
    let k2v = accel_fn(t + 0.5 * h, &(sv.r + 0.5 * h * k1r));
    let k3r = sv.v + 0.5 * h * k2v;
    let k3v = accel_fn(t + 0.5 * h, &(sv.r + 0.5 * h * k2r));
    let k4r = sv.v + h * k3v;
    let k4v = accel_fn(t + h, &(sv.r + h * k3r));

    let next = StateVector::new(
        sv.r + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r),
        sv.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    );
    if !next.is_finite() {
        return Err(AstroError::NonFiniteState { t: t + h });
    }
    Ok(next)
}

/// Propagate an initial state over the grid with internal RK4 substeps.
///
/// The internal step is `min(ts, t_orbit / 2000)` where `t_orbit` is the
/// orbital period of the initial state; `max_substep_s` tightens it further
/// when the scenario contains faster objects. The quality-sampling grid is
/// decoupled from the integration step.
pub fn propagate(
    init: &StateVector,
    grid: &TimeGrid,
    d_fn: Option<&DisturbanceFn>,
    max_substep_s: Option<f64>,
    c: &Constants,
) -> Result<Ephemeris, AstroError> {
    grid.validate().map_err(AstroError::InvalidGrid)?;
    let el = state_to_kepler(init, c)?;
    let period = orbital_period(el.a, c)?;
    let mut h_max = grid.ts().min(period / 2000.0);
    if let Some(cap) = max_substep_s {
        h_max = h_max.min(cap);
    }

    let accel = |t: f64, r: &Vec3| -> Vec3 {
        let d = d_fn.map(|f| f(t, r)).unwrap_or_else(Vec3::zeros);
        // Radius cannot vanish on a bound elliptic orbit; guard anyway so a
        // wild disturbance surfaces as a non-finite state error.
        let r_mag = r.norm();
        -c.mu_km3_s2 / (r_mag * r_mag * r_mag) * r + d
    };

    let ts = grid.ts();
    let n_sub = (ts / h_max).ceil().max(1.0) as usize;
    let h = ts / n_sub as f64;

    let mut states = Vec::with_capacity(grid.n_samples);
    let mut sv = *init;
    states.push(sv);
    for k in 1..grid.n_samples {
        let t0 = grid.time_at(k);
        for s in 0..n_sub {
            sv = rk4_step(&sv, t0 + s as f64 * h, h, &accel)?;
        }
        states.push(sv);
    }
    Ok(Ephemeris::new(*grid, states))
}
