//! Two-body dynamics, Keplerian element algebra, numerical propagation and
//! the sun-synchronous / frozen-orbit design equations.
//!
//! Positions are kilometers, velocities km/s, angles radians unless a name
//! says otherwise. All operations are pure functions of their inputs and
//! safe to call concurrently.

mod design;
mod elements;
mod propagate;

pub use design::{frozen_eccentricity, sso_inclination_for, sso_precession_rate, FrozenForm};
pub use elements::{kepler_to_state, state_to_kepler};
pub use propagate::{propagate, rk4_step, two_body_accel, DisturbanceFn};

use crate::Vec3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Threshold below which eccentricity / inclination are treated as zero when
/// canonicalizing degenerate angles.
pub const DEGENERATE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum AstroError {
    #[error("unsupported conic: eccentricity {0} >= 1")]
    UnsupportedConic(f64),
    #[error("orbit is not bound (specific energy {0} >= 0)")]
    UnboundOrbit(f64),
    #[error("zero angular momentum (rectilinear trajectory)")]
    ZeroAngularMomentum,
    #[error("position magnitude is zero")]
    ZeroRadius,
    #[error("non-finite state encountered at t = {t} s")]
    NonFiniteState { t: f64 },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("no sun-synchronous inclination exists for a = {a} km, e = {e} (|cos i| = {cos_inc} > 1)")]
    InfeasibleSso { a: f64, e: f64, cos_inc: f64 },
    #[error("frozen eccentricity iteration did not converge within {0} iterations")]
    FrozenNoConvergence(usize),
    #[error("frozen eccentricity fixed point {0} outside [0, 1)")]
    FrozenOutOfRange(f64),
    #[error("semi-major axis must be positive, got {0}")]
    NonPositiveAxis(f64),
    #[error("LVLH frame undefined: |r x v| ~ 0")]
    DegenerateLvlh,
}

/// Physical constants of the central body and the SSO design target.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Constants {
    /// Gravitational parameter, km^3/s^2.
    pub mu_km3_s2: f64,
    /// Mean Earth radius, km.
    pub r_earth_km: f64,
    /// Dimensionless zonal harmonic coefficient driving nodal precession.
    pub j2_tilde: f64,
    /// Second gravity coefficient (frozen-orbit design).
    pub j2: f64,
    /// Third gravity coefficient (frozen-orbit design).
    pub j3: f64,
    /// Target nodal precession rate for a sun-synchronous orbit, rad/s.
    pub sso_rate_rad_s: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            mu_km3_s2: 398600.4418,
            r_earth_km: 6371.0,
            j2_tilde: 1.08263e-3,
            j2: 1.08263e-3,
            j3: -2.53215e-6,
            // 365/365.242199 degree/day expressed in rad/s.
            sso_rate_rad_s: 1.991063802746144e-7,
        }
    }
}

impl Constants {
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("mu_km3_s2", self.mu_km3_s2),
            ("r_earth_km", self.r_earth_km),
            ("j2_tilde", self.j2_tilde),
            ("j2", self.j2),
            ("j3", self.j3),
            ("sso_rate_rad_s", self.sso_rate_rad_s),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(format!("constant {name} is not finite"));
            }
        }
        if self.mu_km3_s2 <= 0.0 {
            return Err("mu_km3_s2 must be positive".into());
        }
        if self.r_earth_km <= 0.0 {
            return Err("r_earth_km must be positive".into());
        }
        if self.j2_tilde <= 0.0 {
            return Err("j2_tilde must be positive".into());
        }
        Ok(())
    }
}

/// Classical Keplerian elements at epoch. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeplerianElements {
    /// Semi-major axis, km.
    pub a: f64,
    /// Eccentricity.
    pub e: f64,
    /// Inclination, rad, in [0, pi].
    pub inc: f64,
    /// Longitude of the ascending node, rad, in [0, 2pi).
    pub raan: f64,
    /// Argument of perigee, rad, in [0, 2pi).
    pub argp: f64,
    /// True anomaly at epoch, rad, in [0, 2pi).
    pub nu: f64,
}

impl KeplerianElements {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.a > 0.0) {
            return Err(format!("semi-major axis must be positive, got {}", self.a));
        }
        if !(0.0..1.0).contains(&self.e) {
            return Err(format!("eccentricity must be in [0, 1), got {}", self.e));
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.inc) {
            return Err(format!("inclination must be in [0, pi], got {}", self.inc));
        }
        for (name, v) in [("raan", self.raan), ("argp", self.argp), ("nu", self.nu)] {
            if !v.is_finite() {
                return Err(format!("{name} is not finite"));
            }
        }
        Ok(())
    }

    /// Orbital period 2*pi*sqrt(a^3/mu), s.
    pub fn period(&self, c: &Constants) -> f64 {
        orbital_period(self.a, c).expect("validated elements have a > 0")
    }
}

/// Cartesian state in the inertial frame: position km, velocity km/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub r: Vec3,
    pub v: Vec3,
}

impl StateVector {
    pub fn new(r: Vec3, v: Vec3) -> Self {
        StateVector { r, v }
    }

    pub fn is_finite(&self) -> bool {
        self.r.iter().chain(self.v.iter()).all(|x| x.is_finite())
    }

    /// Specific orbital energy v^2/2 - mu/|r|, km^2/s^2.
    pub fn specific_energy(&self, c: &Constants) -> f64 {
        0.5 * self.v.norm_squared() - c.mu_km3_s2 / self.r.norm()
    }

    /// Specific angular momentum magnitude |r x v|, km^2/s.
    pub fn angular_momentum(&self) -> f64 {
        self.r.cross(&self.v).norm()
    }
}

/// Uniform sampling grid over the mission window.
///
/// Sample times are `t_k = t_start + (k - 1) * ts` for `k = 1..=n_samples`
/// with `ts = (t_end - t_start) / (n_samples - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub n_samples: usize,
}

impl TimeGrid {
    pub fn new(t_start_s: f64, t_end_s: f64, n_samples: usize) -> Result<Self, AstroError> {
        let grid = TimeGrid { t_start_s, t_end_s, n_samples };
        grid.validate().map_err(AstroError::InvalidGrid)?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.t_end_s > self.t_start_s) {
            return Err(format!(
                "t_end ({}) must exceed t_start ({})",
                self.t_end_s, self.t_start_s
            ));
        }
        if self.n_samples < 2 {
            return Err(format!("need at least 2 samples, got {}", self.n_samples));
        }
        Ok(())
    }

    /// Sample spacing, s.
    pub fn ts(&self) -> f64 {
        (self.t_end_s - self.t_start_s) / (self.n_samples - 1) as f64
    }

    /// Sample time for 1-based index k.
    pub fn time_at(&self, k: usize) -> f64 {
        self.t_start_s + (k - 1) as f64 * self.ts()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.n_samples).map(|k| self.time_at(k))
    }
}

/// Time-sampled states of one object over the mission window.
#[derive(Debug, Clone, PartialEq)]
pub struct Ephemeris {
    pub grid: TimeGrid,
    pub states: Vec<StateVector>,
}

impl Ephemeris {
    pub fn new(grid: TimeGrid, states: Vec<StateVector>) -> Self {
        assert_eq!(states.len(), grid.n_samples, "states must match grid length");
        Ephemeris { grid, states }
    }

    /// State at 1-based sample index k.
    pub fn state_at(&self, k: usize) -> &StateVector {
        &self.states[k - 1]
    }

    /// Export as CSV with header `t,x,y,z,vx,vy,vz`, full double precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z,vx,vy,vz\r\n");
        for (t, s) in self.grid.times().zip(&self.states) {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\r\n",
                t, s.r.x, s.r.y, s.r.z, s.v.x, s.v.y, s.v.z
            ));
        }
        out
    }
}

/// Orbital period 2*pi*sqrt(a^3/mu), s.
pub fn orbital_period(a: f64, c: &Constants) -> Result<f64, AstroError> {
    if !(a > 0.0) {
        return Err(AstroError::NonPositiveAxis(a));
    }
    Ok(std::f64::consts::TAU * (a.powi(3) / c.mu_km3_s2).sqrt())
}

/// Normalize an angle to [0, 2pi).
pub(crate) fn wrap_angle(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut y = x % tau;
    if y < 0.0 {
        y += tau;
    }
    // The remainder can round up to exactly tau.
    if y >= tau {
        y = 0.0;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn period_matches_scenario_horizon() {
        // Five periods of the slowest illustrative orbit: 35830.7 s.
        let c = Constants::default();
        let t = orbital_period(8033.72, &c).unwrap();
        assert_relative_eq!(5.0 * t, 35830.7, max_relative = 1e-5);
    }

    #[test]
    fn period_direct_arithmetic() {
        let c = Constants::default();
        assert_relative_eq!(orbital_period(7000.0, &c).unwrap(), 5828.5, max_relative = 1e-4);
        // Geostationary radius recovers the sidereal day.
        let t_geo = orbital_period(42164.0, &c).unwrap();
        assert!((t_geo - 86164.0).abs() < 5.0, "t_geo = {t_geo}");
    }

    #[test]
    fn period_rejects_nonpositive_axis() {
        let c = Constants::default();
        assert!(orbital_period(0.0, &c).is_err());
        assert!(orbital_period(-7000.0, &c).is_err());
    }

    #[test]
    fn grid_rejects_degenerate_window() {
        assert!(TimeGrid::new(0.0, 0.0, 2).is_err());
        assert!(TimeGrid::new(0.0, 100.0, 1).is_err());
        let g = TimeGrid::new(0.0, 100.0, 5).unwrap();
        assert_eq!(g.ts(), 25.0);
        assert_eq!(g.time_at(1), 0.0);
        assert_eq!(g.time_at(5), 100.0);
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert_relative_eq!(wrap_angle(-0.1), std::f64::consts::TAU - 0.1);
        assert_relative_eq!(wrap_angle(7.0), 7.0 - std::f64::consts::TAU);
        assert_eq!(wrap_angle(std::f64::consts::TAU), 0.0);
    }
}
