//! Sun-synchronous and frozen-orbit design equations.

use super::{AstroError, Constants};
use serde::{Deserialize, Serialize};

/// Which form of the frozen-eccentricity relation to use.
///
/// `Paper` iterates e = -(J2/J3) sin(i) / (2 a (1 - e^2)) with `a` in km.
/// `Standard` uses the textbook secular-cancellation value
/// e = -J3 R_E sin(i) / (2 J2 a), which carries an extra R_E factor and the
/// inverse coefficient ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrozenForm {
    #[default]
    Paper,
    Standard,
}

/// Nodal precession rate -(3/2) J2~ (R_E / (a (1-e^2)))^2 sqrt(mu/a^3) cos(i),
/// rad/s.
pub fn sso_precession_rate(a: f64, e: f64, inc: f64, c: &Constants) -> Result<f64, AstroError> {
    if !(a > 0.0) {
        return Err(AstroError::NonPositiveAxis(a));
    }
    let p = a * (1.0 - e * e);
    if !(p > 0.0) {
        return Err(AstroError::UnsupportedConic(e));
    }
    Ok(-1.5 * c.j2_tilde * (c.r_earth_km / p).powi(2) * (c.mu_km3_s2 / a.powi(3)).sqrt()
        * inc.cos())
}

/// Inclination at which the nodal precession rate equals `c.sso_rate_rad_s`,
/// found by bisection on [0, pi] to 1e-12 rad.
pub fn sso_inclination_for(a: f64, e: f64, c: &Constants) -> Result<f64, AstroError> {
    let coeff = sso_precession_rate(a, e, 0.0, c)?; // rate = coeff * cos(inc)
    let cos_inc = c.sso_rate_rad_s / coeff;
    if cos_inc.abs() > 1.0 {
        return Err(AstroError::InfeasibleSso { a, e, cos_inc });
    }
    // rate(inc) - target is monotone increasing in inc (coeff < 0).
    let f = |inc: f64| coeff * inc.cos() - c.sso_rate_rad_s;
    let (mut lo, mut hi) = (0.0_f64, std::f64::consts::PI);
    debug_assert!(f(lo) <= 0.0 && f(hi) >= 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

const FROZEN_MAX_ITER: usize = 50;

/// Frozen-orbit eccentricity: the fixed point of the chosen relation,
/// iterated from e = 0 until |delta e| < 1e-12.
pub fn frozen_eccentricity(
    a: f64,
    inc: f64,
    form: FrozenForm,
    c: &Constants,
) -> Result<f64, AstroError> {
    if !(a > 0.0) {
        return Err(AstroError::NonPositiveAxis(a));
    }
    let step = |e: f64| -> f64 {
        match form {
            FrozenForm::Paper => -(c.j2 / c.j3) * inc.sin() / (2.0 * a * (1.0 - e * e)),
            FrozenForm::Standard => -c.j3 * c.r_earth_km * inc.sin() / (2.0 * c.j2 * a),
        }
    };
    let mut e = 0.0_f64;
    for _ in 0..FROZEN_MAX_ITER {
        let next = step(e);
        if !next.is_finite() {
            return Err(AstroError::FrozenOutOfRange(next));
        }
        let delta = (next - e).abs();
        e = next;
        if delta < 1e-12 {
            if !(0.0..1.0).contains(&e) {
                return Err(AstroError::FrozenOutOfRange(e));
            }
            return Ok(e);
        }
    }
    Err(AstroError::FrozenNoConvergence(FROZEN_MAX_ITER))
}
