//! Conversions between Keplerian elements and Cartesian state vectors.

use super::{wrap_angle, AstroError, Constants, KeplerianElements, StateVector, DEGENERATE_TOL};
use crate::Vec3;
use nalgebra::Rotation3;

/// Convert Keplerian elements to a Cartesian state via the perifocal frame.
pub fn kepler_to_state(el: &KeplerianElements, c: &Constants) -> Result<StateVector, AstroError> {
    if el.e >= 1.0 {
        return Err(AstroError::UnsupportedConic(el.e));
    }
    if !(el.a > 0.0) {
        return Err(AstroError::NonPositiveAxis(el.a));
    }
    let p = el.a * (1.0 - el.e * el.e);
    let (sin_nu, cos_nu) = el.nu.sin_cos();
    let radius = p / (1.0 + el.e * cos_nu);
    let r_pf = Vec3::new(radius * cos_nu, radius * sin_nu, 0.0);
    let vf = (c.mu_km3_s2 / p).sqrt();
    let v_pf = Vec3::new(-vf * sin_nu, vf * (el.e + cos_nu), 0.0);

    let rot = Rotation3::from_axis_angle(&Vec3::z_axis(), el.raan)
        * Rotation3::from_axis_angle(&Vec3::x_axis(), el.inc)
        * Rotation3::from_axis_angle(&Vec3::z_axis(), el.argp);
    Ok(StateVector::new(rot * r_pf, rot * v_pf))
}

/// Convert a Cartesian state to Keplerian elements.
///
/// Degenerate angles are canonicalized: for `e < 1e-10` the argument of
/// perigee is taken as zero and the in-plane angle folded into `nu`; for
/// `inc < 1e-10` (and for near-pi retrograde equatorial orbits) the RAAN is
/// taken as zero and folded into `argp`.
pub fn state_to_kepler(sv: &StateVector, c: &Constants) -> Result<KeplerianElements, AstroError> {
    if !sv.is_finite() {
        return Err(AstroError::NonFiniteState { t: f64::NAN });
    }
    let r = sv.r;
    let v = sv.v;
    let r_mag = r.norm();
    if r_mag == 0.0 {
        return Err(AstroError::ZeroRadius);
    }
    let mu = c.mu_km3_s2;
    let energy = 0.5 * v.norm_squared() - mu / r_mag;
    if energy >= 0.0 {
        return Err(AstroError::UnboundOrbit(energy));
    }
    let h = r.cross(&v);
    let h_mag = h.norm();
    if h_mag < 1e-12 * r_mag * v.norm().max(1.0) {
        return Err(AstroError::ZeroAngularMomentum);
    }
    let h_hat = h / h_mag;

    let a = -mu / (2.0 * energy);
    let e_vec = (r * (v.norm_squared() - mu / r_mag) - v * r.dot(&v)) / mu;
    let e = e_vec.norm();
    let inc = f64::atan2(h.xy().norm(), h.z);

    let equatorial = inc < DEGENERATE_TOL || inc > std::f64::consts::PI - DEGENERATE_TOL;
    let circular = e < DEGENERATE_TOL;

    // In-plane reference direction from which argp is measured: the ascending
    // node, or +x folded into the orbit plane when the node is undefined.
    let node_ref = if equatorial {
        Vec3::x()
    } else {
        Vec3::new(-h.y, h.x, 0.0).normalize()
    };
    let node_perp = h_hat.cross(&node_ref);

    let raan = if equatorial { 0.0 } else { wrap_angle(f64::atan2(h.x, -h.y)) };

    let (argp, nu) = if circular {
        // argp = 0; measure nu from the node reference.
        let u = f64::atan2(r.dot(&node_perp), r.dot(&node_ref));
        (0.0, wrap_angle(u))
    } else {
        let argp = f64::atan2(e_vec.dot(&node_perp), e_vec.dot(&node_ref));
        let e_hat = e_vec / e;
        let e_perp = h_hat.cross(&e_hat);
        let nu = f64::atan2(r.dot(&e_perp), r.dot(&e_hat));
        (wrap_angle(argp), wrap_angle(nu))
    };

    Ok(KeplerianElements { a, e: e.min(1.0 - f64::EPSILON), inc, raan, argp, nu })
}
