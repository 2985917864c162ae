//! Individual quality components and their weighted combination.

use super::{FaceSet, FrameMode, PerceptionError, SensorModel};
use crate::astro::{AstroError, Constants, StateVector};
use crate::Vec3;
use serde::{Deserialize, Serialize};

/// Geometry of one (target, observer, sample) triple. Positions km, range m.
#[derive(Debug, Clone, Copy)]
pub struct ObservationGeometry {
    /// Target position, km.
    pub target_pos: Vec3,
    /// Observer position, km.
    pub observer_pos: Vec3,
    /// Unit vector from target to observer.
    pub view_unit: Vec3,
    /// Target-observer range, m.
    pub delta_m: f64,
    /// Earth-to-Sun unit direction.
    pub sun_unit: Vec3,
}

impl ObservationGeometry {
    pub fn new(target_pos: Vec3, observer_pos: Vec3, sun_unit: Vec3) -> Result<Self, PerceptionError> {
        let sep = observer_pos - target_pos;
        let dist_km = sep.norm();
        if !(dist_km > 0.0) {
            return Err(PerceptionError::NonPositiveRange(dist_km));
        }
        Ok(ObservationGeometry {
            target_pos,
            observer_pos,
            view_unit: sep / dist_km,
            delta_m: dist_km * 1000.0,
            sun_unit,
        })
    }
}

/// Per-component exponents of the combined quality product.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QualityWeights {
    pub resolve: f64,
    pub los: f64,
    pub lum: f64,
    pub lit: f64,
    pub view: f64,
}

impl Default for QualityWeights {
    fn default() -> Self {
        QualityWeights { resolve: 1.0, los: 1.0, lum: 1.0, lit: 1.0, view: 1.0 }
    }
}

/// Resolving quality min(1, delta_ref / delta).
///
/// The raw diffraction-limit value D / (1.22 lambda delta) is unbounded as
/// delta -> 0; it is normalized by its value at the sensor's reference range
/// and clamped to 1 so the combined metric stays in [0, 1].
pub fn q_resolve(delta_m: f64, s: &SensorModel) -> Result<f64, PerceptionError> {
    if !(delta_m > 0.0) {
        return Err(PerceptionError::NonPositiveRange(delta_m));
    }
    let raw = s.aperture_d_m / (1.22 * s.wavelength_m * delta_m);
    let at_ref = s.aperture_d_m / (1.22 * s.wavelength_m * s.resolve_ref_distance_m);
    Ok((raw / at_ref).min(1.0))
}

/// Angle in [0, pi] between the view direction (target to observer) and the
/// direction sunlight travels (-sun_unit).
pub fn alpha_lit(g: &ObservationGeometry) -> f64 {
    let cos_a = g.view_unit.dot(&-g.sun_unit).clamp(-1.0, 1.0);
    cos_a.acos()
}

/// Illumination-angle quality: q_min + (1-q_min) sin^2(2 alpha) for
/// alpha < pi/2, q_min for alpha >= pi/2 (back-lit silhouette regime).
pub fn q_lit(alpha: f64, q_min: f64) -> f64 {
    if alpha < std::f64::consts::FRAC_PI_2 {
        let s = (2.0 * alpha).sin();
        q_min + (1.0 - q_min) * s * s
    } else {
        q_min
    }
}

/// Line-of-sight quality: 0 iff the open segment between the two points
/// passes within `r_earth` of the origin, else 1.
pub fn q_los(target: &Vec3, observer: &Vec3, c: &Constants) -> Result<f64, PerceptionError> {
    for p in [target, observer] {
        if p.norm() < c.r_earth_km {
            return Err(PerceptionError::InsideEarth(p.norm()));
        }
    }
    let d = observer - target;
    let len2 = d.norm_squared();
    // Closest point of the segment to the origin.
    let t = if len2 > 0.0 { (-target.dot(&d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let closest = target + t * d;
    Ok(if closest.norm() < c.r_earth_km { 0.0 } else { 1.0 })
}

/// Sunlight quality: 1 outside the cylindrical umbra behind the Earth,
/// `q_dark` inside (no penumbra model).
pub fn q_lum(target: &Vec3, sun_unit: &Vec3, c: &Constants, q_dark: f64) -> Result<f64, PerceptionError> {
    if target.norm() <= c.r_earth_km {
        return Err(PerceptionError::InsideEarth(target.norm()));
    }
    if target.dot(sun_unit) >= 0.0 {
        return Ok(1.0);
    }
    // Perpendicular distance from the anti-sun shadow axis.
    let axis_dist = target.cross(sun_unit).norm();
    Ok(if axis_dist >= c.r_earth_km { 1.0 } else { q_dark })
}

/// Realize body-frame face normals in the inertial frame at one sample.
///
/// Inertial mode returns the stored normals unchanged; LVLH mode rotates by
/// the orthonormal frame {radial, transverse, orbit-normal} built from the
/// target state.
pub fn face_normals_inertial(
    faces: &FaceSet,
    sv: &StateVector,
) -> Result<Vec<Vec3>, PerceptionError> {
    match faces.frame_mode {
        FrameMode::Inertial => Ok(faces.normals.clone()),
        FrameMode::Lvlh => {
            let h = sv.r.cross(&sv.v);
            if h.norm() < 1e-9 {
                return Err(PerceptionError::Astro(AstroError::DegenerateLvlh));
            }
            let radial = sv.r.normalize();
            let normal = h.normalize();
            let transverse = normal.cross(&radial);
            Ok(faces
                .normals
                .iter()
                .map(|n| n.x * radial + n.y * transverse + n.z * normal)
                .collect())
        }
    }
}

/// Face-visibility quality max(0, n . v).
pub fn q_view(normal: &Vec3, view_unit: &Vec3) -> f64 {
    normal.dot(view_unit).max(0.0)
}

/// Combined observation quality: the weighted product of the resolving,
/// line-of-sight, sunlight, illumination-angle and face-visibility factors.
pub fn quality_entry(
    g: &ObservationGeometry,
    normal: &Vec3,
    s: &SensorModel,
    c: &Constants,
    w: &QualityWeights,
) -> Result<f64, PerceptionError> {
    let qr = q_resolve(g.delta_m, s)?;
    let qo = q_los(&g.target_pos, &g.observer_pos, c)?;
    let ql = q_lum(&g.target_pos, &g.sun_unit, c, s.q_dark)?;
    let qa = q_lit(alpha_lit(g), s.q_lit_min);
    let qv = q_view(normal, &g.view_unit);
    Ok(qr.powf(w.resolve) * qo.powf(w.los) * ql.powf(w.lum) * qa.powf(w.lit) * qv.powf(w.view))
}
