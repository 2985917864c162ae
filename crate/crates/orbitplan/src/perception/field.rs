//! Grid-sampled observation quality fields for visualization.
//!
//! The field value at a point treats the point as a virtual observer and
//! sums, over targets, the best-face quality. This rendering convention is
//! used only for visualization output, never by the optimizer.

use super::quality::{face_normals_inertial, quality_entry, ObservationGeometry, QualityWeights};
use super::{FaceSet, PerceptionError, SensorModel};
use crate::astro::{Constants, StateVector};
use crate::Vec3;

/// One evaluated field point; `value` is `None` when the point lies inside
/// the Earth sphere (marked, not evaluated).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub pos: Vec3,
    pub value: Option<f64>,
}

/// Square grid of nx * ny points in the z = 0 plane spanning
/// [-extent_km, extent_km] on both axes, row-major in y then x.
pub fn planar_grid(nx: usize, ny: usize, extent_km: f64) -> Vec<Vec3> {
    let coord = |i: usize, n: usize| {
        if n == 1 {
            0.0
        } else {
            -extent_km + 2.0 * extent_km * i as f64 / (n - 1) as f64
        }
    };
    let mut pts = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            pts.push(Vec3::new(coord(ix, nx), coord(iy, ny), 0.0));
        }
    }
    pts
}

/// Evaluate the quality field at the given points for a snapshot of target
/// states.
pub fn quality_field(
    targets: &[(StateVector, &FaceSet)],
    sensor: &SensorModel,
    sun_unit: &Vec3,
    c: &Constants,
    weights: &QualityWeights,
    points: &[Vec3],
) -> Result<Vec<FieldSample>, PerceptionError> {
    // Face normals only depend on the target snapshot, not on the point.
    let normals: Vec<Vec<Vec3>> = targets
        .iter()
        .map(|(sv, faces)| face_normals_inertial(faces, sv))
        .collect::<Result<_, _>>()?;

    points
        .iter()
        .map(|p| {
            if p.norm() <= c.r_earth_km {
                return Ok(FieldSample { pos: *p, value: None });
            }
            let mut total = 0.0;
            for ((sv, _), face_normals) in targets.iter().zip(&normals) {
                let g = ObservationGeometry::new(sv.r, *p, *sun_unit)?;
                let mut best = 0.0_f64;
                for n in face_normals {
                    best = best.max(quality_entry(&g, n, sensor, c, weights)?);
                }
                total += best;
            }
            Ok(FieldSample { pos: *p, value: Some(total) })
        })
        .collect()
}

/// CSV export `x,y,z,value`; masked (inside-Earth) points carry `nan`.
pub fn field_to_csv(samples: &[FieldSample]) -> String {
    let mut out = String::from("x,y,z,value\r\n");
    for s in samples {
        match s.value {
            Some(v) => out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\r\n",
                s.pos.x, s.pos.y, s.pos.z, v
            )),
            None => out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},nan\r\n",
                s.pos.x, s.pos.y, s.pos.z
            )),
        }
    }
    out
}
