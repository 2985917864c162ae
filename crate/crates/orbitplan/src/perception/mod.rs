//! Per-face observation quality metric, the 4-D quality tensor and its
//! cumulative reduction, and grid-sampled quality fields.
//!
//! Every quality component lies in [0, 1]; the combined entry is a weighted
//! product, so a single zero component (occlusion, unseen face) annihilates
//! the entry.

mod field;
mod quality;
mod tensor;

pub use field::{field_to_csv, planar_grid, quality_field, FieldSample};
pub use quality::{
    alpha_lit, face_normals_inertial, q_lit, q_los, q_lum, q_resolve, q_view, quality_entry,
    ObservationGeometry, QualityWeights,
};
pub use tensor::{j_sum, quality_tensor, AgentBody, QualityMatrix, QualityTensor, TargetBody};

use crate::Vec3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PerceptionError {
    #[error("range delta must be positive, got {0}")]
    NonPositiveRange(f64),
    #[error("position inside the Earth sphere (|r| = {0} km)")]
    InsideEarth(f64),
    #[error("ephemerides do not share one time grid")]
    MismatchedGrids,
    #[error("face normal {index} is not unit length (|n| = {norm})")]
    NonUnitNormal { index: usize, norm: f64 },
    #[error("face set must contain at least one normal")]
    EmptyFaceSet,
    #[error(transparent)]
    Astro(#[from] crate::astro::AstroError),
}

/// Passive optical sensor parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensorModel {
    /// Lens aperture diameter, m.
    pub aperture_d_m: f64,
    /// Light wavelength, m.
    pub wavelength_m: f64,
    /// Floor of the illumination-angle quality.
    pub q_lit_min: f64,
    /// Luminance quality assigned to dark (eclipsed) images.
    pub q_dark: f64,
    /// Reference range at which the resolving quality saturates at 1, m.
    pub resolve_ref_distance_m: f64,
}

impl Default for SensorModel {
    fn default() -> Self {
        SensorModel {
            aperture_d_m: 0.2,
            wavelength_m: 550e-9,
            q_lit_min: 0.2,
            q_dark: 0.01,
            resolve_ref_distance_m: 400_000.0,
        }
    }
}

impl SensorModel {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.aperture_d_m > 0.0) {
            return Err(format!("aperture_d_m must be positive, got {}", self.aperture_d_m));
        }
        if !(self.wavelength_m > 0.0) {
            return Err(format!("wavelength_m must be positive, got {}", self.wavelength_m));
        }
        if !(0.0..=1.0).contains(&self.q_lit_min) {
            return Err(format!("q_lit_min must be in [0, 1], got {}", self.q_lit_min));
        }
        if !(self.q_dark > 0.0 && self.q_dark < 1.0) {
            return Err(format!("q_dark must be in (0, 1), got {}", self.q_dark));
        }
        if !(self.resolve_ref_distance_m > 0.0) {
            return Err(format!(
                "resolve_ref_distance_m must be positive, got {}",
                self.resolve_ref_distance_m
            ));
        }
        Ok(())
    }
}

/// How stored face normals are realized in the inertial frame over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameMode {
    /// Normals are fixed in the inertial frame.
    Inertial,
    /// Normals are body-fixed in the local-vertical/local-horizontal frame
    /// {radial, transverse, orbit-normal} (nadir-pointing attitude).
    #[default]
    Lvlh,
}

/// The faces of interest on one target: unit outward normals plus the frame
/// they are expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceSet {
    pub normals: Vec<Vec3>,
    pub frame_mode: FrameMode,
}

impl FaceSet {
    pub fn new(normals: Vec<Vec3>, frame_mode: FrameMode) -> Result<Self, PerceptionError> {
        if normals.is_empty() {
            return Err(PerceptionError::EmptyFaceSet);
        }
        for (i, n) in normals.iter().enumerate() {
            if (n.norm() - 1.0).abs() > 1e-12 {
                return Err(PerceptionError::NonUnitNormal { index: i, norm: n.norm() });
            }
        }
        Ok(FaceSet { normals, frame_mode })
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }
}
