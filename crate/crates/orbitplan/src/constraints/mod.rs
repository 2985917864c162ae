//! Optimization parameter vector, scaling transforms, and the constraint
//! families consumed by the solver.
//!
//! The parameter vector concatenates one six-element block per agent in the
//! order `[a_j, e_j, raan_j, argp_j, inc_j, nu_j]` with `a` in km and angles
//! in degrees (conversions to radians happen at the dynamics boundary).
//! Agent indices in the public API are 1-based.

mod distance;
mod linear;
mod nonlinear;

pub use distance::{min_pairwise_distance, softmin_pairwise_distance};
pub use linear::{co_orbital, orbit_type_equalities, trailing_spacing, LinearRow, OrbitFamily};
pub use nonlinear::{
    altitude_max, altitude_min, frozen_residuals, sso_residual, NonlinearConstraint,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Elements per agent block.
pub const BLOCK: usize = 6;
/// Block-relative indices.
pub const IDX_A: usize = 0;
pub const IDX_E: usize = 1;
pub const IDX_RAAN: usize = 2;
pub const IDX_ARGP: usize = 3;
pub const IDX_INC: usize = 4;
pub const IDX_NU: usize = 5;

#[derive(Debug, Error)]
pub enum ConstraintError {
    #[error("agent index {index} out of range 1..={m}")]
    AgentOutOfRange { index: usize, m: usize },
    #[error("agent indices must differ, got {0} twice")]
    DuplicateAgent(usize),
    #[error("parameter vector length {len} is not 6m")]
    BadLength { len: usize },
    #[error("bounds are invalid: {0}")]
    BadBounds(String),
    #[error("zero-width bound on free element {0}")]
    ZeroWidthBound(usize),
    #[error("trailing group needs at least 2 members, got {0}")]
    GroupTooSmall(usize),
    #[error("trailing groups overlap on agent {0}")]
    GroupOverlap(usize),
    #[error("unknown orbit family `{0}`")]
    UnknownFamily(String),
    #[error("need at least two objects to measure pairwise distance")]
    TooFewObjects,
    #[error(transparent)]
    Astro(#[from] crate::astro::AstroError),
}

/// Concatenated per-agent Keplerian parameters, length 6m.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector(pub Vec<f64>);

impl ParamVector {
    pub fn agent_count(&self) -> usize {
        self.0.len() / BLOCK
    }

    pub fn validate_length(&self) -> Result<(), ConstraintError> {
        if self.0.is_empty() || self.0.len() % BLOCK != 0 {
            return Err(ConstraintError::BadLength { len: self.0.len() });
        }
        Ok(())
    }

    /// The six-element block of 1-based agent j.
    pub fn block(&self, j: usize) -> &[f64] {
        &self.0[(j - 1) * BLOCK..j * BLOCK]
    }

    /// Keplerian elements of agent j (angles converted to radians).
    pub fn elements(&self, j: usize) -> crate::astro::KeplerianElements {
        let b = self.block(j);
        crate::astro::KeplerianElements {
            a: b[IDX_A],
            e: b[IDX_E],
            raan: b[IDX_RAAN].to_radians(),
            argp: b[IDX_ARGP].to_radians(),
            inc: b[IDX_INC].to_radians(),
            nu: b[IDX_NU].to_radians(),
        }
    }
}

/// Elementwise box bounds on the parameter vector. Equal lower and upper
/// entries pin the element (the solver treats it as frozen).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn validate(&self) -> Result<(), ConstraintError> {
        if self.lower.len() != self.upper.len() || self.lower.is_empty()
            || self.lower.len() % BLOCK != 0
        {
            return Err(ConstraintError::BadBounds(format!(
                "lower/upper lengths {} / {} must be equal and a multiple of {BLOCK}",
                self.lower.len(),
                self.upper.len()
            )));
        }
        for (i, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(ConstraintError::BadBounds(format!("non-finite bound at index {i}")));
            }
            if lo > hi {
                return Err(ConstraintError::BadBounds(format!(
                    "lower {lo} exceeds upper {hi} at index {i}"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Whether element i is pinned (zero-width interval).
    pub fn is_fixed(&self, i: usize) -> bool {
        self.upper[i] - self.lower[i] == 0.0
    }
}

/// Map p into [0,1]^6m: (p - lower) / (upper - lower) elementwise.
/// Pinned elements map to 0.
pub fn scale(p: &ParamVector, b: &Bounds) -> Result<Vec<f64>, ConstraintError> {
    if p.0.len() != b.dim() {
        return Err(ConstraintError::BadLength { len: p.0.len() });
    }
    Ok(p.0
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if b.is_fixed(i) {
                0.0
            } else {
                (x - b.lower[i]) / (b.upper[i] - b.lower[i])
            }
        })
        .collect())
}

/// Inverse of [`scale`]; pinned elements return their bound value.
pub fn unscale(x: &[f64], b: &Bounds) -> Result<ParamVector, ConstraintError> {
    if x.len() != b.dim() {
        return Err(ConstraintError::BadLength { len: x.len() });
    }
    Ok(ParamVector(
        x.iter()
            .enumerate()
            .map(|(i, &s)| {
                if b.is_fixed(i) {
                    b.lower[i]
                } else {
                    s * (b.upper[i] - b.lower[i]) + b.lower[i]
                }
            })
            .collect(),
    ))
}

/// Collision handling mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollisionMode {
    /// Hard zero of the objective below the threshold (used
    /// on the direct-evaluation path).
    Penalty,
    /// Smooth inequality tr - d_min <= 0 inside the solver.
    #[default]
    Constraint,
}

/// Minimum-separation policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollisionPolicy {
    pub threshold_km: f64,
    #[serde(default)]
    pub mode: CollisionMode,
}

/// Apply the collision policy to an objective value given the exact minimum
/// pairwise distance. The boundary d_min = tr counts as feasible.
pub fn apply_collision_policy(objective: f64, d_min_km: f64, policy: &CollisionPolicy) -> f64 {
    match policy.mode {
        CollisionMode::Penalty if d_min_km < policy.threshold_km => 0.0,
        _ => objective,
    }
}

/// Agents sharing one orbit with uniform true-anomaly spacing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrailingGroup {
    /// 1-based member agent indices, adjacency order.
    pub members: Vec<usize>,
}

impl TrailingGroup {
    pub fn validate(&self, m: usize) -> Result<(), ConstraintError> {
        if self.members.len() < 2 {
            return Err(ConstraintError::GroupTooSmall(self.members.len()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &j in &self.members {
            if j == 0 || j > m {
                return Err(ConstraintError::AgentOutOfRange { index: j, m });
            }
            if !seen.insert(j) {
                return Err(ConstraintError::DuplicateAgent(j));
            }
        }
        Ok(())
    }
}

/// The full constraint system handed to the solver.
#[derive(Debug, Clone, Default)]
pub struct ConstraintSet {
    pub linear_eq: Vec<LinearRow>,
    pub linear_ineq: Vec<LinearRow>,
    pub nonlinear: Vec<NonlinearConstraint>,
    pub collision: Option<CollisionPolicy>,
}

impl ConstraintSet {
    /// Human-readable dump of the assembled system for audit.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("linear equalities: {}\n", self.linear_eq.len()));
        for row in &self.linear_eq {
            out.push_str(&format!("  {} = {}\n", row.describe(), row.rhs));
        }
        out.push_str(&format!("linear inequalities: {}\n", self.linear_ineq.len()));
        for row in &self.linear_ineq {
            out.push_str(&format!("  {} <= {}\n", row.describe(), row.rhs));
        }
        out.push_str(&format!("nonlinear constraints: {}\n", self.nonlinear.len()));
        for nc in &self.nonlinear {
            let rel = if nc.is_equality() { "= 0" } else { "<= 0" };
            out.push_str(&format!("  {} {}\n", nc.label(), rel));
        }
        match &self.collision {
            Some(p) => out.push_str(&format!(
                "collision: threshold {} km, mode {:?}\n",
                p.threshold_km, p.mode
            )),
            None => out.push_str("collision: none\n"),
        }
        out
    }
}
