//! Scenario file schema: a closed JSON document with explicit units in
//! field names, canonical save form, and compilation into solver inputs.

use crate::astro::{kepler_to_state, propagate, Constants, FrozenForm, KeplerianElements, TimeGrid};
use crate::constraints::{
    altitude_max, altitude_min, co_orbital, frozen_residuals, orbit_type_equalities, sso_residual,
    trailing_spacing, Bounds, CollisionMode, CollisionPolicy, ConstraintSet, OrbitFamily,
    TrailingGroup,
};
use crate::perception::{FaceSet, FrameMode, QualityWeights, SensorModel, TargetBody};
use crate::solver::{MaxMinOptions, NlpOptions, ScenarioEvaluator, SolverError};
use crate::Vec3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("scenario is invalid:\n{0}")]
    Invalid(String),
    #[error("unknown preset `{0}` (available: {1})")]
    UnknownPreset(String, String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Astro(#[from] crate::astro::AstroError),
    #[error(transparent)]
    Perception(#[from] crate::perception::PerceptionError),
}

/// Orbital elements with units spelled out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementsSpec {
    pub a_km: f64,
    pub e: f64,
    pub inc_deg: f64,
    pub raan_deg: f64,
    pub argp_deg: f64,
    pub nu_deg: f64,
}

impl ElementsSpec {
    pub fn to_elements(&self) -> KeplerianElements {
        KeplerianElements {
            a: self.a_km,
            e: self.e,
            inc: self.inc_deg.to_radians(),
            raan: self.raan_deg.to_radians(),
            argp: self.argp_deg.to_radians(),
            nu: self.nu_deg.to_radians(),
        }
    }
}

/// Face normals for one target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacesSpec {
    #[serde(default)]
    pub frame: FrameMode,
    pub normals: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub elements: ElementsSpec,
    pub faces: FacesSpec,
}

/// The observer fleet: one sensor per agent plus the parameter box.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentsSpec {
    pub sensors: Vec<SensorModel>,
    pub bounds: Bounds,
}

/// Constraint declarations by name; compiled into rows/residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "type", rename_all = "snake_case")]
pub enum ConstraintDecl {
    CoOrbital { agents: [usize; 2] },
    Trailing { members: Vec<usize> },
    OrbitFamily { agent: usize, family: OrbitFamily },
    AltitudeMin { agent: usize, c_min_km: f64 },
    AltitudeMax { agent: usize, c_max_km: f64 },
    Sso { agent: usize },
    Frozen {
        agent: usize,
        argp_deg: f64,
        #[serde(default)]
        form: FrozenForm,
    },
    Collision {
        threshold_km: f64,
        #[serde(default)]
        mode: CollisionMode,
    },
}

/// Solver knobs persisted with the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    pub n_starts: usize,
    pub tol_kkt: f64,
    pub tol_feas: f64,
    pub max_inner: usize,
    pub max_outer: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let nlp = NlpOptions::default();
        SolverSpec {
            n_starts: 20,
            tol_kkt: nlp.tol_kkt,
            tol_feas: nlp.tol_feas,
            max_inner: nlp.max_inner,
            max_outer: nlp.max_outer,
        }
    }
}

fn default_seed() -> u64 {
    42
}

/// A full mission description. The schema is closed: unknown fields fail to
/// parse. Times are mission-relative seconds (no calendar epochs).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub constants: Constants,
    pub grid: TimeGrid,
    /// Earth-to-Sun unit direction in the inertial frame.
    pub sun_unit: [f64; 3],
    pub targets: Vec<TargetSpec>,
    pub agents: AgentsSpec,
    #[serde(default)]
    pub constraints: Vec<ConstraintDecl>,
    #[serde(default)]
    pub weights: QualityWeights,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Scenario {
    pub fn agent_count(&self) -> usize {
        self.agents.sensors.len()
    }

    pub fn sun_unit_vec(&self) -> Vec3 {
        Vec3::new(self.sun_unit[0], self.sun_unit[1], self.sun_unit[2])
    }

    /// Canonical serialized form: pretty JSON plus a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), ScenarioError> {
        std::fs::write(path, self.to_canonical_json()).map_err(|e| ScenarioError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }

    /// Parse without validating (used by `load` and tests).
    pub fn from_json(text: &str, origin: &str) -> Result<Scenario, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })
    }

    /// Assemble the constraint system declared in the file.
    pub fn constraint_set(&self) -> Result<ConstraintSet, ScenarioError> {
        let m = self.agent_count();
        let mut set = ConstraintSet::default();
        for decl in &self.constraints {
            match decl {
                ConstraintDecl::CoOrbital { agents } => {
                    set.linear_eq
                        .extend(co_orbital(agents[0], agents[1], m).map_err(SolverError::from)?);
                }
                ConstraintDecl::Trailing { members } => {
                    let group = TrailingGroup { members: members.clone() };
                    let (eqs, ineq) =
                        trailing_spacing(&group, m).map_err(SolverError::from)?;
                    set.linear_eq.extend(eqs);
                    set.linear_ineq.push(ineq);
                }
                ConstraintDecl::OrbitFamily { agent, family } => {
                    set.linear_eq.extend(
                        orbit_type_equalities(family, *agent, m).map_err(SolverError::from)?,
                    );
                }
                ConstraintDecl::AltitudeMin { agent, c_min_km } => {
                    set.nonlinear.push(altitude_min(*agent, *c_min_km));
                }
                ConstraintDecl::AltitudeMax { agent, c_max_km } => {
                    set.nonlinear.push(altitude_max(*agent, *c_max_km));
                }
                ConstraintDecl::Sso { agent } => set.nonlinear.push(sso_residual(*agent)),
                ConstraintDecl::Frozen { agent, argp_deg, form } => {
                    set.nonlinear.extend(frozen_residuals(*agent, *argp_deg, *form));
                }
                ConstraintDecl::Collision { threshold_km, mode } => {
                    set.collision =
                        Some(CollisionPolicy { threshold_km: *threshold_km, mode: *mode });
                }
            }
        }
        Ok(set)
    }

    /// Propagate every target on the scenario grid.
    pub fn propagated_targets(&self) -> Result<Vec<TargetBody>, ScenarioError> {
        self.targets
            .iter()
            .map(|t| {
                let sv = kepler_to_state(&t.elements.to_elements(), &self.constants)?;
                let eph = propagate(&sv, &self.grid, None, None, &self.constants)?;
                let normals = t
                    .faces
                    .normals
                    .iter()
                    .map(|n| Vec3::new(n[0], n[1], n[2]))
                    .collect();
                let faces = FaceSet::new(normals, t.faces.frame)?;
                Ok(TargetBody { ephemeris: eph, faces })
            })
            .collect()
    }

    /// Build the solver-side evaluator for this scenario.
    pub fn build_evaluator(&self) -> Result<ScenarioEvaluator, ScenarioError> {
        Ok(ScenarioEvaluator::new(
            self.propagated_targets()?,
            self.agents.sensors.clone(),
            self.agents.bounds.clone(),
            self.constraint_set()?,
            self.grid,
            self.sun_unit_vec(),
            self.weights,
            self.constants,
        )?)
    }

    /// Multi-start options from the persisted solver knobs.
    pub fn maxmin_options(&self) -> MaxMinOptions {
        let mut nlp = NlpOptions::default();
        nlp.tol_kkt = self.solver.tol_kkt;
        nlp.tol_feas = self.solver.tol_feas;
        nlp.max_inner = self.solver.max_inner;
        nlp.max_outer = self.solver.max_outer;
        MaxMinOptions {
            n_starts: self.solver.n_starts,
            seed: self.seed,
            nlp,
            extra_starts: Vec::new(),
        }
    }
}

/// Load a scenario from disk, rejecting unknown fields and any validation
/// violation.
pub fn load(path: &std::path::Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let scenario = Scenario::from_json(&text, &path.display().to_string())?;
    let violations = super::validate(&scenario);
    if !violations.is_empty() {
        let lines: Vec<String> =
            violations.iter().map(|v| format!("  {}: {}", v.path, v.message)).collect();
        return Err(ScenarioError::Invalid(lines.join("\n")));
    }
    Ok(scenario)
}
