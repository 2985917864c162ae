//! Scenario validation: every violated invariant is reported, none is fatal
//! at this layer.

use super::schema::{ConstraintDecl, Scenario};
use crate::constraints::BLOCK;
use crate::solver::{sample_feasible_start, SolverError};
use rand::SeedableRng;

/// One violated invariant, addressed by a JSON-pointer-like path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation { path: path.into(), message: message.into() }
    }
}

/// Check every invariant and cross-field rule; returns an empty list iff the
/// scenario is usable.
pub fn validate(s: &Scenario) -> Vec<Violation> {
    let mut v = Vec::new();
    let m = s.agent_count();

    if m == 0 {
        v.push(Violation::new("agents.sensors", "need at least one agent"));
    }
    if s.targets.is_empty() {
        v.push(Violation::new("targets", "need at least one target"));
    }

    if let Err(e) = s.grid.validate() {
        v.push(Violation::new("grid", e.to_string()));
    }

    let sun_norm = s.sun_unit_vec().norm();
    if (sun_norm - 1.0).abs() > 1e-9 {
        v.push(Violation::new("sun_unit", format!("must be unit length, |s| = {sun_norm}")));
    }

    for (ti, t) in s.targets.iter().enumerate() {
        let path = format!("targets[{ti}]");
        let el = &t.elements;
        if !(el.a_km > 0.0) {
            v.push(Violation::new(format!("{path}.elements.a_km"), format!("must be positive, got {}", el.a_km)));
        }
        if !(0.0..1.0).contains(&el.e) {
            v.push(Violation::new(format!("{path}.elements.e"), format!("must be in [0, 1), got {}", el.e)));
        }
        if t.faces.normals.is_empty() {
            v.push(Violation::new(format!("{path}.faces.normals"), "need at least one face"));
        }
        for (ni, n) in t.faces.normals.iter().enumerate() {
            let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                v.push(Violation::new(
                    format!("{path}.faces.normals[{ni}]"),
                    format!("must be unit length, |n| = {norm}"),
                ));
            }
        }
    }

    for (si, sensor) in s.agents.sensors.iter().enumerate() {
        if let Err(msg) = sensor.validate() {
            v.push(Violation::new(format!("agents.sensors[{si}]"), msg));
        }
    }

    let b = &s.agents.bounds;
    if b.lower.len() != BLOCK * m || b.upper.len() != BLOCK * m {
        v.push(Violation::new(
            "agents.bounds",
            format!("shape must be 6m = {} for m = {m} agents, got {} / {}", BLOCK * m, b.lower.len(), b.upper.len()),
        ));
    } else {
        for i in 0..b.lower.len() {
            if !(b.lower[i].is_finite() && b.upper[i].is_finite()) {
                v.push(Violation::new(format!("agents.bounds[{i}]"), "bound is not finite"));
            } else if b.lower[i] > b.upper[i] {
                v.push(Violation::new(
                    format!("agents.bounds[{i}]"),
                    format!("lower {} exceeds upper {}", b.lower[i], b.upper[i]),
                ));
            }
        }
    }

    for (ci, decl) in s.constraints.iter().enumerate() {
        let path = format!("constraints[{ci}]");
        let check_agent = |j: usize, v: &mut Vec<Violation>| {
            if j == 0 || j > m {
                v.push(Violation::new(path.clone(), format!("agent index {j} out of range 1..={m}")));
            }
        };
        match decl {
            ConstraintDecl::CoOrbital { agents } => {
                check_agent(agents[0], &mut v);
                check_agent(agents[1], &mut v);
                if agents[0] == agents[1] {
                    v.push(Violation::new(path.clone(), "co-orbital agents must differ"));
                }
            }
            ConstraintDecl::Trailing { members } => {
                if members.len() < 2 {
                    v.push(Violation::new(path.clone(), "trailing group needs at least 2 members"));
                }
                for &j in members {
                    check_agent(j, &mut v);
                }
            }
            ConstraintDecl::OrbitFamily { agent, .. }
            | ConstraintDecl::Sso { agent }
            | ConstraintDecl::Frozen { agent, .. } => check_agent(*agent, &mut v),
            ConstraintDecl::AltitudeMin { agent, c_min_km } => {
                check_agent(*agent, &mut v);
                if *c_min_km < 0.0 {
                    v.push(Violation::new(path.clone(), "minimum altitude must be nonnegative"));
                }
            }
            ConstraintDecl::AltitudeMax { agent, c_max_km } => {
                check_agent(*agent, &mut v);
                if *c_max_km <= 0.0 {
                    v.push(Violation::new(path.clone(), "maximum altitude must be positive"));
                }
            }
            ConstraintDecl::Collision { threshold_km, .. } => {
                if !(*threshold_km > 0.0) {
                    v.push(Violation::new(path.clone(), "collision threshold must be positive"));
                }
            }
        }
    }

    // Cross-field rule: the box must admit a point satisfying the declared
    // linear equalities. A deterministic projected sample decides it.
    if v.is_empty() {
        if let Ok(set) = s.constraint_set() {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
            match sample_feasible_start(&s.agents.bounds, &set.linear_eq, &mut rng) {
                Err(SolverError::InconsistentEqualities) => v.push(Violation::new(
                    "constraints",
                    "linear equalities are inconsistent with the bounds (no feasible point in the box)",
                )),
                _ => {}
            }
        }
    }
    v
}
