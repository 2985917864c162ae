//! Built-in scenarios. Presets are pure functions of their name, so the
//! generated documents are identical across runs and versions.

use super::schema::{
    AgentsSpec, ConstraintDecl, ElementsSpec, FacesSpec, Scenario, ScenarioError, SolverSpec,
    TargetSpec,
};
use crate::astro::{Constants, FrozenForm, TimeGrid};
use crate::constraints::{Bounds, CollisionMode, OrbitFamily};
use crate::perception::{FrameMode, QualityWeights, SensorModel};

/// Available preset names.
pub const NAMES: [&str; 4] =
    ["illustrative-2d", "illustrative-coorbital", "frozen-sso-reduced", "toy-2agent"];

fn elements(a_km: f64, e: f64, inc_deg: f64, raan_deg: f64, argp_deg: f64, nu_deg: f64) -> ElementsSpec {
    ElementsSpec { a_km, e, inc_deg, raan_deg, argp_deg, nu_deg }
}

fn faces_y() -> FacesSpec {
    FacesSpec { frame: FrameMode::Lvlh, normals: vec![[0.0, 1.0, 0.0], [0.0, -1.0, 0.0]] }
}

/// Two agents watching five targets on two equatorial elliptic orbits over
/// five periods of the slower orbit. Two free agent orbits.
fn illustrative_2d() -> Scenario {
    // Targets hold two faces each: opposite normals along the LVLH
    // along-track axis, so either face is reachable from phase offsets on a
    // lower orbit (override in the file if the bodies are modeled
    // differently).
    let targets = vec![
        TargetSpec { elements: elements(8033.72, 0.126, 0.0, 0.0, 68.02, 247.2), faces: faces_y() },
        TargetSpec { elements: elements(8033.72, 0.126, 0.0, 0.0, 68.02, 62.2), faces: faces_y() },
        TargetSpec { elements: elements(8033.72, 0.126, 0.0, 0.0, 68.02, 237.2), faces: faces_y() },
        TargetSpec { elements: elements(7898.35, 0.057, 0.0, 0.0, 225.2, 280.8), faces: faces_y() },
        TargetSpec { elements: elements(7898.35, 0.057, 0.0, 0.0, 225.2, 270.88), faces: faces_y() },
    ];
    // The semi-major-axis floor sits well below the target orbits so an
    // agent can lap them within the window (a full relative sweep needs
    // a <~ 7113 km over five target periods); otherwise the far faces of a
    // target cluster are never observed and the max-min objective is pinned
    // at zero everywhere in the box.
    let lower = vec![7000.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let upper = vec![8033.0, 0.15, 360.0, 360.0, 10.0, 360.0];
    Scenario {
        name: "illustrative-2d".into(),
        constants: Constants::default(),
        grid: TimeGrid { t_start_s: 0.0, t_end_s: 35830.7, n_samples: 60 },
        sun_unit: [1.0, 0.0, 0.0],
        targets,
        agents: AgentsSpec {
            sensors: vec![SensorModel::default(); 2],
            bounds: Bounds {
                lower: [lower.clone(), lower].concat(),
                upper: [upper.clone(), upper].concat(),
            },
        },
        constraints: vec![
            ConstraintDecl::OrbitFamily { agent: 1, family: OrbitFamily::Equatorial },
            ConstraintDecl::OrbitFamily { agent: 2, family: OrbitFamily::Equatorial },
            ConstraintDecl::AltitudeMin { agent: 1, c_min_km: 300.0 },
            ConstraintDecl::AltitudeMin { agent: 2, c_min_km: 300.0 },
            ConstraintDecl::Collision { threshold_km: 3.0, mode: CollisionMode::Constraint },
        ],
        weights: QualityWeights::default(),
        solver: SolverSpec::default(),
        seed: 42,
    }
}

/// The illustrative study with both agents forced onto one orbit, evenly
/// spaced in true anomaly.
fn illustrative_coorbital() -> Scenario {
    let mut s = illustrative_2d();
    s.name = "illustrative-coorbital".into();
    s.constraints.insert(0, ConstraintDecl::CoOrbital { agents: [1, 2] });
    s.constraints.insert(1, ConstraintDecl::Trailing { members: vec![1, 2] });
    s
}

/// Five sun-synchronous frozen-orbit agents watching a reduced target set
/// (five geostationary plus two low targets stand in for a full catalog).
fn frozen_sso_reduced() -> Scenario {
    let mut targets: Vec<TargetSpec> = (0..5)
        .map(|i| TargetSpec {
            elements: elements(42164.0, 0.0, 0.0, 0.0, 0.0, 72.0 * i as f64),
            faces: faces_y(),
        })
        .collect();
    targets.push(TargetSpec {
        elements: elements(7171.0, 0.0, 98.6, 0.0, 0.0, 0.0),
        faces: faces_y(),
    });
    targets.push(TargetSpec {
        elements: elements(7171.0, 0.0, 98.6, 180.0, 0.0, 180.0),
        faces: faces_y(),
    });

    let m = 5;
    // Altitude band 300-1000 km; argument of perigee pinned at 90 so the
    // frozen equality is consistent with the box.
    let lower = vec![6671.0, 0.0, 0.0, 90.0, 96.5, 0.0];
    let upper = vec![7371.0, 0.05, 360.0, 90.0, 102.5, 360.0];
    let mut constraints = Vec::new();
    for j in 1..=m {
        constraints.push(ConstraintDecl::Sso { agent: j });
        constraints.push(ConstraintDecl::Frozen { agent: j, argp_deg: 90.0, form: FrozenForm::Paper });
        constraints.push(ConstraintDecl::AltitudeMin { agent: j, c_min_km: 300.0 });
        constraints.push(ConstraintDecl::AltitudeMax { agent: j, c_max_km: 1000.0 });
    }
    constraints.push(ConstraintDecl::Collision { threshold_km: 3.0, mode: CollisionMode::Constraint });

    Scenario {
        name: "frozen-sso-reduced".into(),
        constants: Constants::default(),
        grid: TimeGrid { t_start_s: 0.0, t_end_s: 6000.0, n_samples: 40 },
        sun_unit: [1.0, 0.0, 0.0],
        targets,
        agents: AgentsSpec {
            sensors: vec![SensorModel::default(); m],
            bounds: Bounds {
                lower: (0..m).flat_map(|_| lower.clone()).collect(),
                upper: (0..m).flat_map(|_| upper.clone()).collect(),
            },
        },
        constraints,
        weights: QualityWeights::default(),
        solver: SolverSpec { n_starts: 8, ..SolverSpec::default() },
        seed: 42,
    }
}

/// Desk-scale benchmark: two agents on fixed circular equatorial orbits,
/// only the two true anomalies free. Small enough for an exhaustive grid
/// oracle.
fn toy_2agent() -> Scenario {
    // Geostationary targets with transverse (+/- along-track) faces: the
    // low agents lap the nearly stationary targets once per revolution, so
    // both faces of both targets are swept from any start phase and the
    // objective landscape has no dead zero-gradient plateaus. (A radial
    // outward face would be invisible from below and pin the max-min
    // objective at zero.)
    let targets = vec![
        TargetSpec { elements: elements(42164.0, 0.0, 0.0, 0.0, 0.0, 0.0), faces: faces_y() },
        TargetSpec { elements: elements(42164.0, 0.0, 0.0, 0.0, 0.0, 150.0), faces: faces_y() },
    ];
    let fixed = |nu_hi: f64| vec![7000.0, 0.0, 0.0, 0.0, 0.0, nu_hi];
    Scenario {
        name: "toy-2agent".into(),
        constants: Constants::default(),
        // A little over one agent revolution (T ~ 5828 s at a = 7000 km),
        // which is one full synodic sweep past the geostationary targets.
        grid: TimeGrid { t_start_s: 0.0, t_end_s: 6000.0, n_samples: 64 },
        sun_unit: [1.0, 0.0, 0.0],
        targets,
        agents: AgentsSpec {
            sensors: vec![SensorModel::default(); 2],
            bounds: Bounds {
                lower: [fixed(0.0), fixed(0.0)].concat(),
                upper: [fixed(360.0), fixed(360.0)].concat(),
            },
        },
        constraints: vec![ConstraintDecl::Collision {
            threshold_km: 3.0,
            mode: CollisionMode::Constraint,
        }],
        weights: QualityWeights::default(),
        solver: SolverSpec::default(),
        seed: 42,
    }
}

/// Build a preset by name.
pub fn build(name: &str) -> Result<Scenario, ScenarioError> {
    match name {
        "illustrative-2d" => Ok(illustrative_2d()),
        "illustrative-coorbital" => Ok(illustrative_coorbital()),
        "frozen-sso-reduced" => Ok(frozen_sso_reduced()),
        "toy-2agent" => Ok(toy_2agent()),
        other => Err(ScenarioError::UnknownPreset(other.to_string(), NAMES.join(", "))),
    }
}
