//! The 4-D quality tensor Q and its cumulative reduction J_sum.

use super::quality::{face_normals_inertial, quality_entry, ObservationGeometry, QualityWeights};
use super::{FaceSet, PerceptionError, SensorModel};
use crate::astro::{Constants, Ephemeris};
use crate::Vec3;
use ndarray::{Array2, Array4};

/// A target: its ephemeris plus the faces of interest.
#[derive(Debug, Clone)]
pub struct TargetBody {
    pub ephemeris: Ephemeris,
    pub faces: FaceSet,
}

/// An observer agent: its ephemeris plus sensor model.
#[derive(Debug, Clone)]
pub struct AgentBody {
    pub ephemeris: Ephemeris,
    pub sensor: SensorModel,
}

/// Nonnegative 4-D array of observation qualities indexed
/// (target i, agent j, sample k, face l), all 0-based internally.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityTensor {
    pub entries: Array4<f64>,
}

impl QualityTensor {
    /// (n targets, m agents, N samples, L faces).
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        self.entries.dim()
    }

    /// Entry for 1-based indices (i, j, k, l).
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.entries[[i - 1, j - 1, k - 1, l - 1]]
    }

    /// Long-form CSV `i,j,k,l,q` with 1-based indices.
    pub fn to_csv(&self) -> String {
        let (n, m, nk, nl) = self.dims();
        let mut out = String::from("i,j,k,l,q\r\n");
        for i in 0..n {
            for j in 0..m {
                for k in 0..nk {
                    for l in 0..nl {
                        out.push_str(&format!(
                            "{},{},{},{},{:.16e}\r\n",
                            i + 1,
                            j + 1,
                            k + 1,
                            l + 1,
                            self.entries[[i, j, k, l]]
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Cumulative quality matrix: entry (i, l) sums the tensor over agents and
/// samples.
pub type QualityMatrix = Array2<f64>;

/// Evaluate the full quality tensor for a set of targets and agents sharing
/// one time grid.
pub fn quality_tensor(
    targets: &[TargetBody],
    agents: &[AgentBody],
    sun_unit: &Vec3,
    c: &Constants,
    weights: &QualityWeights,
) -> Result<QualityTensor, PerceptionError> {
    let grid = match targets.first().map(|t| t.ephemeris.grid) {
        Some(g) => g,
        None => return Err(PerceptionError::MismatchedGrids),
    };
    for eph in targets.iter().map(|t| &t.ephemeris).chain(agents.iter().map(|a| &a.ephemeris)) {
        if eph.grid != grid {
            return Err(PerceptionError::MismatchedGrids);
        }
    }
    let n = targets.len();
    let m = agents.len();
    let nk = grid.n_samples;
    let nl = targets.iter().map(|t| t.faces.len()).max().unwrap_or(1);

    let mut entries = Array4::zeros((n, m, nk, nl));
    for (i, target) in targets.iter().enumerate() {
        for k in 0..nk {
            let tsv = &target.ephemeris.states[k];
            let normals = face_normals_inertial(&target.faces, tsv)?;
            for (j, agent) in agents.iter().enumerate() {
                let osv = &agent.ephemeris.states[k];
                // A body below the surface has no meaningful sight line;
                // score the sample zero and let the altitude constraints
                // reject the design. Optimizer iterates probe such points.
                let g = match ObservationGeometry::new(tsv.r, osv.r, *sun_unit) {
                    Ok(g) => g,
                    Err(PerceptionError::InsideEarth(_)) => continue,
                    Err(e) => return Err(e),
                };
                for (l, normal) in normals.iter().enumerate() {
                    entries[[i, j, k, l]] =
                        match quality_entry(&g, normal, &agent.sensor, c, weights) {
                            Ok(q) => q,
                            Err(PerceptionError::InsideEarth(_)) => 0.0,
                            Err(e) => return Err(e),
                        };
                }
            }
        }
    }
    Ok(QualityTensor { entries })
}

/// Reduce the tensor over agents and samples: (i, l) -> sum_j sum_k Q.
pub fn j_sum(q: &QualityTensor) -> QualityMatrix {
    let (n, m, nk, nl) = q.dims();
    let mut out = Array2::zeros((n, nl));
    for i in 0..n {
        for l in 0..nl {
            let mut acc = 0.0;
            for j in 0..m {
                for k in 0..nk {
                    acc += q.entries[[i, j, k, l]];
                }
            }
            out[[i, l]] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::astro::{kepler_to_state, propagate, KeplerianElements, TimeGrid};
    use crate::perception::FrameMode;
    use ndarray::Array4;
    use rand::{Rng, SeedableRng};

    fn c() -> Constants {
        Constants::default()
    }

    fn circular(a: f64, nu_deg: f64, grid: &TimeGrid) -> Ephemeris {
        let el = KeplerianElements {
            a,
            e: 0.0,
            inc: 0.0,
            raan: 0.0,
            argp: 0.0,
            nu: nu_deg.to_radians(),
        };
        let sv = kepler_to_state(&el, &c()).unwrap();
        propagate(&sv, grid, None, None, &c()).unwrap()
    }

    fn faces() -> FaceSet {
        FaceSet::new(vec![Vec3::x(), -Vec3::x()], FrameMode::Lvlh).unwrap()
    }

    #[test]
    fn entries_in_unit_interval() {
        let grid = TimeGrid::new(0.0, 3000.0, 10).unwrap();
        let targets = vec![
            TargetBody { ephemeris: circular(8000.0, 0.0, &grid), faces: faces() },
            TargetBody { ephemeris: circular(8200.0, 120.0, &grid), faces: faces() },
        ];
        let agents = vec![
            AgentBody { ephemeris: circular(7500.0, 40.0, &grid), sensor: SensorModel::default() },
            AgentBody { ephemeris: circular(7600.0, 200.0, &grid), sensor: SensorModel::default() },
        ];
        let q = quality_tensor(&targets, &agents, &Vec3::x(), &c(), &QualityWeights::default())
            .unwrap();
        assert!(q.entries.iter().all(|&x| (0.0..=1.0).contains(&x)));
        assert_eq!(q.dims(), (2, 2, 10, 2));
    }

    #[test]
    fn swapping_agents_swaps_slices() {
        let grid = TimeGrid::new(0.0, 3000.0, 8).unwrap();
        let targets =
            vec![TargetBody { ephemeris: circular(8000.0, 0.0, &grid), faces: faces() }];
        let a1 = AgentBody { ephemeris: circular(7500.0, 40.0, &grid), sensor: SensorModel::default() };
        let a2 = AgentBody { ephemeris: circular(7700.0, 250.0, &grid), sensor: SensorModel::default() };
        let w = QualityWeights::default();
        let q12 = quality_tensor(&targets, &[a1.clone(), a2.clone()], &Vec3::x(), &c(), &w).unwrap();
        let q21 = quality_tensor(&targets, &[a2, a1], &Vec3::x(), &c(), &w).unwrap();
        for k in 1..=8 {
            for l in 1..=2 {
                assert_eq!(q12.get(1, 1, k, l), q21.get(1, 2, k, l));
                assert_eq!(q12.get(1, 2, k, l), q21.get(1, 1, k, l));
            }
        }
    }

    #[test]
    fn scalar_case_reduces_to_quality_entry() {
        let grid = TimeGrid::new(0.0, 1.0, 2).unwrap();
        let target = TargetBody {
            ephemeris: circular(8000.0, 0.0, &grid),
            faces: FaceSet::new(vec![Vec3::x()], FrameMode::Lvlh).unwrap(),
        };
        let agent =
            AgentBody { ephemeris: circular(8500.0, 0.0, &grid), sensor: SensorModel::default() };
        let w = QualityWeights::default();
        let q = quality_tensor(
            std::slice::from_ref(&target),
            std::slice::from_ref(&agent),
            &Vec3::x(),
            &c(),
            &w,
        )
        .unwrap();
        let tsv = target.ephemeris.state_at(1);
        let osv = agent.ephemeris.state_at(1);
        let normals = face_normals_inertial(&target.faces, tsv).unwrap();
        let g = ObservationGeometry::new(tsv.r, osv.r, Vec3::x()).unwrap();
        let expect = quality_entry(&g, &normals[0], &agent.sensor, &c(), &w).unwrap();
        assert_eq!(q.get(1, 1, 1, 1), expect);
    }

    #[test]
    fn occluded_target_gives_zero_tensor() {
        let grid = TimeGrid::new(0.0, 1.0, 2).unwrap();
        // Static-ish geometry: target opposite the agent across the Earth at
        // both samples (tiny window so motion is negligible).
        let target = TargetBody { ephemeris: circular(8000.0, 180.0, &grid), faces: faces() };
        let agent =
            AgentBody { ephemeris: circular(8000.0, 0.0, &grid), sensor: SensorModel::default() };
        let q = quality_tensor(&[target], &[agent], &Vec3::x(), &c(), &QualityWeights::default())
            .unwrap();
        assert!(q.entries.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn mismatched_grids_rejected() {
        let g1 = TimeGrid::new(0.0, 3000.0, 8).unwrap();
        let g2 = TimeGrid::new(0.0, 3000.0, 9).unwrap();
        let targets = vec![TargetBody { ephemeris: circular(8000.0, 0.0, &g1), faces: faces() }];
        let agents =
            vec![AgentBody { ephemeris: circular(7500.0, 0.0, &g2), sensor: SensorModel::default() }];
        assert!(matches!(
            quality_tensor(&targets, &agents, &Vec3::x(), &c(), &QualityWeights::default()),
            Err(PerceptionError::MismatchedGrids)
        ));
    }

    #[test]
    fn j_sum_counts_ones() {
        let q = QualityTensor { entries: Array4::from_elem((3, 2, 10, 4), 1.0) };
        let m = j_sum(&q);
        assert_eq!(m.dim(), (3, 4));
        assert!(m.iter().all(|&x| x == 20.0));

        let z = QualityTensor { entries: Array4::zeros((3, 2, 10, 4)) };
        assert!(j_sum(&z).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn j_sum_matches_triple_loop_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (n, m, nk, nl) = (5, 5, 20, 6);
        let entries = Array4::from_shape_fn((n, m, nk, nl), |_| rng.gen::<f64>());
        let q = QualityTensor { entries };
        let fast = j_sum(&q);
        for i in 0..n {
            for l in 0..nl {
                let mut acc = 0.0;
                for j in 0..m {
                    for k in 0..nk {
                        acc += q.entries[[i, j, k, l]];
                    }
                }
                assert_eq!(fast[[i, l]], acc);
            }
        }
    }
}
