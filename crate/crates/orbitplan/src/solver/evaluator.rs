//! Bridges the optimizer's parameter vector to trajectory propagation,
//! quality-tensor evaluation and constraint residuals.
//!
//! Target ephemerides are propagated once at construction. Agent ephemerides
//! are cached per agent keyed on the agent's six-element block, so a
//! finite-difference probe that perturbs one coordinate re-propagates only
//! the affected agent.

use super::SolverError;
use crate::astro::{kepler_to_state, orbital_period, propagate, Constants, Ephemeris, TimeGrid};
use crate::constraints::{
    apply_collision_policy, min_pairwise_distance, softmin_pairwise_distance, Bounds,
    CollisionMode, ConstraintSet, ParamVector, IDX_A,
};
use crate::perception::{
    j_sum, quality_tensor, AgentBody, QualityMatrix, QualityWeights, SensorModel, TargetBody,
};
use crate::Vec3;

/// Softmin sharpness for the smooth collision inequality.
pub const SOFTMIN_EXPONENT: f64 = 32.0;

/// One full evaluation of the scenario at a parameter vector.
#[derive(Debug, Clone)]
pub struct ScenarioEval {
    /// Cumulative quality, (target, face).
    pub jsum: QualityMatrix,
    /// min over targets and faces of `jsum` (the max-min objective).
    pub min_j: f64,
    /// Exact minimum pairwise separation (agent-agent and agent-target), km.
    pub d_min_exact: f64,
    /// Smooth lower bound on the separation used inside the solver, km.
    pub d_min_soft: f64,
    /// Equality residuals: linear rows first, then nonlinear equalities.
    pub eq: Vec<f64>,
    /// Inequality residuals (<= 0 feasible): linear rows, nonlinear
    /// inequalities, then the collision row when the policy mode is
    /// `constraint`.
    pub ineq: Vec<f64>,
}

/// Scenario-bound objective/constraint evaluator with ephemeris caching.
#[derive(Clone)]
pub struct ScenarioEvaluator {
    targets: Vec<TargetBody>,
    sensors: Vec<SensorModel>,
    pub bounds: Bounds,
    pub constraints: ConstraintSet,
    grid: TimeGrid,
    sun_unit: Vec3,
    weights: QualityWeights,
    constants: Constants,
    /// Shared integrator substep so every evaluation sees the same grid.
    max_substep_s: f64,
    cache: Vec<Option<(Vec<f64>, Ephemeris)>>,
    pub n_propagations: usize,
}

impl ScenarioEvaluator {
    /// `targets` must already be propagated on `grid`. `sensors` has one
    /// entry per agent and fixes the agent count.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        targets: Vec<TargetBody>,
        sensors: Vec<SensorModel>,
        bounds: Bounds,
        constraints: ConstraintSet,
        grid: TimeGrid,
        sun_unit: Vec3,
        weights: QualityWeights,
        constants: Constants,
    ) -> Result<Self, SolverError> {
        bounds.validate()?;
        let m = sensors.len();
        if bounds.dim() != crate::constraints::BLOCK * m {
            return Err(SolverError::Dimension(format!(
                "bounds dimension {} does not match {m} agents",
                bounds.dim()
            )));
        }
        for t in &targets {
            if t.ephemeris.grid != grid {
                return Err(SolverError::Eval(
                    "target ephemeris grid does not match the scenario grid".into(),
                ));
            }
        }
        // Substep from the fastest orbit reachable inside the bounds, so the
        // integration grid never changes under finite-difference probes.
        let mut a_min = f64::INFINITY;
        for j in 0..m {
            a_min = a_min.min(bounds.lower[j * crate::constraints::BLOCK + IDX_A]);
        }
        let t_min = orbital_period(a_min, &constants).map_err(|e| SolverError::Astro(e))?;
        Ok(ScenarioEvaluator {
            targets,
            sensors,
            bounds,
            constraints,
            grid,
            sun_unit,
            weights,
            constants,
            max_substep_s: t_min / 2000.0,
            cache: vec![None; m],
            n_propagations: 0,
        })
    }

    pub fn agent_count(&self) -> usize {
        self.sensors.len()
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn targets(&self) -> &[TargetBody] {
        &self.targets
    }

    fn agent_ephemerides(&mut self, p: &ParamVector) -> Result<Vec<Ephemeris>, SolverError> {
        let mut out = Vec::with_capacity(self.agent_count());
        for j in 1..=self.agent_count() {
            let block = p.block(j).to_vec();
            if let Some((key, eph)) = &self.cache[j - 1] {
                if *key == block {
                    out.push(eph.clone());
                    continue;
                }
            }
            let el = p.elements(j);
            el.validate().map_err(|e| SolverError::Eval(e.to_string()))?;
            let sv = kepler_to_state(&el, &self.constants)?;
            let eph = propagate(&sv, &self.grid, None, Some(self.max_substep_s), &self.constants)?;
            self.n_propagations += 1;
            self.cache[j - 1] = Some((block, eph.clone()));
            out.push(eph);
        }
        Ok(out)
    }

    /// Full evaluation: quality reduction plus every constraint residual.
    pub fn evaluate(&mut self, p: &ParamVector) -> Result<ScenarioEval, SolverError> {
        p.validate_length()?;
        if p.0.len() != self.dim() {
            return Err(SolverError::Dimension(format!(
                "parameter vector length {} does not match bounds dimension {}",
                p.0.len(),
                self.dim()
            )));
        }
        let ephs = self.agent_ephemerides(p)?;
        let agents: Vec<AgentBody> = ephs
            .iter()
            .zip(&self.sensors)
            .map(|(eph, sensor)| AgentBody { ephemeris: eph.clone(), sensor: *sensor })
            .collect();
        let q = quality_tensor(&self.targets, &agents, &self.sun_unit, &self.constants, &self.weights)?;
        let jsum = j_sum(&q);
        let min_j = jsum.iter().copied().fold(f64::INFINITY, f64::min);

        let target_ephs: Vec<Ephemeris> =
            self.targets.iter().map(|t| t.ephemeris.clone()).collect();
        let (d_min_exact, d_min_soft) = if ephs.len() + target_ephs.len() >= 2 {
            (
                min_pairwise_distance(&ephs, &target_ephs)?,
                softmin_pairwise_distance(&ephs, &target_ephs, SOFTMIN_EXPONENT)?,
            )
        } else {
            (f64::INFINITY, f64::INFINITY)
        };

        let mut eq = Vec::new();
        let mut ineq = Vec::new();
        for row in &self.constraints.linear_eq {
            eq.push(row.residual(p));
        }
        for row in &self.constraints.linear_ineq {
            ineq.push(row.residual(p));
        }
        for nc in &self.constraints.nonlinear {
            let r = nc.residual(p, &self.constants)?;
            if nc.is_equality() {
                eq.push(r);
            } else {
                ineq.push(r);
            }
        }
        if let Some(policy) = &self.constraints.collision {
            if policy.mode == CollisionMode::Constraint {
                ineq.push(policy.threshold_km - d_min_soft);
            }
        }
        Ok(ScenarioEval { jsum, min_j, d_min_exact, d_min_soft, eq, ineq })
    }

    /// The direct (unsmoothed) objective: min over targets and faces of the
    /// cumulative quality, hard-zeroed by a penalty-mode collision policy.
    pub fn direct_objective(&mut self, p: &ParamVector) -> Result<f64, SolverError> {
        let ev = self.evaluate(p)?;
        let obj = match &self.constraints.collision {
            Some(policy) => apply_collision_policy(ev.min_j, ev.d_min_exact, policy),
            None => ev.min_j,
        };
        Ok(obj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::astro::KeplerianElements;
    use crate::constraints::{co_orbital, CollisionPolicy, NonlinearConstraint};
    use crate::perception::{FaceSet, FrameMode};

    fn c() -> Constants {
        Constants::default()
    }

    fn target(a: f64, nu_deg: f64, grid: &TimeGrid) -> TargetBody {
        let el = KeplerianElements {
            a,
            e: 0.0,
            inc: 0.0,
            raan: 0.0,
            argp: 0.0,
            nu: nu_deg.to_radians(),
        };
        let sv = kepler_to_state(&el, &c()).unwrap();
        TargetBody {
            ephemeris: propagate(&sv, grid, None, None, &c()).unwrap(),
            faces: FaceSet::new(vec![Vec3::x(), -Vec3::x()], FrameMode::Lvlh).unwrap(),
        }
    }

    fn bounds(m: usize) -> Bounds {
        let lo = [7000.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let hi = [8500.0, 0.1, 360.0, 360.0, 10.0, 360.0];
        Bounds {
            lower: (0..m).flat_map(|_| lo).collect(),
            upper: (0..m).flat_map(|_| hi).collect(),
        }
    }

    fn evaluator(m: usize, cons: ConstraintSet) -> ScenarioEvaluator {
        let grid = TimeGrid::new(0.0, 3000.0, 6).unwrap();
        ScenarioEvaluator::new(
            vec![target(8200.0, 0.0, &grid), target(8200.0, 150.0, &grid)],
            vec![SensorModel::default(); m],
            bounds(m),
            cons,
            grid,
            Vec3::x(),
            QualityWeights::default(),
            c(),
        )
        .unwrap()
    }

    fn p2() -> ParamVector {
        ParamVector(vec![
            7500.0, 0.0, 0.0, 0.0, 0.0, 40.0, //
            7600.0, 0.0, 0.0, 0.0, 0.0, 200.0,
        ])
    }

    #[test]
    fn evaluation_is_deterministic_and_consistent() {
        let mut ev = evaluator(2, ConstraintSet::default());
        let a = ev.evaluate(&p2()).unwrap();
        let b = ev.evaluate(&p2()).unwrap();
        assert_eq!(a.jsum, b.jsum);
        assert_eq!(a.min_j, b.min_j);
        assert_eq!(a.jsum.dim(), (2, 2));
        let min = a.jsum.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(a.min_j, min);
        assert!(a.d_min_soft <= a.d_min_exact);
    }

    #[test]
    fn cache_avoids_repropagation() {
        let mut ev = evaluator(2, ConstraintSet::default());
        ev.evaluate(&p2()).unwrap();
        assert_eq!(ev.n_propagations, 2);
        ev.evaluate(&p2()).unwrap();
        assert_eq!(ev.n_propagations, 2);
        // Perturbing one agent re-propagates only that agent.
        let mut p = p2();
        p.0[11] += 1.0;
        ev.evaluate(&p).unwrap();
        assert_eq!(ev.n_propagations, 3);
    }

    #[test]
    fn constraint_residuals_assembled_in_order() {
        let mut cons = ConstraintSet::default();
        cons.linear_eq = co_orbital(1, 2, 2).unwrap();
        cons.nonlinear = vec![
            NonlinearConstraint::AltitudeMin { agent: 1, c_min_km: 300.0 },
            NonlinearConstraint::FrozenArgp { agent: 1, argp_deg: 90.0 },
        ];
        cons.collision =
            Some(CollisionPolicy { threshold_km: 3.0, mode: CollisionMode::Constraint });
        let mut ev = evaluator(2, cons);
        let r = ev.evaluate(&p2()).unwrap();
        // 5 linear eq + 1 nonlinear eq (frozen argp); 1 nonlinear ineq + 1 collision.
        assert_eq!(r.eq.len(), 6);
        assert_eq!(r.ineq.len(), 2);
        // Co-orbital residual on a: 7500 - 7600.
        assert_eq!(r.eq[0], -100.0);
        // Frozen argp: 0 - 90.
        assert_eq!(r.eq[5], -90.0);
        // Altitude: 6371 + 300 - 7500.
        assert_eq!(r.ineq[0], -829.0);
        // Collision: 3 - softmin, trivially satisfied here.
        assert!(r.ineq[1] < 0.0);
    }

    #[test]
    fn penalty_mode_zeroes_direct_objective() {
        let mut cons = ConstraintSet::default();
        // Huge threshold: everything is "too close".
        cons.collision =
            Some(CollisionPolicy { threshold_km: 1e6, mode: CollisionMode::Penalty });
        let mut ev = evaluator(2, cons);
        assert_eq!(ev.direct_objective(&p2()).unwrap(), 0.0);

        let mut lenient = ConstraintSet::default();
        lenient.collision =
            Some(CollisionPolicy { threshold_km: 3.0, mode: CollisionMode::Penalty });
        let mut ev2 = evaluator(2, lenient);
        let raw = ev2.evaluate(&p2()).unwrap().min_j;
        assert_eq!(ev2.direct_objective(&p2()).unwrap(), raw);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut ev = evaluator(2, ConstraintSet::default());
        let short = ParamVector(vec![7500.0, 0.0, 0.0, 0.0, 0.0, 40.0]);
        assert!(ev.evaluate(&short).is_err());
    }
}
