//! Deterministic multi-start max-min driver.
//!
//! The max-min of the cumulative quality over targets and faces is lifted to
//! a smooth NLP by an epigraph variable t: maximize t subject to
//! t <= J(i, l) for every target/face pair, plus the scenario constraints.
//! t is scaled by its analytic upper bound (agents x samples) so the solver
//! sees an O(1) variable.

use super::evaluator::{ScenarioEval, ScenarioEvaluator};
use super::local::{solve_local, NlpEval, NlpOptions, Termination};
use super::SolverError;
use crate::constraints::{scale, unscale, Bounds, CollisionMode, LinearRow, ParamVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct MaxMinOptions {
    pub n_starts: usize,
    pub seed: u64,
    pub nlp: NlpOptions,
    /// Scaled parameter vectors injected ahead of the random starts
    /// (warm starts; each must have the bounds dimension).
    pub extra_starts: Vec<Vec<f64>>,
}

impl Default for MaxMinOptions {
    fn default() -> Self {
        MaxMinOptions {
            n_starts: 20,
            seed: 42,
            nlp: NlpOptions::default(),
            extra_starts: Vec::new(),
        }
    }
}

/// Per-start outcome (all objectives in raw min-J units).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StartRecord {
    /// 0-based start index; warm starts come first.
    pub index: usize,
    pub warm: bool,
    /// Exact min-J at the start point.
    pub start_objective: f64,
    /// Exact min-J at the returned point.
    pub objective: f64,
    pub max_violation: f64,
    pub feasible: bool,
    pub termination: Termination,
    pub n_evals: usize,
    /// Objective trace per outer iteration (epigraph units rescaled to J).
    pub history: Vec<f64>,
    /// Max constraint violation per outer iteration.
    pub violation_history: Vec<f64>,
    /// Final scaled parameter vector (no epigraph variable).
    pub x_scaled: Vec<f64>,
}

/// Aggregate outcome of one multi-start solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub seed: u64,
    pub n_starts: usize,
    /// Epigraph scale: agents x samples, the analytic max of J.
    pub t_max: f64,
    /// Index into `starts` of the winner, if any start produced a usable point.
    pub best_index: Option<usize>,
    /// Whether the winner satisfies every constraint (exact separation
    /// included) to tolerance.
    pub feasible: bool,
    /// Exact min-J of the winner, collision policy applied.
    pub objective: f64,
    /// Winning parameter vector in original units, length 6m.
    pub params: Vec<f64>,
    /// Exact minimum pairwise separation of the winner, km.
    pub d_min_km: f64,
    /// Excluded from serialized reports so identical runs produce identical
    /// bytes.
    #[serde(skip)]
    pub wall_time_s: f64,
    pub starts: Vec<StartRecord>,
}

/// Draw one start in scaled coordinates: uniform over the free box, then a
/// least-squares projection onto the linear equality subspace, then clipped
/// back into the box. Pinned elements stay at 0.
pub fn sample_feasible_start(
    bounds: &Bounds,
    linear_eq: &[LinearRow],
    rng: &mut impl Rng,
) -> Result<Vec<f64>, SolverError> {
    let dim = bounds.dim();
    let mut s: Vec<f64> = (0..dim)
        .map(|i| if bounds.is_fixed(i) { 0.0 } else { rng.gen::<f64>() })
        .collect();
    if !linear_eq.is_empty() {
        // Row a . p = rhs becomes (a W) s = rhs - a . lower with W = diag(width).
        let rows = linear_eq.len();
        let mut m = nalgebra::DMatrix::zeros(rows, dim);
        let mut r = nalgebra::DVector::zeros(rows);
        for (ri, row) in linear_eq.iter().enumerate() {
            if row.coeffs.len() != dim {
                return Err(SolverError::Dimension(format!(
                    "linear row has {} coefficients, bounds dimension is {dim}",
                    row.coeffs.len()
                )));
            }
            let mut rhs = row.rhs;
            for i in 0..dim {
                let w = bounds.upper[i] - bounds.lower[i];
                m[(ri, i)] = row.coeffs[i] * w;
                rhs -= row.coeffs[i] * bounds.lower[i];
            }
            r[ri] = rhs;
        }
        let s_vec = nalgebra::DVector::from_vec(s.clone());
        let defect = &m * &s_vec - &r;
        let svd = m.clone().svd(true, true);
        let correction = svd
            .solve(&defect, 1e-10)
            .map_err(|_| SolverError::InconsistentEqualities)?;
        for i in 0..dim {
            s[i] -= correction[i];
        }
        // An inconsistent system leaves a residual no projection can remove.
        let s_proj = nalgebra::DVector::from_vec(s.clone());
        if (&m * &s_proj - &r).amax() > 1e-6 {
            return Err(SolverError::InconsistentEqualities);
        }
    }
    for i in 0..dim {
        s[i] = if bounds.is_fixed(i) { 0.0 } else { s[i].clamp(0.0, 1.0) };
    }
    Ok(s)
}

/// Exact feasibility of an evaluation, including the exact (not softened)
/// separation when a constraint-mode collision policy is present.
fn exact_violation(ev: &ScenarioEval, evaluator: &ScenarioEvaluator, tol: f64) -> f64 {
    let mut v = 0.0_f64;
    for c in &ev.eq {
        v = v.max(c.abs());
    }
    // Skip the softened collision row (last) if present; judged exactly below.
    let n_soft = usize::from(matches!(
        evaluator.constraints.collision,
        Some(p) if p.mode == CollisionMode::Constraint
    ));
    for g in &ev.ineq[..ev.ineq.len() - n_soft] {
        v = v.max(g.max(0.0));
    }
    if n_soft == 1 {
        let policy = evaluator.constraints.collision.unwrap();
        // Closed boundary: d_min = threshold is feasible.
        if ev.d_min_exact < policy.threshold_km - tol {
            v = v.max(policy.threshold_km - ev.d_min_exact);
        }
    }
    v
}

fn run_one_start(
    evaluator: &ScenarioEvaluator,
    start_scaled: &[f64],
    index: usize,
    warm: bool,
    opts: &MaxMinOptions,
) -> Result<StartRecord, SolverError> {
    let mut ev = evaluator.clone();
    let dim = ev.dim();
    let bounds = ev.bounds.clone();
    let (n_targets, n_faces) = {
        let probe = ev.evaluate(&unscale(start_scaled, &bounds)?)?;
        probe.jsum.dim()
    };
    let t_max = (ev.agent_count() * ev.grid().n_samples) as f64;

    // Pull the sampled point onto the nonlinear constraint manifold before
    // recording it, so the start objective is a feasible baseline rather
    // than the value of a point the solver must first repair. A feasible
    // warm start passes through unchanged.
    let box_lower = vec![0.0; dim];
    let box_upper: Vec<f64> =
        (0..dim).map(|i| if bounds.is_fixed(i) { 0.0 } else { 1.0 }).collect();
    let start_scaled = {
        let mut ev_restore = ev.clone();
        let bounds_restore = bounds.clone();
        let constraints_only = move |x: &[f64]| -> Result<NlpEval, SolverError> {
            let e = ev_restore.evaluate(&unscale(x, &bounds_restore)?)?;
            Ok(NlpEval { objective: 0.0, eq: e.eq, ineq: e.ineq })
        };
        super::local::restore_point(constraints_only, start_scaled, &box_lower, &box_upper, &opts.nlp)?
    };
    let start_scaled = start_scaled.as_slice();

    let start_eval = ev.evaluate(&unscale(start_scaled, &bounds)?)?;
    let start_objective = start_eval.min_j;

    // Epigraph variables: [scaled params, t_hat], t = t_hat * t_scale.
    // t_scale is a start-local magnitude (twice the largest quality row)
    // rather than the analytic bound t_max: scaling by t_max would shrink
    // the parameter gradients of the epigraph rows by orders of magnitude
    // relative to the unit objective gradient on t_hat and stall the
    // ascent. t_hat's box still admits the analytic bound.
    let t_scale = start_eval
        .jsum
        .iter()
        .fold(0.0_f64, |m, &v| m.max(v))
        .max(1e-9)
        * 2.0;
    let mut x0 = start_scaled.to_vec();
    x0.push(((start_objective / t_scale) - 1e-9).clamp(0.0, t_max / t_scale));
    let mut lower = vec![0.0; dim + 1];
    let mut upper: Vec<f64> = (0..dim)
        .map(|i| if bounds.is_fixed(i) { 0.0 } else { 1.0 })
        .collect();
    upper.push(t_max / t_scale);
    for i in 0..dim {
        lower[i] = 0.0;
    }

    let mut ev_inner = ev.clone();
    let objective_fn = move |x: &[f64]| -> Result<NlpEval, SolverError> {
        let p = unscale(&x[..dim], &bounds)?;
        let e = ev_inner.evaluate(&p)?;
        let t = x[dim] * t_scale;
        let mut ineq = e.ineq.clone();
        for i in 0..n_targets {
            for l in 0..n_faces {
                ineq.push((t - e.jsum[[i, l]]) / t_scale);
            }
        }
        Ok(NlpEval { objective: x[dim], eq: e.eq, ineq })
    };

    // Seed the epigraph-row multipliers: at any max-min stationary point the
    // active t <= J multipliers sum to one (they balance the unit objective
    // gradient on t). Starting them uniform at that scale saves the solver
    // the many outer iterations a zero start needs to discover it.
    let mut nlp = opts.nlp.clone();
    let n_rows = n_targets * n_faces;
    nlp.initial_mu = vec![0.0; start_eval.ineq.len()];
    nlp.initial_mu.extend(std::iter::repeat(1.0 / n_rows as f64).take(n_rows));

    let local = solve_local(objective_fn, &x0, &lower, &upper, &nlp)?;

    // Replace the epigraph value with the exact min-J at the final point.
    let x_scaled = local.x[..dim].to_vec();
    let p_final = unscale(&x_scaled, &ev.bounds)?;
    let final_eval = ev.evaluate(&p_final)?;
    let objective = final_eval.min_j;
    let max_violation = exact_violation(&final_eval, &ev, opts.nlp.tol_feas);
    let feasible = max_violation < opts.nlp.tol_feas;
    Ok(StartRecord {
        index,
        warm,
        start_objective,
        objective,
        max_violation,
        feasible,
        termination: local.termination,
        n_evals: local.n_evals,
        history: local.history.iter().map(|t| t * t_scale).collect(),
        violation_history: local.violation_history,
        x_scaled,
    })
}

/// Run the full deterministic multi-start solve. Start points derive from
/// per-start random streams of one seed, so results are reproducible and
/// independent of thread scheduling.
pub fn solve_maxmin(
    evaluator: &ScenarioEvaluator,
    opts: &MaxMinOptions,
) -> Result<SolveReport, SolverError> {
    let t0 = std::time::Instant::now();
    let dim = evaluator.dim();
    let t_max = (evaluator.agent_count() * evaluator.grid().n_samples) as f64;

    let mut starts: Vec<(usize, bool, Vec<f64>)> = Vec::new();
    for (i, s) in opts.extra_starts.iter().enumerate() {
        if s.len() != dim {
            return Err(SolverError::Dimension(format!(
                "warm start {i} has length {}, expected {dim}",
                s.len()
            )));
        }
        starts.push((starts.len(), true, s.clone()));
    }
    for i in 0..opts.n_starts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(i as u64 + 1);
        let s = sample_feasible_start(
            &evaluator.bounds,
            &evaluator.constraints.linear_eq,
            &mut rng,
        )?;
        starts.push((starts.len(), false, s));
    }
    if starts.is_empty() {
        return Err(SolverError::AllStartsFailed);
    }

    let results: Vec<Result<StartRecord, SolverError>> = starts
        .par_iter()
        .map(|(index, warm, s)| run_one_start(evaluator, s, *index, *warm, opts))
        .collect();

    let mut records = Vec::with_capacity(results.len());
    let mut first_err = None;
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
            }
        }
    }
    if records.is_empty() {
        return Err(first_err.unwrap_or(SolverError::AllStartsFailed));
    }

    // Winner: feasible starts by objective, then by violation, then by index.
    let best = records
        .iter()
        .max_by(|a, b| {
            (a.feasible, a.objective, -a.max_violation, std::cmp::Reverse(a.index))
                .partial_cmp(&(b.feasible, b.objective, -b.max_violation, std::cmp::Reverse(b.index)))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("records nonempty");
    let best_index = best.index;

    let mut ev = evaluator.clone();
    let p_best = unscale(&best.x_scaled, &evaluator.bounds)?;
    let final_eval = ev.evaluate(&p_best)?;
    let objective = ev.direct_objective(&p_best)?;
    Ok(SolveReport {
        seed: opts.seed,
        n_starts: opts.n_starts,
        t_max,
        best_index: Some(best_index),
        feasible: best.feasible,
        objective,
        params: p_best.0,
        d_min_km: final_eval.d_min_exact,
        wall_time_s: t0.elapsed().as_secs_f64(),
        starts: records,
    })
}

/// Convenience: scale a parameter vector for use as a warm start.
pub fn warm_start(p: &ParamVector, bounds: &Bounds) -> Result<Vec<f64>, SolverError> {
    Ok(scale(p, bounds)?)
}
