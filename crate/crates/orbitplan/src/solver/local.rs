//! Local solver for box-constrained NLPs with equality and inequality
//! constraints: an augmented-Lagrangian outer loop around a projected
//! Barzilai-Borwein gradient inner loop. Gradients come from central finite
//! differences on the (scaled) variables unless the caller registers
//! analytic derivatives via [`finite_diff_check`]-verified closures.

use super::SolverError;
use serde::{Deserialize, Serialize};

/// One evaluation of the problem at a point: the objective (maximize
/// convention), equality residuals (want 0) and inequality residuals
/// (feasible when <= 0).
#[derive(Debug, Clone)]
pub struct NlpEval {
    pub objective: f64,
    pub eq: Vec<f64>,
    pub ineq: Vec<f64>,
}

impl NlpEval {
    pub fn max_violation(&self) -> f64 {
        let eq = self.eq.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let ineq = self.ineq.iter().fold(0.0_f64, |m, g| m.max(g.max(0.0)));
        eq.max(ineq)
    }
}

#[derive(Debug, Clone)]
pub struct NlpOptions {
    /// Projected-gradient norm of the augmented merit required for success.
    pub tol_kkt: f64,
    /// Maximum constraint violation (original units) required for success.
    pub tol_feas: f64,
    /// Inner projected-gradient iterations per multiplier update.
    pub max_inner: usize,
    /// Penalty / multiplier updates.
    pub max_outer: usize,
    /// Central-difference relative step on the scaled variables.
    pub fd_rel_step: f64,
    pub initial_penalty: f64,
    pub penalty_growth: f64,
    pub max_penalty: f64,
    /// Warm-start values for the inequality multipliers (padded with zeros /
    /// truncated to the constraint count). Callers that know the dual
    /// structure — e.g. an epigraph reformulation whose active multipliers
    /// must sum to one — can seed it here instead of waiting for the
    /// first-order multiplier updates to find that scale.
    pub initial_mu: Vec<f64>,
}

impl Default for NlpOptions {
    fn default() -> Self {
        NlpOptions {
            tol_kkt: 1e-6,
            tol_feas: 1e-8,
            max_inner: 500,
            max_outer: 200,
            fd_rel_step: 1e-6,
            initial_penalty: 10.0,
            penalty_growth: 10.0,
            max_penalty: 1e12,
            initial_mu: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    IterationCap,
    Infeasible,
    EvalFailure(String),
}

/// Outcome of one local solve.
#[derive(Debug, Clone)]
pub struct LocalResult {
    pub x: Vec<f64>,
    /// Objective at `x` (maximize convention).
    pub objective: f64,
    /// Objective per outer iteration, running-max once feasibility is
    /// reached.
    pub history: Vec<f64>,
    /// Maximum constraint violation per outer iteration.
    pub violation_history: Vec<f64>,
    /// Maximum constraint violation at `x`, original units.
    pub max_violation: f64,
    pub termination: Termination,
    pub n_evals: usize,
}

struct Workspace<'a, F> {
    eval: F,
    lower: &'a [f64],
    upper: &'a [f64],
    free: Vec<usize>,
    n_evals: usize,
    fd_step: f64,
}

impl<'a, F> Workspace<'a, F>
where
    F: FnMut(&[f64]) -> Result<NlpEval, SolverError>,
{
    fn eval(&mut self, x: &[f64]) -> Result<NlpEval, SolverError> {
        self.n_evals += 1;
        (self.eval)(x)
    }

    /// Central-difference derivatives of the objective and every constraint
    /// w.r.t. the free variables; fixed variables keep zero columns.
    fn gradients(&mut self, x: &[f64], at: &NlpEval) -> Result<Grads, SolverError> {
        let dim = x.len();
        let mut g = Grads {
            f: vec![0.0; dim],
            eq: vec![vec![0.0; dim]; at.eq.len()],
            ineq: vec![vec![0.0; dim]; at.ineq.len()],
        };
        for &i in &self.free.clone() {
            let h = self.fd_step * x[i].abs().max(1.0);
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            // Clip the probes into the box: evaluation may be undefined
            // outside it (e.g. a negative inclination). At a bound the
            // stencil degrades to a one-sided difference, which is enough
            // for the augmented-Lagrangian steps.
            xp[i] = (x[i] + h).min(self.upper[i]);
            xm[i] = (x[i] - h).max(self.lower[i]);
            let ep = self.eval(&xp)?;
            let em = self.eval(&xm)?;
            let denom = xp[i] - xm[i];
            g.f[i] = (ep.objective - em.objective) / denom;
            for (row, (cp, cm)) in g.eq.iter_mut().zip(ep.eq.iter().zip(&em.eq)) {
                row[i] = (cp - cm) / denom;
            }
            for (row, (cp, cm)) in g.ineq.iter_mut().zip(ep.ineq.iter().zip(&em.ineq)) {
                row[i] = (cp - cm) / denom;
            }
        }
        Ok(g)
    }
}

struct Grads {
    f: Vec<f64>,
    eq: Vec<Vec<f64>>,
    ineq: Vec<Vec<f64>>,
}

struct Multipliers {
    lambda: Vec<f64>,
    mu: Vec<f64>,
    rho: f64,
}

/// Augmented merit (minimize convention: internal objective is -objective).
fn merit(at: &NlpEval, m: &Multipliers) -> f64 {
    let mut phi = -at.objective;
    for (c, l) in at.eq.iter().zip(&m.lambda) {
        phi += l * c + 0.5 * m.rho * c * c;
    }
    for (g, mu) in at.ineq.iter().zip(&m.mu) {
        let t = (mu + m.rho * g).max(0.0);
        phi += (t * t - mu * mu) / (2.0 * m.rho);
    }
    phi
}

/// Gradient of the augmented merit assembled from per-function derivatives;
/// avoids differencing the stiff penalty terms directly.
fn merit_gradient(at: &NlpEval, grads: &Grads, m: &Multipliers) -> Vec<f64> {
    let dim = grads.f.len();
    let mut g = vec![0.0; dim];
    for i in 0..dim {
        g[i] = -grads.f[i];
    }
    for ((c, l), row) in at.eq.iter().zip(&m.lambda).zip(&grads.eq) {
        let w = l + m.rho * c;
        for i in 0..dim {
            g[i] += w * row[i];
        }
    }
    for ((gv, mu), row) in at.ineq.iter().zip(&m.mu).zip(&grads.ineq) {
        let w = (mu + m.rho * gv).max(0.0);
        if w != 0.0 {
            for i in 0..dim {
                g[i] += w * row[i];
            }
        }
    }
    g
}

fn clip(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for i in 0..x.len() {
        x[i] = x[i].clamp(lower[i], upper[i]);
    }
}

fn projected_gradient_norm(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    let mut norm = 0.0_f64;
    for i in 0..x.len() {
        let step = (x[i] - g[i]).clamp(lower[i], upper[i]) - x[i];
        norm = norm.max(step.abs());
    }
    norm
}

/// Solve the NLP from `x0` (must lie within the box).
pub fn solve_local<F>(
    eval: F,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &NlpOptions,
) -> Result<LocalResult, SolverError>
where
    F: FnMut(&[f64]) -> Result<NlpEval, SolverError>,
{
    let dim = x0.len();
    if lower.len() != dim || upper.len() != dim {
        return Err(SolverError::Dimension(format!(
            "x0 has {dim} entries, bounds {} / {}",
            lower.len(),
            upper.len()
        )));
    }
    for i in 0..dim {
        if x0[i] < lower[i] - 1e-12 || x0[i] > upper[i] + 1e-12 {
            return Err(SolverError::StartOutOfBounds(i));
        }
    }
    let free: Vec<usize> = (0..dim).filter(|&i| upper[i] - lower[i] > 0.0).collect();
    let mut ws = Workspace { eval, lower, upper, free, n_evals: 0, fd_step: opts.fd_rel_step };

    let mut x = x0.to_vec();
    clip(&mut x, lower, upper);
    let mut at = match ws.eval(&x) {
        Ok(e) => e,
        Err(err) => return Err(SolverError::EvalAtStart(err.to_string())),
    };
    let mut mu = vec![0.0; at.ineq.len()];
    for (m, &m0) in mu.iter_mut().zip(&opts.initial_mu) {
        *m = m0.max(0.0);
    }
    let mut mult = Multipliers {
        lambda: vec![0.0; at.eq.len()],
        mu,
        rho: opts.initial_penalty,
    };

    let mut history = Vec::new();
    let mut violation_history = Vec::new();
    let mut feasible_seen = false;
    // x, objective, violation; seeded with the start so a feasible start is
    // never lost to a wandering iterate.
    let mut best_feasible: Option<(Vec<f64>, f64, f64)> = None;
    let start_viol = at.max_violation();
    if start_viol < opts.tol_feas {
        feasible_seen = true;
        best_feasible = Some((x.clone(), at.objective, start_viol));
    }
    let mut prev_viol = f64::INFINITY;
    let mut inner_tol = 1e-2;
    let mut converged = false;

    for _outer in 0..opts.max_outer {
        // ---- inner projected-gradient loop on the augmented merit ----
        let mut grads = ws.gradients(&x, &at)?;
        let mut phi = merit(&at, &mult);
        let mut g = merit_gradient(&at, &grads, &mult);
        let mut alpha = 1.0 / g.iter().fold(1e-12_f64, |m, v| m.max(v.abs()));
        for _inner in 0..opts.max_inner {
            if projected_gradient_norm(&x, &g, lower, upper) < inner_tol {
                break;
            }
            // Trial step, backtracking on the merit.
            let mut step_ok = false;
            let mut t = 1.0;
            let dir: Vec<f64> = (0..dim)
                .map(|i| (x[i] - alpha * g[i]).clamp(lower[i], upper[i]) - x[i])
                .collect();
            let slope: f64 = g.iter().zip(&dir).map(|(gi, di)| gi * di).sum();
            if slope >= 0.0 {
                // Direction degenerated (bad BB scale); fall back to steepest.
                alpha = 1e-4 / g.iter().fold(1e-12_f64, |m, v| m.max(v.abs()));
                continue;
            }
            let mut x_new = x.clone();
            let mut at_new = at.clone();
            let mut phi_new = phi;
            for _ in 0..30 {
                let cand: Vec<f64> = (0..dim).map(|i| x[i] + t * dir[i]).collect();
                let e = ws.eval(&cand)?;
                let p = merit(&e, &mult);
                if p <= phi + 1e-4 * t * slope {
                    x_new = cand;
                    at_new = e;
                    phi_new = p;
                    step_ok = true;
                    break;
                }
                t *= 0.5;
            }
            if !step_ok {
                break;
            }
            let grads_new = ws.gradients(&x_new, &at_new)?;
            let g_new = merit_gradient(&at_new, &grads_new, &mult);
            // Barzilai-Borwein step length for the next iterate.
            let mut ss = 0.0;
            let mut sy = 0.0;
            for i in 0..dim {
                let s = x_new[i] - x[i];
                let y = g_new[i] - g[i];
                ss += s * s;
                sy += s * y;
            }
            alpha = if sy > 1e-300 { (ss / sy).clamp(1e-12, 1e8) } else { 1e-2 };
            x = x_new;
            at = at_new;
            phi = phi_new;
            g = g_new;
            grads = grads_new;
        }
        let _ = &grads; // final gradients only needed for the KKT test below

        // ---- bookkeeping and multiplier update ----
        let viol = at.max_violation();
        let feasible = viol < opts.tol_feas;
        if feasible && best_feasible.as_ref().map_or(true, |(_, obj, _)| at.objective > *obj) {
            best_feasible = Some((x.clone(), at.objective, viol));
        }
        if feasible_seen {
            let last = *history.last().unwrap_or(&f64::NEG_INFINITY);
            history.push(last.max(at.objective));
        } else {
            history.push(at.objective);
            feasible_seen = feasible;
        }
        violation_history.push(viol);

        let kkt = projected_gradient_norm(&x, &g, lower, upper);
        if feasible && kkt < opts.tol_kkt {
            converged = true;
            break;
        }

        for (l, c) in mult.lambda.iter_mut().zip(&at.eq) {
            *l += mult.rho * c;
        }
        for (mu, gv) in mult.mu.iter_mut().zip(&at.ineq) {
            *mu = (*mu + mult.rho * gv).max(0.0);
        }
        if viol > 0.25 * prev_viol && viol > opts.tol_feas {
            mult.rho = (mult.rho * opts.penalty_growth).min(opts.max_penalty);
        }
        prev_viol = viol;
        inner_tol = (inner_tol * 0.2).max(opts.tol_kkt);
    }

    // ---- feasibility restoration polish ----
    if at.max_violation() > opts.tol_feas {
        restore_feasibility(&mut ws, &mut x, &mut at, opts)?;
    }

    let viol = at.max_violation();
    if viol < opts.tol_feas {
        if best_feasible.as_ref().map_or(true, |(_, obj, _)| at.objective > *obj) {
            best_feasible = Some((x.clone(), at.objective, viol));
        }
    }

    let (x_final, obj_final, viol_final) = match &best_feasible {
        Some((bx, bobj, bviol)) => (bx.clone(), *bobj, *bviol),
        None => (x.clone(), at.objective, viol),
    };
    if let Some(last) = history.last_mut() {
        if feasible_seen {
            *last = last.max(obj_final);
        }
    }
    let termination = if viol_final >= opts.tol_feas {
        Termination::Infeasible
    } else if converged {
        Termination::Converged
    } else {
        Termination::IterationCap
    };
    Ok(LocalResult {
        x: x_final,
        objective: obj_final,
        history,
        violation_history,
        max_violation: viol_final,
        termination,
        n_evals: ws.n_evals,
    })
}

/// Gauss-Newton polish that drives equality residuals and violated
/// inequalities below `tol_feas` without moving far from the solver's
/// iterate. Redundant (rank-deficient) rows are handled by the SVD
/// pseudo-inverse least-squares step.
fn restore_feasibility<F>(
    ws: &mut Workspace<'_, F>,
    x: &mut Vec<f64>,
    at: &mut NlpEval,
    opts: &NlpOptions,
) -> Result<(), SolverError>
where
    F: FnMut(&[f64]) -> Result<NlpEval, SolverError>,
{
    let dim = x.len();
    for _ in 0..30 {
        let active: Vec<(bool, usize)> = at
            .eq
            .iter()
            .enumerate()
            .map(|(i, _)| (true, i))
            .chain(at.ineq.iter().enumerate().filter(|(_, g)| **g > 0.0).map(|(i, _)| (false, i)))
            .collect();
        let residual: Vec<f64> = active
            .iter()
            .map(|&(is_eq, i)| if is_eq { at.eq[i] } else { at.ineq[i] })
            .collect();
        let worst = residual.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        if worst < 0.5 * opts.tol_feas || active.is_empty() {
            break;
        }
        let grads = ws.gradients(x, at)?;
        let rows = active.len();
        let mut jac = nalgebra::DMatrix::zeros(rows, dim);
        for (r, &(is_eq, i)) in active.iter().enumerate() {
            let src = if is_eq { &grads.eq[i] } else { &grads.ineq[i] };
            for c in 0..dim {
                jac[(r, c)] = src[c];
            }
        }
        let rvec = nalgebra::DVector::from_vec(residual);
        let svd = jac.svd(true, true);
        let step = match svd.solve(&rvec, 1e-10) {
            Ok(s) => s,
            Err(_) => break,
        };
        // Damped update: halve until the residual norm decreases.
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..20 {
            let mut cand = x.clone();
            for i in 0..dim {
                cand[i] -= t * step[i];
            }
            clip(&mut cand, ws.lower, ws.upper);
            let e = ws.eval(&cand)?;
            if e.max_violation() < at.max_violation() {
                *x = cand;
                *at = e;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Ok(())
}

/// Move a point onto the feasible set (equalities satisfied, inequalities
/// non-violated) without optimizing the objective: the Gauss-Newton polish
/// used between solver iterations, applied standalone. Returns the restored
/// point; it may still be infeasible if the polish stalls.
pub fn restore_point<F>(
    eval: F,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &NlpOptions,
) -> Result<Vec<f64>, SolverError>
where
    F: FnMut(&[f64]) -> Result<NlpEval, SolverError>,
{
    let dim = x0.len();
    if lower.len() != dim || upper.len() != dim {
        return Err(SolverError::Dimension(format!(
            "x0 has {dim} entries, bounds {} / {}",
            lower.len(),
            upper.len()
        )));
    }
    let free: Vec<usize> = (0..dim).filter(|&i| upper[i] - lower[i] > 0.0).collect();
    let mut ws = Workspace { eval, lower, upper, free, n_evals: 0, fd_step: opts.fd_rel_step };
    let mut x = x0.to_vec();
    clip(&mut x, lower, upper);
    let mut at = ws.eval(&x).map_err(|e| SolverError::EvalAtStart(e.to_string()))?;
    restore_feasibility(&mut ws, &mut x, &mut at, opts)?;
    Ok(x)
}

/// Compare a registered gradient against central differences of `f` at `p`.
/// Returns the per-component relative discrepancy.
pub fn finite_diff_check<F>(mut f: F, p: &[f64], grad: &[f64], rel_step: f64) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    (0..p.len())
        .map(|i| {
            let h = rel_step * p[i].abs().max(1.0);
            let mut xp = p.to_vec();
            let mut xm = p.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let fd = (f(&xp) - f(&xm)) / (2.0 * h);
            let scale = fd.abs().max(grad[i].abs()).max(1e-12);
            (fd - grad[i]).abs() / scale
        })
        .collect()
}
