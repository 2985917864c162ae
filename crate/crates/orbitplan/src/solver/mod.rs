//! Max-min orbit optimization: epigraph reformulation, local
//! augmented-Lagrangian solver and deterministic multi-start driver.

mod evaluator;
mod local;
mod maxmin;

pub use evaluator::{ScenarioEval, ScenarioEvaluator, SOFTMIN_EXPONENT};
pub use local::{
    finite_diff_check, solve_local, LocalResult, NlpEval, NlpOptions, Termination,
};
pub use maxmin::{
    sample_feasible_start, solve_maxmin, warm_start, MaxMinOptions, SolveReport, StartRecord,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("start point outside bounds at index {0}")]
    StartOutOfBounds(usize),
    #[error("objective evaluation failed at the start point: {0}")]
    EvalAtStart(String),
    #[error("evaluation failed: {0}")]
    Eval(String),
    #[error("projection onto linear equalities is impossible (inconsistent system)")]
    InconsistentEqualities,
    #[error("all starts failed or were infeasible")]
    AllStartsFailed,
    #[error(transparent)]
    Constraint(#[from] crate::constraints::ConstraintError),
    #[error(transparent)]
    Astro(#[from] crate::astro::AstroError),
    #[error(transparent)]
    Perception(#[from] crate::perception::PerceptionError),
}
