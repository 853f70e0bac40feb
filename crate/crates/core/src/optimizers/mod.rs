//! Deterministic first-order minimizers and the two-stage protocol.
//!
//! Both methods minimize `S(x) + λ(t)‖x‖²` where `S` is a [`Problem`] and
//! `λ(t)` is an optional per-iteration [`Schedule`]. The penalty is computed
//! here, so re-reading λ at the start of an iteration costs no evaluations.

mod cg;
mod lbfgs;
mod line_search;
mod two_stage;

pub use cg::minimize_cg;
pub use lbfgs::minimize_lbfgs;
pub use two_stage::{run_two_stage, split_reference, PipelineConfig};

use serde::{Deserialize, Serialize};

use crate::ansatz::norm_sqr;
use crate::error::{Error, Result};
use crate::objective::Schedule;

/// A smooth function with an evaluation counter.
pub trait Problem {
    fn value(&mut self, x: &[f64]) -> Result<f64>;

    fn gradient(&mut self, x: &[f64], grad: &mut [f64]) -> Result<()>;

    /// Evaluations consumed so far.
    fn evals(&self) -> u64;

    /// Evaluations one `gradient` call consumes at dimension `dim`.
    fn gradient_cost(&self, _dim: usize) -> u64 {
        0
    }

    /// Informs the problem of the penalty strength now in force.
    fn set_penalty(&mut self, _lambda: f64) {}
}

/// Adapts a pair of closures; counts `value` calls only.
pub struct FnProblem<F, G> {
    f: F,
    g: G,
    evals: u64,
}

impl<F, G> FnProblem<F, G>
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(&[f64], &mut [f64]),
{
    pub fn new(f: F, g: G) -> Self {
        Self { f, g, evals: 0 }
    }
}

impl<F, G> Problem for FnProblem<F, G>
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(&[f64], &mut [f64]),
{
    fn value(&mut self, x: &[f64]) -> Result<f64> {
        self.evals += 1;
        Ok((self.f)(x))
    }

    fn gradient(&mut self, x: &[f64], grad: &mut [f64]) -> Result<()> {
        (self.g)(x, grad);
        Ok(())
    }

    fn evals(&self) -> u64 {
        self.evals
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cg,
    Lbfgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_iters: usize,
    /// Stop when `‖∇‖∞` of the stage objective drops to this value.
    pub grad_tolerance: f64,
    pub lbfgs_memory: usize,
    pub wolfe_c1: f64,
    pub wolfe_c2: f64,
    /// Evaluation cap for the stage; `None` means unlimited.
    pub max_evals: Option<u64>,
}

impl OptimizerConfig {
    pub fn cg(max_iters: usize, grad_tolerance: f64) -> Self {
        Self {
            method: Method::Cg,
            max_iters,
            grad_tolerance,
            lbfgs_memory: 10,
            wolfe_c1: 1e-4,
            wolfe_c2: 0.4,
            max_evals: None,
        }
    }

    pub fn lbfgs(max_iters: usize, grad_tolerance: f64) -> Self {
        Self { method: Method::Lbfgs, wolfe_c2: 0.9, ..Self::cg(max_iters, grad_tolerance) }
    }

    pub fn with_max_evals(mut self, max_evals: Option<u64>) -> Self {
        self.max_evals = max_evals;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.max_iters == 0 {
            return bad("max_iters must be positive".into());
        }
        if !(self.grad_tolerance > 0.0) {
            return bad(format!("grad_tolerance must be positive, got {}", self.grad_tolerance));
        }
        if self.lbfgs_memory == 0 {
            return bad("lbfgs_memory must be positive".into());
        }
        let (c1, c2) = (self.wolfe_c1, self.wolfe_c2);
        if !(0.0 < c1 && c1 < c2 && c2 < 1.0) {
            return bad(format!("need 0 < wolfe_c1 < wolfe_c2 < 1, got {c1}, {c2}"));
        }
        if self.max_evals == Some(0) {
            return bad("max_evals must be positive".into());
        }
        Ok(())
    }
}

/// Dispatches on `cfg.method`.
pub fn minimize<P: Problem + ?Sized>(
    problem: &mut P,
    x0: &[f64],
    cfg: &OptimizerConfig,
    schedule: Option<&Schedule>,
) -> Result<StageResult> {
    match cfg.method {
        Method::Cg => minimize_cg(problem, x0, cfg, schedule),
        Method::Lbfgs => minimize_lbfgs(problem, x0, cfg, schedule),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    GradientTolerance,
    MaxIterations,
    BudgetExhausted,
    /// The line search failed along steepest descent.
    LineSearchFailure,
    NonFinite,
}

/// One accepted iterate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub energy: f64,
    pub objective: f64,
    pub norm: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageResult {
    /// Argmin of the raw energy over the trajectory.
    pub best_theta: Vec<f64>,
    pub best_value: f64,
    pub final_theta: Vec<f64>,
    pub iterations_used: usize,
    pub evals_used: u64,
    /// Starting point followed by one entry per iteration.
    pub trajectory: Vec<TrajectoryPoint>,
    pub termination: Termination,
    /// L-BFGS curvature pairs dropped for `yᵀs <= 1e-10`.
    pub skipped_pairs: usize,
}

impl StageResult {
    pub fn failed(&self) -> bool {
        self.termination == Termination::NonFinite
    }

    pub fn truncated(&self) -> bool {
        self.termination == Termination::BudgetExhausted
    }
}

/// A point with raw and penalized value and gradient.
#[derive(Clone, Debug)]
pub(crate) struct Point {
    pub x: Vec<f64>,
    pub raw: f64,
    pub raw_grad: Vec<f64>,
    pub f: f64,
    pub g: Vec<f64>,
    pub lambda: f64,
}

impl Point {
    pub fn is_finite(&self) -> bool {
        self.raw.is_finite() && self.raw_grad.iter().all(|v| v.is_finite())
    }

    /// Re-applies the penalty for a new λ.
    pub fn rebase(&mut self, lambda: f64) {
        self.lambda = lambda;
        self.f = self.raw + lambda * norm_sqr(&self.x);
        for ((g, r), x) in self.g.iter_mut().zip(&self.raw_grad).zip(&self.x) {
            *g = r + 2.0 * lambda * x;
        }
    }

    pub fn trace(&self) -> TrajectoryPoint {
        TrajectoryPoint { energy: self.raw, objective: self.f, norm: norm_sqr(&self.x).sqrt(), lambda: self.lambda }
    }
}

pub(crate) enum EvalOutcome {
    Point(Point),
    Budget,
}

/// Wraps a problem with the stage budget and the current λ.
pub(crate) struct Evaluator<'a, P: ?Sized> {
    problem: &'a mut P,
    start_evals: u64,
    max_evals: Option<u64>,
    lambda: f64,
}

impl<'a, P: Problem + ?Sized> Evaluator<'a, P> {
    pub fn new(problem: &'a mut P, max_evals: Option<u64>) -> Self {
        let start_evals = problem.evals();
        Self { problem, start_evals, max_evals, lambda: 0.0 }
    }

    pub fn used(&self) -> u64 {
        self.problem.evals() - self.start_evals
    }

    pub fn set_lambda(&mut self, lambda: f64) {
        self.lambda = lambda;
        self.problem.set_penalty(lambda);
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eval(&mut self, x: Vec<f64>) -> Result<EvalOutcome> {
        if let Some(limit) = self.max_evals {
            let cost = 1 + self.problem.gradient_cost(x.len());
            if self.used() + cost > limit {
                return Ok(EvalOutcome::Budget);
            }
        }
        let raw = self.problem.value(&x)?;
        let mut raw_grad = vec![0.0; x.len()];
        self.problem.gradient(&x, &mut raw_grad)?;
        let mut p = Point { x, raw, raw_grad, f: 0.0, g: vec![0.0; 0], lambda: 0.0 };
        p.g = p.raw_grad.clone();
        p.rebase(self.lambda);
        Ok(EvalOutcome::Point(p))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Bookkeeping shared by both methods.
pub(crate) struct Tracker {
    trajectory: Vec<TrajectoryPoint>,
    best_theta: Vec<f64>,
    best_value: f64,
}

impl Tracker {
    pub fn new(start: &Point) -> Self {
        Self { trajectory: vec![start.trace()], best_theta: start.x.clone(), best_value: start.raw }
    }

    pub fn record(&mut self, p: &Point) {
        self.trajectory.push(p.trace());
        if p.raw < self.best_value {
            self.best_value = p.raw;
            self.best_theta = p.x.clone();
        }
    }

    pub fn finish(
        self,
        final_theta: Vec<f64>,
        iterations_used: usize,
        evals_used: u64,
        termination: Termination,
        skipped_pairs: usize,
    ) -> StageResult {
        StageResult {
            best_theta: self.best_theta,
            best_value: self.best_value,
            final_theta,
            iterations_used,
            evals_used,
            trajectory: self.trajectory,
            termination,
            skipped_pairs,
        }
    }
}

/// Result for a run that could not evaluate its starting point.
pub(crate) fn empty_result(x0: &[f64], termination: Termination, evals_used: u64) -> StageResult {
    StageResult {
        best_theta: x0.to_vec(),
        best_value: f64::NAN,
        final_theta: x0.to_vec(),
        iterations_used: 0,
        evals_used,
        trajectory: Vec::new(),
        termination,
        skipped_pairs: 0,
    }
}

pub(crate) fn lambda_for(schedule: Option<&Schedule>, t: usize) -> f64 {
    schedule.map_or(0.0, |s| s.at_iteration(t))
}
