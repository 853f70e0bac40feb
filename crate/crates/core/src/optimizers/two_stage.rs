//! Regularized Stage A followed by unregularized Stage B.

use serde::{Deserialize, Serialize};

use super::{empty_result, minimize, OptimizerConfig, Problem, StageResult, Termination};
use crate::error::{Error, Result};
use crate::objective::Schedule;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub stage_a: OptimizerConfig,
    pub stage_b: OptimizerConfig,
    pub schedule: Schedule,
    /// Combined evaluation cap for both stages.
    pub eval_budget: u64,
}

impl PipelineConfig {
    /// CG in both stages with a cosine schedule aligned to Stage A.
    pub fn cg(lambda0: f64, iters_a: usize, iters_b: usize, grad_tolerance: f64, eval_budget: u64) -> Self {
        Self {
            stage_a: OptimizerConfig::cg(iters_a, grad_tolerance),
            stage_b: OptimizerConfig::cg(iters_b, grad_tolerance),
            schedule: Schedule::cosine(lambda0, iters_a),
            eval_budget,
        }
    }

    pub fn with_lambda0(mut self, lambda0: f64) -> Self {
        self.schedule.lambda0 = lambda0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.stage_a.validate()?;
        self.stage_b.validate()?;
        self.schedule.validate()?;
        if self.schedule.t_a != self.stage_a.max_iters {
            return Err(Error::Config(format!(
                "schedule horizon {} must equal the Stage A iteration cap {}",
                self.schedule.t_a, self.stage_a.max_iters
            )));
        }
        if self.eval_budget == 0 {
            return Err(Error::Config("eval_budget must be positive".into()));
        }
        Ok(())
    }

    /// Stage A gets the share of the budget proportional to its iteration cap.
    pub fn stage_a_budget(&self) -> u64 {
        let a = self.stage_a.max_iters as u128;
        let b = self.stage_b.max_iters as u128;
        (self.eval_budget as u128 * a / (a + b)) as u64
    }
}

pub fn run_two_stage<P: Problem + ?Sized>(
    pipeline: &PipelineConfig,
    problem: &mut P,
    theta0: &[f64],
) -> Result<(StageResult, StageResult)> {
    pipeline.validate()?;
    run_split(pipeline, problem, theta0, Some(&pipeline.schedule))
}

/// The pipeline with no penalty at all: one unregularized run cut at the
/// Stage A boundary and restarted from its best iterate.
pub fn split_reference<P: Problem + ?Sized>(
    pipeline: &PipelineConfig,
    problem: &mut P,
    theta0: &[f64],
) -> Result<(StageResult, StageResult)> {
    pipeline.validate()?;
    run_split(pipeline, problem, theta0, None)
}

fn run_split<P: Problem + ?Sized>(
    pipeline: &PipelineConfig,
    problem: &mut P,
    theta0: &[f64],
    schedule: Option<&Schedule>,
) -> Result<(StageResult, StageResult)> {
    let cap_a = pipeline.stage_a_budget().max(1);
    let a = minimize(problem, theta0, &pipeline.stage_a.with_max_evals(Some(cap_a)), schedule)?;

    let remaining = pipeline.eval_budget.saturating_sub(a.evals_used);
    let b = if a.failed() {
        empty_result(&a.best_theta, Termination::NonFinite, 0)
    } else if remaining == 0 {
        empty_result(&a.best_theta, Termination::BudgetExhausted, 0)
    } else {
        minimize(problem, &a.best_theta, &pipeline.stage_b.with_max_evals(Some(remaining)), None)?
    };
    Ok((a, b))
}
