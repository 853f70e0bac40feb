//! Polak–Ribière+ nonlinear conjugate gradient.

use super::line_search::{strong_wolfe, SearchOutcome};
use super::{
    dot, empty_result, inf_norm, lambda_for, EvalOutcome, Evaluator, OptimizerConfig, Problem, StageResult,
    Termination, Tracker,
};
use crate::error::Result;
use crate::objective::Schedule;

pub fn minimize_cg<P: Problem + ?Sized>(
    problem: &mut P,
    x0: &[f64],
    cfg: &OptimizerConfig,
    schedule: Option<&Schedule>,
) -> Result<StageResult> {
    cfg.validate()?;
    let mut ev = Evaluator::new(problem, cfg.max_evals);
    ev.set_lambda(lambda_for(schedule, 0));
    let mut current = match ev.eval(x0.to_vec())? {
        EvalOutcome::Point(p) => p,
        EvalOutcome::Budget => return Ok(empty_result(x0, Termination::BudgetExhausted, ev.used())),
    };
    if !current.is_finite() {
        return Ok(empty_result(x0, Termination::NonFinite, ev.used()));
    }
    let mut tracker = Tracker::new(&current);

    let mut d: Vec<f64> = current.g.iter().map(|g| -g).collect();
    let mut steepest = true;
    // scipy-style first step: pretend the previous value was f + ‖g‖/2
    let mut f_prev = current.f + 0.5 * dot(&current.g, &current.g).sqrt();
    let mut iters = 0;

    let termination = loop {
        if inf_norm(&current.g) <= cfg.grad_tolerance {
            break Termination::GradientTolerance;
        }
        if iters == cfg.max_iters {
            break Termination::MaxIterations;
        }
        let mut dphi0 = dot(&current.g, &d);
        if !(dphi0 < 0.0) {
            d = current.g.iter().map(|g| -g).collect();
            dphi0 = dot(&current.g, &d);
            steepest = true;
        }
        let alpha0 = {
            let guess = 1.01 * 2.0 * (current.f - f_prev) / dphi0;
            if guess.is_finite() && guess > 0.0 {
                guess.min(1.0)
            } else {
                1.0
            }
        };

        let mut next = match strong_wolfe(&mut ev, &current, &d, alpha0, cfg.wolfe_c1, cfg.wolfe_c2)? {
            SearchOutcome::Accepted(p) => p,
            SearchOutcome::Budget => break Termination::BudgetExhausted,
            SearchOutcome::NonFinite => break Termination::NonFinite,
            SearchOutcome::Failed if steepest => break Termination::LineSearchFailure,
            SearchOutcome::Failed => {
                d = current.g.iter().map(|g| -g).collect();
                steepest = true;
                continue;
            }
        };
        iters += 1;
        f_prev = current.f;

        let g_old = std::mem::take(&mut current.g);
        let lambda = lambda_for(schedule, iters);
        if lambda != ev.lambda() {
            ev.set_lambda(lambda);
            next.rebase(lambda);
        }
        let y_dot: f64 = next.g.iter().zip(&g_old).map(|(g, go)| g * (g - go)).sum();
        let beta = (y_dot / dot(&g_old, &g_old)).max(0.0);
        let beta = if beta.is_finite() { beta } else { 0.0 };
        for (di, gi) in d.iter_mut().zip(&next.g) {
            *di = -gi + beta * *di;
        }
        steepest = beta == 0.0;
        tracker.record(&next);
        current = next;
    };

    Ok(tracker.finish(current.x, iters, ev.used(), termination, 0))
}
