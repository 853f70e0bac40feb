//! Limited-memory BFGS (two-loop recursion), unbounded.

use std::collections::VecDeque;

use super::line_search::{strong_wolfe, SearchOutcome};
use super::{
    dot, empty_result, inf_norm, lambda_for, EvalOutcome, Evaluator, OptimizerConfig, Problem, StageResult,
    Termination, Tracker,
};
use crate::error::Result;
use crate::objective::Schedule;

const CURVATURE_FLOOR: f64 = 1e-10;

struct Pair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

/// `-H g` with `H` the implicit inverse-Hessian approximation.
fn two_loop(pairs: &VecDeque<Pair>, g: &[f64]) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = vec![0.0; pairs.len()];
    for (i, p) in pairs.iter().enumerate().rev() {
        let a = p.rho * dot(&p.s, &q);
        alphas[i] = a;
        q.iter_mut().zip(&p.y).for_each(|(qi, yi)| *qi -= a * yi);
    }
    if let Some(last) = pairs.back() {
        let gamma = dot(&last.s, &last.y) / dot(&last.y, &last.y);
        q.iter_mut().for_each(|qi| *qi *= gamma);
    }
    for (i, p) in pairs.iter().enumerate() {
        let b = p.rho * dot(&p.y, &q);
        q.iter_mut().zip(&p.s).for_each(|(qi, si)| *qi += (alphas[i] - b) * si);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

pub fn minimize_lbfgs<P: Problem + ?Sized>(
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
    let mut pairs: VecDeque<Pair> = VecDeque::with_capacity(cfg.lbfgs_memory);
    let mut skipped = 0;
    let mut iters = 0;

    let termination = loop {
        if inf_norm(&current.g) <= cfg.grad_tolerance {
            break Termination::GradientTolerance;
        }
        if iters == cfg.max_iters {
            break Termination::MaxIterations;
        }
        let mut d = two_loop(&pairs, &current.g);
        if !(dot(&current.g, &d) < 0.0) {
            pairs.clear();
            d = current.g.iter().map(|g| -g).collect();
        }
        let alpha0 = if pairs.is_empty() { (1.0 / dot(&current.g, &current.g).sqrt()).min(1.0) } else { 1.0 };

        let mut next = match strong_wolfe(&mut ev, &current, &d, alpha0, cfg.wolfe_c1, cfg.wolfe_c2)? {
            SearchOutcome::Accepted(p) => p,
            SearchOutcome::Budget => break Termination::BudgetExhausted,
            SearchOutcome::NonFinite => break Termination::NonFinite,
            SearchOutcome::Failed if pairs.is_empty() => break Termination::LineSearchFailure,
            SearchOutcome::Failed => {
                pairs.clear();
                continue;
            }
        };
        iters += 1;

        // both gradients are under the same λ here
        let s: Vec<f64> = next.x.iter().zip(&current.x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next.g.iter().zip(&current.g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > CURVATURE_FLOOR {
            if pairs.len() == cfg.lbfgs_memory {
                pairs.pop_front();
            }
            pairs.push_back(Pair { s, y, rho: 1.0 / sy });
        } else {
            skipped += 1;
        }

        let lambda = lambda_for(schedule, iters);
        if lambda != ev.lambda() {
            ev.set_lambda(lambda);
            next.rebase(lambda);
        }
        tracker.record(&next);
        current = next;
    };

    Ok(tracker.finish(current.x, iters, ev.used(), termination, skipped))
}
