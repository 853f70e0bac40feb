//! Strong-Wolfe line search with cubic-interpolation zoom.

use super::{dot, EvalOutcome, Evaluator, Point, Problem};
use crate::error::Result;

const MAX_TRIALS: usize = 30;
const MAX_STEP: f64 = 1e8;

pub(crate) enum SearchOutcome {
    Accepted(Point),
    Failed,
    Budget,
    NonFinite,
}

struct Trial {
    alpha: f64,
    phi: f64,
    dphi: f64,
}

fn trial_point(start: &Point, d: &[f64], alpha: f64) -> Vec<f64> {
    start.x.iter().zip(d).map(|(x, di)| x + alpha * di).collect()
}

/// Minimizer of the cubic through two bracket ends, or the midpoint when
/// that minimizer is undefined or too close to either end.
fn cubic_step(lo: &Trial, hi: &Trial) -> f64 {
    let (a, b) = (lo.alpha, hi.alpha);
    let d1 = lo.dphi + hi.dphi - 3.0 * (lo.phi - hi.phi) / (a - b);
    let disc = d1 * d1 - lo.dphi * hi.dphi;
    let mid = 0.5 * (a + b);
    if !(disc >= 0.0) {
        return mid;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let step = b - (b - a) * (hi.dphi + d2 - d1) / (hi.dphi - lo.dphi + 2.0 * d2);
    let (min, max) = if a < b { (a, b) } else { (b, a) };
    let margin = 0.1 * (max - min);
    if step.is_finite() && step > min + margin && step < max - margin {
        step
    } else {
        mid
    }
}

/// Searches along `d` from `start` for a step satisfying
/// `φ(α) <= φ(0) + c1 α φ'(0)` and `|φ'(α)| <= c2 |φ'(0)|`.
pub(crate) fn strong_wolfe<P: Problem + ?Sized>(
    ev: &mut Evaluator<'_, P>,
    start: &Point,
    d: &[f64],
    alpha0: f64,
    c1: f64,
    c2: f64,
) -> Result<SearchOutcome> {
    let phi0 = start.f;
    let dphi0 = dot(&start.g, d);
    debug_assert!(dphi0 < 0.0, "line search along an ascent direction");

    let evaluate = |ev: &mut Evaluator<'_, P>, alpha: f64| -> Result<Option<(Trial, Point)>> {
        match ev.eval(trial_point(start, d, alpha))? {
            EvalOutcome::Budget => Ok(None),
            EvalOutcome::Point(p) => {
                let t = Trial { alpha, phi: p.f, dphi: dot(&p.g, d) };
                Ok(Some((t, p)))
            }
        }
    };
    let sufficient = |t: &Trial| t.phi <= phi0 + c1 * t.alpha * dphi0;
    let curvature = |t: &Trial| t.dphi.abs() <= -c2 * dphi0;

    let mut prev = Trial { alpha: 0.0, phi: phi0, dphi: dphi0 };
    let mut alpha = alpha0.clamp(f64::MIN_POSITIVE, MAX_STEP);
    let mut trials = 0;

    // bracketing phase
    let (mut lo, mut hi) = loop {
        if trials == MAX_TRIALS {
            return Ok(SearchOutcome::Failed);
        }
        trials += 1;
        let Some((t, p)) = evaluate(ev, alpha)? else {
            return Ok(SearchOutcome::Budget);
        };
        if !p.is_finite() {
            return Ok(SearchOutcome::NonFinite);
        }
        if !sufficient(&t) || (trials > 1 && t.phi >= prev.phi) {
            break (prev, t);
        }
        if curvature(&t) {
            return Ok(accept(p, &t, phi0, dphi0, c1, c2));
        }
        if t.dphi >= 0.0 {
            break (t, prev);
        }
        if alpha >= MAX_STEP {
            return Ok(SearchOutcome::Failed);
        }
        prev = t;
        alpha = (2.0 * alpha).min(MAX_STEP);
    };

    // zoom phase: `lo` satisfies sufficient decrease with the lowest φ seen
    while trials < MAX_TRIALS {
        trials += 1;
        let width = (hi.alpha - lo.alpha).abs();
        if width <= 1e-14 * lo.alpha.abs().max(hi.alpha.abs()).max(1e-300) {
            return Ok(SearchOutcome::Failed);
        }
        let a = cubic_step(&lo, &hi);
        let Some((t, p)) = evaluate(ev, a)? else {
            return Ok(SearchOutcome::Budget);
        };
        if !p.is_finite() {
            return Ok(SearchOutcome::NonFinite);
        }
        if !sufficient(&t) || t.phi >= lo.phi {
            hi = t;
        } else {
            if curvature(&t) {
                return Ok(accept(p, &t, phi0, dphi0, c1, c2));
            }
            if t.dphi * (hi.alpha - lo.alpha) >= 0.0 {
                hi = lo;
            }
            lo = t;
        }
    }
    Ok(SearchOutcome::Failed)
}

fn accept(p: Point, t: &Trial, phi0: f64, dphi0: f64, c1: f64, c2: f64) -> SearchOutcome {
    debug_assert!(t.phi <= phi0 + c1 * t.alpha * dphi0, "sufficient decrease violated");
    debug_assert!(t.dphi.abs() <= -c2 * dphi0, "curvature condition violated");
    SearchOutcome::Accepted(p)
}
