mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use regvqe::optimizers::{minimize_cg, minimize_lbfgs, run_two_stage, split_reference, FnProblem, Termination};
use regvqe::{AnsatzSpec, Objective, OptimizerConfig, PipelineConfig, WeightedPauliSum};

fn cosine_landscape() -> Objective {
    let h = WeightedPauliSum::from_labels(1, &[(1.0, "Z")]).unwrap();
    Objective::new(Arc::new(h), AnsatzSpec::ry_layer(1)).unwrap()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
}

fn rosenbrock_grad(x: &[f64], g: &mut [f64]) {
    g.fill(0.0);
    for i in 0..x.len() - 1 {
        let a = x[i + 1] - x[i] * x[i];
        g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
        g[i + 1] += 200.0 * a;
    }
}

#[test]
fn both_methods_solve_the_cosine_landscape() {
    let cg = minimize_cg(&mut cosine_landscape(), &[0.1], &OptimizerConfig::cg(100, 1e-8), None).unwrap();
    let lb = minimize_lbfgs(&mut cosine_landscape(), &[0.1], &OptimizerConfig::lbfgs(100, 1e-8), None).unwrap();
    assert!((cg.best_value + 1.0).abs() < 1e-6, "cg {}", cg.best_value);
    assert!((lb.best_value + 1.0).abs() < 1e-6, "lbfgs {}", lb.best_value);
    assert!((cg.best_value - lb.best_value).abs() < 1e-6);
    assert!((cg.best_theta[0].rem_euclid(2.0 * PI) - PI).abs() < 1e-3);
}

#[test]
fn rosenbrock_benchmarks() {
    let mut p = FnProblem::new(rosenbrock, rosenbrock_grad);
    let cg = minimize_cg(&mut p, &[-1.2, 1.0], &OptimizerConfig::cg(200, 1e-10), None).unwrap();
    assert!(rosenbrock(&cg.best_theta) < 1e-4);

    let x0: Vec<f64> = (0..10).map(|i| if i % 2 == 0 { -1.2 } else { 1.0 }).collect();
    let mut p = FnProblem::new(rosenbrock, rosenbrock_grad);
    let lb = minimize_lbfgs(&mut p, &x0, &OptimizerConfig::lbfgs(300, 1e-10), None).unwrap();
    assert!(rosenbrock(&lb.best_theta) < 1e-6);
}

#[test]
fn best_so_far_never_increases() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let spec = AnsatzSpec::two_local(3, 2);
    let h = Arc::new(random_hamiltonian(3, 8, &mut rng));
    let pipeline = PipelineConfig::cg(0.1, 15, 10, 1e-6, 10_000);
    for _ in 0..5 {
        let theta0 = random_theta(spec.param_count(), &mut rng);
        let mut obj = Objective::new(h.clone(), spec).unwrap();
        let (a, b) = run_two_stage(&pipeline, &mut obj, &theta0).unwrap();
        for stage in [&a, &b] {
            let mut best = f64::INFINITY;
            for p in &stage.trajectory {
                let next = best.min(p.energy);
                assert!(next <= best);
                best = next;
            }
            assert_eq!(best, stage.best_value);
        }
        assert!(b.best_value <= a.best_value + 1e-12);
        assert!(a.iterations_used <= 15 && b.iterations_used <= 10);
        assert!(a.evals_used + b.evals_used <= pipeline.eval_budget);
        assert_eq!(obj.eval_count(), a.evals_used + b.evals_used);
    }
}

#[test]
fn runs_are_deterministic() {
    let h = Arc::new(regvqe::data::h2());
    let spec = AnsatzSpec::two_local(4, 4);
    let theta0 = random_theta(40, &mut ChaCha8Rng::seed_from_u64(10));
    let pipeline = PipelineConfig::cg(0.05, 15, 10, 1e-2, 10_000);
    let run = || run_two_stage(&pipeline, &mut Objective::new(h.clone(), spec).unwrap(), &theta0).unwrap();
    let (a1, b1) = run();
    let (a2, b2) = run();
    assert_eq!(a1, a2);
    assert_eq!(b1, b2);
}

#[test]
fn zero_lambda_equals_split_unregularized_run() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = AnsatzSpec::two_local(3, 1);
    let h = Arc::new(random_hamiltonian(3, 6, &mut rng));
    let pipeline = PipelineConfig::cg(0.0, 15, 10, 1e-2, 10_000);
    let theta0 = random_theta(spec.param_count(), &mut rng);
    let reg = run_two_stage(&pipeline, &mut Objective::new(h.clone(), spec).unwrap(), &theta0).unwrap();
    let plain = split_reference(&pipeline, &mut Objective::new(h, spec).unwrap(), &theta0).unwrap();
    assert_eq!(reg, plain);
}

#[test]
fn eval_budget_is_a_hard_cap() {
    let spec = AnsatzSpec::two_local(4, 4);
    let theta0 = random_theta(40, &mut ChaCha8Rng::seed_from_u64(12));
    let pipeline = PipelineConfig::cg(0.1, 15, 10, 1e-9, 1_000);
    let mut obj = Objective::new(Arc::new(regvqe::data::h2()), spec).unwrap();
    let (a, b) = run_two_stage(&pipeline, &mut obj, &theta0).unwrap();
    assert!(obj.eval_count() <= 1_000);
    assert!(a.truncated() || b.truncated());
    assert_eq!(a.termination, Termination::BudgetExhausted);
}
