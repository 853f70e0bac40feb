//! CG and L-BFGS on Rosenbrock and on a one-parameter cosine landscape.

use std::sync::Arc;

use regvqe::optimizers::{minimize_cg, minimize_lbfgs, FnProblem};
use regvqe::{AnsatzSpec, Objective, OptimizerConfig, WeightedPauliSum};

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

fn main() -> regvqe::Result<()> {
    let mut p = FnProblem::new(rosenbrock, rosenbrock_grad);
    let r = minimize_cg(&mut p, &[-1.2, 1.0], &OptimizerConfig::cg(200, 1e-10), None)?;
    println!("CG 2-d: f={:.3e} after {} iterations ({:?})", r.best_value, r.iterations_used, r.termination);

    let x0: Vec<f64> = (0..10).map(|i| if i % 2 == 0 { -1.2 } else { 1.0 }).collect();
    let mut p = FnProblem::new(rosenbrock, rosenbrock_grad);
    let r = minimize_lbfgs(&mut p, &x0, &OptimizerConfig::lbfgs(300, 1e-10), None)?;
    println!(
        "L-BFGS 10-d: f={:.3e} after {} iterations, {} pairs skipped",
        r.best_value, r.iterations_used, r.skipped_pairs
    );

    // E(θ) = cos θ, minimum -1 at θ = π
    let h = Arc::new(WeightedPauliSum::from_labels(1, &[(1.0, "Z")])?);
    let mut obj = Objective::new(h, AnsatzSpec::ry_layer(1))?;
    let r = minimize_lbfgs(&mut obj, &[0.1], &OptimizerConfig::lbfgs(50, 1e-8), None)?;
    println!("cosine: E={:.12} at θ={:.9} with {} evaluations", r.best_value, r.best_theta[0], r.evals_used);
    Ok(())
}
