//! One regularized two-stage run on H2 next to its unregularized twin.

use std::sync::Arc;

use regvqe::harness::initial_theta;
use regvqe::optimizers::{run_two_stage, split_reference};
use regvqe::{data, exact_ground_energy, AnsatzSpec, Entanglement, InitDistribution, Objective, PipelineConfig};

fn main() -> regvqe::Result<()> {
    let h = Arc::new(data::h2());
    let e0 = exact_ground_energy(&h)?;
    let spec = AnsatzSpec::two_local(4, 4).with_entanglement(Entanglement::Full);
    let pipeline = PipelineConfig::cg(0.2, 15, 10, 1e-2, 10_000);

    for seed in 0..5 {
        let theta0 = initial_theta(&spec, 20240601, 0, seed, InitDistribution::UniformSymmetricPi).into_inner();
        let (a, b) = run_two_stage(&pipeline, &mut Objective::new(h.clone(), spec)?, &theta0)?;
        let (_, plain) = split_reference(&pipeline, &mut Objective::new(h.clone(), spec)?, &theta0)?;
        println!(
            "seed {seed}: stage A {:.6} -> stage B {:.6} (dE {:.2e}, {} evals); unregularized dE {:.2e}",
            a.best_value,
            b.best_value,
            b.best_value - e0,
            a.evals_used + b.evals_used,
            plain.best_value - e0
        );
    }
    let schedule: Vec<String> =
        (0..=15).step_by(3).map(|t| format!("{:.4}", pipeline.schedule.lambda_at(t).unwrap_or(f64::NAN))).collect();
    println!("lambda(t) for t = 0, 3, ..., 15: {}", schedule.join(" "));
    Ok(())
}
