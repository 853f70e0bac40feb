//! A small resumable λ sweep on H2 written to a directory of your choice.
//!
//! `cargo run --release --example lambda_sweep -- target/h2_small`

use std::path::PathBuf;

use regvqe::harness::{HamiltonianSource, Progress, SweepOptions};
use regvqe::{
    run_sweep, AnsatzSpec, Entanglement, GradientMethod, InitDistribution, PipelineConfig, RunStatus, SweepConfig,
};

fn main() -> regvqe::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("regvqe_sweep"));
    let cfg = SweepConfig {
        hamiltonian: HamiltonianSource::Bundled("h2".into()),
        ansatz: AnsatzSpec::two_local(4, 4).with_entanglement(Entanglement::Full),
        pipeline: PipelineConfig::cg(0.0, 15, 10, 1e-2, 10_000),
        gradient: GradientMethod::ParameterShift,
        fd_step: 1e-5,
        lambda_grid: vec![0.0, 0.05, 0.2],
        n_seeds: 20,
        seed_base: 7,
        init: InitDistribution::UniformSymmetricPi,
        paired: true,
        trajectory_seeds: 2,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let progress = |p: Progress| eprintln!("lambda0={} done ({}/{})", p.lambda0, p.completed_lambdas, p.total_lambdas);
    let records = run_sweep(&cfg, &out, &SweepOptions { resume: true, progress: Some(&progress) })?;
    for &l in &cfg.lambda_grid {
        let group: Vec<_> = records.iter().filter(|r| r.lambda0 == l).collect();
        let hits = group.iter().filter(|r| r.status != RunStatus::Failed && r.delta_e <= 1.5e-3).count();
        println!("lambda0={l}: {hits}/{} within 1.5e-3 Ha", group.len());
    }
    println!("store: {}", out.join(regvqe::harness::RUNS_FILE).display());
    Ok(())
}
