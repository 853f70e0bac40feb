//! Command-line front end. Results go to stdout as `key=value` lines;
//! progress and diagnostics go to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::harness::{self, HamiltonianSource, Progress, RunStatus, SweepOptions, Target, RUNS_HEADER};
use crate::pauli::{abs_coefficient_sum, RfimSpec, WeightedPauliSum};
use crate::statevector::{exact_ground_energy, GroundEnergyCache};
use crate::stats::{self, threshold_grid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUN_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "regvqe", version, about = "Regularized VQE experiments on a statevector simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One two-stage run.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Seed index.
        #[arg(long, default_value_t = 0)]
        seed: u32,
        /// Overrides `reg.lambda0`.
        #[arg(long)]
        lambda0: Option<f64>,
        /// Directory for `run.csv` and the trajectory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every (λ, seed) pair of the configured grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, env = "REGVQE_WORKERS")]
        workers: Option<usize>,
        /// Continue an existing store.
        #[arg(long)]
        resume: bool,
    },
    /// Success rates, Wilson intervals, and λ_opt windows from run stores.
    Stats {
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        /// Defaults to the directory of the first store.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact ground-state energy.
    Exact {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// `Σ|c_i| / P`.
    LambdaScale {
        #[command(flatten)]
        source: SourceArgs,
        /// Parameter count; taken from the config's ansatz when omitted.
        #[arg(long)]
        params: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// A `.psum` file.
    pub path: Option<PathBuf>,
    /// `h2` or `lih`.
    #[arg(long)]
    pub bundled: Option<String>,
    /// RFIM chain, e.g. `n=12,seed=7,j=1,low=-0.7,high=0.7`.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub rfim: Option<Vec<String>>,
    /// Use the Hamiltonian (and ansatz) of an experiment config.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Parses `key=value` pairs over the calibrated defaults.
pub fn parse_rfim(items: &[String]) -> Result<RfimSpec> {
    let mut spec = RfimSpec::calibrated(12, 0);
    for item in items.iter().flat_map(|s| s.split_whitespace()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("rfim: expected key=value, got {item:?}")))?;
        let float = || v.parse::<f64>().map_err(|_| Error::Config(format!("rfim: {k}: bad number {v:?}")));
        match k {
            "n" | "n_qubits" => {
                spec.n_qubits = v.parse().map_err(|_| Error::Config(format!("rfim: {k}: bad integer {v:?}")))?
            }
            "seed" | "rng_seed" => {
                spec.rng_seed = v.parse().map_err(|_| Error::Config(format!("rfim: {k}: bad integer {v:?}")))?
            }
            "j" | "coupling_j" => spec.coupling_j = float()?,
            "low" | "field_low" => spec.field_low = float()?,
            "high" | "field_high" => spec.field_high = float()?,
            _ => return Err(Error::Config(format!("rfim: unknown key {k:?}"))),
        }
    }
    spec.validate()?;
    Ok(spec)
}

impl SourceArgs {
    fn resolve(&self) -> Result<(HamiltonianSource, Option<ExperimentConfig>)> {
        let given = [self.path.is_some(), self.bundled.is_some(), self.rfim.is_some(), self.config.is_some()];
        if given.iter().filter(|g| **g).count() != 1 {
            return Err(Error::Config("give exactly one of PATH, --bundled, --rfim, --config".into()));
        }
        if let Some(p) = &self.path {
            return Ok((HamiltonianSource::Path(p.clone()), None));
        }
        if let Some(b) = &self.bundled {
            return Ok((HamiltonianSource::Bundled(b.clone()), None));
        }
        if let Some(items) = &self.rfim {
            return Ok((HamiltonianSource::Rfim(parse_rfim(items)?), None));
        }
        let cfg = ExperimentConfig::load(self.config.as_ref().expect("one source given"))?;
        Ok((cfg.hamiltonian.clone(), Some(cfg)))
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(lines: &[(&str, String)]) {
    let mut out = std::io::stdout().lock();
    for (k, v) in lines {
        let _ = writeln!(out, "{k}={v}");
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Run { config, seed, lambda0, out } => cmd_run(&config, seed, lambda0, out.as_deref()),
        Command::Sweep { config, out, workers, resume } => cmd_sweep(&config, &out, workers, resume),
        Command::Stats { runs, out } => cmd_stats(&runs, out.as_deref()),
        Command::Exact { source } => cmd_exact(&source),
        Command::LambdaScale { source, params } => cmd_lambda_scale(&source, params),
    }
}

fn load_experiment(path: &Path) -> Result<(ExperimentConfig, harness::SweepConfig, WeightedPauliSum)> {
    let cfg = ExperimentConfig::load(path)?;
    let h = cfg.hamiltonian.load()?;
    let sweep = cfg.sweep_config(h.n_qubits())?;
    Ok((cfg, sweep, h))
}

fn cmd_run(config: &Path, seed: u32, lambda0: Option<f64>, out: Option<&Path>) -> Result<i32> {
    let (exp, sweep, _) = load_experiment(config)?;
    let lambda0 = lambda0.unwrap_or(exp.reg.lambda0);
    if !(lambda0.is_finite() && lambda0 >= 0.0) {
        return Err(Error::Config(format!("lambda0 must be finite and >= 0, got {lambda0}")));
    }
    let cache = match out {
        Some(dir) => GroundEnergyCache::on_disk(dir.join("cache")),
        None => GroundEnergyCache::in_memory(),
    };
    let target = Target::resolve(&sweep.hamiltonian, &cache)?;
    let lambda_index = sweep.lambda_grid.iter().position(|l| *l == lambda0).unwrap_or(0);
    let outcome = harness::run_at(&sweep, &target, lambda0, lambda_index, seed);
    let r = &outcome.record;

    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("run.csv");
        fs::write(&path, format!("{RUNS_HEADER}\n{}\n", r.to_csv_row())).map_err(|e| Error::io(&path, e))?;
        if let Some((a, b)) = &outcome.stages {
            let path = dir.join("trajectory.csv");
            fs::write(&path, harness::trajectory_csv(a, b)).map_err(|e| Error::io(&path, e))?;
        }
    }
    let (iters_a, iters_b) = outcome.stages.as_ref().map_or((0, 0), |(a, b)| (a.iterations_used, b.iterations_used));
    emit(&[
        ("lambda0", format!("{:?}", r.lambda0)),
        ("seed", r.seed.to_string()),
        ("status", r.status.to_string()),
        ("final_energy", format!("{:?}", r.final_energy)),
        ("ground_energy", format!("{:?}", target.ground_energy)),
        ("delta_e", format!("{:?}", r.delta_e)),
        ("final_norm", format!("{:?}", r.final_norm)),
        ("evals_total", r.evals_total.to_string()),
        ("iterations_a", iters_a.to_string()),
        ("iterations_b", iters_b.to_string()),
    ]);
    Ok(if r.status == RunStatus::Failed { EXIT_RUN_FAILED } else { EXIT_OK })
}

fn cmd_sweep(config: &Path, out: &Path, workers: Option<usize>, resume: bool) -> Result<i32> {
    let (mut exp, mut sweep, _) = load_experiment(config)?;
    if let Some(w) = workers {
        exp.sweep.workers = w;
        sweep.workers = w;
    }
    let progress = |p: Progress| {
        eprintln!("lambda0={:?} done ({}/{})", p.lambda0, p.completed_lambdas, p.total_lambdas);
    };
    eprintln!("sweep: {} runs on {} workers -> {}", sweep.run_count(), sweep.workers, out.display());
    let records = harness::run_sweep(&sweep, out, &SweepOptions { resume, progress: Some(&progress) })?;
    let resolved = out.join("resolved.toml");
    fs::write(&resolved, exp.resolved().to_toml()).map_err(|e| Error::io(&resolved, e))?;

    let count = |s: RunStatus| records.iter().filter(|r| r.status == s).count().to_string();
    emit(&[
        ("records", records.len().to_string()),
        ("converged", count(RunStatus::Converged)),
        ("budget_exhausted", count(RunStatus::BudgetExhausted)),
        ("failed", count(RunStatus::Failed)),
        ("hamiltonian_hash", records.first().map(|r| r.hamiltonian_hash.clone()).unwrap_or_default()),
        ("runs", out.join(harness::RUNS_FILE).display().to_string()),
    ]);
    Ok(EXIT_OK)
}

fn cmd_stats(runs: &[PathBuf], out: Option<&Path>) -> Result<i32> {
    let mut records = Vec::new();
    for path in runs {
        records.extend(harness::load_runs(path)?);
    }
    let thresholds = threshold_grid();
    let summary = stats::summarize(&records, &thresholds)?;
    let dir = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| runs[0].parent().map(Path::to_path_buf).unwrap_or_default());
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

    let write = |name: String, text: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))
    };
    write("summary.csv".into(), summary.to_csv())?;
    for k in 0..thresholds.len() {
        write(format!("plot_thr_{}.csv", k + 1), summary.plot_csv(k))?;
    }
    let reports = stats::window_reports(&summary);
    let report = serde_json::json!({ "hamiltonian_hash": summary.hamiltonian_hash, "windows": reports });
    write("windows.json".into(), serde_json::to_string_pretty(&report).expect("report serializes") + "\n")?;

    let mut lines = vec![
        ("records", records.len().to_string()),
        ("lambdas", summary.lambdas.len().to_string()),
        ("summary", dir.join("summary.csv").display().to_string()),
    ];
    let keys: Vec<(String, String)> = reports
        .iter()
        .enumerate()
        .map(|(k, r)| match &r.window {
            Some(w) => (format!("window_{}", k + 1), format!("{:?},{:?}", w.lambda_lo, w.lambda_hi)),
            None => (format!("window_{}", k + 1), "undefined".to_string()),
        })
        .collect();
    lines.extend(keys.iter().map(|(k, v)| (k.as_str(), v.clone())));
    emit(&lines);
    Ok(EXIT_OK)
}

fn cmd_exact(source: &SourceArgs) -> Result<i32> {
    let (src, _) = source.resolve()?;
    let h = src.load()?;
    let e0 = exact_ground_energy(&h)?;
    emit(&[
        ("ground_energy", format!("{e0:?}")),
        ("n_qubits", h.n_qubits().to_string()),
        ("terms", h.len().to_string()),
        ("hamiltonian_hash", h.content_hash()),
    ]);
    Ok(EXIT_OK)
}

fn cmd_lambda_scale(source: &SourceArgs, params: Option<usize>) -> Result<i32> {
    let (src, cfg) = source.resolve()?;
    let h = src.load()?;
    let p = match (params, cfg) {
        (Some(p), _) => p,
        (None, Some(cfg)) => cfg.sweep_config(h.n_qubits())?.ansatz.param_count(),
        (None, None) => return Err(Error::Config("--params is required without --config".into())),
    };
    emit(&[
        ("abs_coefficient_sum", format!("{:?}", abs_coefficient_sum(&h))),
        ("params", p.to_string()),
        ("lambda_scale", format!("{:?}", stats::lambda_scale(&h, p)?)),
    ]);
    Ok(EXIT_OK)
}
