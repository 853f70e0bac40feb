//! λ-grid sweeps over seeded initializations with a resumable CSV store.
//!
//! Every run is keyed by `(λ-index, seed-index)`; its initial parameters come
//! from a ChaCha8 stream selected by that key, so the record set does not
//! depend on worker count or completion order. The store is appended as runs
//! finish and rewritten in canonical order once the sweep is complete.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{AnsatzSpec, ParameterVector};
use crate::data;
use crate::error::{Error, Result};
use crate::num_fmt::g17;
use crate::objective::{GradientMethod, Objective};
use crate::optimizers::{run_two_stage, PipelineConfig, StageResult};
use crate::pauli::{generate_rfim, parse_pauli_sum, RfimSpec, WeightedPauliSum};
use crate::statevector::GroundEnergyCache;

pub const RUNS_FILE: &str = "runs.csv";
pub const META_FILE: &str = "sweep.meta.json";
pub const TRAJECTORY_DIR: &str = "trajectories";
pub const RUNS_HEADER: &str = "lambda0,seed,final_energy,final_norm,evals_total,status,delta_e";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianSource {
    Path(PathBuf),
    /// `h2` or `lih`.
    Bundled(String),
    Rfim(RfimSpec),
}

impl HamiltonianSource {
    pub fn load(&self) -> Result<WeightedPauliSum> {
        match self {
            HamiltonianSource::Path(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                parse_pauli_sum(&text).map_err(|e| match e {
                    Error::Parse { line, message } => {
                        Error::Store { path: p.clone(), message: format!("line {line}: {message}") }
                    }
                    other => other,
                })
            }
            HamiltonianSource::Bundled(name) => data::bundled(name),
            HamiltonianSource::Rfim(spec) => generate_rfim(spec),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitDistribution {
    /// Each angle uniform on `[-π, π)`.
    #[default]
    UniformSymmetricPi,
    /// Each angle uniform on `[0, 2π)`.
    Uniform0To2Pi,
}

/// Initial parameters for run `(lambda_index, seed_index)`.
pub fn initial_theta(
    spec: &AnsatzSpec,
    seed_base: u64,
    lambda_index: u32,
    seed_index: u32,
    dist: InitDistribution,
) -> ParameterVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_base);
    rng.set_stream((u64::from(lambda_index) << 32) | u64::from(seed_index));
    let values = (0..spec.param_count())
        .map(|_| match dist {
            InitDistribution::UniformSymmetricPi => rng.random_range(-PI..PI),
            InitDistribution::Uniform0To2Pi => rng.random_range(0.0..TAU),
        })
        .collect();
    ParameterVector::new(values)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub hamiltonian: HamiltonianSource,
    pub ansatz: AnsatzSpec,
    /// Template; each run substitutes its own λ0.
    pub pipeline: PipelineConfig,
    pub gradient: GradientMethod,
    pub fd_step: f64,
    pub lambda_grid: Vec<f64>,
    pub n_seeds: u32,
    pub seed_base: u64,
    pub init: InitDistribution,
    /// Same initial θ for a seed index at every λ.
    pub paired: bool,
    /// Trajectories are stored for seed indices below this.
    pub trajectory_seeds: u32,
    pub workers: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        self.ansatz.validate()?;
        self.pipeline.validate()?;
        if self.lambda_grid.is_empty() {
            return bad("lambda_grid is empty".into());
        }
        if let Some(l) = self.lambda_grid.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return bad(format!("lambda_grid entries must be finite and >= 0, got {l}"));
        }
        if let Some(w) = self.lambda_grid.windows(2).find(|w| w[0] >= w[1]) {
            return bad(format!("lambda_grid must be strictly ascending, found {} then {}", w[0], w[1]));
        }
        if self.n_seeds == 0 {
            return bad("n_seeds must be positive".into());
        }
        if self.workers == 0 {
            return bad("workers must be positive".into());
        }
        if self.gradient == GradientMethod::FiniteDifference && !(self.fd_step > 0.0) {
            return bad(format!("fd step must be positive, got {}", self.fd_step));
        }
        Ok(())
    }

    pub fn run_count(&self) -> usize {
        self.lambda_grid.len() * self.n_seeds as usize
    }

    /// The configuration with execution-only settings normalized, for
    /// comparing two configs that must produce the same records.
    fn identity(&self) -> SweepConfig {
        SweepConfig { workers: 1, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    BudgetExhausted,
    Failed,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::BudgetExhausted => "budget_exhausted",
            RunStatus::Failed => "failed",
        }
    }

    /// Non-finite values fail a run; a truncated stage marks it as
    /// budget-limited; any other stop counts as converged.
    pub fn from_stages(a: &StageResult, b: &StageResult) -> Self {
        if a.failed() || b.failed() {
            RunStatus::Failed
        } else if a.truncated() || b.truncated() {
            RunStatus::BudgetExhausted
        } else {
            RunStatus::Converged
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RunStatus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "converged" => Ok(RunStatus::Converged),
            "budget_exhausted" => Ok(RunStatus::BudgetExhausted),
            "failed" => Ok(RunStatus::Failed),
            _ => Err(format!("unknown status {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub lambda0: f64,
    pub seed: u64,
    /// Best raw energy of Stage B.
    pub final_energy: f64,
    /// `‖θ‖₂` at that iterate.
    pub final_norm: f64,
    pub evals_total: u64,
    pub status: RunStatus,
    pub delta_e: f64,
    pub trajectory_ref: Option<PathBuf>,
    pub hamiltonian_hash: String,
}

impl RunRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            g17(self.lambda0),
            self.seed,
            g17(self.final_energy),
            g17(self.final_norm),
            self.evals_total,
            self.status,
            g17(self.delta_e)
        )
    }

    fn from_csv_row(line: &str, hash: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(format!("expected 7 fields, found {}", fields.len()));
        }
        let float = |i: usize| fields[i].parse::<f64>().map_err(|_| format!("bad number {:?}", fields[i]));
        let int = |i: usize| fields[i].parse::<u64>().map_err(|_| format!("bad integer {:?}", fields[i]));
        Ok(RunRecord {
            lambda0: float(0)?,
            seed: int(1)?,
            final_energy: float(2)?,
            final_norm: float(3)?,
            evals_total: int(4)?,
            status: fields[5].parse()?,
            delta_e: float(6)?,
            trajectory_ref: None,
            hamiltonian_hash: hash.to_string(),
        })
    }
}

/// A finished two-stage run with its stage results.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub theta0: ParameterVector,
    pub stages: Option<(StageResult, StageResult)>,
}

/// Sidecar describing the sweep that produced a store.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub version: String,
    pub config: SweepConfig,
    pub hamiltonian_hash: String,
    pub ground_energy: f64,
    pub n_qubits: usize,
    pub param_count: usize,
}

impl SweepMeta {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Store { path: path.into(), message: e.to_string() })
    }
}

/// A resolved Hamiltonian with its exact ground energy.
#[derive(Clone, Debug)]
pub struct Target {
    pub hamiltonian: Arc<WeightedPauliSum>,
    pub hash: String,
    pub ground_energy: f64,
}

impl Target {
    pub fn resolve(source: &HamiltonianSource, cache: &GroundEnergyCache) -> Result<Self> {
        let h = source.load()?;
        let ground_energy = cache.get(&h)?;
        Ok(Self { hash: h.content_hash(), hamiltonian: Arc::new(h), ground_energy })
    }
}

/// Runs one seeded two-stage optimization. Errors inside the run are
/// reported as a failed record.
pub fn run_single(cfg: &SweepConfig, target: &Target, lambda_index: usize, seed: u32) -> RunOutcome {
    let lambda0 = cfg.lambda_grid[lambda_index];
    run_at(cfg, target, lambda0, lambda_index, seed)
}

/// As [`run_single`] with an explicit λ0, which need not be on the grid.
pub fn run_at(cfg: &SweepConfig, target: &Target, lambda0: f64, lambda_index: usize, seed: u32) -> RunOutcome {
    let stream = if cfg.paired { 0 } else { lambda_index as u32 };
    let theta0 = initial_theta(&cfg.ansatz, cfg.seed_base, stream, seed, cfg.init);
    let pipeline = cfg.pipeline.with_lambda0(lambda0);
    let result = Objective::new(target.hamiltonian.clone(), cfg.ansatz)
        .map(|o| o.with_gradient(cfg.gradient, cfg.fd_step))
        .and_then(|mut obj| run_two_stage(&pipeline, &mut obj, &theta0));

    let mut record = RunRecord {
        lambda0,
        seed: u64::from(seed),
        final_energy: f64::NAN,
        final_norm: theta0.norm(),
        evals_total: 0,
        status: RunStatus::Failed,
        delta_e: f64::NAN,
        trajectory_ref: None,
        hamiltonian_hash: target.hash.clone(),
    };
    match result {
        Ok((a, b)) => {
            record.status = RunStatus::from_stages(&a, &b);
            record.evals_total = a.evals_used + b.evals_used;
            if record.status != RunStatus::Failed {
                // Stage B starts at Stage A's best, so its best is never worse
                let best = if b.trajectory.is_empty() { &a } else { &b };
                let (energy, theta) = (best.best_value, &best.best_theta);
                record.final_energy = energy;
                record.final_norm = crate::ansatz::norm_sqr(theta).sqrt();
                record.delta_e = energy - target.ground_energy;
            }
            RunOutcome { record, theta0, stages: Some((a, b)) }
        }
        Err(_) => RunOutcome { record, theta0, stages: None },
    }
}

/// Per-iteration trace of both stages.
pub fn trajectory_csv(a: &StageResult, b: &StageResult) -> String {
    let mut out = String::from("stage,iteration,energy,objective,norm,lambda\n");
    for (stage, r) in [("a", a), ("b", b)] {
        for (i, p) in r.trajectory.iter().enumerate() {
            out.push_str(&format!(
                "{stage},{i},{},{},{},{}\n",
                g17(p.energy),
                g17(p.objective),
                g17(p.norm),
                g17(p.lambda)
            ));
        }
    }
    out
}

fn trajectory_name(lambda_index: usize, seed: u64) -> PathBuf {
    Path::new(TRAJECTORY_DIR).join(format!("l{lambda_index:02}_s{seed:05}.csv"))
}

/// One λ finished all of its seeds.
#[derive(Clone, Copy, Debug)]
pub struct Progress {
    pub lambda0: f64,
    pub completed_lambdas: usize,
    pub total_lambdas: usize,
}

#[derive(Default)]
pub struct SweepOptions<'a> {
    /// Continue into an existing store instead of refusing it.
    pub resume: bool,
    pub progress: Option<&'a (dyn Fn(Progress) + Sync)>,
}

/// Executes every `(λ, seed)` run not already in `out_dir/runs.csv` and
/// returns the complete, canonically ordered record set.
pub fn run_sweep(cfg: &SweepConfig, out_dir: &Path, opts: &SweepOptions<'_>) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let target = Target::resolve(&cfg.hamiltonian, &GroundEnergyCache::on_disk(out_dir.join("cache")))?;
    let meta = SweepMeta {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        hamiltonian_hash: target.hash.clone(),
        ground_energy: target.ground_energy,
        n_qubits: target.hamiltonian.n_qubits(),
        param_count: cfg.ansatz.param_count(),
    };

    let runs_path = out_dir.join(RUNS_FILE);
    let meta_path = out_dir.join(META_FILE);
    let existing = if runs_path.exists() {
        if !opts.resume {
            return Err(Error::Store {
                path: runs_path,
                message: "store already exists; resume to continue it".into(),
            });
        }
        if meta_path.exists() {
            let old = SweepMeta::read(&meta_path)?;
            if old.config.identity() != cfg.identity() || old.hamiltonian_hash != meta.hamiltonian_hash {
                return Err(Error::Store {
                    path: meta_path,
                    message: "existing store was produced by a different configuration".into(),
                });
            }
        }
        recover_store(&runs_path, &target.hash)?
    } else {
        fs::write(&runs_path, format!("{RUNS_HEADER}\n")).map_err(|e| Error::io(&runs_path, e))?;
        Vec::new()
    };
    let meta_json = serde_json::to_string_pretty(&meta).expect("meta serializes");
    fs::write(&meta_path, meta_json + "\n").map_err(|e| Error::io(&meta_path, e))?;

    let lambda_index = |l: f64| cfg.lambda_grid.iter().position(|g| *g == l);
    let mut done = HashSet::new();
    for r in &existing {
        let Some(li) = lambda_index(r.lambda0).filter(|_| r.seed < u64::from(cfg.n_seeds)) else {
            return Err(Error::Store {
                path: runs_path,
                message: format!("record (lambda0={}, seed={}) is not part of this sweep", r.lambda0, r.seed),
            });
        };
        if !done.insert((li, r.seed)) {
            return Err(Error::Store {
                path: runs_path,
                message: format!("duplicate record (lambda0={}, seed={})", r.lambda0, r.seed),
            });
        }
    }

    let tasks: Vec<(usize, u32)> = (0..cfg.lambda_grid.len())
        .flat_map(|li| (0..cfg.n_seeds).map(move |s| (li, s)))
        .filter(|(li, s)| !done.contains(&(*li, u64::from(*s))))
        .collect();
    if tasks.iter().any(|(_, s)| *s < cfg.trajectory_seeds) {
        let dir = out_dir.join(TRAJECTORY_DIR);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }

    let remaining: Vec<AtomicUsize> = (0..cfg.lambda_grid.len())
        .map(|li| AtomicUsize::new(tasks.iter().filter(|(l, _)| *l == li).count()))
        .collect();
    let completed_lambdas = AtomicUsize::new(remaining.iter().filter(|r| r.load(Ordering::Relaxed) == 0).count());
    let sink = Mutex::new(OpenOptions::new().append(true).open(&runs_path).map_err(|e| Error::io(&runs_path, e))?);

    let execute = |&(li, seed): &(usize, u32)| -> Result<()> {
        let outcome = run_single(cfg, &target, li, seed);
        if seed < cfg.trajectory_seeds {
            if let Some((a, b)) = &outcome.stages {
                let path = out_dir.join(trajectory_name(li, u64::from(seed)));
                fs::write(&path, trajectory_csv(a, b)).map_err(|e| Error::io(&path, e))?;
            }
        }
        {
            let mut file = sink.lock().expect("store lock");
            writeln!(file, "{}", outcome.record.to_csv_row()).map_err(|e| Error::io(&runs_path, e))?;
            file.flush().map_err(|e| Error::io(&runs_path, e))?;
        }
        if remaining[li].fetch_sub(1, Ordering::AcqRel) == 1 {
            let completed = completed_lambdas.fetch_add(1, Ordering::AcqRel) + 1;
            if let Some(cb) = opts.progress {
                cb(Progress {
                    lambda0: cfg.lambda_grid[li],
                    completed_lambdas: completed,
                    total_lambdas: cfg.lambda_grid.len(),
                });
            }
        }
        Ok(())
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| tasks.par_iter().try_for_each(execute))?;
    drop(sink);

    let mut records = load_runs(&runs_path)?;
    if records.len() != cfg.run_count() {
        return Err(Error::Store {
            path: runs_path,
            message: format!("expected {} records, found {}", cfg.run_count(), records.len()),
        });
    }
    records.sort_by_key(|r| (lambda_index(r.lambda0), r.seed));
    write_store(&runs_path, &records)?;
    for r in &mut records {
        let li = lambda_index(r.lambda0).expect("validated above");
        let rel = trajectory_name(li, r.seed);
        if out_dir.join(&rel).exists() {
            r.trajectory_ref = Some(rel);
        }
    }
    Ok(records)
}

/// Drops an unterminated trailing line left by an interrupted append and
/// returns the intact records.
fn recover_store(path: &Path, hash: &str) -> Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if !text.is_empty() && !text.ends_with('\n') {
        let keep = text.rfind('\n').map_or(0, |i| i + 1);
        let file = OpenOptions::new().write(true).open(path).map_err(|e| Error::io(path, e))?;
        file.set_len(keep as u64).map_err(|e| Error::io(path, e))?;
        if keep == 0 {
            fs::write(path, format!("{RUNS_HEADER}\n")).map_err(|e| Error::io(path, e))?;
        }
    }
    parse_runs(path, &fs::read_to_string(path).map_err(|e| Error::io(path, e))?, hash)
}

fn write_store(path: &Path, records: &[RunRecord]) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(RUNS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    let mut f = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Reads a `runs.csv`, taking the Hamiltonian hash from the sibling
/// `sweep.meta.json` when one exists.
pub fn load_runs(path: &Path) -> Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let meta = path.parent().map(|d| d.join(META_FILE)).filter(|m| m.exists());
    let hash = match meta {
        Some(m) => SweepMeta::read(&m)?.hamiltonian_hash,
        None => String::new(),
    };
    parse_runs(path, &text, &hash)
}

fn parse_runs(path: &Path, text: &str, hash: &str) -> Result<Vec<RunRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == RUNS_HEADER => {}
        Some(_) => return Err(Error::Store { path: path.into(), message: "line 1: unexpected header".into() }),
        None => return Ok(Vec::new()),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            RunRecord::from_csv_row(l.trim_end(), hash)
                .map_err(|m| Error::Store { path: path.into(), message: format!("line {}: {m}", i + 1) })
        })
        .collect()
}
