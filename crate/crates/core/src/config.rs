//! TOML experiment configuration.
//!
//! ```toml
//! gradient = "parameter_shift"
//!
//! [hamiltonian]
//! bundled = "h2"            # or: path = "h.psum", or a [hamiltonian.rfim] table
//!
//! [ansatz]
//! kind = "two_local"
//! reps = 4
//!
//! [reg]
//! lambda0 = 0.1
//!
//! [sweep]
//! lambda_grid = [0.0, 0.05, 0.1]
//! n_seeds = 200
//! ```
//!
//! Every omitted key takes its default; [`ExperimentConfig::resolved`] fills
//! them in explicitly and makes paths absolute.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ansatz::{AnsatzKind, AnsatzSpec, Entanglement};
use crate::error::{Error, Result};
use crate::harness::{HamiltonianSource, InitDistribution, SweepConfig};
use crate::objective::{GradientMethod, Schedule, ScheduleKind};
use crate::optimizers::{Method, OptimizerConfig, PipelineConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub gradient: GradientMethod,
    pub hamiltonian: HamiltonianSource,
    #[serde(default)]
    pub ansatz: AnsatzSection,
    #[serde(default)]
    pub reg: RegSection,
    #[serde(default)]
    pub fd: FdSection,
    #[serde(default)]
    pub opt: OptSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnsatzSection {
    pub kind: AnsatzKind,
    /// 4 for `two_local`, 0 for `ry_layer` when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    pub entanglement: Entanglement,
}

impl AnsatzSection {
    pub fn reps(&self) -> usize {
        self.reps.unwrap_or(match self.kind {
            AnsatzKind::TwoLocal => 4,
            AnsatzKind::RyLayer => 0,
        })
    }
}

impl Default for AnsatzSection {
    fn default() -> Self {
        Self { kind: AnsatzKind::TwoLocal, reps: None, entanglement: Entanglement::Linear }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegSection {
    pub lambda0: f64,
    pub schedule: ScheduleKind,
}

impl Default for RegSection {
    fn default() -> Self {
        Self { lambda0: 0.0, schedule: ScheduleKind::Cosine }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdSection {
    pub step: f64,
}

impl Default for FdSection {
    fn default() -> Self {
        Self { step: 1e-5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptSection {
    pub method: Method,
    pub max_iters_a: usize,
    pub max_iters_b: usize,
    pub gtol: f64,
    pub budget: u64,
    pub lbfgs_memory: usize,
}

impl Default for OptSection {
    fn default() -> Self {
        Self { method: Method::Cg, max_iters_a: 15, max_iters_b: 10, gtol: 1e-2, budget: 10_000, lbfgs_memory: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub lambda_grid: Vec<f64>,
    pub n_seeds: u32,
    pub seed_base: u64,
    pub init: InitDistribution,
    pub paired: bool,
    pub trajectory_seeds: u32,
    pub workers: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            lambda_grid: vec![0.0],
            n_seeds: 1,
            seed_base: 0,
            init: InitDistribution::UniformSymmetricPi,
            paired: true,
            trajectory_seeds: 10,
            workers: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1);
            match line {
                Some(line) => Error::Parse { line, message: e.message().to_string() },
                None => Error::Config(e.message().to_string()),
            }
        })
    }

    /// Reads and parses a config file; relative Hamiltonian paths are taken
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| match e {
            Error::Parse { line, message } => {
                Error::Config(format!("{}: line {line}: {message}", path.display()))
            }
            other => other,
        })?;
        if let HamiltonianSource::Path(p) = &mut cfg.hamiltonian {
            if p.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                *p = absolute(&base.join(&*p));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Copy with absolute paths; defaults are already explicit in the struct.
    pub fn resolved(&self) -> Self {
        let mut out = self.clone();
        out.ansatz.reps = Some(self.ansatz.reps());
        if let HamiltonianSource::Path(p) = &mut out.hamiltonian {
            *p = absolute(p);
        }
        out
    }

    /// Builds the sweep configuration; the register width comes from the
    /// Hamiltonian.
    pub fn sweep_config(&self, n_qubits: usize) -> Result<SweepConfig> {
        let ansatz = AnsatzSpec { kind: self.ansatz.kind, n_qubits, reps: self.ansatz.reps(), entanglement: self.ansatz.entanglement };
        let stage = |iters: usize| {
            let base = match self.opt.method {
                Method::Cg => OptimizerConfig::cg(iters, self.opt.gtol),
                Method::Lbfgs => OptimizerConfig::lbfgs(iters, self.opt.gtol),
            };
            OptimizerConfig { lbfgs_memory: self.opt.lbfgs_memory, ..base }
        };
        let pipeline = PipelineConfig {
            stage_a: stage(self.opt.max_iters_a),
            stage_b: stage(self.opt.max_iters_b),
            schedule: Schedule { kind: self.reg.schedule, lambda0: self.reg.lambda0, t_a: self.opt.max_iters_a },
            eval_budget: self.opt.budget,
        };
        let cfg = SweepConfig {
            hamiltonian: self.hamiltonian.clone(),
            ansatz,
            pipeline,
            gradient: self.gradient,
            fd_step: self.fd.step,
            lambda_grid: self.sweep.lambda_grid.clone(),
            n_seeds: self.sweep.n_seeds,
            seed_base: self.sweep.seed_base,
            init: self.sweep.init,
            paired: self.sweep.paired,
            trajectory_seeds: self.sweep.trajectory_seeds,
            workers: self.sweep.workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn absolute(p: &Path) -> PathBuf {
    std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf())
}
