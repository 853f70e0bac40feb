//! Statevector VQE with a cosine-decayed L2² penalty on the parameters.
//!
//! Pauli-sum Hamiltonians are evaluated exactly under hardware-efficient
//! ansätze, optimized in two stages (regularized, then plain), swept over a
//! grid of penalty strengths and many seeds, and summarized as success rates
//! with Wilson intervals.

pub mod ansatz;
pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod harness;
pub mod num_fmt;
pub mod objective;
pub mod optimizers;
pub mod pauli;
pub mod statevector;
pub mod stats;

pub use ansatz::{AnsatzKind, AnsatzSpec, Entanglement, ParameterVector};
pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use harness::{run_sweep, InitDistribution, RunRecord, RunStatus, SweepConfig};
pub use objective::{GradientMethod, Objective, Schedule, ScheduleKind};
pub use optimizers::{OptimizerConfig, PipelineConfig, StageResult};
pub use pauli::{PauliString, RfimSpec, WeightedPauliSum};
pub use statevector::{exact_ground_energy, Gate, StateVector};
pub use stats::{summarize, threshold_grid, wilson_interval, SweepSummary};
