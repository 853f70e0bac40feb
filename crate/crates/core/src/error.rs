use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitMismatch { expected: usize, found: usize },

    #[error("invalid pauli label {0:?}")]
    InvalidLabel(String),

    #[error("non-finite coefficient {0}")]
    NonFiniteCoefficient(f64),

    #[error("invalid RFIM spec: {0}")]
    InvalidRfim(String),

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("controlled gate with control == target == {0}")]
    ControlIsTarget(usize),

    #[error("expectation has imaginary part {0:e}; operator is not Hermitian")]
    NonHermitian(f64),

    #[error("{n_qubits} qubits exceeds the limit of {limit} for {what}")]
    TooManyQubits { n_qubits: usize, limit: usize, what: &'static str },

    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("parameter vector has length {found}, ansatz expects {expected}")]
    ParameterLength { expected: usize, found: usize },

    #[error("non-finite parameter at index {0}")]
    NonFiniteParameter(usize),

    #[error("invalid schedule time {0}")]
    InvalidTime(i64),

    #[error("non-finite objective value or gradient")]
    NonFinite,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("inconsistent records: hamiltonian hashes {0} and {1} differ")]
    MixedHamiltonians(String, String),

    #[error("no records")]
    NoRecords,

    #[error("success rate is zero at every lambda; window undefined")]
    ZeroSuccess,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Store { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
