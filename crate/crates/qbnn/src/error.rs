//! Crate-wide error type. Contract violations surface as typed errors,
//! never panics, so callers can distinguish bad input from bugs.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is not unitary (deviation {deviation:.3e} exceeds {tolerance:.0e})")]
    NonUnitary { deviation: f64, tolerance: f64 },

    #[error("amplitude vector has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("wire {wire} listed more than once")]
    DuplicateWire { wire: usize },

    #[error("gate wire list is empty")]
    EmptyWireList,

    #[error("qubit count mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("dense matrix extraction refused above {max} qubits (circuit has {got})")]
    MatrixTooLarge { got: usize, max: usize },

    #[error("exhaustive search refused above {max} weight slots (topology has {got})")]
    SearchTooLarge { got: usize, max: usize },

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("topology not supported by the circuit compiler: {0}")]
    UnsupportedTopology(String),

    #[error("expected {expected} input values, got {got}")]
    InputArityMismatch { expected: usize, got: usize },

    #[error("expected {expected} weight values, got {got}")]
    WeightArityMismatch { expected: usize, got: usize },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
