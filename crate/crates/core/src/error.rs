//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or analysing a state.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid subsystem dimension {0}; every subsystem needs dimension >= 2")]
    InvalidDimension(usize),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("duplicate index {0} in selection")]
    DuplicateIndex(usize),

    #[error("empty selection where at least one element is required")]
    EmptySelection,

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace must be 1, found {trace:.12}")]
    InvalidTrace { trace: f64 },

    #[error("state vector is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("operation requires an all-qubit system")]
    NotQubits,

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("graph kinds differ; real and complex graphs cannot be combined")]
    GraphKindMismatch,

    #[error("operation not supported for this graph kind: {0}")]
    UnsupportedGraphKind(String),

    #[error("edge {{{u}, {v}}} does not exist")]
    MissingEdge { u: usize, v: usize },

    #[error("degree sum is zero; the graph has no density matrix")]
    ZeroDegreeSum,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
