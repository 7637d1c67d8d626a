use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimensions m={m}, n={n}: {reason}")]
    UnsupportedDims { m: usize, n: usize, reason: String },

    #[error("dimension limit exceeded: {what} needs {needed}, limit is {limit}")]
    DimensionLimit {
        what: &'static str,
        needed: usize,
        limit: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// A density-matrix or state-vector invariant failed. `invariant` is one of
    /// "hermitian", "unit trace", "positive semidefinite", "unit norm".
    #[error("invariant violated: {invariant} (deviation {deviation:.3e})")]
    Invariant {
        invariant: &'static str,
        deviation: f64,
    },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("no tangent point in (0, {anchor_x})")]
    NoTangent { anchor_x: f64 },

    #[error("hull samples must be strictly increasing in x (index {index})")]
    UnsortedSamples { index: usize },

    #[error("ensemble size {ensemble} is smaller than the state rank {rank}")]
    EnsembleTooSmall { ensemble: usize, rank: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
