//! Error types shared across the estimation library.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure classes, used by binaries to map errors onto process exit
/// codes without matching on every variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed input: bad dimensions, invalid operators, unparseable files.
    Input,
    /// A mathematical precondition does not hold for the requested operation
    /// (e.g. the record cannot determine a state).
    MathPrecondition,
    /// A posterior sampling run failed (annihilated prior, disagreeing
    /// chains).
    SamplerFailure,
}

/// Unified error type for the estimation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| entry {deviation:.3e} exceeds tolerance")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace {trace:.12e} is not 1 within tolerance")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state vector norm {norm:.12e} is not 1 within tolerance")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid POVM: {reason}")]
    InvalidPovm { reason: String },

    #[error("invalid measurement record: {reason}")]
    InvalidRecord { reason: String },

    #[error("measurement record is empty (no counted outcomes)")]
    EmptyRecord,

    #[error(
        "record does not determine the state: constraint rank {rank} < {needed} \
         (outcomes span too small an operator subspace)"
    )]
    Underdetermined { rank: usize, needed: usize },

    #[error("operation requires a single-POVM record, found {groups} outcome groups")]
    MultiGroupRecord { groups: usize },

    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },

    #[error("unsupported prior for this operation: {reason}")]
    UnsupportedPrior { reason: String },

    #[error("operation supports dimension {expected} only, found {found}")]
    UnsupportedDimension { expected: usize, found: usize },

    #[error("prior annihilated by the record: {reason}")]
    PriorAnnihilated { reason: String },

    #[error(
        "posterior chains disagree: max pairwise trace distance {statistic:.4} \
         exceeds {threshold} (experimental prior refuses to report)"
    )]
    ChainsDisagree { statistic: f64, threshold: f64 },

    #[error("schema error: {reason}")]
    Schema { reason: String },
}

impl Error {
    /// Classify this error for exit-code mapping.
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Underdetermined { .. } => ErrorCategory::MathPrecondition,
            Error::PriorAnnihilated { .. } | Error::ChainsDisagree { .. } => {
                ErrorCategory::SamplerFailure
            }
            _ => ErrorCategory::Input,
        }
    }
}
