//! Centralized numerical tolerances.
//!
//! Every comparison against an "exact" mathematical property routes through
//! one of these constants so the whole workspace agrees on what counts as
//! zero.

/// Max allowed entrywise deviation |M - M^dagger| for a Hermitian matrix.
pub const HERMITICITY: f64 = 1e-12;

/// Max allowed |Tr(rho) - 1| for a normalized state.
pub const UNIT_TRACE: f64 = 1e-10;

/// Eigenvalues above `-PSD_FLOOR` count as nonnegative (eigensolver noise
/// allowance for positive semidefiniteness checks).
pub const PSD_FLOOR: f64 = 1e-10;

/// Max allowed deviation of a pure-state vector norm from 1.
pub const STATE_NORM: f64 = 1e-12;

/// Relative threshold for numerical rank / null-space membership of
/// operators (eigenvalues below `RANK_RELATIVE * max|eigenvalue|` count as
/// zero).
pub const RANK_RELATIVE: f64 = 1e-10;

/// Relative singular-value cutoff when ranking the constraint matrix of a
/// least-squares state fit.
pub const QUORUM_RANK_RELATIVE: f64 = 1e-10;

/// Relative eigenvalue threshold below which a likelihood maximizer counts
/// as rank-deficient.
pub const MLE_RANK_RELATIVE: f64 = 1e-7;

/// Default eigenvalue clamp applied inside logarithms of relative-entropy
/// divergences, so rank-deficient estimates score a very large finite value
/// instead of infinity.
pub const LOG_FLOOR: f64 = 1e-12;

/// Outcome probabilities at or below this value count as exact zeros when
/// deciding whether a record annihilates a support state.
pub const ANNIHILATION_PROB: f64 = 1e-14;

/// Entrywise tolerance when scanning record entries for consecutive blocks
/// that sum to the identity (outcome-group inference).
pub const GROUP_IDENTITY: f64 = 1e-8;

/// A least-squares fit with residual below this is an exact fit.
pub const EXACT_FIT_RESIDUAL: f64 = 1e-10;
