//! Crate-wide error type.

use crate::ar::ArModel;

/// Errors produced by the estimation, solver, and simulation routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum FdcvError {
    #[error("series too short: n = {n}, need at least {min}")]
    SeriesTooShort { n: usize, min: usize },

    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },

    #[error("lag {lag} out of range for series of length {n}")]
    LagOutOfRange { lag: usize, n: usize },

    #[error("Fourier index {j} outside 1..={max}")]
    FrequencyIndexOutOfRange { j: usize, max: usize },

    #[error("partial correlation {value} at level {level} outside (-1, 1)")]
    NonStationary { level: usize, value: f64 },

    #[error("degenerate series: {reason}")]
    DegenerateSeries { reason: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("circulant preconditioner has non-positive eigenvalue {value}")]
    IndefinitePreconditioner { value: f64 },

    #[error("Toeplitz system numerically singular at leading minor {minor}")]
    SingularMinor { minor: usize },

    #[error(
        "conjugate gradient stalled: residual {residual:.3e} > tol {tol:.3e} \
         after {iterations} iterations"
    )]
    PcgStalled {
        tol: f64,
        iterations: usize,
        residual: f64,
        /// Best iterate found before giving up; callers may fall back to a
        /// direct solve.
        best: Vec<f64>,
    },

    #[error("likelihood optimizer failed: {reason}")]
    OptimizerFailed {
        reason: &'static str,
        /// Starting-value fit, usable as a fallback candidate.
        fallback: Box<ArModel>,
    },

    #[error("all candidates disqualified")]
    AllCandidatesDisqualified,

    #[error("spectral estimate at zero frequency is not positive: {value}")]
    NonPositiveDensity { value: f64 },

    #[error("long-run variance is zero for this process")]
    ZeroLongRunVariance,
}

pub type Result<T> = std::result::Result<T, FdcvError>;
