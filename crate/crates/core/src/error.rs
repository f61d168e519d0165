//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by state construction, channels, and estimators.
///
/// Validation is strict: states that violate an invariant are rejected,
/// never silently repaired.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid party dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid party subset: {0}")]
    InvalidSubset(String),

    #[error("state norm is {norm}, expected 1 within {tol}")]
    NormViolation { norm: f64, tol: f64 },

    #[error("matrix is not Hermitian: max |M - M†| element is {deviation}")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1 within {tol}")]
    TraceViolation { trace: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("noise strength {epsilon} outside [{low}, {high}] (complete positivity bound {high})")]
    EpsilonOutOfRange { epsilon: f64, low: f64, high: f64 },

    #[error("grid point {index} (epsilon = {epsilon}) outside the open CP range (0, {bound})")]
    GridPointOutOfRange { index: usize, epsilon: f64, bound: f64 },

    #[error(
        "derivative has weight {weight} outside the state's support; \
         the pure-state limit diverges and must be regularized by the caller"
    )]
    DerivativeOutsideSupport { weight: f64 },

    #[error("probability model support violation: {0}")]
    SupportViolation(String),

    #[error("mixing matrix is not an isometry: max |M†M - 1| element is {deviation}")]
    NotIsometric { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigendecomposition failed to converge")]
    EigenFailed,
}

pub type Result<T> = std::result::Result<T, Error>;
