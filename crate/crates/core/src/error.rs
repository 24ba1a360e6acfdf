//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by basis arithmetic, special-function evaluation,
/// operator construction, and solvers.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("beta mismatch: {0} vs {1}")]
    BetaMismatch(f64, f64),
    #[error("matrix dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sampled function does not vanish at infinity (|f(inf)| = {0:.3e})")]
    NonDecaying(f64),
    #[error("evaluation at a pole of the basis")]
    PoleEvaluation,
    #[error("off-axis Cauchy evaluation requires Im z != 0; use the boundary projections on the axis")]
    OffAxisRequired,
    #[error("residue coefficients requested outside the decaying regime (j = {j}, alpha = {alpha}): sign(j) * alpha must be negative")]
    NonDecayingRegime { j: i64, alpha: f64 },
    #[error("extended-precision evaluation failed to stabilize below the {cap}-bit precision cap")]
    PrecisionExhausted { cap: usize },
    #[error("reflection coefficient reaches modulus {max_abs} >= 1 on the test grid")]
    ReflectionBound { max_abs: f64 },
    #[error("jump matrix is singular on the evaluation grid")]
    SingularJump,
    #[error("GMRES stalled at residual {residual:.3e} after {iterations} iterations (tolerance {tol:.3e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid coefficient file: {0}")]
    CoefficientFile(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
