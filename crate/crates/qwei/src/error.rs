//! Error and diagnostic types shared across the crate.

use thiserror::Error;

/// Hard failures: a requested computation cannot proceed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no modes satisfy the cutoff (L={l}, m={m}, k_max={k_max})")]
    EmptyBasis { l: f64, m: f64, k_max: f64 },

    #[error("grid too coarse: {0}")]
    InvalidGrid(String),

    #[error("incompatible grids: {0}")]
    GridMismatch(String),

    #[error("constraint projection did not converge after {iterations} steps (residual {residual:.3e})")]
    ConstraintProjectionFailed { iterations: usize, residual: f64 },

    #[error("state and worldline configuration use different mode bases: {0}")]
    BasisMismatch(String),

    #[error("weight support [{f_lo}, {f_hi}] exits the w=1 interval [{i_lo}, {i_hi}]")]
    SupportViolation {
        f_lo: f64,
        f_hi: f64,
        i_lo: f64,
        i_hi: f64,
    },

    #[error("decay fit unavailable for tail certification: {0}")]
    TailEstimateFailed(String),

    #[error("bound parts computed with inconsistent inputs: {0}")]
    InconsistentParts(String),

    #[error("spectral grid range insufficient: {0}")]
    InsufficientRange(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("state specification invalid: {0}")]
    InvalidState(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Soft diagnostics that escalate to failures under `--strict`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Warning {
    /// Quadrature grid misses part of an integrand's mass.
    Truncation {
        context: String,
        /// Estimated mass outside the grid relative to the total.
        relative_tail: f64,
    },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::Truncation {
                context,
                relative_tail,
            } => write!(f, "truncation in {context}: relative tail {relative_tail:.3e}"),
        }
    }
}
