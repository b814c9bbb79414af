//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the public API.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fell outside its documented domain.
    #[error("invalid parameter {name}: {message} (got {value})")]
    InvalidParameter {
        /// Name of the offending parameter.
        name: &'static str,
        /// Why the value was rejected.
        message: &'static str,
        /// The rejected value, rendered for diagnostics.
        value: f64,
    },

    /// A root bracket handed to the bisection solver does not straddle a
    /// sign change, so no root is guaranteed to exist inside it.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    RootBracket {
        /// Lower bracket end.
        lo: f64,
        /// Upper bracket end.
        hi: f64,
        /// Function value at the lower end.
        f_lo: f64,
        /// Function value at the upper end.
        f_hi: f64,
    },

    /// A lossless multi-pass strategy improves without bound as the pass
    /// count grows, so there is no finite optimum to report.
    #[error(
        "multi-pass precision is unbounded at unit transmission; \
         cap the pass count explicitly"
    )]
    UnboundedImprovement,

    /// The weight optimizer exhausted its iteration budget before reaching
    /// the requested projected-gradient tolerance. The best iterate found is
    /// carried along so callers can still inspect it.
    #[error(
        "weight optimization stopped after {iterations} iterations with \
         projected-gradient norm {grad_norm:.3e} (tolerance {tol:.3e})"
    )]
    NonConvergence {
        /// Iterations consumed across all starts.
        iterations: u64,
        /// Final projected-gradient norm of the best iterate.
        grad_norm: f64,
        /// The tolerance that was requested.
        tol: f64,
        /// Best iterate found, as optimized weights plus its uncertainty.
        best: Box<crate::quantum::QuantumOptimum>,
    },

    /// Two internal computation routes that must agree did not. This always
    /// indicates a bug, never bad user input.
    #[error("internal consistency check failed: {message} (discrepancy {discrepancy:.3e})")]
    Inconsistency {
        /// What disagreed.
        message: &'static str,
        /// Size of the disagreement.
        discrepancy: f64,
    },

    /// Reading or writing an output destination failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Serializing a report to JSON failed.
    #[error("json serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
