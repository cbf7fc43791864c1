//! Error type shared across the crate.

use thiserror::Error;

/// Errors surfaced by the solver's public operations.
///
/// Internal consistency failures (a divided difference that does not cancel,
/// an operator producing a non-symmetric expansion) are bugs, not inputs, and
/// panic instead.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an API contract (mismatched variable counts or tags,
    /// inhomogeneous input where a homogeneous one is required, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An input is outside the mathematical domain of the operation
    /// (partition parts exceeding the particle number, negative couplings, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value is unusable (too few quadrature nodes, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// A sample point violates the safety margins that keep finite
    /// differences away from the potential's singular surfaces.
    #[error("unsafe sample point: {0}")]
    UnsafePoint(String),

    /// A construction-time invariant failed to verify. This indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
