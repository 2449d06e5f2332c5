//! Shared error type for all numerical operations.

/// Errors raised by evaluation, differentiation, integration, and the
/// contract checks around them.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A point fell outside a map's guarded domain or a manifold region,
    /// or an evaluation produced a non-finite value.
    #[error("domain violation: {0}")]
    Domain(String),

    /// An argument broke a structural precondition (dimension mismatch,
    /// base-point mismatch, invalid parameter).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An integration step left the guarded region.
    #[error("singularity at step {step} (t = {time}): {detail}")]
    Singularity {
        step: usize,
        time: f64,
        detail: String,
    },

    /// A fixed-point iteration failed to contract.
    #[error("no contraction after {iterations} iterations (last sup-norm change {last_change:e})")]
    NonContraction {
        iterations: usize,
        last_change: f64,
    },

    /// Textual input (expression notation) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
