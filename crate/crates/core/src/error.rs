use thiserror::Error;

use crate::geometry::Degeneracy;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(Degeneracy),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("insufficient input: need at least {needed} points, got {got}")]
    InsufficientInput { needed: usize, got: usize },

    #[error("gave up after {attempts} attempts: {reason}")]
    RetriesExhausted { attempts: usize, reason: String },

    #[error("projection repair failed: {0}")]
    ProjectionRepair(String),

    /// A result failed a check that the construction guarantees. Always a bug.
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InternalInvariantViolation(msg.into())
    }
}
