use thiserror::Error;

/// Errors raised by the library. All of them describe bad inputs or
/// non-convergent numerics; none indicate internal corruption.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis mismatch: cannot combine {left:?} with {right:?}")]
    BasisMismatch {
        left: crate::arith::Basis,
        right: crate::arith::Basis,
    },

    #[error("recurrence of order {order} is not supported here (two-term recurrences only)")]
    UnsupportedRecurrence { order: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge after {terms} terms (last term magnitude {last_term:e})")]
    NoConvergence { terms: usize, last_term: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
