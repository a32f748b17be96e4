use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("symbol is not finite at frequency {xi}")]
    SingularSymbol { xi: f64 },

    #[error("run aborted at t = {last_valid_time}: {guard}")]
    BlowUp { last_valid_time: f64, guard: String },

    #[error("fit rejected: {0}")]
    FitRejected(String),

    #[error("outside contraction regime: iterate distance grew from {previous:e} to {current:e}")]
    NoContraction { previous: f64, current: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
