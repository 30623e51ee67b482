use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("coordinate {coordinate} lies outside the domain ({lo}, {hi})")]
    OutOfDomain { coordinate: f64, lo: f64, hi: f64 },

    #[error("derivative order {0} is not supported (expected 1 or 2)")]
    UnsupportedOrder(u32),

    #[error("no bound states: {0}")]
    NoBoundStates(String),

    #[error("state is not normalizable: {0}")]
    NonNormalizable(String),

    #[error("search box too small: {0}")]
    SearchBoxTooSmall(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integral does not converge: {0}")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(what))
    }
}
