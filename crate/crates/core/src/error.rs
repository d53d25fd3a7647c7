use thiserror::Error;

use crate::specdsl::SyntaxError;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter is outside the range an operation accepts.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// An algebraic operation is undefined for its input (non-unit
    /// constant term, negative exponent, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The computation was declined because a mathematical precondition
    /// (such as the compactness criterion) does not hold.
    #[error("refused: {0}")]
    Refused(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
