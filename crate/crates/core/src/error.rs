use thiserror::Error;

/// Errors raised by the numeric routines.
///
/// Each variant corresponds to one class of failure the command line maps
/// onto a distinct exit status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A strict inequality could not be decided at working precision.
    #[error("precision error: {0}")]
    Precision(String),
    /// A configured size cap was exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// The slope of an approximant was requested at one of its breakpoints.
    #[error("grid point: {0}")]
    GridPoint(String),
    /// A bracketing root search was handed an invalid bracket.
    #[error("convergence error: {0}")]
    Convergence(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
