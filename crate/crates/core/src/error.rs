use thiserror::Error;

/// Errors produced by the sampling-policy library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A tabulated CDF failed validation.
    #[error("invalid tabulated CDF: {0}")]
    InvalidTable(String),

    /// A series or quadrature did not converge within its budget.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// Inconsistent solver or search arguments.
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::InvalidTable(err.to_string())
    }
}
