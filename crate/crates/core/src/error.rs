use thiserror::Error;

/// Errors raised by the numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid field value {value} at ({x}, {y})")]
    InvalidField { value: f64, x: f64, y: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    Accuracy { estimate: f64, error_bound: f64 },

    #[error("optimizer did not converge in {iterations} iterations (best objective {best})")]
    NotConverged { best: f64, iterations: usize },

    #[error("degenerate case: {0}")]
    Degenerate(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status for a run that stopped on this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Domain(_) | Error::InvalidField { .. } => 2,
            Error::Io(_) => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            Error::Io(e.to_string())
        } else {
            Error::Validation(e.to_string())
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
