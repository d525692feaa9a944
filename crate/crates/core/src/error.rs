use thiserror::Error;

/// Errors raised by the numerical routines and the command-line surface.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Bad user input: unknown variable label, malformed config, bad flag.
    #[error("usage error: {0}")]
    Usage(String),

    /// A covariance was singular beyond the eigenvalue floor so that the
    /// requested mutual information is unbounded.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An evaluator was called outside the channel class it is defined for.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Degenerate(_) => 3,
            _ => 2,
        }
    }

    /// Wraps a degenerate-input error with the parameter vector that produced it.
    pub fn with_params(self, params: &[f64]) -> Self {
        match self {
            Error::Degenerate(msg) => Error::Degenerate(format!("{msg} (params {params:?})")),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
