use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("invalid support: {0}")]
    InvalidSupport(String),

    #[error("ill-conditioned support: smallest Gram eigenvalue {min_eig:e}")]
    IllConditioned { min_eig: f64 },

    #[error("solver diverged at iteration {iteration}: non-finite values")]
    Divergence { iteration: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable short code used in the CLI's `error,<code>,<message>` line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Resource(_) => "resource",
            Error::InvalidSupport(_) => "invalid_support",
            Error::IllConditioned { .. } => "ill_conditioned",
            Error::Divergence { .. } => "divergence",
            Error::Parse(_) => "parse",
            Error::Usage(_) => "usage",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::Dimension { expected, got })
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
