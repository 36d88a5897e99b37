use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: component {index} = {value} is outside the domain")]
    Domain {
        what: &'static str,
        index: usize,
        value: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// The Burg prox subproblem has no minimizer (`1/x + alpha*g <= 0`).
    #[error("unbounded prox subproblem at component {index} (denominator {denominator})")]
    UnboundedSubproblem { index: usize, denominator: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{operation} is not supported for the {family} family")]
    UnsupportedFamily {
        operation: &'static str,
        family: &'static str,
    },

    #[error("stale residual cache: max deviation {deviation:e}")]
    StaleCache { deviation: f64 },

    #[error("instance format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
