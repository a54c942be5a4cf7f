use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A set, point or window lies outside the domain it is evaluated on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input: invalid parameters, non-nested chains, non-partitions.
    #[error("usage error: {0}")]
    Usage(String),

    /// An iterative routine ran out of budget before meeting its tolerance.
    #[error(
        "convergence failure: {message} (best estimate {estimate:e}, error estimate {error:e})"
    )]
    Convergence {
        message: String,
        estimate: f64,
        error: f64,
    },

    /// A capacity specification or function expression failed to parse.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(position: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: msg.into(),
        }
    }

    /// True for failures caused by numerical budgets rather than bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
