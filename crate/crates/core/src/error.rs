use thiserror::Error;

/// Errors raised by constructors, runners and converters.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Iteration or integration left the finite range (or blew past the
    /// divergence guard) at step `k`.
    #[error("diverged at step {k}")]
    Diverged { k: usize },

    #[error("not representable: {0}")]
    NotRepresentable(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no feasible step size after {halvings} halvings (last s = {last_s:e})")]
    InfeasibleStep { halvings: usize, last_s: f64 },

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
