use thiserror::Error;

/// Errors raised by currentlab operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A distance matrix failed validation.
    #[error("invalid metric: {0}")]
    Metric(String),

    /// A complex could not be built from the given data.
    #[error("construction error: {0}")]
    Construction(String),

    /// A chain was expected to be a cycle but has nonzero boundary.
    #[error("not a cycle: boundary mass {residual}")]
    NotACycle {
        /// Mass of the offending boundary.
        residual: f64,
    },

    /// An optimization problem has no feasible point.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The solver gave up before reaching optimality.
    #[error("solver failure: {0}")]
    Solver(String),

    /// Malformed input text.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
