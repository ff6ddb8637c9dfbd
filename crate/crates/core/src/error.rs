use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("inconsistent fingerprint: vertex {vertex} is not in X_{step} during replay")]
    InconsistentFingerprint { step: usize, vertex: usize },

    #[error("stability violation: container of size {container_size} is neither small nor close to any member (best residual {best_residual} at index {best_index})")]
    StabilityViolation {
        container_size: usize,
        best_index: usize,
        best_residual: usize,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
