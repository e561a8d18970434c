use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse {literal:?} as a {backend} scalar")]
    Parse { literal: String, backend: &'static str },

    #[error("scalar backends do not match (exact vs float)")]
    BackendMismatch,

    #[error("unknown grid mapping {0:?}")]
    UnknownMapping(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
