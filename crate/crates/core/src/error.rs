use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("formula is not closed: free variable {0}")]
    NotClosed(String),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("element ({0},{1}) is not in the permutation")]
    NotAnElement(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("infeasible layer: {0}")]
    LayerInfeasible(String),
    #[error("inconsistent fingerprint: {0}")]
    Inconsistent(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("time budget exceeded")]
    Timeout,
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
