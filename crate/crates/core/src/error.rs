use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bad reduction: {0}")]
    BadReduction(String),
    #[error("no solution")]
    NoSolution,
    #[error("truncation underflow: {0}")]
    Truncation(String),
    #[error("form mismatch: {0}")]
    FormMismatch(String),
    #[error("not in the image cone: {0}")]
    NotInCone(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog entry: {0}")]
    UnknownEntry(String),
}

impl Error {
    /// Parse failures are input errors; everything else is a mathematical precondition.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::UnknownEntry(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
