use thiserror::Error;

/// Errors raised by the workbench.
///
/// The variants follow the failure classes the operations distinguish:
/// malformed shapes, violated preconditions, size limits, broken structural
/// invariants, unparsable literals and internal inconsistencies.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("invariant error: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
