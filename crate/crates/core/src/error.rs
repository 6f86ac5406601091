use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The CLI maps these onto exit codes: `Parse` is exit 2, `Capability`
/// is exit 3, everything else is a domain failure (exit 1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("not a polytope: {0}")]
    NotAPolytope(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inconsistent data: {0}")]
    Inconsistency(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("not supported: {0}")]
    Capability(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
