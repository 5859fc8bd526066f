//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    Validation(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node sets overlap on `{0}`")]
    OverlappingSets(String),

    #[error("expected a {expected} graph, got {found}")]
    ClassMismatch { expected: String, found: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not a path: {0}")]
    NotAPath(String),

    #[error("path has a non-definite-status interior node `{0}`")]
    NonDefiniteStatus(String),

    #[error("graph has {found} undirected edges, enumeration cap is {cap}")]
    EnumerationCap { cap: usize, found: usize },

    #[error("singular conditioning block: {0}")]
    Singular(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
