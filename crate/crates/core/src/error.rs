use thiserror::Error;

/// Errors surfaced by the library and mapped onto CLI exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    /// A block-structure guarantee did not hold. Only possible for graphs that
    /// are not intersection graphs of (3,3)-hypergraphs.
    #[error("structural assumption failed: {0}")]
    Structural(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown instance '{0}'")]
    UnknownInstance(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
