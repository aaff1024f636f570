use std::path::PathBuf;

/// Errors produced across graph ingestion, surfing, entropy evaluation and
/// minimization.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: f64 },

    #[error("unknown header column `{column}`")]
    UnknownHeader { column: String },

    #[error("no arcs")]
    NoArcs,

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("graph has zero volume")]
    ZeroVolume,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid tree operation: {0}")]
    InvalidTree(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
