use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unknown node `{name}`")]
    UnknownNode { line: usize, name: String },

    #[error("line {line}: node `{name}` is assigned more than once")]
    DuplicateAssignment { line: usize, name: String },

    #[error("no community assigned to: {}", .0.join(", "))]
    MissingNodes(Vec<String>),

    #[error("size mismatch: expected {expected} nodes, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("graph has no edges")]
    NoEdges,

    #[error("trace carries no ground-truth information")]
    MissingGroundTruth,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("community detection failed: {0}")]
    Detector(#[source] Box<dyn std::error::Error + Send + Sync>),
}

pub type Result<T> = std::result::Result<T, Error>;
