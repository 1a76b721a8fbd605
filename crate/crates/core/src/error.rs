use thiserror::Error;

/// Errors raised by the graph, feature, kernel and learning routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("derived q2 = {q2} is not a probability (n = {n}, p1 = {p1}, p2 = {p2})")]
    InvalidQ2 { n: usize, p1: f64, p2: f64, q2: f64 },

    #[error("planted partition needs an even node count, got {0}")]
    OddNodeCount(usize),

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("shortest-path count overflowed 64 bits between nodes {source_node} and {target}")]
    PathCountOverflow { source_node: usize, target: usize },

    #[error("cannot normalize an all-zero feature vector")]
    ZeroVector,

    #[error("binning mismatch: width {left} vs width {right}")]
    BinningMismatch { left: u64, right: u64 },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("malformed edge list at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
