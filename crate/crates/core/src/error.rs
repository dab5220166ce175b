use crate::graph::NodeId;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: rating {rating} outside [-10, 10]")]
    RatingRange { line: u64, rating: i64 },

    #[error("line {line}: rating 0 is not a valid trust rating")]
    ZeroRating { line: u64 },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: u64, node: NodeId },

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("invalid weight divisor {0}")]
    InvalidDivisor(f64),

    #[error("node {0} not in graph")]
    UnknownNode(NodeId),

    #[error("graph is empty")]
    EmptyGraph,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("densification of {nodes} nodes needs {pairs} pairs, over the budget of {budget}; use missing_only mode")]
    DensifyBudget { nodes: usize, pairs: u128, budget: u64 },

    #[error("partition does not cover graph: {0}")]
    PartitionCoverage(String),

    #[error("unknown cluster index {0}")]
    UnknownCluster(usize),

    #[error("need at least {need} nodes, graph has {have}")]
    TooFewNodes { need: usize, have: usize },

    #[error("embedding dimension {dim} exceeds node count {nodes}")]
    EmbeddingDimension { dim: usize, nodes: usize },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("trust report has no clusters")]
    EmptyReport,

    #[error("disruption removed entire network")]
    DisruptionEmptiedNetwork,

    #[error("no surviving edges to compare")]
    NoSurvivingEdges,

    #[error("empty split: {0}")]
    EmptySplit(String),

    #[error("invalid sample spec {0:?}")]
    InvalidSample(String),
}
