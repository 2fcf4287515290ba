use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: self-loop on node '{label}'")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: expected 2 node labels, found {found}")]
    MalformedLine { line: usize, found: usize },

    #[error("{}: {err}", path.display())]
    Io { path: PathBuf, err: std::io::Error },

    #[error("{}: {err}", path.display())]
    Parse { path: PathBuf, err: Box<Error> },

    #[error("node sets overlap at node {0}")]
    OverlappingBlocks(usize),

    #[error("node set is empty")]
    EmptyNodeSet,

    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),

    #[error("density threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),

    #[error("subgraph has no edges")]
    Edgeless,

    #[error("block statistics corrupt: {edges} edges over {pairs} pairs")]
    CorruptBlock { pairs: u64, edges: u64 },

    #[error("cross-block pair count must be positive")]
    EmptyCross,

    #[error("partition does not cover node {0}")]
    Uncovered(usize),

    #[error("accumulator holds no samples")]
    NoSamples,

    #[error("sample count must be at least 1")]
    ZeroSamples,

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("fraction must lie in (0, 1), got {0}")]
    InvalidFraction(f64),

    #[error("need at least 2 edges to split, graph has {0}")]
    TooFewEdges(usize),

    #[error("fraction {fraction} of {edges} edges leaves an empty probe set")]
    EmptyProbe { fraction: f64, edges: usize },

    #[error("partition produced no intra-community edges")]
    NoIntraEdges,

    #[error("pair ({0}, {1}) has no score")]
    MissingScore(usize, usize),

    #[error("AUC needs at least one probe edge and one non-edge")]
    EmptyComparison,

    #[error("probe edge ({0}, {1}) leaked into the training graph")]
    Leak(usize, usize),

    #[error("repeat count must be at least 1")]
    ZeroRepeats,

    #[error("unknown method '{0}'")]
    UnknownMethod(String),
}
