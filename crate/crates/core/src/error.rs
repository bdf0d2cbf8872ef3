use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}:{line}: {message}", file.display())]
    Parse {
        file: PathBuf,
        line: u64,
        message: String,
    },

    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("self-loop on node {0:?}: a road segment must join two distinct intersections")]
    SelfLoop(String),

    #[error("edge references unknown node {0:?}")]
    UnknownNode(String),

    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),

    #[error("graph has no edges")]
    EmptyEdgeSet,

    #[error("graph statistics need at least two nodes")]
    TooFewNodes,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("support pair ({from}, {to}) has no finite transport cost")]
    Unreachable { from: usize, to: usize },

    #[error("edge ({u}, {v}): neighborhoods are not mutually reachable")]
    UnreachableEdge { u: String, v: String },

    #[error("({u}, {v}) is not an edge of the graph")]
    NotAnEdge { u: String, v: String },

    #[error("score table does not cover the graph's edge set")]
    ScoreTableMismatch,

    #[error("strategy {strategy} {problem}")]
    Schedule {
        strategy: &'static str,
        problem: &'static str,
    },

    #[error("invalid sample points: {0}")]
    InvalidSamples(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("score table is empty")]
    EmptyScores,

    #[error("{0} scores have zero variance")]
    ZeroVariance(&'static str),

    #[error("nodes without coordinates: {}", .0.join(", "))]
    MissingCoordinates(Vec<String>),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
