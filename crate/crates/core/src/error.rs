use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),

    #[error("{vertex} is not a vertex of {family}")]
    InvalidVertex { family: String, vertex: VertexId },

    #[error("walk is not a valid self-avoiding walk on {family}: {reason}")]
    InvalidWalk { family: String, reason: String },

    #[error("count overflow at length {n}")]
    Overflow { n: usize },

    #[error("{family} does not support {what}")]
    Unsupported { family: String, what: String },

    #[error("tree would exceed the node budget of {budget} nodes")]
    Budget { budget: usize },

    #[error("{family} is not unimodular: {reason}")]
    NotUnimodular { family: String, reason: String },

    #[error("quasi-geodesic verification failed at (i, j) = ({i}, {j})")]
    Verification { i: i64, j: i64 },

    #[error("walk does not start at the base vertex of the geodesic")]
    NotRooted,

    #[error("{0}")]
    Parse(String),

    #[error("visitor aborted enumeration")]
    Aborted,
}
