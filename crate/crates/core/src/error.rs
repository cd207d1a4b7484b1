//! Error type shared by every module of the engine.

use crate::cluster::{Vertex, VertexSet};
use thiserror::Error;

/// Failures raised by the engine's operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input graph is not a tree (disconnected, cyclic, loops, duplicate edges).
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    /// A vertex label was referenced that the tree does not contain.
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    /// The family handed to `build_context` is not a maximal nested collection.
    #[error("not a maximal nested collection: {0}")]
    NotMaximalNested(String),
    /// A vertex subset that must be connected is not.
    #[error("vertex set {0:?} is not connected")]
    NotConnected(VertexSet),
    /// An operation required a nonempty vertex subset.
    #[error("empty vertex set")]
    EmptySet,
    /// An operation required a weakly rooted set.
    #[error("vertex set {0:?} is not weakly rooted")]
    NotWeaklyRooted(VertexSet),
    /// A vertex was expected in the rooted portion of a set.
    #[error("vertex {vertex} is not in the rooted portion of {set:?}")]
    VertexNotInRootedPortion {
        /// Offending vertex.
        vertex: Vertex,
        /// The weakly rooted set.
        set: VertexSet,
    },
    /// A component snake graph was requested for a vertex whose singleton is a cluster set.
    #[error("{{{0}}} is a member of the nested collection")]
    SetInCollection(Vertex),
    /// The leaf companions given to `build_component` are not a valid (A, B) pair.
    #[error("invalid component leaves ({0}, {1})")]
    InvalidComponentLeaves(Vertex, Vertex),
    /// The requested glue edge is missing from one of the graphs.
    #[error("glue edge ({0}, {1}) missing")]
    MissingGlueEdge(Vertex, Vertex),
    /// Branch or chain index out of range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    /// Division by the zero rational function.
    #[error("division by zero")]
    DivisionByZero,
    /// An edge id does not belong to the graph.
    #[error("unknown edge id {0}")]
    UnknownEdgeId(usize),
    /// The edge set is not an admissible matching.
    #[error("edge set is not an admissible matching: {0}")]
    NotAdmissible(String),
    /// A polygon arc is already in the triangulation.
    #[error("arc ({0}, {1}) is in the triangulation")]
    ArcInTriangulation(usize, usize),
    /// A polygon arc joins adjacent vertices.
    #[error("arc ({0}, {1}) joins adjacent polygon vertices")]
    AdjacentEndpoints(usize, usize),
    /// The triangulation is not a maximal non-crossing arc set.
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    /// The tree of the context is not a path.
    #[error("tree is not a path")]
    NotAPath,
    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
