//! Hypergraph snake graphs for graph LP algebras on trees.
//!
//! The crate models a tree with a maximal nested collection
//! ([`cluster::ClusterContext`]), builds the hypergraph snake graph of a
//! weakly rooted vertex set ([`snake`]), enumerates its admissible matchings
//! ([`matcher`]) and sums their weights into a Laurent expansion
//! ([`symbolic::RationalExpr`]). An independent closed-form oracle
//! ([`oracle`]), a determinant counter ([`counting`]), hyper T-paths
//! ([`tpath`]) and a classical polygon snake graph subsystem ([`typea`])
//! serve as cross-checks.

pub mod cluster;
pub mod counting;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod gen;
pub mod matcher;
pub mod oracle;
pub mod snake;
pub mod symbolic;
pub mod tpath;
pub mod typea;

pub use cluster::{
    validate_nested_collection, A1Rule, Branch, BranchData, Classification, ClusterContext,
    ContextOptions, ExtendedTree, NestedCollection, SetClass, Tree, ValidationReport, Vertex,
    VertexSet, Violation,
};
pub use error::{Error, Result};
pub use symbolic::{rf_equal, Exponents, Monomial, Poly, RationalExpr, SetVariable};
