//! Small named contexts used by tests, benchmarks and the command line.

use crate::cluster::{ClusterContext, NestedCollection, Tree, Vertex};
use crate::error::Result;
use crate::matcher::{Condition, ConditionMask};

/// Builds a context from an edge list and a family, with vertices taken from the edges.
pub fn context(edges: &[(Vertex, Vertex)], family: &[&[Vertex]]) -> Result<ClusterContext> {
    let mut vertices: Vec<Vertex> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    for s in family {
        vertices.extend_from_slice(s);
    }
    vertices.sort_unstable();
    vertices.dedup();
    let tree = Tree::new(vertices, edges.to_vec())?;
    ClusterContext::new(
        tree,
        NestedCollection::new(family.iter().map(|s| s.to_vec()).collect()),
    )
}

/// The ten-vertex running example: a tree on `0..=9` with its nested collection.
pub fn ctx0() -> ClusterContext {
    context(
        &[
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (3, 8),
            (4, 9),
            (5, 0),
        ],
        &[
            &[6],
            &[5, 6],
            &[5, 6, 0],
            &[5, 6, 7, 0],
            &[4, 5, 6, 7, 0],
            &[2],
            &[1, 2],
            &[8],
            &[1, 2, 3, 4, 5, 6, 7, 8, 0],
            &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
        ],
    )
    .expect("valid fixture")
}

/// The path `1–2–3` with the chain `{2} ⊂ {1,2} ⊂ {1,2,3}`.
pub fn path3() -> ClusterContext {
    context(&[(1, 2), (2, 3)], &[&[2], &[1, 2], &[1, 2, 3]]).expect("valid fixture")
}

/// A path `1–…–n` with the chain `{1} ⊂ {1,2} ⊂ … ⊂ [n]`.
pub fn path_chain(n: Vertex) -> ClusterContext {
    let edges: Vec<(Vertex, Vertex)> = (1..n).map(|k| (k, k + 1)).collect();
    let family: Vec<Vec<Vertex>> = (1..=n).map(|k| (1..=k).collect()).collect();
    let refs: Vec<&[Vertex]> = family.iter().map(Vec::as_slice).collect();
    context(&edges, &refs).expect("valid fixture")
}

/// A context whose graph for `{2,5}` has a matching violating only the first condition.
pub fn condition1_context() -> ClusterContext {
    context(
        &[(1, 2), (2, 3), (2, 5), (5, 4), (5, 6)],
        &[&[1], &[3], &[4], &[6], &[1, 2, 3], &[1, 2, 3, 4, 5, 6]],
    )
    .expect("valid fixture")
}

/// A context whose graph for `{2,5}` exercises the second condition.
pub fn condition2_context() -> ClusterContext {
    context(
        &[(1, 2), (2, 3), (2, 5), (5, 4), (5, 6)],
        &[&[1], &[4], &[6], &[1, 2], &[1, 2, 3], &[1, 2, 3, 4, 5, 6]],
    )
    .expect("valid fixture")
}

/// A context whose graph for `{0}` carries two internal edges sharing a node.
pub fn condition4_context() -> ClusterContext {
    context(
        &[(0, 1), (1, 2), (3, 2), (2, 4), (4, 5), (6, 4)],
        &[
            &[1],
            &[3],
            &[5],
            &[6],
            &[1, 2, 3],
            &[1, 2, 3, 4, 5, 6],
            &[0, 1, 2, 3, 4, 5, 6],
        ],
    )
    .expect("valid fixture")
}

/// A seven-vertex context on which dropping condition 1, 3 or 4 from the literal
/// checker changes some matching count (`{2,4}`: 9 vs 11 and 12; `{6}`: 3 vs 4).
pub fn literal_counterexample_context() -> ClusterContext {
    context(
        &[(1, 2), (1, 3), (2, 4), (2, 5), (4, 6), (4, 7)],
        &[
            &[1],
            &[5],
            &[7],
            &[1, 3],
            &[4, 7],
            &[1, 2, 3, 4, 5, 7],
            &[1, 2, 3, 4, 5, 6, 7],
        ],
    )
    .expect("valid fixture")
}

/// An eight-vertex context on which dropping condition 2 from the literal checker
/// changes the count for `{1,8}` from 11 to 12.
pub fn condition2_counterexample_context() -> ClusterContext {
    context(
        &[(1, 2), (1, 3), (1, 8), (2, 6), (4, 7), (4, 8), (5, 8)],
        &[
            &[3],
            &[4],
            &[5],
            &[6],
            &[4, 5, 8],
            &[4, 5, 7, 8],
            &[1, 3, 4, 5, 7, 8],
            &[1, 2, 3, 4, 5, 6, 7, 8],
        ],
    )
    .expect("valid fixture")
}

/// Stored graphs on which each check is load-bearing: the condition, the context,
/// the set, the mask the comparison starts from, and the counts with and without it.
pub fn load_bearing_cases() -> Vec<(
    Condition,
    ClusterContext,
    Vec<Vertex>,
    ConditionMask,
    usize,
    usize,
)> {
    let lit = ConditionMask::LITERAL;
    vec![
        (
            Condition::One,
            literal_counterexample_context(),
            vec![2, 4],
            lit,
            9,
            11,
        ),
        (
            Condition::Two,
            condition2_counterexample_context(),
            vec![1, 8],
            lit,
            11,
            12,
        ),
        (
            Condition::Three,
            literal_counterexample_context(),
            vec![2, 4],
            lit,
            9,
            12,
        ),
        (
            Condition::Four,
            literal_counterexample_context(),
            vec![6],
            lit,
            3,
            4,
        ),
        (
            Condition::Four,
            condition4_context(),
            vec![0],
            ConditionMask::ALL,
            4,
            5,
        ),
        (
            Condition::Seam,
            condition1_context(),
            vec![2, 5],
            ConditionMask::ALL,
            11,
            13,
        ),
    ]
}
