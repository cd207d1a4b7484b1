//! Deterministic generators of trees, nested collections and vertex subsets.
//!
//! Random maximal nested collections are drawn by recursively choosing a
//! uniformly random vertex of a component as that component's peak and
//! recursing on the components left after removing it; every maximal nested
//! collection arises this way.

use crate::cluster::{vset, ClusterContext, NestedCollection, Tree, Vertex, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeSet;

/// Seed used by the test generators unless another is supplied.
pub const DEFAULT_SEED: u64 = 20_240_611;

/// Decodes a Prüfer sequence over labels `1..=n` (with `n = code.len() + 2`).
pub fn tree_from_prufer(code: &[Vertex]) -> Tree {
    let n = code.len() + 2;
    let mut degree = vec![1usize; n + 1];
    for &c in code {
        degree[c as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: BTreeSet<Vertex> = (1..=n as Vertex)
        .filter(|&v| degree[v as usize] == 1)
        .collect();
    for &c in code {
        let leaf = *leaves.iter().next().expect("a leaf exists");
        leaves.remove(&leaf);
        edges.push((leaf, c));
        degree[c as usize] -= 1;
        if degree[c as usize] == 1 {
            leaves.insert(c);
        }
    }
    let rest: Vec<Vertex> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    Tree::new((1..=n as Vertex).collect(), edges).expect("Prüfer codes decode to trees")
}

/// A uniformly random labeled tree on `1..=n`.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Tree {
    match n {
        0 => panic!("trees need at least one vertex"),
        1 => Tree::new(vec![1], vec![]).expect("single vertex"),
        2 => Tree::new(vec![1, 2], vec![(1, 2)]).expect("single edge"),
        _ => {
            let code: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(1..=n as Vertex)).collect();
            tree_from_prufer(&code)
        }
    }
}

/// A random maximal nested collection.
pub fn random_maximal_nested<R: Rng>(tree: &Tree, rng: &mut R) -> NestedCollection {
    let mut out = Vec::new();
    let mut stack = vec![tree.vertices().to_vec()];
    while let Some(c) = stack.pop() {
        let peak = *c.choose(rng).expect("components are nonempty");
        let rest = vset::minus(&c, &[peak]);
        stack.extend(tree.components(&rest));
        out.push(c);
    }
    NestedCollection::new(out)
}

/// A random context on `n` vertices.
pub fn random_context<R: Rng>(n: usize, rng: &mut R) -> ClusterContext {
    let tree = random_tree(n, rng);
    let family = random_maximal_nested(&tree, rng);
    ClusterContext::new(tree, family).expect("the generator yields maximal collections")
}

/// Every maximal nested collection of a tree.
pub fn all_maximal_nested(tree: &Tree) -> Vec<NestedCollection> {
    fn expand(tree: &Tree, c: &[Vertex]) -> Vec<Vec<VertexSet>> {
        let mut out = Vec::new();
        for &peak in c {
            let rest = vset::minus(c, &[peak]);
            let mut partial: Vec<Vec<VertexSet>> = vec![vec![c.to_vec()]];
            for comp in tree.components(&rest) {
                let options = expand(tree, &comp);
                partial = partial
                    .iter()
                    .flat_map(|p| {
                        options.iter().map(move |o| {
                            let mut q = p.clone();
                            q.extend(o.iter().cloned());
                            q
                        })
                    })
                    .collect();
            }
            out.extend(partial);
        }
        out
    }
    expand(tree, tree.vertices())
        .into_iter()
        .map(NestedCollection::new)
        .collect()
}

/// Every nonempty connected vertex subset of a tree, in bitmask order.
pub fn connected_subsets(tree: &Tree) -> Vec<VertexSet> {
    let verts = tree.vertices();
    assert!(verts.len() < 24, "subset enumeration is exponential");
    (1u32..(1 << verts.len()))
        .map(|mask| {
            verts
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &v)| v)
                .collect::<VertexSet>()
        })
        .filter(|s| tree.is_connected(s))
        .collect()
}

fn rooted_code(tree: &Tree, v: Vertex, parent: Option<Vertex>) -> String {
    let mut kids: Vec<String> = tree
        .neighbors(v)
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_code(tree, w, Some(v)))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Canonical form of an unlabeled tree: the least rooted code over its centers.
pub fn canonical_form(tree: &Tree) -> String {
    let ecc = |v: Vertex| -> usize {
        tree.vertices()
            .iter()
            .map(|&w| tree.path(v, w).len())
            .max()
            .unwrap_or(0)
    };
    let best = tree.vertices().iter().map(|&v| ecc(v)).min().unwrap_or(0);
    tree.vertices()
        .iter()
        .filter(|&&v| ecc(v) == best)
        .map(|&v| rooted_code(tree, v, None))
        .min()
        .unwrap_or_default()
}

/// One labeled representative on `1..=n` of each unlabeled tree with `n` vertices.
pub fn unlabeled_trees(n: usize) -> Vec<Tree> {
    if n <= 2 {
        let mut rng = rand::rngs::mock::StepRng::new(0, 1);
        return vec![random_tree(n, &mut rng)];
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let total = n.pow(n as u32 - 2);
    for idx in 0..total {
        let mut k = idx;
        let code: Vec<Vertex> = (0..n - 2)
            .map(|_| {
                let d = (k % n) as Vertex + 1;
                k /= n;
                d
            })
            .collect();
        let tree = tree_from_prufer(&code);
        if seen.insert(canonical_form(&tree)) {
            out.push(tree);
        }
    }
    out
}
