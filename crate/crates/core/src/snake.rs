//! Hypergraph snake graphs: component graphs, singleton graphs, trimming and
//! gluing into the graph of a weakly rooted set.

use crate::cluster::{vset, ClusterContext, SetClass, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::symbolic::{Exponents, Monomial, SetVariable};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

/// Weight carried by an edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "set", rename_all = "snake_case")]
pub enum Weight {
    /// The constant 1.
    Unit,
    /// `Y_C`.
    Y(VertexSet),
    /// `Y_C²`.
    Y2(VertexSet),
}

impl Weight {
    /// `W(e)`: the index set, empty for unit edges.
    pub fn w_set(&self) -> &[Vertex] {
        match self {
            Weight::Unit => &[],
            Weight::Y(c) | Weight::Y2(c) => c,
        }
    }

    /// Whether this is the unit weight.
    pub fn is_unit(&self) -> bool {
        matches!(self, Weight::Unit)
    }

    /// The weight as a monomial.
    pub fn monomial(&self) -> Monomial {
        match self {
            Weight::Unit => Monomial::one(),
            Weight::Y(c) => Monomial::var_pow(c, 1),
            Weight::Y2(c) => Monomial::var_pow(c, 2),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Unit => write!(f, "1"),
            Weight::Y(c) => write!(f, "Y[{}]", vset::render(c)),
            Weight::Y2(c) => write!(f, "Y[{}]^2", vset::render(c)),
        }
    }
}

/// Valence `a⊕b`: a node meets between `a` and `a+b` edges of a matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Valence {
    /// Required number of incident matching edges.
    pub a: u32,
    /// Number of optional extra incident edges.
    pub b: u32,
}

impl Valence {
    /// Builds `a⊕b`.
    pub const fn new(a: u32, b: u32) -> Self {
        Valence { a, b }
    }

    /// `1⊕0`.
    pub const ONE: Valence = Valence::new(1, 0);

    /// Whether `count` incident edges are allowed.
    pub fn admits(&self, count: u32) -> bool {
        count >= self.a && count <= self.a + self.b
    }
}

impl fmt::Display for Valence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊕{}", self.a, self.b)
    }
}

/// Boundary or internal edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Boundary edge.
    Boundary,
    /// Internal edge.
    Internal,
}

/// The singleton graph an edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeOrigin {
    /// Contributed by the trimmed graph of this vertex.
    Vertex(Vertex),
    /// An identified `(v,w)` edge shared by two trimmed graphs.
    Shared,
}

/// A node of a snake graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakeNode {
    /// Index of the node in [`SnakeGraph::nodes`].
    pub id: usize,
    /// Vertex of Γ′ labeling the node.
    pub label: Vertex,
    /// Valence.
    pub valence: Valence,
    /// Whether this is the `v_opt` node of its singleton graph.
    pub is_v_opt: bool,
    /// Whether this is the `v_fix` node of its singleton graph.
    pub is_v_fix: bool,
}

/// A hyperedge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakeEdge {
    /// Index of the edge in [`SnakeGraph::edges`].
    pub id: usize,
    /// Sorted node ids.
    pub endpoints: Vec<usize>,
    /// Weight.
    pub weight: Weight,
    /// Boundary or internal.
    pub kind: EdgeKind,
    /// Contributing singleton graph.
    pub origin: EdgeOrigin,
}

/// A labeled diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakeDiagonal {
    /// Index of the diagonal in [`SnakeGraph::diagonals`].
    pub id: usize,
    /// Sorted node ids.
    pub endpoints: Vec<usize>,
    /// Member of the nested collection labeling the diagonal.
    pub label: VertexSet,
}

/// Record of one gluing step: the identified edge and the valences its ends had on each side.
///
/// Edges with ids below `acc_edges` belong to the accumulated side, edges in
/// `acc_edges..piece_end` to the newly attached piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seam {
    /// Id of the identified edge.
    pub edge: usize,
    /// Its two endpoint node ids.
    pub nodes: [usize; 2],
    /// Number of edges on the accumulated side.
    pub acc_edges: usize,
    /// One past the last edge id contributed by the piece.
    pub piece_end: usize,
    /// Valences of `nodes` on the accumulated side.
    pub acc_valence: [Valence; 2],
    /// Valences of `nodes` on the piece side.
    pub piece_valence: [Valence; 2],
}

/// A hypergraph snake graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakeGraph {
    /// Nodes, indexed by id.
    pub nodes: Vec<SnakeNode>,
    /// Edges, indexed by id.
    pub edges: Vec<SnakeEdge>,
    /// Diagonals, indexed by id.
    pub diagonals: Vec<SnakeDiagonal>,
    /// The vertex set whose variable the graph expands.
    pub owner: VertexSet,
    /// Gluing steps, in the order they were performed.
    #[serde(default)]
    pub seams: Vec<Seam>,
}

impl SnakeGraph {
    fn empty(owner: VertexSet) -> Self {
        SnakeGraph {
            nodes: Vec::new(),
            edges: Vec::new(),
            diagonals: Vec::new(),
            owner,
            seams: Vec::new(),
        }
    }

    /// Single hyperedge `Y_S` on one node per element of `N_Γ′(S)`.
    pub fn single_hyperedge(ctx: &ClusterContext, s: &[Vertex]) -> Self {
        let s = vset::normalize(s.to_vec());
        let mut g = SnakeGraph::empty(s.clone());
        let nbrs = ctx.set_neighbors(&s);
        for (id, &label) in nbrs.iter().enumerate() {
            g.nodes.push(SnakeNode {
                id,
                label,
                valence: Valence::ONE,
                is_v_opt: false,
                is_v_fix: false,
            });
        }
        let owner = if s.len() == 1 {
            EdgeOrigin::Vertex(s[0])
        } else {
            EdgeOrigin::Shared
        };
        g.edges.push(SnakeEdge {
            id: 0,
            endpoints: (0..nbrs.len()).collect(),
            weight: Weight::Y(s),
            kind: EdgeKind::Boundary,
            origin: owner,
        });
        g
    }

    /// For each node, the ids of diagonals through it.
    pub fn node_diagonals(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for d in &self.diagonals {
            for &n in &d.endpoints {
                out[n].push(d.id);
            }
        }
        out
    }

    /// For each node, the ids of incident edges.
    pub fn node_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            for &n in &e.endpoints {
                out[n].push(e.id);
            }
        }
        out
    }

    /// Diagonals sharing a node with edge `e`, sorted.
    pub fn edge_diagonals(&self, e: usize) -> Vec<usize> {
        let nd = self.node_diagonals();
        self.edge_diagonals_with(&nd, e)
    }

    fn edge_diagonals_with(&self, nd: &[Vec<usize>], e: usize) -> Vec<usize> {
        let mut ds: Vec<usize> = self.edges[e]
            .endpoints
            .iter()
            .flat_map(|&n| nd[n].iter().copied())
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// `W(e)`.
    pub fn w_edge(&self, e: usize) -> &[Vertex] {
        self.edges[e].weight.w_set()
    }

    /// `ℓ(𝒢) = ∏_d Y_{W(d)}`.
    pub fn ell(&self) -> Monomial {
        Monomial {
            coefficient: BigInt::one(),
            exponents: Exponents::from_pairs(
                self.diagonals
                    .iter()
                    .map(|d| (SetVariable::new(&d.label), 1)),
            ),
        }
    }

    /// Diagonal labels in sorted order.
    pub fn diagonal_labels(&self) -> Vec<VertexSet> {
        let mut v: Vec<VertexSet> = self.diagonals.iter().map(|d| d.label.clone()).collect();
        v.sort();
        v
    }

    /// Sorted multiset of edge weights.
    pub fn weight_multiset(&self) -> Vec<Weight> {
        let mut v: Vec<Weight> = self.edges.iter().map(|e| e.weight.clone()).collect();
        v.sort();
        v
    }

    /// Reclassifies every non-shared edge by its incidences within this graph.
    pub fn classify_edges(&mut self) {
        let nd = self.node_diagonals();
        let kinds: Vec<EdgeKind> = (0..self.edges.len())
            .map(|e| self.local_kind(&nd, e))
            .collect();
        for (e, k) in self.edges.iter_mut().zip(kinds) {
            if e.origin != EdgeOrigin::Shared {
                e.kind = k;
            }
        }
    }

    fn local_kind(&self, nd: &[Vec<usize>], e: usize) -> EdgeKind {
        let ds = self.edge_diagonals_with(nd, e);
        let w = self.w_edge(e);
        if ds.len() <= 1 || ds.iter().any(|&d| self.diagonals[d].label.as_slice() == w) {
            EdgeKind::Boundary
        } else {
            EdgeKind::Internal
        }
    }

    /// Removes the given nodes, edges and diagonals and renumbers the rest.
    fn retain(
        &mut self,
        drop_nodes: &BTreeSet<usize>,
        drop_edges: &BTreeSet<usize>,
        drop_diagonals: &BTreeSet<usize>,
    ) {
        let mut map = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for n in &self.nodes {
            if !drop_nodes.contains(&n.id) {
                map[n.id] = nodes.len();
                let mut m = n.clone();
                m.id = nodes.len();
                nodes.push(m);
            }
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            if drop_edges.contains(&e.id) {
                continue;
            }
            let endpoints: Vec<usize> = e
                .endpoints
                .iter()
                .filter(|&&n| map[n] != usize::MAX)
                .map(|&n| map[n])
                .collect();
            debug_assert_eq!(
                endpoints.len(),
                e.endpoints.len(),
                "edge kept with a dropped node"
            );
            let mut f = e.clone();
            f.id = edges.len();
            f.endpoints = endpoints;
            edges.push(f);
        }
        let mut diagonals = Vec::new();
        for d in &self.diagonals {
            if drop_diagonals.contains(&d.id) {
                continue;
            }
            let endpoints: Vec<usize> = d
                .endpoints
                .iter()
                .filter(|&&n| map[n] != usize::MAX)
                .map(|&n| map[n])
                .collect();
            let mut f = d.clone();
            f.id = diagonals.len();
            f.endpoints = endpoints;
            diagonals.push(f);
        }
        self.nodes = nodes;
        self.edges = edges;
        self.diagonals = diagonals;
    }

    /// Whether a matching restricts to valid matchings of the glued pieces.
    ///
    /// Every seam edge outside the matching must be handed to exactly one side
    /// so that the seam ends meet the valences they had before gluing.
    pub fn splits_along_seams(&self, chosen: &[bool]) -> bool {
        let open: Vec<usize> = (0..self.seams.len())
            .filter(|&k| !chosen[self.seams[k].edge])
            .collect();
        (0u32..1 << open.len()).any(|mask| {
            let mut to_acc = vec![false; self.seams.len()];
            for (bit, &k) in open.iter().enumerate() {
                to_acc[k] = mask >> bit & 1 == 1;
            }
            self.seams
                .iter()
                .enumerate()
                .all(|(k, seam)| self.seam_fits(k, seam, chosen, &to_acc))
        })
    }

    fn seam_fits(&self, k: usize, seam: &Seam, chosen: &[bool], to_acc: &[bool]) -> bool {
        let present = |f: usize| {
            chosen[f]
                || self.seams[k + 1..]
                    .iter()
                    .zip(&to_acc[k + 1..])
                    .any(|(later, &acc)| later.edge == f && acc)
        };
        let own_acc = chosen[seam.edge] || to_acc[k];
        let own_piece = chosen[seam.edge] || !to_acc[k];
        (0..2).all(|i| {
            let node = seam.nodes[i];
            let mut acc = own_acc as u32;
            let mut piece = own_piece as u32;
            for e in &self.edges {
                if e.id == seam.edge
                    || e.id >= seam.piece_end
                    || !e.endpoints.contains(&node)
                    || !present(e.id)
                {
                    continue;
                }
                if e.id < seam.acc_edges {
                    acc += 1;
                } else {
                    piece += 1;
                }
            }
            seam.acc_valence[i].admits(acc) && seam.piece_valence[i].admits(piece)
        })
    }

    /// Isomorphism-invariant summary used to compare graphs built in different orders.
    pub fn signature(&self) -> Vec<String> {
        let nd = self.node_diagonals();
        let node_sig = |n: usize| -> String {
            let mut ds: Vec<String> = nd[n]
                .iter()
                .map(|&d| vset::render(&self.diagonals[d].label))
                .collect();
            ds.sort();
            format!(
                "{}:{}:{}",
                self.nodes[n].label,
                self.nodes[n].valence,
                ds.join("|")
            )
        };
        let mut out: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                let mut ends: Vec<String> = e.endpoints.iter().map(|&n| node_sig(n)).collect();
                ends.sort();
                format!("{}:{:?}:[{}]", e.weight, e.kind, ends.join(","))
            })
            .collect();
        out.extend(self.diagonals.iter().map(|d| {
            let mut ends: Vec<String> = d.endpoints.iter().map(|&n| node_sig(n)).collect();
            ends.sort();
            format!("diag {}:[{}]", vset::render(&d.label), ends.join(","))
        }));
        out.extend((0..self.nodes.len()).map(|n| format!("node {}", node_sig(n))));
        out.sort();
        out
    }

    /// Finds the unit edge `(v, w)` contributed by `v`'s graph whose `w` node lies on no diagonal.
    pub fn port(&self, v: Vertex, w: Vertex) -> Option<usize> {
        let nd = self.node_diagonals();
        self.edges
            .iter()
            .filter(|e| e.weight.is_unit() && e.endpoints.len() == 2)
            .filter(|e| e.origin == EdgeOrigin::Vertex(v))
            .find(|e| {
                let (x, y) = (e.endpoints[0], e.endpoints[1]);
                let lab = (self.nodes[x].label, self.nodes[y].label);
                (lab == (v, w) && nd[y].is_empty()) || (lab == (w, v) && nd[x].is_empty())
            })
            .map(|e| e.id)
    }
}

/// A component snake graph: a zigzag planar snake graph with its tile order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSnakeGraph {
    /// The planar graph; every node has valence `1⊕0`, edges are binary.
    pub graph: SnakeGraph,
    /// Diagonal labels of the tiles in order.
    pub tiles: Vec<VertexSet>,
    /// Labels of the fan vertices `x_0, …, x_{n+1}` opposite `v`.
    pub fan: Vec<Vertex>,
    /// Branch index `i` of the neighbor on `[v,k]`.
    pub branch: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Part {
    First,
    Other(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum NodeKey {
    X(Part, usize, Vertex),
    VTile(Part, usize),
    VFix,
}

/// Raw fan data for one `(ℓ,k)` pair.
#[derive(Debug, Clone)]
struct Fan {
    branch: usize,
    c1: usize,
    xs: Vec<Vertex>,
    tiles: Vec<VertexSet>,
    sides: Vec<Weight>,
}

impl Fan {
    fn n(&self) -> usize {
        self.tiles.len()
    }

    fn arc_weight(&self, t: usize) -> Weight {
        if t == 0 || t == self.n() + 1 {
            Weight::Unit
        } else {
            Weight::Y(self.tiles[t - 1].clone())
        }
    }

    /// Edges as `(node_a, node_b, weight)` over fan positions: `Ok(k)` is `x_k`, `Err(t)` is `v_t`.
    fn edges(&self) -> Vec<(FanNode, FanNode, Weight)> {
        let n = self.n();
        let mut out = Vec::with_capacity(3 * n + 1);
        for t in 1..=n + 1 {
            out.push((FanNode::X(t - 1), FanNode::X(t), self.sides[t - 1].clone()));
        }
        for t in 1..=n {
            out.push((FanNode::V(t), FanNode::X(t - 1), self.arc_weight(t - 1)));
            out.push((FanNode::V(t), FanNode::X(t + 1), self.arc_weight(t + 1)));
        }
        out
    }

    fn key(&self, node: FanNode) -> NodeKey {
        let c1 = self.c1;
        match node {
            FanNode::X(k) if k <= c1 + 1 => NodeKey::X(Part::First, k, self.xs[k]),
            FanNode::X(k) => NodeKey::X(Part::Other(self.branch), k, self.xs[k]),
            FanNode::V(t) if t <= c1 => NodeKey::VTile(Part::First, c1 + 1 - t),
            FanNode::V(t) if t == c1 + 1 => NodeKey::VFix,
            FanNode::V(t) => NodeKey::VTile(Part::Other(self.branch), t - c1),
        }
    }

    fn label(&self, node: FanNode, v: Vertex) -> Vertex {
        match node {
            FanNode::X(k) => self.xs[k],
            FanNode::V(_) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FanNode {
    X(usize),
    V(usize),
}

/// The vertex after `from` on the path from `from` to `to` in Γ′.
fn step_toward(ctx: &ClusterContext, from: Vertex, to: Vertex) -> Vertex {
    ctx.extended().path(from, to)[1]
}

/// The component of `set ∖ {drop}` containing `x`.
fn component_containing(
    ctx: &ClusterContext,
    set: &[Vertex],
    drop: &[Vertex],
    x: Vertex,
) -> VertexSet {
    ctx.components(&vset::minus(set, drop))
        .into_iter()
        .find(|c| vset::contains(c, x))
        .expect("x lies in the set")
}

/// Weight of `(a, b)` where `b` is the exit of `I_a` toward a leaf.
fn rule_end(ctx: &ClusterContext, a: Vertex, b: Vertex) -> Weight {
    if ctx.extended().has_edge(a, b) {
        Weight::Unit
    } else {
        let y = step_toward(ctx, a, b);
        Weight::Y(component_containing(ctx, ctx.i_of(a), &[a], y))
    }
}

/// Weight of the side between the exits of `I^i_j` and `I^i_{j+1}`.
fn rule_chain(
    ctx: &ClusterContext,
    v: Vertex,
    big: &[Vertex],
    small: &[Vertex],
    peak: Vertex,
    b_big: Vertex,
    b_small: Vertex,
) -> Weight {
    let ext = ctx.extended();
    if b_big == b_small {
        let path = vset::normalize(ctx.tree().path(v, peak));
        if path.iter().any(|&p| ext.has_edge(p, b_big)) {
            return Weight::Unit;
        }
        let rest = vset::minus(small, &path);
        let c = ctx
            .components(&rest)
            .into_iter()
            .find(|c| c.iter().any(|&x| ext.has_edge(x, b_big)))
            .expect("the exit borders a component of the smaller set");
        Weight::Y2(c)
    } else if ext.has_edge(b_big, peak) {
        Weight::Unit
    } else {
        let y = step_toward(ctx, peak, b_big);
        Weight::Y(component_containing(ctx, big, &[peak], y))
    }
}

/// First vertex of the path `v → leaf` outside `set`.
fn exit_toward(ctx: &ClusterContext, v: Vertex, leaf: Vertex, set: &[Vertex]) -> Vertex {
    ctx.extended()
        .path(v, leaf)
        .into_iter()
        .skip(1)
        .find(|x| !vset::contains(set, *x))
        .expect("leaves lie outside every member")
}

fn leaves_ab(ctx: &ClusterContext, v: Vertex) -> (Vec<Vertex>, Vec<Vertex>) {
    let a1 = ctx.branch(v).branch(1).neighbor;
    let ext = ctx.extended();
    ext.companion_labels()
        .into_iter()
        .partition(|&l| ext.path(v, l).contains(&a1))
}

fn build_fan(ctx: &ClusterContext, v: Vertex, ell: Vertex, k: Vertex) -> Result<Fan> {
    let bd = ctx.branch(v);
    let ext = ctx.extended();
    if bd.r == 0 {
        return Err(Error::SetInCollection(v));
    }
    let first = bd.branch(1);
    let (a_side, b_side) = leaves_ab(ctx, v);
    if !a_side.contains(&ell) || !b_side.contains(&k) {
        return Err(Error::InvalidComponentLeaves(ell, k));
    }
    let ai = ext.path(v, k)[1];
    let i = bd.index_of(ai).expect("neighbor of v");
    let other = bd.branch(i);
    let c1 = first.c();
    let ci = other.c();
    let b1: Vec<Vertex> = (1..=c1)
        .map(|j| exit_toward(ctx, v, ell, first.set(j)))
        .collect();
    let bi: Vec<Vertex> = (1..=ci)
        .map(|j| exit_toward(ctx, v, k, other.set(j)))
        .collect();
    let mut xs = vec![first.neighbor];
    xs.extend(b1.iter().rev());
    xs.extend(bi.iter());
    xs.push(ai);
    let mut tiles: Vec<VertexSet> = (1..=c1).rev().map(|j| first.set(j).to_vec()).collect();
    tiles.extend((1..=ci).map(|j| other.set(j).to_vec()));
    let n = c1 + ci;
    let mut sides = Vec::with_capacity(n + 1);
    for t in 1..=n + 1 {
        let w = if t == 1 {
            rule_end(ctx, first.neighbor, b1[c1 - 1])
        } else if t <= c1 {
            let j = c1 + 1 - t;
            rule_chain(
                ctx,
                v,
                first.set(j),
                first.set(j + 1),
                first.peak(j),
                b1[j - 1],
                b1[j],
            )
        } else if t == c1 + 1 {
            Weight::Y(ctx.i_of(v).to_vec())
        } else if t <= c1 + ci {
            let j = t - 1 - c1;
            rule_chain(
                ctx,
                v,
                other.set(j),
                other.set(j + 1),
                other.peak(j),
                bi[j - 1],
                bi[j],
            )
        } else {
            rule_end(ctx, ai, bi[ci - 1])
        };
        sides.push(w);
    }
    Ok(Fan {
        branch: i,
        c1,
        xs,
        tiles,
        sides,
    })
}

/// Builds the component snake graph `H_{ℓ,k}` of `v`.
pub fn build_component(
    ctx: &ClusterContext,
    v: Vertex,
    ell: Vertex,
    k: Vertex,
) -> Result<ComponentSnakeGraph> {
    let fan = build_fan(ctx, v, ell, k)?;
    let n = fan.n();
    let mut g = SnakeGraph::empty(vec![v]);
    let x_id = |k: usize| k;
    let v_id = |t: usize| n + 1 + t;
    for kk in 0..=n + 1 {
        g.nodes.push(SnakeNode {
            id: kk,
            label: fan.xs[kk],
            valence: Valence::ONE,
            is_v_opt: false,
            is_v_fix: false,
        });
    }
    for t in 1..=n {
        g.nodes.push(SnakeNode {
            id: v_id(t),
            label: v,
            valence: Valence::ONE,
            is_v_opt: t == fan.c1,
            is_v_fix: false,
        });
    }
    let id_of = |node: FanNode| match node {
        FanNode::X(k) => x_id(k),
        FanNode::V(t) => v_id(t),
    };
    for (a, b, w) in fan.edges() {
        let mut ends = vec![id_of(a), id_of(b)];
        ends.sort_unstable();
        let id = g.edges.len();
        g.edges.push(SnakeEdge {
            id,
            endpoints: ends,
            weight: w,
            kind: EdgeKind::Boundary,
            origin: EdgeOrigin::Vertex(v),
        });
    }
    for t in 1..=n {
        let mut ends = vec![v_id(t), x_id(t)];
        ends.sort_unstable();
        g.diagonals.push(SnakeDiagonal {
            id: t - 1,
            endpoints: ends,
            label: fan.tiles[t - 1].clone(),
        });
    }
    // Planar classification: an edge bordering two tiles is internal.
    for e in g.edges.iter_mut() {
        let inner = e.endpoints.iter().all(|&p| p <= n + 1)
            && e.endpoints.iter().all(|&p| p >= 1 && p <= n);
        e.kind = if inner {
            EdgeKind::Internal
        } else {
            EdgeKind::Boundary
        };
    }
    Ok(ComponentSnakeGraph {
        graph: g,
        tiles: fan.tiles,
        fan: fan.xs,
        branch: fan.branch,
    })
}

/// All `(ℓ,k)` pairs indexing the component graphs of `v`.
pub fn component_pairs(ctx: &ClusterContext, v: Vertex) -> Vec<(Vertex, Vertex)> {
    let (a, b) = leaves_ab(ctx, v);
    a.iter()
        .flat_map(|&l| b.iter().map(move |&k| (l, k)))
        .collect()
}

/// Builds the singleton snake graph `𝒢_v`.
pub fn build_singleton(ctx: &ClusterContext, v: Vertex) -> Result<SnakeGraph> {
    if !ctx.tree().contains(v) {
        return Err(Error::UnknownVertex(v));
    }
    if ctx.is_member(&[v]) {
        return Ok(SnakeGraph::single_hyperedge(ctx, &[v]));
    }
    let bd = ctx.branch(v);
    let fans: Vec<Fan> = component_pairs(ctx, v)
        .into_iter()
        .map(|(l, k)| build_fan(ctx, v, l, k))
        .collect::<Result<_>>()?;

    let mut keys: BTreeMap<NodeKey, usize> = BTreeMap::new();
    let mut labels: Vec<Vertex> = Vec::new();
    let mut intern = |key: NodeKey, label: Vertex, labels: &mut Vec<Vertex>| -> usize {
        *keys.entry(key).or_insert_with(|| {
            labels.push(label);
            labels.len() - 1
        })
    };
    let mut diag: BTreeMap<VertexSet, BTreeSet<usize>> = BTreeMap::new();
    let mut raw_edges: BTreeSet<(Weight, Vec<usize>)> = BTreeSet::new();
    let mut comp_degree: HashMap<usize, u32> = HashMap::new();
    for fan in &fans {
        let mut local: HashMap<usize, u32> = HashMap::new();
        for (a, b, w) in fan.edges() {
            let ia = intern(fan.key(a), fan.label(a, v), &mut labels);
            let ib = intern(fan.key(b), fan.label(b, v), &mut labels);
            *local.entry(ia).or_default() += 1;
            *local.entry(ib).or_default() += 1;
            let mut ends = vec![ia, ib];
            ends.sort_unstable();
            raw_edges.insert((w, ends));
        }
        for t in 1..=fan.n() {
            let iv = intern(fan.key(FanNode::V(t)), v, &mut labels);
            let ix = intern(fan.key(FanNode::X(t)), fan.xs[t], &mut labels);
            let entry = diag.entry(fan.tiles[t - 1].clone()).or_default();
            entry.insert(iv);
            entry.insert(ix);
        }
        for (node, d) in local {
            let e = comp_degree.entry(node).or_insert(0);
            *e = (*e).max(d);
        }
    }
    let node_count = labels.len();
    // Squared edges between the same pair of diagonals form one hyperedge. Other non-unit edges
    // of equal weight are combined when they share a node and every label stays unique.
    let mut node_diag: Vec<Vec<&VertexSet>> = vec![Vec::new(); node_count];
    for (label, ends) in &diag {
        for &n in ends {
            node_diag[n].push(label);
        }
    }
    let mut squares: BTreeMap<(Weight, Vec<&VertexSet>), BTreeSet<usize>> = BTreeMap::new();
    let mut groups: BTreeMap<Weight, Vec<BTreeSet<usize>>> = BTreeMap::new();
    let mut combined: Vec<(Weight, Vec<usize>)> = Vec::new();
    for (w, ends) in raw_edges {
        if w.is_unit() {
            combined.push((w, ends));
        } else if matches!(w, Weight::Y2(_)) {
            let mut ds: Vec<&VertexSet> = ends
                .iter()
                .flat_map(|&n| node_diag[n].iter().copied())
                .collect();
            ds.sort();
            ds.dedup();
            squares.entry((w, ds)).or_default().extend(ends);
        } else {
            groups
                .entry(w)
                .or_default()
                .push(ends.into_iter().collect());
        }
    }
    for ((w, _), ends) in squares {
        combined.push((w, ends.into_iter().collect()));
    }
    for (w, mut classes) in groups {
        let fits = |a: &BTreeSet<usize>, b: &BTreeSet<usize>| {
            let mut seen: BTreeSet<Vertex> = BTreeSet::new();
            a.union(b).all(|&n| seen.insert(labels[n]))
        };
        let mut changed = true;
        while changed {
            changed = false;
            'scan: for i in 0..classes.len() {
                for j in i + 1..classes.len() {
                    if !classes[i].is_disjoint(&classes[j]) && fits(&classes[i], &classes[j]) {
                        let moved = classes.remove(j);
                        classes[i].extend(moved);
                        changed = true;
                        break 'scan;
                    }
                }
            }
        }
        for ends in classes {
            combined.push((w.clone(), ends.into_iter().collect()));
        }
    }
    combined.sort();
    let v_opt = keys[&NodeKey::VTile(Part::First, 1)];
    let v_fix = keys.get(&NodeKey::VFix).copied();
    let mut degree = vec![0u32; node_count];
    for (_, ends) in &combined {
        for &n in ends {
            degree[n] += 1;
        }
    }
    let mut g = SnakeGraph::empty(vec![v]);
    for (id, &label) in labels.iter().enumerate() {
        let valence = if Some(id) == v_fix {
            Valence::new(bd.r as u32 - 1, 0)
        } else {
            Valence::new(1, degree[id] - comp_degree[&id])
        };
        g.nodes.push(SnakeNode {
            id,
            label,
            valence,
            is_v_opt: id == v_opt,
            is_v_fix: Some(id) == v_fix,
        });
    }
    for (w, ends) in combined {
        let id = g.edges.len();
        g.edges.push(SnakeEdge {
            id,
            endpoints: ends,
            weight: w,
            kind: EdgeKind::Boundary,
            origin: EdgeOrigin::Vertex(v),
        });
    }
    for (label, ends) in diag {
        let id = g.diagonals.len();
        g.diagonals.push(SnakeDiagonal {
            id,
            endpoints: ends.into_iter().collect(),
            label,
        });
    }
    g.classify_edges();
    Ok(g)
}

/// Checks that every node's extra edge count does not depend on which component it is read from.
pub fn valences_consistent(ctx: &ClusterContext, v: Vertex) -> Result<bool> {
    if ctx.is_member(&[v]) {
        return Ok(true);
    }
    let g = build_singleton(ctx, v)?;
    let fans: Vec<Fan> = component_pairs(ctx, v)
        .into_iter()
        .map(|(l, k)| build_fan(ctx, v, l, k))
        .collect::<Result<_>>()?;
    let mut seen: HashMap<NodeKey, u32> = HashMap::new();
    for fan in &fans {
        let mut local: HashMap<NodeKey, u32> = HashMap::new();
        for (a, b, _) in fan.edges() {
            *local.entry(fan.key(a)).or_default() += 1;
            *local.entry(fan.key(b)).or_default() += 1;
        }
        for (k, d) in local {
            if let Some(prev) = seen.insert(k, d) {
                if prev != d {
                    return Ok(false);
                }
            }
        }
    }
    Ok(g.nodes.iter().all(|n| n.valence.a <= 1 || n.is_v_fix))
}

/// For each below-neighbor `a_i ∈ S ∖ S̄` of `v`, the branch index and the minimal `m`
/// with `I^i_m ⊊ S`.
pub fn trim_targets(ctx: &ClusterContext, v: Vertex, s: &[Vertex]) -> Vec<(usize, usize)> {
    let bar = ctx.rooted_portion(s);
    let bd = ctx.branch(v);
    (1..=bd.r)
        .filter(|&i| {
            let a = bd.branch(i).neighbor;
            vset::contains(s, a) && !vset::contains(&bar, a)
        })
        .map(|i| {
            let br = bd.branch(i);
            let m = (1..=br.c())
                .find(|&j| vset::is_proper_subset(br.set(j), s))
                .expect("S contains I_{a_i}");
            (i, m)
        })
        .collect()
}

/// Trims `𝒢_v` to `𝒢_v^S`.
pub fn trim(ctx: &ClusterContext, g: &SnakeGraph, s: &[Vertex]) -> Result<SnakeGraph> {
    let s = vset::normalize(s.to_vec());
    let class = ctx.classify_set(&s)?;
    if !class.is_weakly_rooted() {
        return Err(Error::NotWeaklyRooted(s));
    }
    let v = match g.owner.as_slice() {
        [v] => *v,
        _ => {
            return Err(Error::IndexOutOfRange(
                "trim expects a singleton graph".into(),
            ))
        }
    };
    if !vset::contains(&class.rooted_portion, v) {
        return Err(Error::VertexNotInRootedPortion { vertex: v, set: s });
    }
    let mut g = g.clone();
    let mut absorbed: VertexSet = vec![v];
    let bd = ctx.branch(v);
    for (i, m) in trim_targets(ctx, v, &s) {
        let br = bd.branch(i);
        let target = br.set(m).to_vec();
        absorbed = vset::union(&absorbed, &target);
        let nd = g.node_diagonals();
        let smaller: BTreeSet<usize> = g
            .diagonals
            .iter()
            .filter(|d| vset::is_proper_subset(&d.label, &target))
            .map(|d| d.id)
            .collect();
        let mut drop_edges = BTreeSet::new();
        if smaller.is_empty() {
            let peak = br.peak(m);
            for e in &g.edges {
                if e.endpoints
                    .iter()
                    .any(|&n| g.nodes[n].label == peak && nd[n].is_empty())
                {
                    drop_edges.insert(e.id);
                }
            }
        } else {
            for e in &g.edges {
                if e.endpoints
                    .iter()
                    .any(|&n| nd[n].iter().any(|d| smaller.contains(d)))
                {
                    drop_edges.insert(e.id);
                }
            }
        }
        let mut touched = vec![false; g.nodes.len()];
        for e in &g.edges {
            if !drop_edges.contains(&e.id) {
                for &n in &e.endpoints {
                    touched[n] = true;
                }
            }
        }
        let drop_nodes: BTreeSet<usize> = (0..g.nodes.len()).filter(|&n| !touched[n]).collect();
        g.retain(&drop_nodes, &drop_edges, &BTreeSet::new());

        let target_diag = g
            .diagonals
            .iter()
            .find(|d| d.label == target)
            .map(|d| d.id)
            .ok_or_else(|| {
                Error::IndexOutOfRange(format!("no diagonal {}", vset::render(&target)))
            })?;
        let vnode = g.diagonals[target_diag]
            .endpoints
            .iter()
            .copied()
            .find(|&n| g.nodes[n].label == v)
            .ok_or_else(|| Error::IndexOutOfRange("diagonal without a v node".into()))?;
        g.nodes[vnode].valence.a = g.nodes[vnode].valence.a.saturating_sub(1);

        let drop_diagonals: BTreeSet<usize> = g
            .diagonals
            .iter()
            .filter(|d| vset::is_subset(&d.label, &target))
            .map(|d| d.id)
            .collect();
        let dead: BTreeSet<usize> = g
            .nodes
            .iter()
            .filter(|n| n.valence == Valence::new(0, 0))
            .map(|n| n.id)
            .collect();
        let dead_edges: BTreeSet<usize> = g
            .edges
            .iter()
            .filter(|e| e.endpoints.iter().any(|n| dead.contains(n)))
            .map(|e| e.id)
            .collect();
        g.retain(&dead, &dead_edges, &drop_diagonals);
    }
    g.owner = absorbed;
    g.classify_edges();
    Ok(g)
}

/// Glues two graphs along their `(v,w)` port edges.
///
/// `ga` must contain the port of `v` toward `w` and `gb` the port of `w` toward `v`.
/// `gb` must be a single trimmed piece without seams of its own.
pub fn glue(ga: &SnakeGraph, gb: &SnakeGraph, v: Vertex, w: Vertex) -> Result<SnakeGraph> {
    if !gb.seams.is_empty() {
        return Err(Error::IndexOutOfRange(
            "the attached graph must not be glued itself".into(),
        ));
    }
    let ea = ga.port(v, w).ok_or(Error::MissingGlueEdge(v, w))?;
    let eb = gb.port(w, v).ok_or(Error::MissingGlueEdge(w, v))?;
    let by_label = |g: &SnakeGraph, e: usize, x: Vertex| -> usize {
        *g.edges[e]
            .endpoints
            .iter()
            .find(|&&n| g.nodes[n].label == x)
            .expect("port endpoints carry both labels")
    };
    let (av, aw) = (by_label(ga, ea, v), by_label(ga, ea, w));
    let (bv, bw) = (by_label(gb, eb, v), by_label(gb, eb, w));
    let mut out = ga.clone();
    let offset = out.nodes.len();
    let mut map = vec![usize::MAX; gb.nodes.len()];
    for n in &gb.nodes {
        if n.id == bv {
            map[n.id] = av;
        } else if n.id == bw {
            map[n.id] = aw;
        } else {
            map[n.id] = offset + (n.id - (n.id > bv) as usize - (n.id > bw) as usize);
        }
    }
    for n in &gb.nodes {
        if n.id != bv && n.id != bw {
            let mut m = n.clone();
            m.id = map[n.id];
            out.nodes.push(m);
        }
    }
    out.nodes.sort_by_key(|n| n.id);
    let acc_edges = out.edges.len();
    let acc_valence = [out.nodes[av].valence, out.nodes[aw].valence];
    let piece_valence = [gb.nodes[bv].valence, gb.nodes[bw].valence];
    for (a, b) in [(av, bv), (aw, bw)] {
        let va = out.nodes[a].valence;
        let vb = gb.nodes[b].valence;
        out.nodes[a].valence = Valence::new((va.a + vb.a).saturating_sub(1), va.b + vb.b);
        out.nodes[a].is_v_opt |= gb.nodes[b].is_v_opt;
        out.nodes[a].is_v_fix |= gb.nodes[b].is_v_fix;
    }
    out.edges[ea].origin = EdgeOrigin::Shared;
    out.edges[ea].kind = EdgeKind::Internal;
    for e in &gb.edges {
        if e.id == eb {
            continue;
        }
        let mut f = e.clone();
        f.id = out.edges.len();
        f.endpoints = e.endpoints.iter().map(|&n| map[n]).collect();
        f.endpoints.sort_unstable();
        out.edges.push(f);
    }
    for d in &gb.diagonals {
        let mut f = d.clone();
        f.id = out.diagonals.len();
        f.endpoints = d.endpoints.iter().map(|&n| map[n]).collect();
        f.endpoints.sort_unstable();
        out.diagonals.push(f);
    }
    out.seams.push(Seam {
        edge: ea,
        nodes: [av, aw],
        acc_edges,
        piece_end: out.edges.len(),
        acc_valence,
        piece_valence,
    });
    out.owner = vset::union(&ga.owner, &gb.owner);
    Ok(out)
}

/// A gluing order: breadth-first over `S̄` from its largest element.
pub fn glue_order(ctx: &ClusterContext, bar: &[Vertex]) -> Vec<Vertex> {
    let top = ctx.max_of_connected(bar);
    let mut order = vec![top];
    let mut queue = VecDeque::from([top]);
    let mut seen = BTreeSet::from([top]);
    while let Some(x) = queue.pop_front() {
        for &y in ctx.tree().neighbors(x) {
            if vset::contains(bar, y) && seen.insert(y) {
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    order
}

/// Builds `𝒢_S` for a weakly rooted `S`, gluing in the given order of `S̄`.
pub fn build_snake_graph_with_order(
    ctx: &ClusterContext,
    s: &[Vertex],
    order: &[Vertex],
) -> Result<SnakeGraph> {
    let s = vset::normalize(s.to_vec());
    let class = ctx.classify_set(&s)?;
    match class.tag {
        SetClass::NotWeaklyRooted => return Err(Error::NotWeaklyRooted(s)),
        SetClass::InCollection => return Ok(SnakeGraph::single_hyperedge(ctx, &s)),
        _ => {}
    }
    let bar = class.rooted_portion;
    if vset::normalize(order.to_vec()) != bar {
        return Err(Error::IndexOutOfRange(
            "gluing order must enumerate the rooted portion".into(),
        ));
    }
    let mut acc: Option<SnakeGraph> = None;
    let mut placed: Vec<Vertex> = Vec::new();
    for &w in order {
        let piece = trim(ctx, &build_singleton(ctx, w)?, &s)?;
        acc = Some(match acc {
            None => piece,
            Some(g) => {
                let u = *placed
                    .iter()
                    .find(|&&u| ctx.tree().neighbors(w).contains(&u))
                    .ok_or_else(|| {
                        Error::IndexOutOfRange("gluing order is not connected".into())
                    })?;
                glue(&g, &piece, u, w)?
            }
        });
        placed.push(w);
    }
    let mut g = acc.ok_or(Error::EmptySet)?;
    g.owner = s;
    Ok(g)
}

/// Builds `𝒢_S` for a weakly rooted `S`.
pub fn build_snake_graph(ctx: &ClusterContext, s: &[Vertex]) -> Result<SnakeGraph> {
    let s = vset::normalize(s.to_vec());
    let class = ctx.classify_set(&s)?;
    if !class.is_weakly_rooted() {
        return Err(Error::NotWeaklyRooted(s));
    }
    if class.tag == SetClass::InCollection {
        return Ok(SnakeGraph::single_hyperedge(ctx, &s));
    }
    let order = glue_order(ctx, &class.rooted_portion);
    build_snake_graph_with_order(ctx, &s, &order)
}

/// Boundary or internal status of an edge as stored on the graph.
pub fn classify_edge(g: &SnakeGraph, e: usize) -> Result<EdgeKind> {
    g.edges
        .get(e)
        .map(|e| e.kind)
        .ok_or(Error::UnknownEdgeId(e))
}

/// `ℓ(𝒢)`.
pub fn ell(g: &SnakeGraph) -> Monomial {
    g.ell()
}

/// Whether every edge of `𝒢_S` is weighted by cluster variables, decided from the
/// branch data alone: for every `v ∈ S̄`, every `i ≤ r` and `j < c_i` with
/// `I^i_j ⊄ S`, the components of `I^i_{j+1} ∖ [v, a^i_j]` must be members.
pub fn positivity_in_cluster(ctx: &ClusterContext, s: &[Vertex]) -> Result<bool> {
    let s = vset::normalize(s.to_vec());
    let class = ctx.classify_set(&s)?;
    if !class.is_weakly_rooted() {
        return Err(Error::NotWeaklyRooted(s));
    }
    if class.tag == SetClass::InCollection {
        return Ok(true);
    }
    for &v in &class.rooted_portion {
        let bd = ctx.branch(v);
        for i in 1..=bd.r {
            let br = bd.branch(i);
            for j in 1..br.c() {
                if vset::is_subset(br.set(j), &s) {
                    continue;
                }
                let path = vset::normalize(ctx.tree().path(v, br.peak(j)));
                let rest = vset::minus(br.set(j + 1), &path);
                if ctx.components(&rest).iter().any(|c| !ctx.is_member(c)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether every edge weight of `g` is a monomial in the cluster variables.
pub fn weights_in_cluster(ctx: &ClusterContext, g: &SnakeGraph) -> bool {
    g.edges.iter().all(|e| match &e.weight {
        Weight::Unit => true,
        Weight::Y(c) | Weight::Y2(c) => ctx.is_member(c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ctx0, path3};

    fn y(c: &[Vertex]) -> Weight {
        Weight::Y(c.to_vec())
    }

    fn y2(c: &[Vertex]) -> Weight {
        Weight::Y2(c.to_vec())
    }

    #[test]
    fn component_for_4_from_7prime_to_1prime() {
        let ctx = ctx0();
        let (s7, s1) = (12, 11);
        let h = build_component(&ctx, 4, s7, s1).unwrap();
        assert_eq!(h.tiles, vec![vec![5, 6], vec![0, 5, 6], vec![0, 5, 6, 7]]);
        assert_eq!(h.fan, vec![5, 7, 7, s7, 3]);
        let mut sides: Vec<Weight> = h
            .graph
            .edges
            .iter()
            .filter(|e| e.endpoints.iter().all(|&n| n <= h.tiles.len() + 1))
            .map(|e| e.weight.clone())
            .collect();
        sides.sort();
        let mut expect = vec![y(&[6]), y2(&[6]), Weight::Unit, y(&[0, 4, 5, 6, 7])];
        expect.sort();
        assert_eq!(sides, expect);
        assert_eq!(h.graph.edges.len(), 3 * 3 + 1);
    }

    #[test]
    fn component_for_4_through_0prime_has_a_square() {
        let ctx = ctx0();
        let h = build_component(&ctx, 4, 10, 11).unwrap();
        assert_eq!(h.fan, vec![5, 0, 10, 10, 3]);
        assert!(h.graph.edges.iter().any(|e| e.weight == y2(&[0])));
    }

    #[test]
    fn component_for_3() {
        let ctx = ctx0();
        let h = build_component(&ctx, 3, 13, 11).unwrap();
        assert_eq!(h.tiles, vec![vec![8], vec![1, 2], vec![2]]);
        let labels: BTreeSet<VertexSet> =
            h.graph.diagonals.iter().map(|d| d.label.clone()).collect();
        assert_eq!(labels.len(), 3);
    }

    #[test]
    fn component_rejects_member_singletons() {
        let ctx = ctx0();
        assert_eq!(
            build_component(&ctx, 6, 12, 11).unwrap_err(),
            Error::SetInCollection(6)
        );
    }

    #[test]
    fn singleton_4() {
        let ctx = ctx0();
        let g = build_singleton(&ctx, 4).unwrap();
        assert_eq!(g.nodes.len(), 12);
        assert_eq!(
            g.diagonal_labels(),
            vec![vec![0, 5, 6], vec![0, 5, 6, 7], vec![5, 6]]
        );
        let mut extra: Vec<(Vertex, Valence)> = g
            .nodes
            .iter()
            .filter(|n| n.valence != Valence::ONE)
            .map(|n| (n.label, n.valence))
            .collect();
        extra.sort();
        assert_eq!(
            extra,
            vec![(4, Valence::new(1, 1)), (5, Valence::new(1, 1))]
        );
        let weights: BTreeSet<Weight> = g.weight_multiset().into_iter().collect();
        let expect: BTreeSet<Weight> = [
            Weight::Unit,
            y(&[0, 5, 6, 7]),
            y(&[0, 4, 5, 6, 7]),
            y2(&[0]),
            y(&[0, 5, 6]),
            y(&[5, 6]),
            y(&[6]),
            y2(&[6]),
        ]
        .into_iter()
        .collect();
        assert_eq!(weights, expect);
        let i4 = g
            .edges
            .iter()
            .find(|e| e.weight == y(&[0, 4, 5, 6, 7]))
            .unwrap();
        assert_eq!(i4.endpoints.len(), 4);
        assert!(valences_consistent(&ctx, 4).unwrap());
    }

    #[test]
    fn singleton_3_has_v_fix() {
        let ctx = ctx0();
        let g = build_singleton(&ctx, 3).unwrap();
        let fix = g.nodes.iter().find(|n| n.is_v_fix).unwrap();
        assert_eq!((fix.label, fix.valence), (3, Valence::new(2, 0)));
        assert!(g.nodes.iter().any(|n| n.is_v_opt && n.label == 3));
        assert_eq!(
            g.diagonal_labels(),
            vec![vec![0, 4, 5, 6, 7], vec![1, 2], vec![2], vec![8]]
        );
        let nd = g.node_diagonals();
        assert_eq!(nd[fix.id].len(), 2);
    }

    #[test]
    fn singleton_in_collection() {
        let ctx = ctx0();
        let g = build_singleton(&ctx, 6).unwrap();
        assert_eq!(g.edges.len(), 1);
        let labels: Vec<Vertex> = g.nodes.iter().map(|n| n.label).collect();
        assert_eq!(labels, vec![5, 7]);
    }

    #[test]
    fn trims_of_the_worked_example() {
        let ctx = ctx0();
        let s = [0, 3, 4, 5, 6, 8];
        let g4 = trim(&ctx, &build_singleton(&ctx, 4).unwrap(), &s).unwrap();
        assert_eq!(g4.diagonal_labels(), vec![vec![0, 5, 6, 7]]);
        assert!(g4.edges.iter().any(|e| e.weight == y2(&[0])));
        assert_eq!(g4.owner, vec![0, 4, 5, 6]);
        let g3 = trim(&ctx, &build_singleton(&ctx, 3).unwrap(), &s).unwrap();
        assert_eq!(g3.owner, vec![3, 8]);
        assert!(!g3.diagonal_labels().contains(&vec![8]));
        assert!(g3
            .nodes
            .iter()
            .any(|n| n.label == 3 && n.valence == Valence::new(0, 1)));
        let g = glue(&g3, &g4, 3, 4).unwrap();
        let val = |label: Vertex| -> Vec<Valence> {
            g.nodes
                .iter()
                .filter(|n| n.label == label && n.valence != Valence::ONE)
                .map(|n| n.valence)
                .collect()
        };
        assert!(val(3).contains(&Valence::new(2, 0)));
        assert!(val(4).contains(&Valence::new(1, 2)));
    }

    #[test]
    fn trim_is_identity_without_absorbed_neighbors() {
        let ctx = ctx0();
        let g = build_singleton(&ctx, 4).unwrap();
        let t = trim(&ctx, &g, &[3, 4]).unwrap();
        assert_eq!(t.signature(), g.signature());
    }

    #[test]
    fn worked_example_graph() {
        let ctx = ctx0();
        let g = build_snake_graph(&ctx, &[0, 3, 4, 5, 6, 8]).unwrap();
        assert_eq!(
            g.diagonal_labels(),
            vec![vec![0, 4, 5, 6, 7], vec![0, 5, 6, 7], vec![1, 2], vec![2]]
        );
        let shared: Vec<&SnakeEdge> = g
            .edges
            .iter()
            .filter(|e| e.origin == EdgeOrigin::Shared)
            .collect();
        assert_eq!(shared.len(), 1);
        assert_eq!(shared[0].kind, EdgeKind::Internal);
        for e in g.edges.iter().filter(|e| e.weight == y(&[1, 2])) {
            assert_eq!(e.kind, EdgeKind::Boundary);
        }
        assert_eq!(
            ell(&g).to_expr().to_string(),
            "Y[{0,4,5,6,7}]*Y[{0,5,6,7}]*Y[{1,2}]*Y[{2}]"
        );
    }

    #[test]
    fn member_sets_are_single_hyperedges() {
        let ctx = ctx0();
        let g = build_snake_graph(&ctx, &[5, 6]).unwrap();
        assert_eq!(g.edges.len(), 1);
        let labels: Vec<Vertex> = g.nodes.iter().map(|n| n.label).collect();
        assert_eq!(labels, vec![0, 4, 7]);
        assert!(ell(&g).exponents.is_one());
    }

    #[test]
    fn not_weakly_rooted_is_rejected() {
        let ctx = crate::fixtures::context(
            &[(1, 2), (2, 3), (3, 4)],
            &[&[1], &[3], &[1, 2, 3], &[1, 2, 3, 4]],
        )
        .unwrap();
        assert_eq!(
            ctx.classify_set(&[2, 3, 4]).unwrap().tag,
            SetClass::NotWeaklyRooted
        );
        assert!(matches!(
            build_snake_graph(&ctx, &[2, 3, 4]),
            Err(Error::NotWeaklyRooted(_))
        ));
        assert!(build_snake_graph(&path3(), &[1]).is_ok());
    }
}
