//! Complete hyper T-paths: conversion from admissible matchings, validation and weights.

use crate::cluster::{vset, ClusterContext, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::matcher::{constraints, is_admissible, Condition, Matching};
use crate::snake::{build_snake_graph, SnakeGraph, Valence, Weight};
use crate::symbolic::{Monomial, RationalExpr};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Odd connections come from matching edges, even ones from diagonals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// From an edge; carries a weight.
    Odd,
    /// From a diagonal; carries a label.
    Even,
}

/// A node of a hyper T-path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TNode {
    /// Id of the corresponding snake-graph node.
    pub id: usize,
    /// Vertex of Γ′ labeling the node.
    pub label: Vertex,
    /// Valence copied from the snake graph.
    pub valence: Valence,
    /// Whether the node is a boundary node.
    pub boundary: bool,
}

/// A connection: a hyperedge on the nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connection {
    /// Odd or even.
    pub parity: Parity,
    /// Id of the edge (odd) or diagonal (even) it corresponds to.
    pub source: usize,
    /// Sorted node ids.
    pub ends: Vec<usize>,
    /// Weight for odd connections, `Y` of the label for even ones.
    pub weight: Weight,
}

impl Connection {
    /// `W(c)`.
    pub fn w(&self) -> &[Vertex] {
        self.weight.w_set()
    }
}

/// A complete hyper T-path candidate for a set `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperTPath {
    /// The set `S`.
    pub set: VertexSet,
    /// Nodes, indexed by id.
    pub nodes: Vec<TNode>,
    /// Odd connections.
    pub odd: Vec<Connection>,
    /// Even connections.
    pub even: Vec<Connection>,
}

impl HyperTPath {
    /// Odd weights over even labels.
    pub fn weight(&self) -> RationalExpr {
        let prod = |cs: &[Connection]| {
            cs.iter()
                .fold(Monomial::one(), |acc, c| acc.mul(&c.weight.monomial()))
        };
        prod(&self.odd)
            .to_expr()
            .div(&prod(&self.even).to_expr())
            .expect("monomials are nonzero")
    }

    /// Edge ids behind the odd connections, sorted.
    pub fn odd_sources(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.odd.iter().map(|c| c.source).collect();
        v.sort_unstable();
        v
    }

    fn all(&self) -> impl Iterator<Item = &Connection> {
        self.odd.iter().chain(self.even.iter())
    }
}

/// Converts an admissible matching of `g` into its hyper T-path.
pub fn matching_to_tpath(g: &SnakeGraph, p: &Matching) -> Result<HyperTPath> {
    let report = is_admissible(g, &p.edges)?;
    if !report.ok {
        let v = report
            .first_violation
            .expect("failed reports carry a witness");
        return Err(Error::NotAdmissible(format!(
            "{} on edges {:?}",
            v.condition, v.edges
        )));
    }
    Ok(structure_for(g, &p.edges))
}

/// The T-path structure of an arbitrary edge subset, without checking admissibility.
pub fn structure_for(g: &SnakeGraph, edges: &[usize]) -> HyperTPath {
    let nd = g.node_diagonals();
    let nodes = g
        .nodes
        .iter()
        .map(|n| TNode {
            id: n.id,
            label: n.label,
            valence: n.valence,
            boundary: nd[n.id].is_empty(),
        })
        .collect();
    let mut ids = edges.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let odd = ids
        .iter()
        .map(|&e| Connection {
            parity: Parity::Odd,
            source: e,
            ends: g.edges[e].endpoints.clone(),
            weight: g.edges[e].weight.clone(),
        })
        .collect();
    let even = g
        .diagonals
        .iter()
        .map(|d| Connection {
            parity: Parity::Even,
            source: d.id,
            ends: d.endpoints.clone(),
            weight: Weight::Y(d.label.clone()),
        })
        .collect();
    HyperTPath {
        set: g.owner.clone(),
        nodes,
        odd,
        even,
    }
}

/// One failed requirement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TPathFailure {
    /// Item number of the requirement; 0 for connectivity.
    pub item: u8,
    /// Human-readable description.
    pub detail: String,
    /// Witnessing node ids.
    pub nodes: Vec<usize>,
    /// Witnessing connections as `(parity, source)`.
    pub connections: Vec<(Parity, usize)>,
}

/// Outcome of [`validate_tpath`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TPathReport {
    /// Whether every checked requirement holds.
    pub valid: bool,
    /// Whether the diagram is connected.
    pub connected: bool,
    /// Every failure found.
    pub failures: Vec<TPathFailure>,
    /// Boundary pairs whose paths were not fully explored under the strict path cap.
    pub unexplored_pairs: Vec<(usize, usize)>,
}

impl TPathReport {
    /// Sorted, deduplicated item numbers of the failures.
    pub fn failed_items(&self) -> Vec<u8> {
        let set: BTreeSet<u8> = self.failures.iter().map(|f| f.item).collect();
        set.into_iter().collect()
    }
}

/// Options for [`validate_against`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationOptions {
    /// Also check the path-label items 5 and 6.
    pub strict: bool,
    /// Maximum number of paths explored per boundary pair in strict mode.
    pub path_cap: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            strict: false,
            path_cap: 10_000,
        }
    }
}

/// Validates `alpha` as a complete hyper T-path for `S`.
pub fn validate_tpath(
    ctx: &ClusterContext,
    s: &[Vertex],
    alpha: &HyperTPath,
    strict: bool,
) -> Result<TPathReport> {
    let g = build_snake_graph(ctx, s)?;
    Ok(validate_against(
        ctx,
        &g,
        alpha,
        ValidationOptions {
            strict,
            ..ValidationOptions::default()
        },
    ))
}

/// Validates `alpha` against a prebuilt snake graph `g` of `S`.
pub fn validate_against(
    ctx: &ClusterContext,
    g: &SnakeGraph,
    alpha: &HyperTPath,
    opts: ValidationOptions,
) -> TPathReport {
    let mut fails: Vec<TPathFailure> = Vec::new();
    let n = alpha.nodes.len();
    let nodes_match = n == g.nodes.len()
        && alpha.nodes.iter().enumerate().all(|(i, t)| {
            t.id == i && t.label == g.nodes[i].label && t.valence == g.nodes[i].valence
        });
    if !nodes_match {
        record(
            &mut fails,
            1,
            "nodes do not correspond to the snake graph".into(),
            Vec::new(),
            Vec::new(),
        );
        return finish(fails, false, Vec::new());
    }

    // Item 1: incidences and weights mirror the snake graph.
    let mut seen: BTreeSet<(Parity, usize)> = BTreeSet::new();
    for c in alpha.all() {
        let key = (c.parity, c.source);
        let ok = seen.insert(key)
            && match c.parity {
                Parity::Odd => g
                    .edges
                    .get(c.source)
                    .is_some_and(|e| e.endpoints == c.ends && e.weight == c.weight),
                Parity::Even => g.diagonals.get(c.source).is_some_and(|d| {
                    d.endpoints == c.ends && c.weight == Weight::Y(d.label.clone())
                }),
            };
        if !ok {
            record(
                &mut fails,
                1,
                format!(
                    "{:?} connection {} has the wrong incidences",
                    c.parity, c.source
                ),
                c.ends.clone(),
                vec![key],
            );
        }
    }
    if alpha.even.len() != g.diagonals.len() {
        record(
            &mut fails,
            1,
            "every diagonal must appear as an even connection".into(),
            Vec::new(),
            Vec::new(),
        );
    }
    if fails.iter().any(|f| f.item == 1) {
        return finish(fails, false, Vec::new());
    }

    let parts = components(alpha);
    let connected = parts.len() <= 1;
    for part in parts
        .iter()
        .filter(|p| !p.iter().any(|&x| alpha.nodes[x].boundary))
    {
        record(
            &mut fails,
            0,
            "a component of the diagram has no boundary node".into(),
            part.clone(),
            Vec::new(),
        );
    }

    let mut odd_at = vec![0u32; n];
    let mut even_at = vec![0u32; n];
    for c in &alpha.odd {
        for &x in &c.ends {
            odd_at[x] += 1;
        }
    }
    for c in &alpha.even {
        for &x in &c.ends {
            even_at[x] += 1;
        }
    }
    // Item 2: boundary nodes.
    let nbr = ctx.set_neighbors(&alpha.set);
    for &x in &nbr {
        let at: Vec<usize> = alpha
            .nodes
            .iter()
            .filter(|t| t.boundary && odd_at[t.id] > 0 && t.label == x)
            .map(|t| t.id)
            .collect();
        if at.len() != 1 {
            record(
                &mut fails,
                2,
                format!(
                    "{} boundary nodes labeled {}",
                    at.len(),
                    ctx.extended().display(x)
                ),
                at,
                Vec::new(),
            );
        }
    }
    for t in alpha
        .nodes
        .iter()
        .filter(|t| t.boundary && odd_at[t.id] > 0)
    {
        if !vset::contains(&nbr, t.label) && t.valence.a != 0 {
            record(
                &mut fails,
                2,
                format!(
                    "boundary node {} is neither a neighbor of S nor optional",
                    t.id
                ),
                vec![t.id],
                Vec::new(),
            );
        }
    }

    // Items 3 and 4: incidence counts.
    for t in &alpha.nodes {
        let odd_ok = t.valence.admits(odd_at[t.id]);
        if t.boundary && (!odd_ok || even_at[t.id] != 0) {
            record(
                &mut fails,
                3,
                format!(
                    "boundary node {} meets {} odd and {} even",
                    t.id, odd_at[t.id], even_at[t.id]
                ),
                vec![t.id],
                Vec::new(),
            );
        }
        if !t.boundary && (!odd_ok || even_at[t.id] != t.valence.a) {
            record(
                &mut fails,
                4,
                format!(
                    "internal node {} meets {} odd and {} even",
                    t.id, odd_at[t.id], even_at[t.id]
                ),
                vec![t.id],
                Vec::new(),
            );
        }
    }
    let mut chosen = vec![false; g.edges.len()];
    for c in &alpha.odd {
        chosen[c.source] = true;
    }
    if !g.splits_along_seams(&chosen) {
        let seam_nodes: Vec<usize> = g.seams.iter().flat_map(|s| s.nodes).collect();
        record(
            &mut fails,
            4,
            "odd connections do not split along the glued seams".into(),
            seam_nodes,
            Vec::new(),
        );
    }

    // Item 8: no cycle o1, e2, o3 with nested weights.
    for (i, o1) in alpha.odd.iter().enumerate() {
        for o3 in &alpha.odd[i + 1..] {
            for (a, b) in [(o1, o3), (o3, o1)] {
                for e2 in &alpha.even {
                    if !(vset::is_proper_subset(a.w(), e2.w())
                        && vset::is_proper_subset(e2.w(), b.w()))
                    {
                        continue;
                    }
                    if let Some(cycle) = triangle_cycle(a, b, e2) {
                        record(
                            &mut fails,
                            8,
                            "cycle through two odd and one even connection with nested weights"
                                .into(),
                            cycle,
                            vec![
                                (Parity::Odd, a.source),
                                (Parity::Even, e2.source),
                                (Parity::Odd, b.source),
                            ],
                        );
                    }
                }
            }
        }
    }

    // Item 9: no cycle o1, e1, o2, e2 with W(o1)=W(e1), W(o2)=W(e2).
    for (i, o1) in alpha.odd.iter().enumerate() {
        for o2 in &alpha.odd[i + 1..] {
            for e1 in alpha.even.iter().filter(|e| e.w() == o1.w()) {
                let nested = |e: &&Connection| {
                    vset::is_subset(e.w(), e1.w()) || vset::is_subset(e1.w(), e.w())
                };
                for e2 in alpha
                    .even
                    .iter()
                    .filter(|e| e.source != e1.source && e.w() == o2.w())
                    .filter(nested)
                {
                    if let Some(cycle) = square_cycle([o1, e1, o2, e2]) {
                        record(
                            &mut fails,
                            9,
                            "cycle through alternating connections with matching weights".into(),
                            cycle,
                            vec![
                                (Parity::Odd, o1.source),
                                (Parity::Even, e1.source),
                                (Parity::Odd, o2.source),
                                (Parity::Even, e2.source),
                            ],
                        );
                    }
                }
            }
        }
    }

    // Items 10 and 11: paired edges appear together or not at all.
    let rules = constraints(g);
    for r in &rules.ties {
        if chosen[r.e1] != chosen[r.e2] {
            let item = if r.condition == Condition::Two {
                10
            } else {
                11
            };
            record(
                &mut fails,
                item,
                format!("edges {} and {} must appear together", r.e1, r.e2),
                Vec::new(),
                vec![(Parity::Odd, r.e1), (Parity::Odd, r.e2)],
            );
        }
    }

    let mut unexplored = Vec::new();
    if opts.strict {
        unexplored = strict_items(ctx, alpha, opts.path_cap, &mut fails);
    }
    finish(fails, connected, unexplored)
}

fn record(
    fails: &mut Vec<TPathFailure>,
    item: u8,
    detail: String,
    nodes: Vec<usize>,
    connections: Vec<(Parity, usize)>,
) {
    fails.push(TPathFailure {
        item,
        detail,
        nodes,
        connections,
    });
}

fn finish(
    failures: Vec<TPathFailure>,
    connected: bool,
    unexplored_pairs: Vec<(usize, usize)>,
) -> TPathReport {
    TPathReport {
        valid: failures.is_empty(),
        connected,
        failures,
        unexplored_pairs,
    }
}

/// Connected components of the nodes met by some connection.
pub fn components(alpha: &HyperTPath) -> Vec<Vec<usize>> {
    let n = alpha.nodes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut touched = vec![false; n];
    for c in alpha.all() {
        for &x in &c.ends {
            touched[x] = true;
        }
        for w in c.ends.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> =
        std::collections::BTreeMap::new();
    for x in (0..n).filter(|&x| touched[x]) {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

fn triangle_cycle(a: &Connection, b: &Connection, e: &Connection) -> Option<Vec<usize>> {
    for &x in a.ends.iter().filter(|x| b.ends.contains(x)) {
        for &y in b.ends.iter().filter(|&&y| y != x && e.ends.contains(&y)) {
            if let Some(&z) = e
                .ends
                .iter()
                .find(|&&z| z != x && z != y && a.ends.contains(&z))
            {
                return Some(vec![x, y, z]);
            }
        }
    }
    None
}

fn square_cycle(cs: [&Connection; 4]) -> Option<Vec<usize>> {
    let meet = |i: usize| -> Vec<usize> {
        let (p, q) = (cs[i], cs[(i + 1) % 4]);
        p.ends
            .iter()
            .copied()
            .filter(|x| q.ends.contains(x))
            .collect()
    };
    let m: Vec<Vec<usize>> = (0..4).map(meet).collect();
    for &a in &m[0] {
        for &b in m[1].iter().filter(|&&b| b != a) {
            for &c in m[2].iter().filter(|&&c| c != a && c != b) {
                if let Some(&d) = m[3].iter().find(|&&d| d != a && d != b && d != c) {
                    return Some(vec![d, a, b, c]);
                }
            }
        }
    }
    None
}

/// Expected even labels along a boundary-to-boundary path, when items 5 or 6 apply.
fn expected_labels(
    ctx: &ClusterContext,
    s: &[Vertex],
    x: Vertex,
    y: Vertex,
) -> Option<(u8, Vec<VertexSet>)> {
    let below_s = |z: Vertex| s.iter().any(|&v| ctx.less(z, v));
    let path = ctx.extended().path(x, y);
    let i_of = |z: Vertex| ctx.i_of(z).to_vec();
    if below_s(x) && below_s(y) {
        let join = *path
            .iter()
            .find(|&&z| path.iter().all(|&u| u == z || ctx.less(u, z)))?;
        return Some((
            5,
            path.iter()
                .filter(|&&z| z != join)
                .map(|&z| i_of(z))
                .collect(),
        ));
    }
    let top = ctx.max_of_connected(s);
    if below_s(x) && ctx.less(top, y) && ctx.tree().contains(y) && path.len() >= 3 {
        return Some((6, path[..path.len() - 2].iter().map(|&z| i_of(z)).collect()));
    }
    None
}

fn strict_items(
    ctx: &ClusterContext,
    alpha: &HyperTPath,
    cap: usize,
    fails: &mut Vec<TPathFailure>,
) -> Vec<(usize, usize)> {
    let conns: Vec<&Connection> = alpha.all().collect();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); alpha.nodes.len()];
    for (k, c) in conns.iter().enumerate() {
        for &x in &c.ends {
            at[x].push(k);
        }
    }
    let nbr = ctx.set_neighbors(&alpha.set);
    let ends: Vec<&TNode> = alpha
        .nodes
        .iter()
        .filter(|t| t.boundary && vset::contains(&nbr, t.label))
        .collect();
    let mut unexplored = Vec::new();
    for &p in &ends {
        for &q in &ends {
            if p.id == q.id {
                continue;
            }
            let Some((item, want)) = expected_labels(ctx, &alpha.set, p.label, q.label) else {
                continue;
            };
            let mut walker = PathWalker {
                conns: &conns,
                at: &at,
                target: q.id,
                used_nodes: vec![false; alpha.nodes.len()],
                used_conns: vec![false; conns.len()],
                trail: Vec::new(),
                budget: cap,
                bad: None,
                want: &want,
            };
            walker.used_nodes[p.id] = true;
            walker.walk(p.id);
            if let Some(trail) = walker.bad {
                record(
                    fails,
                    item,
                    format!(
                        "a path from {} to {} uses even labels out of order",
                        ctx.extended().display(p.label),
                        ctx.extended().display(q.label)
                    ),
                    vec![p.id, q.id],
                    trail
                        .iter()
                        .map(|&k| (conns[k].parity, conns[k].source))
                        .collect(),
                );
            } else if walker.budget == 0 {
                unexplored.push((p.id, q.id));
            }
        }
    }
    unexplored
}

struct PathWalker<'a> {
    conns: &'a [&'a Connection],
    at: &'a [Vec<usize>],
    target: usize,
    used_nodes: Vec<bool>,
    used_conns: Vec<bool>,
    trail: Vec<usize>,
    budget: usize,
    bad: Option<Vec<usize>>,
    want: &'a [VertexSet],
}

impl PathWalker<'_> {
    fn walk(&mut self, x: usize) {
        if self.bad.is_some() || self.budget == 0 {
            return;
        }
        if x == self.target {
            if self.trail.len().is_multiple_of(2) {
                return;
            }
            self.budget -= 1;
            let labels: Vec<&[Vertex]> = self
                .trail
                .iter()
                .filter(|&&k| self.conns[k].parity == Parity::Even)
                .map(|&k| self.conns[k].w())
                .collect();
            let expected: Vec<&[Vertex]> = self.want.iter().map(Vec::as_slice).collect();
            if labels != expected {
                self.bad = Some(self.trail.clone());
            }
            return;
        }
        for &k in &self.at[x] {
            let want = if self.trail.len().is_multiple_of(2) {
                Parity::Odd
            } else {
                Parity::Even
            };
            if self.used_conns[k] || self.conns[k].parity != want {
                continue;
            }
            self.used_conns[k] = true;
            self.trail.push(k);
            for &y in &self.conns[k].ends {
                if !self.used_nodes[y] {
                    self.used_nodes[y] = true;
                    self.walk(y);
                    self.used_nodes[y] = false;
                }
            }
            self.trail.pop();
            self.used_conns[k] = false;
        }
    }
}
