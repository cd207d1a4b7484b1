//! JSON input and output, Graphviz DOT and TikZ renderings.

use crate::cluster::{ClusterContext, NestedCollection, Tree, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::matcher::{weight, Matching};
use crate::snake::SnakeGraph;
use crate::tpath::{HyperTPath, Parity};
use crate::typea::{PlanarSnakeGraph, PolyArc, Triangulation};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// The JSON form of a tree with a nested collection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextInput {
    /// Vertex labels; taken from the edges and members when empty.
    #[serde(default)]
    pub vertices: Vec<Vertex>,
    /// Tree edges.
    pub edges: Vec<(Vertex, Vertex)>,
    /// Members of the maximal nested collection.
    pub nested_collection: Vec<VertexSet>,
}

impl ContextInput {
    /// Parses the JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Renders the JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    /// The input describing an existing context, in canonical order.
    pub fn from_context(ctx: &ClusterContext) -> Self {
        let mut nested_collection = ctx.collection().sets().to_vec();
        nested_collection.sort();
        ContextInput {
            vertices: ctx.tree().vertices().to_vec(),
            edges: ctx.tree().edges().to_vec(),
            nested_collection,
        }
    }

    /// The tree alone.
    pub fn tree(&self) -> Result<Tree> {
        let mut vertices = self.vertices.clone();
        if vertices.is_empty() {
            vertices = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
            vertices.extend(self.nested_collection.iter().flatten());
            vertices.sort_unstable();
            vertices.dedup();
        }
        Tree::new(vertices, self.edges.clone())
    }

    /// Builds the context, validating tree and collection.
    pub fn to_context(&self) -> Result<ClusterContext> {
        ClusterContext::new(
            self.tree()?,
            NestedCollection::new(self.nested_collection.clone()),
        )
    }
}

/// Pretty JSON dump of a snake graph.
pub fn snake_to_json(g: &SnakeGraph) -> String {
    serde_json::to_string_pretty(g).expect("plain data serializes")
}

/// Reads a snake graph dump.
pub fn snake_from_json(text: &str) -> Result<SnakeGraph> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// A matching listed with its weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingRecord {
    /// Edge ids.
    pub edges: Vec<usize>,
    /// Weight monomial in canonical text form.
    pub weight: String,
}

/// JSON listing of matchings with their weights.
pub fn matchings_to_json(g: &SnakeGraph, ms: &[Matching]) -> String {
    let records: Vec<MatchingRecord> = ms
        .iter()
        .map(|m| MatchingRecord {
            edges: m.edges.clone(),
            weight: weight(g, m).to_expr().to_string(),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("plain data serializes")
}

/// Pretty JSON dump of a hyper T-path.
pub fn tpath_to_json(alpha: &HyperTPath) -> String {
    serde_json::to_string_pretty(alpha).expect("plain data serializes")
}

/// Reads a hyper T-path dump.
pub fn tpath_from_json(text: &str) -> Result<HyperTPath> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn hyper_dot(
    out: &mut String,
    prefix: &str,
    ends: &[usize],
    label: &str,
    dashed: bool,
    bold: bool,
) {
    let mut style = Vec::new();
    if dashed {
        style.push("style=dashed");
    }
    if bold {
        style.push("penwidth=2.5");
    }
    let style = style.join(", ");
    let sep = if style.is_empty() { "" } else { ", " };
    if ends.len() == 2 {
        let _ = writeln!(
            out,
            "  n{} -- n{} [label=\"{}\"{sep}{style}];",
            ends[0],
            ends[1],
            escape(label)
        );
    } else {
        let _ = writeln!(
            out,
            "  {prefix} [shape=point, xlabel=\"{}\"];",
            escape(label)
        );
        let attrs = if style.is_empty() {
            String::new()
        } else {
            format!(" [{style}]")
        };
        for &x in ends {
            let _ = writeln!(out, "  n{x} -- {prefix}{attrs};");
        }
    }
}

/// Graphviz rendering of a snake graph; hyperedges and diagonals pass through junction
/// points, diagonals are dashed and edges of `highlight` are bold.
pub fn snake_to_dot(ctx: &ClusterContext, g: &SnakeGraph, highlight: Option<&Matching>) -> String {
    let mut out = String::from("graph snake {\n  node [shape=circle];\n");
    for n in &g.nodes {
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\\n{}\"];",
            n.id,
            escape(&ctx.extended().display(n.label)),
            n.valence
        );
    }
    for e in &g.edges {
        let bold = highlight.is_some_and(|m| m.contains(e.id));
        hyper_dot(
            &mut out,
            &format!("e{}", e.id),
            &e.endpoints,
            &e.weight.to_string(),
            false,
            bold,
        );
    }
    for d in &g.diagonals {
        let label = format!("I[{}]", crate::cluster::vset::render(&d.label));
        hyper_dot(
            &mut out,
            &format!("d{}", d.id),
            &d.endpoints,
            &label,
            true,
            false,
        );
    }
    out.push_str("}\n");
    out
}

/// Graphviz rendering of a hyper T-path: odd connections solid, even dashed.
pub fn tpath_to_dot(ctx: &ClusterContext, alpha: &HyperTPath) -> String {
    let mut out = String::from("graph tpath {\n  node [shape=circle];\n");
    for t in &alpha.nodes {
        let shape = if t.boundary {
            ", shape=doublecircle"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\"{shape}];",
            t.id,
            escape(&ctx.extended().display(t.label))
        );
    }
    for c in &alpha.odd {
        hyper_dot(
            &mut out,
            &format!("o{}", c.source),
            &c.ends,
            &c.weight.to_string(),
            false,
            false,
        );
    }
    for c in &alpha.even {
        hyper_dot(
            &mut out,
            &format!("v{}", c.source),
            &c.ends,
            &c.weight.to_string(),
            true,
            false,
        );
    }
    out.push_str("}\n");
    out
}

fn tikz_label(ctx: &ClusterContext, x: Vertex) -> String {
    let s = ctx.extended().display(x);
    match s.strip_suffix('′') {
        Some(base) => format!("{base}'"),
        None => s,
    }
}

fn tikz_weight(w: &crate::snake::Weight) -> String {
    use crate::snake::Weight;
    let set = |c: &[Vertex]| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("");
    match w {
        Weight::Unit => String::new(),
        Weight::Y(c) => format!("$Y_{{{}}}$", set(c)),
        Weight::Y2(c) => format!("$Y_{{{}}}^2$", set(c)),
    }
}

fn circle_layout(n: usize) -> Vec<(f64, f64)> {
    let r = 1.0 + n as f64 * 0.35;
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n.max(1) as f64;
            (r * t.cos(), r * t.sin())
        })
        .collect()
}

fn tikz_hyper(out: &mut String, pos: &[(f64, f64)], ends: &[usize], label: &str, style: &str) {
    if ends.len() == 2 {
        let (a, b) = (ends[0], ends[1]);
        let _ = writeln!(out, "  \\draw[{style}] (n{a}) -- node[midway, fill=white, inner sep=1pt] {{\\scriptsize {label}}} (n{b});");
        return;
    }
    let k = ends.len() as f64;
    let cx = ends.iter().map(|&x| pos[x].0).sum::<f64>() / k;
    let cy = ends.iter().map(|&x| pos[x].1).sum::<f64>() / k;
    let _ = writeln!(out, "  \\coordinate (j) at ({cx:.2},{cy:.2});");
    for &x in ends {
        let _ = writeln!(out, "  \\draw[{style}] (n{x}) -- (j);");
    }
    let _ = writeln!(
        out,
        "  \\node[fill=white, inner sep=1pt] at (j) {{\\scriptsize {label}}};"
    );
}

/// TikZ picture of a snake graph; diagonals dashed, edges of `highlight` thick.
pub fn snake_to_tikz(ctx: &ClusterContext, g: &SnakeGraph, highlight: Option<&Matching>) -> String {
    let pos = circle_layout(g.nodes.len());
    let mut out = String::from("\\begin{tikzpicture}[scale=0.8]\n");
    for n in &g.nodes {
        let (x, y) = pos[n.id];
        let _ = writeln!(
            out,
            "  \\node (n{}) at ({x:.2},{y:.2}) {{${}$}};",
            n.id,
            tikz_label(ctx, n.label)
        );
    }
    for e in &g.edges {
        let style = if highlight.is_some_and(|m| m.contains(e.id)) {
            "very thick"
        } else {
            ""
        };
        tikz_hyper(&mut out, &pos, &e.endpoints, &tikz_weight(&e.weight), style);
    }
    for d in &g.diagonals {
        let label = tikz_weight(&crate::snake::Weight::Y(d.label.clone())).replace('Y', "I");
        tikz_hyper(&mut out, &pos, &d.endpoints, &label, "dashed");
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

/// TikZ picture of a hyper T-path: odd connections solid, even dashed.
pub fn tpath_to_tikz(ctx: &ClusterContext, alpha: &HyperTPath) -> String {
    let pos = circle_layout(alpha.nodes.len());
    let mut out = String::from("\\begin{tikzpicture}[scale=0.8]\n");
    for t in &alpha.nodes {
        let (x, y) = pos[t.id];
        let shape = if t.boundary {
            "[draw, circle, inner sep=1pt]"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  \\node{shape} (n{}) at ({x:.2},{y:.2}) {{${}$}};",
            t.id,
            tikz_label(ctx, t.label)
        );
    }
    for c in alpha.odd.iter().chain(alpha.even.iter()) {
        let style = if c.parity == Parity::Even {
            "dashed"
        } else {
            ""
        };
        tikz_hyper(&mut out, &pos, &c.ends, &tikz_weight(&c.weight), style);
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

/// Grid coordinates for the nodes of a polygon snake graph.
pub fn planar_layout(g: &PlanarSnakeGraph) -> Vec<(i64, i64)> {
    let mut pos: BTreeMap<usize, (i64, i64)> = BTreeMap::new();
    let square = [(0, 0), (1, 0), (1, 1), (0, 1)];
    for (k, tile) in g.tiles.iter().enumerate() {
        if k == 0 {
            for (i, &c) in tile.corners.iter().enumerate() {
                pos.insert(c, square[i]);
            }
            continue;
        }
        let placed: Vec<usize> = tile
            .corners
            .iter()
            .copied()
            .filter(|c| pos.contains_key(c))
            .collect();
        let (a, b) = (pos[&placed[0]], pos[&placed[1]]);
        let prev = &g.tiles[k - 1];
        let (px, py) = prev
            .corners
            .iter()
            .fold((0, 0), |acc, c| (acc.0 + pos[c].0, acc.1 + pos[c].1));
        let (sx, sy) = (a.0 + b.0, a.1 + b.1);
        let (dx, dy) = if a.0 == b.0 {
            ((sx * 2 - px).signum(), 0)
        } else {
            (0, (sy * 2 - py).signum())
        };
        for i in 0..4 {
            let c = tile.corners[i];
            if pos.contains_key(&c) {
                continue;
            }
            let left = tile.corners[(i + 3) % 4];
            let right = tile.corners[(i + 1) % 4];
            let anchor = [left, right].into_iter().find(|x| placed.contains(x));
            let p = match anchor {
                Some(x) => (pos[&x].0 + dx, pos[&x].1 + dy),
                None => {
                    let other = tile.corners[(i + 2) % 4];
                    let q = if pos.contains_key(&left) {
                        pos[&left]
                    } else {
                        pos[&other]
                    };
                    (q.0 + dx, q.1 + dy)
                }
            };
            pos.insert(c, p);
        }
    }
    (0..g.labels.len())
        .map(|n| pos.get(&n).copied().unwrap_or((0, 0)))
        .collect()
}

/// TikZ picture of a polygon snake graph with tile diagonals dashed.
pub fn planar_snake_to_tikz(g: &PlanarSnakeGraph) -> String {
    let pos = planar_layout(g);
    let mut out = String::from("\\begin{tikzpicture}[scale=1.2]\n");
    for (n, &(x, y)) in pos.iter().enumerate() {
        let _ = writeln!(out, "  \\node[circle, fill, inner sep=1pt, label={{below left:\\tiny {}}}] (n{n}) at ({x},{y}) {{}};", g.labels[n]);
    }
    for e in &g.edges {
        let _ = writeln!(
            out,
            "  \\draw (n{}) -- node[midway, fill=white, inner sep=1pt] {{\\tiny $x_{{{}{}}}$}} (n{});",
            e.ends.0, e.arc.0, e.arc.1, e.ends.1
        );
    }
    for t in &g.tiles {
        let _ = writeln!(
            out,
            "  \\draw[dashed] (n{}) -- node[midway, fill=white, inner sep=1pt] {{\\tiny $\\tau_{{{}{}}}$}} (n{});",
            t.corners[0], t.diagonal.0, t.diagonal.1, t.corners[2]
        );
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

/// TikZ picture of a triangulated polygon with `gamma` drawn in red.
pub fn polygon_to_tikz(t: &Triangulation, gamma: Option<PolyArc>) -> String {
    let n = t.polygon().n;
    let mut out = String::from("\\begin{tikzpicture}[scale=2]\n");
    for k in 1..=n {
        let a = 90.0 - 360.0 * (k - 1) as f64 / n as f64;
        let _ = writeln!(out, "  \\node[circle, fill, inner sep=1pt, label={{{a:.0}:{k}}}] (p{k}) at ({a:.1}:1) {{}};");
    }
    for (a, b) in t.polygon().sides() {
        let _ = writeln!(out, "  \\draw (p{a}) -- (p{b});");
    }
    for &(a, b) in t.arcs() {
        let _ = writeln!(out, "  \\draw (p{a}) -- (p{b});");
    }
    if let Some((a, b)) = gamma {
        let _ = writeln!(out, "  \\draw[red, thick] (p{a}) -- (p{b});");
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}
