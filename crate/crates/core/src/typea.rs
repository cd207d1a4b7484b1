//! Classical snake graphs of triangulated polygons and the bridge from path graphs.

use crate::cluster::{vset, ClusterContext, Vertex, VertexSet};
use crate::counting::continuant;
use crate::error::{Error, Result};
use crate::symbolic::RationalExpr;
use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// An arc `(a, b)` with `a < b` between polygon vertices.
pub type PolyArc = (usize, usize);

/// Normalizes an arc so the smaller endpoint comes first.
pub fn arc(a: usize, b: usize) -> PolyArc {
    (a.min(b), a.max(b))
}

/// A convex polygon with vertices `1..=n` in cyclic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    /// Number of vertices.
    pub n: usize,
}

impl Polygon {
    /// A polygon on `n ≥ 3` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidTriangulation(format!(
                "a polygon needs 3 vertices, got {n}"
            )));
        }
        Ok(Polygon { n })
    }

    /// Whether `x` is a vertex.
    pub fn has_vertex(&self, x: usize) -> bool {
        (1..=self.n).contains(&x)
    }

    /// Whether `a` and `b` are consecutive on the boundary.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        let (a, b) = arc(a, b);
        b - a == 1 || (a == 1 && b == self.n)
    }

    /// Whether `x` lies strictly inside the cyclic interval from `a` to `b`, going up.
    pub fn strictly_between(&self, a: usize, b: usize, x: usize) -> bool {
        let up = |from: usize, to: usize| (to + self.n - from) % self.n;
        x != a && x != b && up(a, x) < up(a, b)
    }

    /// Whether two arcs cross in the interior.
    pub fn crosses(&self, p: PolyArc, q: PolyArc) -> bool {
        let inside = |x| self.strictly_between(p.0, p.1, x);
        let shared = p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1;
        !shared && inside(q.0) != inside(q.1)
    }

    /// The boundary sides.
    pub fn sides(&self) -> Vec<PolyArc> {
        (1..=self.n).map(|a| arc(a, a % self.n + 1)).collect()
    }
}

/// A triangulation with a weight on every internal arc and boundary side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    polygon: Polygon,
    arcs: Vec<PolyArc>,
    weights: BTreeMap<PolyArc, RationalExpr>,
}

impl Triangulation {
    /// Validates a maximal non-crossing set of diagonals; every arc and side gets the
    /// variable indexed by its two endpoints.
    pub fn new(polygon: Polygon, arcs: &[PolyArc]) -> Result<Self> {
        let mut list: Vec<PolyArc> = arcs.iter().map(|&(a, b)| arc(a, b)).collect();
        list.sort_unstable();
        list.dedup();
        if list.len() != arcs.len() {
            return Err(Error::InvalidTriangulation("repeated arc".into()));
        }
        for &(a, b) in &list {
            if !polygon.has_vertex(a) || !polygon.has_vertex(b) || a == b {
                return Err(Error::InvalidTriangulation(format!(
                    "({a}, {b}) is not a diagonal"
                )));
            }
            if polygon.adjacent(a, b) {
                return Err(Error::AdjacentEndpoints(a, b));
            }
        }
        for (i, &p) in list.iter().enumerate() {
            if let Some(&q) = list[i + 1..].iter().find(|&&q| polygon.crosses(p, q)) {
                return Err(Error::InvalidTriangulation(format!("{p:?} crosses {q:?}")));
            }
        }
        if list.len() != polygon.n - 3 {
            return Err(Error::InvalidTriangulation(format!(
                "{} arcs, a triangulation needs {}",
                list.len(),
                polygon.n - 3
            )));
        }
        let weights = list
            .iter()
            .chain(polygon.sides().iter())
            .map(|&(a, b)| ((a, b), RationalExpr::var(&[a as Vertex, b as Vertex])))
            .collect();
        Ok(Triangulation {
            polygon,
            arcs: list,
            weights,
        })
    }

    /// Replaces the weights of the given arcs or sides.
    pub fn with_weights(
        mut self,
        weights: impl IntoIterator<Item = (PolyArc, RationalExpr)>,
    ) -> Result<Self> {
        for ((a, b), w) in weights {
            let key = arc(a, b);
            if !self.weights.contains_key(&key) {
                return Err(Error::InvalidTriangulation(format!(
                    "{key:?} is neither an arc nor a side"
                )));
            }
            self.weights.insert(key, w);
        }
        Ok(self)
    }

    /// The polygon.
    pub fn polygon(&self) -> Polygon {
        self.polygon
    }

    /// The internal arcs, sorted.
    pub fn arcs(&self) -> &[PolyArc] {
        &self.arcs
    }

    /// Whether an arc belongs to the triangulation.
    pub fn contains(&self, a: PolyArc) -> bool {
        self.arcs.binary_search(&arc(a.0, a.1)).is_ok()
    }

    /// Weight of an arc or side.
    pub fn weight(&self, a: PolyArc) -> Option<&RationalExpr> {
        self.weights.get(&arc(a.0, a.1))
    }

    fn is_edge(&self, a: usize, b: usize) -> bool {
        self.polygon.adjacent(a, b) || self.contains(arc(a, b))
    }

    /// The triangles, as sorted vertex triples.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let n = self.polygon.n;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                if !self.is_edge(a, b) {
                    continue;
                }
                for c in b + 1..=n {
                    if self.is_edge(b, c) && self.is_edge(a, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// The two triangles bordering an internal arc; their third vertices.
    fn apexes(&self, t: PolyArc) -> Vec<usize> {
        self.triangles()
            .into_iter()
            .filter(|tri| tri.contains(&t.0) && tri.contains(&t.1))
            .map(|tri| {
                *tri.iter()
                    .find(|&&x| x != t.0 && x != t.1)
                    .expect("three vertices")
            })
            .collect()
    }

    /// Number of triangles at a vertex.
    pub fn triangles_at(&self, x: usize) -> usize {
        self.triangles().iter().filter(|t| t.contains(&x)).count()
    }
}

fn check_gamma(t: &Triangulation, gamma: PolyArc) -> Result<PolyArc> {
    let g = arc(gamma.0, gamma.1);
    let p = t.polygon;
    if !p.has_vertex(g.0) || !p.has_vertex(g.1) || g.0 == g.1 {
        return Err(Error::InvalidTriangulation(format!(
            "({}, {}) is not an arc",
            g.0, g.1
        )));
    }
    if p.adjacent(g.0, g.1) {
        return Err(Error::AdjacentEndpoints(g.0, g.1));
    }
    if t.contains(g) {
        return Err(Error::ArcInTriangulation(g.0, g.1));
    }
    Ok(g)
}

/// Arcs of `t` crossed by `gamma`, ordered from `gamma.0` to `gamma.1`.
pub fn crossing_sequence(t: &Triangulation, gamma: PolyArc) -> Result<Vec<PolyArc>> {
    let (a, b) = (gamma.0, gamma.1);
    check_gamma(t, gamma)?;
    let p = t.polygon;
    let mut crossed: Vec<(usize, PolyArc)> = t
        .arcs
        .iter()
        .filter(|&&q| p.crosses(arc(a, b), q))
        .map(|&q| {
            let near_a = (1..=p.n)
                .filter(|&x| {
                    x == a
                        || (x != q.0
                            && x != q.1
                            && p.strictly_between(q.0, q.1, x) == p.strictly_between(q.0, q.1, a))
                })
                .count();
            (near_a, q)
        })
        .collect();
    crossed.sort_unstable();
    Ok(crossed.into_iter().map(|(_, q)| q).collect())
}

/// One square tile of a polygon snake graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    /// The crossed arc drawn as the tile's diagonal.
    pub diagonal: PolyArc,
    /// Node ids of the four corners, in the polygon's cyclic order.
    pub corners: [usize; 4],
    /// Whether the tile is embedded with orientation opposite to the polygon.
    pub flipped: bool,
    /// Weight of the diagonal.
    pub weight: RationalExpr,
}

/// An edge of a polygon snake graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarEdge {
    /// Endpoint node ids.
    pub ends: (usize, usize),
    /// The arc or side of the polygon the edge stands for.
    pub arc: PolyArc,
    /// Weight.
    pub weight: RationalExpr,
}

/// The snake graph of an arc in a triangulated polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarSnakeGraph {
    /// Tiles in order along the arc.
    pub tiles: Vec<Tile>,
    /// Polygon vertex labeling each node.
    pub labels: Vec<usize>,
    /// Edges; the side shared by consecutive tiles appears once.
    pub edges: Vec<PlanarEdge>,
    /// The side shared by tiles `k` and `k+1`.
    pub glued: Vec<PolyArc>,
}

/// Builds the snake graph of `gamma`.
pub fn build_ms_snake_graph(t: &Triangulation, gamma: PolyArc) -> Result<PlanarSnakeGraph> {
    let seq = crossing_sequence(t, gamma)?;
    snake_from_crossings(t, &seq)
}

/// Builds the snake graph whose tiles are the given arcs, consecutive arcs bounding a
/// common triangle.
pub fn snake_from_crossings(t: &Triangulation, seq: &[PolyArc]) -> Result<PlanarSnakeGraph> {
    if seq.is_empty() {
        return Err(Error::InvalidTriangulation("no crossed arcs".into()));
    }
    let mut g = PlanarSnakeGraph {
        tiles: Vec::new(),
        labels: Vec::new(),
        edges: Vec::new(),
        glued: Vec::new(),
    };
    let mut prev: Option<(usize, BTreeMap<usize, usize>)> = None;
    for (k, &tau) in seq.iter().enumerate() {
        let tau = arc(tau.0, tau.1);
        if !t.contains(tau) {
            return Err(Error::InvalidTriangulation(format!(
                "{tau:?} is not in the triangulation"
            )));
        }
        let apex = t.apexes(tau);
        let mut quad = vec![tau.0, tau.1, apex[0], apex[1]];
        quad.sort_unstable();
        let sides: Vec<PolyArc> = (0..4).map(|i| arc(quad[i], quad[(i + 1) % 4])).collect();
        let shared = match &prev {
            None => None,
            Some((prev_k, _)) => {
                let q = arc(seq[*prev_k].0, seq[*prev_k].1);
                let third = [tau.0, tau.1]
                    .into_iter()
                    .find(|x| q.0 == *x || q.1 == *x)
                    .map(|common| {
                        let other_tau = if tau.0 == common { tau.1 } else { tau.0 };
                        let other_q = if q.0 == common { q.1 } else { q.0 };
                        arc(other_tau, other_q)
                    });
                match third {
                    Some(s) if sides.contains(&s) => Some(s),
                    _ => {
                        return Err(Error::InvalidTriangulation(format!(
                            "{q:?} and {tau:?} do not bound a common triangle"
                        )))
                    }
                }
            }
        };
        let mut corner_of: BTreeMap<usize, usize> = BTreeMap::new();
        if let (Some(s), Some((_, old))) = (shared, &prev) {
            corner_of.insert(s.0, old[&s.0]);
            corner_of.insert(s.1, old[&s.1]);
            g.glued.push(s);
        }
        for &x in &quad {
            corner_of.entry(x).or_insert_with(|| {
                g.labels.push(x);
                g.labels.len() - 1
            });
        }
        for &s in &sides {
            if Some(s) == shared {
                continue;
            }
            g.edges.push(PlanarEdge {
                ends: (corner_of[&s.0], corner_of[&s.1]),
                arc: s,
                weight: t.weight(s).expect("sides and arcs carry weights").clone(),
            });
        }
        g.tiles.push(Tile {
            diagonal: tau,
            corners: [
                corner_of[&quad[0]],
                corner_of[&quad[1]],
                corner_of[&quad[2]],
                corner_of[&quad[3]],
            ],
            flipped: k % 2 == 1,
            weight: t.weight(tau).expect("arcs carry weights").clone(),
        });
        prev = Some((k, corner_of));
    }
    Ok(g)
}

/// Every perfect matching, as sorted lists of edge ids.
pub fn perfect_matchings(g: &PlanarSnakeGraph) -> Vec<Vec<usize>> {
    fn go(
        g: &PlanarSnakeGraph,
        covered: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(x) = covered.iter().position(|c| !c) else {
            let mut m = chosen.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        for (id, e) in g.edges.iter().enumerate() {
            let y = if e.ends.0 == x {
                e.ends.1
            } else if e.ends.1 == x {
                e.ends.0
            } else {
                continue;
            };
            if covered[y] {
                continue;
            }
            covered[x] = true;
            covered[y] = true;
            chosen.push(id);
            go(g, covered, chosen, out);
            chosen.pop();
            covered[x] = false;
            covered[y] = false;
        }
    }
    let mut out = Vec::new();
    go(
        g,
        &mut vec![false; g.labels.len()],
        &mut Vec::new(),
        &mut out,
    );
    out.sort();
    out
}

/// `x_γ`: the matching sum divided by the product of crossed-arc weights.
pub fn expand_arc(t: &Triangulation, gamma: PolyArc) -> Result<RationalExpr> {
    let g = build_ms_snake_graph(t, gamma)?;
    expand_graph(&g)
}

/// The matching sum of a snake graph divided by its diagonal weights.
pub fn expand_graph(g: &PlanarSnakeGraph) -> Result<RationalExpr> {
    let mut sum = RationalExpr::zero();
    for m in perfect_matchings(g) {
        let term = m
            .iter()
            .fold(RationalExpr::one(), |acc, &e| acc.mul(&g.edges[e].weight));
        sum = sum.add(&term);
    }
    let mut den = RationalExpr::one();
    for tile in &g.tiles {
        den = den.mul(&tile.weight);
    }
    sum.div(&den)
}

/// Whether no tile has its two glued sides opposite each other.
pub fn is_zigzag(g: &PlanarSnakeGraph) -> bool {
    g.glued.windows(2).all(|w| {
        let (s, u) = (w[0], w[1]);
        s.0 == u.0 || s.0 == u.1 || s.1 == u.0 || s.1 == u.1
    })
}

/// Choice of the diagonal entries in the polygon continuant formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FkConvention {
    /// Number of arcs at `v_k` crossing `γ`.
    CrossingArcs,
    /// One more than [`FkConvention::CrossingArcs`].
    CrossingArcsPlusOne,
    /// Number of triangles at `v_k`.
    Triangles,
}

/// The entries `f_{i+1},…,f_{j-1}` for `γ = (v_i, v_j)`, `i < j`.
pub fn polygon_f_values(
    t: &Triangulation,
    gamma: PolyArc,
    convention: FkConvention,
) -> Result<Vec<i64>> {
    let g = check_gamma(t, gamma)?;
    let p = t.polygon;
    Ok((g.0 + 1..g.1)
        .map(|k| {
            let crossing = t
                .arcs
                .iter()
                .filter(|&&q| (q.0 == k || q.1 == k) && p.crosses(g, q))
                .count() as i64;
            match convention {
                FkConvention::CrossingArcs => crossing,
                FkConvention::CrossingArcsPlusOne => crossing + 1,
                FkConvention::Triangles => t.triangles_at(k) as i64,
            }
        })
        .collect())
}

/// The continuant of [`polygon_f_values`].
pub fn polygon_count(
    t: &Triangulation,
    gamma: PolyArc,
    convention: FkConvention,
) -> Result<BigInt> {
    Ok(continuant(&polygon_f_values(t, gamma, convention)?))
}

/// A path graph's extended tree read as a triangulated polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathBridge {
    /// The triangulation, arcs weighted `Y_I` and the closing side weighted `Y_{[n]}`.
    pub triangulation: Triangulation,
    /// Vertex of Γ′ at each polygon vertex, so `order[k-1]` sits at polygon vertex `k`.
    pub order: Vec<Vertex>,
}

impl PathBridge {
    /// Polygon vertex of a vertex of Γ′.
    pub fn position(&self, x: Vertex) -> Option<usize> {
        self.order.iter().position(|&y| y == x).map(|i| i + 1)
    }

    /// The arc joining `x` and `y`.
    pub fn gamma(&self, x: Vertex, y: Vertex) -> Result<PolyArc> {
        let px = self.position(x).ok_or(Error::UnknownVertex(x))?;
        let py = self.position(y).ok_or(Error::UnknownVertex(y))?;
        Ok(arc(px, py))
    }

    /// `[x,y] ∖ {x,y}`.
    pub fn set_for(&self, x: Vertex, y: Vertex) -> Result<VertexSet> {
        let (a, b) = self.gamma(x, y)?;
        Ok(vset::normalize(self.order[a..b - 1].to_vec()))
    }

    /// Expansion of the arc between `x` and `y`; arcs of the triangulation return their weight.
    pub fn expand(&self, x: Vertex, y: Vertex) -> Result<RationalExpr> {
        let g = self.gamma(x, y)?;
        if self.triangulation.contains(g) {
            return Ok(self
                .triangulation
                .weight(g)
                .expect("arcs carry weights")
                .clone());
        }
        expand_arc(&self.triangulation, g)
    }
}

/// Builds the polygon of a path graph: sides along Γ′ weighted 1, the closing side weighted
/// `Y_{V(Γ)}`, and one arc `Y_I` between the two neighbors of each other member `I`.
pub fn path_lp_bridge(ctx: &ClusterContext) -> Result<PathBridge> {
    let tree = ctx.tree();
    if !tree.is_path_graph() || tree.len() < 2 {
        return Err(Error::NotAPath);
    }
    let ext = ctx.extended();
    let start = *ext
        .companion_labels()
        .iter()
        .min()
        .expect("a path has two leaf companions");
    let mut order = vec![start];
    let mut seen: BTreeSet<Vertex> = BTreeSet::from([start]);
    while let Some(&next) = ext
        .neighbors(*order.last().expect("nonempty"))
        .iter()
        .find(|y| !seen.contains(y))
    {
        seen.insert(next);
        order.push(next);
    }
    let polygon = Polygon::new(order.len())?;
    let pos = |x: Vertex| {
        order
            .iter()
            .position(|&y| y == x)
            .expect("every vertex is on the path")
            + 1
    };
    let mut arcs = Vec::new();
    let mut weights: Vec<(PolyArc, RationalExpr)> = Vec::new();
    for i in 1..order.len() {
        weights.push((arc(i, i + 1), RationalExpr::one()));
    }
    for set in ctx.collection().sets() {
        let nb = ctx.set_neighbors(set);
        let (p, q) = (pos(nb[0]), pos(nb[1]));
        if set.len() == tree.len() {
            weights.push((arc(p, q), RationalExpr::var(set)));
        } else {
            arcs.push(arc(p, q));
            weights.push((arc(p, q), RationalExpr::var(set)));
        }
    }
    let triangulation = Triangulation::new(polygon, &arcs)?.with_weights(weights)?;
    Ok(PathBridge {
        triangulation,
        order,
    })
}

/// A uniformly split random triangulation of the `n`-gon, `n ≥ 3`.
///
/// # Panics
/// If `n < 3`.
pub fn random_triangulation<R: Rng>(n: usize, rng: &mut R) -> Triangulation {
    fn split<R: Rng>(vs: &[usize], rng: &mut R, out: &mut Vec<PolyArc>) {
        if vs.len() < 4 {
            return;
        }
        let k = rng.gen_range(1..vs.len() - 1);
        let (a, c, b) = (vs[0], vs[k], vs[vs.len() - 1]);
        if k > 1 {
            out.push(arc(a, c));
        }
        if k < vs.len() - 2 {
            out.push(arc(c, b));
        }
        split(&vs[..=k], rng, out);
        split(&vs[k..], rng, out);
    }
    let vs: Vec<usize> = (1..=n).collect();
    let mut arcs = Vec::new();
    split(&vs, rng, &mut arcs);
    Triangulation::new(Polygon::new(n).expect("n is at least 3"), &arcs)
        .expect("splits give a triangulation")
}
