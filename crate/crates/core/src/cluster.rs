//! Trees, their leaf-extended versions, maximal nested collections, the
//! partial order a collection induces on vertices, and the classification of
//! vertex subsets into rooted and weakly rooted sets.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

/// A vertex label.
pub type Vertex = u32;

/// A vertex subset stored as a sorted, duplicate-free sequence.
pub type VertexSet = Vec<Vertex>;

/// Helpers for sorted vertex sequences.
pub mod vset {
    use super::{Vertex, VertexSet};

    /// Sorts and deduplicates `v`.
    pub fn normalize(mut v: Vec<Vertex>) -> VertexSet {
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Membership test on a sorted set.
    pub fn contains(s: &[Vertex], x: Vertex) -> bool {
        s.binary_search(&x).is_ok()
    }

    /// `a ⊆ b`.
    pub fn is_subset(a: &[Vertex], b: &[Vertex]) -> bool {
        let mut j = 0;
        for &x in a {
            while j < b.len() && b[j] < x {
                j += 1;
            }
            if j == b.len() || b[j] != x {
                return false;
            }
            j += 1;
        }
        true
    }

    /// `a ⊊ b`.
    pub fn is_proper_subset(a: &[Vertex], b: &[Vertex]) -> bool {
        a.len() < b.len() && is_subset(a, b)
    }

    /// `a ∩ b ≠ ∅`.
    pub fn intersects(a: &[Vertex], b: &[Vertex]) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// `a ∪ b`.
    pub fn union(a: &[Vertex], b: &[Vertex]) -> VertexSet {
        let mut out = Vec::with_capacity(a.len() + b.len());
        out.extend_from_slice(a);
        out.extend_from_slice(b);
        normalize(out)
    }

    /// `a ∖ b`.
    pub fn minus(a: &[Vertex], b: &[Vertex]) -> VertexSet {
        a.iter().copied().filter(|x| !contains(b, *x)).collect()
    }

    /// `a ∩ b`.
    pub fn intersection(a: &[Vertex], b: &[Vertex]) -> VertexSet {
        a.iter().copied().filter(|x| contains(b, *x)).collect()
    }

    /// Renders a set as `{1,2,3}`.
    pub fn render(s: &[Vertex]) -> String {
        let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Undirected adjacency with sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Adjacency(BTreeMap<Vertex, Vec<Vertex>>);

impl Adjacency {
    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.0.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    fn path(&self, x: Vertex, y: Vertex) -> Vec<Vertex> {
        let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        let mut queue = VecDeque::from([x]);
        parent.insert(x, x);
        while let Some(u) = queue.pop_front() {
            if u == y {
                break;
            }
            for &w in self.neighbors(u) {
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(w) {
                    e.insert(u);
                    queue.push_back(w);
                }
            }
        }
        let mut out = vec![y];
        let mut cur = y;
        while cur != x {
            cur = match parent.get(&cur) {
                Some(&p) => p,
                None => return Vec::new(),
            };
            out.push(cur);
        }
        out.reverse();
        out
    }

    fn components(&self, s: &[Vertex]) -> Vec<VertexSet> {
        let mut seen: BTreeSet<Vertex> = BTreeSet::new();
        let mut out = Vec::new();
        for &start in s {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if vset::contains(s, w) && seen.insert(w) {
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            out.push(vset::normalize(comp));
        }
        out.sort();
        out
    }

    fn set_neighbors(&self, s: &[Vertex]) -> VertexSet {
        let mut out = Vec::new();
        for &u in s {
            for &w in self.neighbors(u) {
                if !vset::contains(s, w) {
                    out.push(w);
                }
            }
        }
        vset::normalize(out)
    }
}

/// A finite tree on integer labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    vertices: VertexSet,
    edges: Vec<(Vertex, Vertex)>,
    adj: Adjacency,
}

impl Tree {
    /// Builds a tree, rejecting loops, duplicate edges, cycles and disconnection.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let n_raw = vertices.len();
        let vertices = vset::normalize(vertices);
        if vertices.len() != n_raw {
            return Err(Error::InvalidTree("duplicate vertex label".into()));
        }
        if vertices.is_empty() {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> =
            vertices.iter().map(|&v| (v, Vec::new())).collect();
        let mut canon = BTreeSet::new();
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::InvalidTree(format!("self-loop at {a}")));
            }
            for x in [a, b] {
                if !adj.contains_key(&x) {
                    return Err(Error::UnknownVertex(x));
                }
            }
            if !canon.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidTree(format!("duplicate edge ({a},{b})")));
            }
            adj.get_mut(&a).expect("checked").push(b);
            adj.get_mut(&b).expect("checked").push(a);
        }
        if canon.len() + 1 != vertices.len() {
            return Err(Error::InvalidTree(format!(
                "{} vertices but {} edges",
                vertices.len(),
                canon.len()
            )));
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        let adj = Adjacency(adj);
        if adj.components(&vertices).len() != 1 {
            return Err(Error::InvalidTree("not connected".into()));
        }
        Ok(Tree {
            vertices,
            edges: canon.into_iter().collect(),
            adj,
        })
    }

    /// Sorted vertex labels.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Canonical edge list with `a < b`.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false: trees have at least one vertex.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether `v` is a vertex.
    pub fn contains(&self, v: Vertex) -> bool {
        vset::contains(&self.vertices, v)
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.adj.neighbors(v)
    }

    /// Vertices of degree at most one.
    pub fn leaves(&self) -> Vec<Vertex> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| self.neighbors(v).len() <= 1)
            .collect()
    }

    /// Connected components of the induced subgraph on `s`.
    pub fn components(&self, s: &[Vertex]) -> Vec<VertexSet> {
        self.adj.components(s)
    }

    /// Whether the induced subgraph on `s` is connected and nonempty.
    pub fn is_connected(&self, s: &[Vertex]) -> bool {
        !s.is_empty() && self.components(s).len() == 1
    }

    /// The path `[x, y]` as a vertex sequence from `x` to `y`.
    pub fn path(&self, x: Vertex, y: Vertex) -> Vec<Vertex> {
        self.adj.path(x, y)
    }

    /// Whether every vertex has degree at most two.
    pub fn is_path_graph(&self) -> bool {
        self.vertices.iter().all(|&v| self.neighbors(v).len() <= 2)
    }
}

/// The tree Γ′ obtained by attaching companion leaves so that every base
/// vertex has degree at least two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedTree {
    base: Tree,
    companions: BTreeMap<Vertex, Vec<Vertex>>,
    owner: BTreeMap<Vertex, Vertex>,
    adj: Adjacency,
}

impl ExtendedTree {
    /// Attaches companions. A leaf ℓ of rank `k` among the sorted leaves gets
    /// label `max_label + 1 + k`, which equals `n + k` for labels `0..n`.
    /// A one-vertex tree receives two companions.
    pub fn new(base: Tree) -> Self {
        let mut next = base.vertices.last().copied().unwrap_or(0) + 1;
        let mut companions = BTreeMap::new();
        let mut owner = BTreeMap::new();
        let mut adj = base.adj.0.clone();
        for &v in base.vertices() {
            let deficit = 2usize.saturating_sub(base.neighbors(v).len());
            let mut list = Vec::new();
            for _ in 0..deficit {
                list.push(next);
                owner.insert(next, v);
                adj.entry(v).or_default().push(next);
                adj.insert(next, vec![v]);
                next += 1;
            }
            if !list.is_empty() {
                companions.insert(v, list);
            }
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        ExtendedTree {
            base,
            companions,
            owner,
            adj: Adjacency(adj),
        }
    }

    /// The underlying tree Γ.
    pub fn base(&self) -> &Tree {
        &self.base
    }

    /// Companion labels attached to base vertex `v`.
    pub fn companions_of(&self, v: Vertex) -> &[Vertex] {
        self.companions.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All companion labels, sorted.
    pub fn companion_labels(&self) -> Vec<Vertex> {
        self.owner.keys().copied().collect()
    }

    /// Whether `x` is a companion vertex.
    pub fn is_companion(&self, x: Vertex) -> bool {
        self.owner.contains_key(&x)
    }

    /// The base leaf a companion hangs off.
    pub fn owner_of(&self, companion: Vertex) -> Option<Vertex> {
        self.owner.get(&companion).copied()
    }

    /// Sorted neighbors of `v` in Γ′.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.adj.neighbors(v)
    }

    /// The path `[x, y]` in Γ′.
    pub fn path(&self, x: Vertex, y: Vertex) -> Vec<Vertex> {
        self.adj.path(x, y)
    }

    /// `N_Γ′(S)`: vertices outside `s` adjacent to it.
    pub fn set_neighbors(&self, s: &[Vertex]) -> VertexSet {
        self.adj.set_neighbors(s)
    }

    /// Whether `(a, b)` is an edge of Γ′.
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Renders a vertex, marking companions as `ℓ'` of their owner when the
    /// owner has a single companion.
    pub fn display(&self, x: Vertex) -> String {
        match self.owner_of(x) {
            Some(o) if self.companions_of(o).len() == 1 => format!("{o}'"),
            Some(o) => {
                let k = self
                    .companions_of(o)
                    .iter()
                    .position(|&c| c == x)
                    .unwrap_or(0);
                format!("{o}'{}", "'".repeat(k))
            }
            None => x.to_string(),
        }
    }
}

/// A family of connected vertex subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedCollection {
    sets: Vec<VertexSet>,
}

impl NestedCollection {
    /// Wraps a family, normalizing each member and sorting the family.
    pub fn new(sets: Vec<Vec<Vertex>>) -> Self {
        let mut sets: Vec<VertexSet> = sets.into_iter().map(vset::normalize).collect();
        sets.sort();
        NestedCollection { sets }
    }

    /// Members in canonical order.
    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }
}

/// One rule violated by a candidate nested collection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Violation {
    /// A member mentions a label outside the tree.
    UnknownVertex {
        /// Offending member.
        set: VertexSet,
    },
    /// A member is empty.
    EmptySet,
    /// A member appears twice.
    Duplicate {
        /// Repeated member.
        set: VertexSet,
    },
    /// A member is not connected.
    NotConnected {
        /// Offending member.
        set: VertexSet,
    },
    /// Two members overlap without either containing the other.
    CrossingPair {
        /// First member.
        a: VertexSet,
        /// Second member.
        b: VertexSet,
    },
    /// Two disjoint members are adjacent, so their union is one component.
    DisjointUnion {
        /// First member.
        a: VertexSet,
        /// Second member.
        b: VertexSet,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use vset::render;
        match self {
            Violation::UnknownVertex { set } => write!(f, "{} uses unknown vertices", render(set)),
            Violation::EmptySet => write!(f, "empty member"),
            Violation::Duplicate { set } => write!(f, "{} appears twice", render(set)),
            Violation::NotConnected { set } => write!(f, "{} is not connected", render(set)),
            Violation::CrossingPair { a, b } => write!(
                f,
                "crossing pair {} and {}: they overlap but neither contains the other",
                render(a),
                render(b)
            ),
            Violation::DisjointUnion { a, b } => write!(
                f,
                "disjoint members {} and {} are adjacent, so their union is connected",
                render(a),
                render(b)
            ),
        }
    }
}

/// Outcome of [`validate_nested_collection`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Every violated rule.
    pub violations: Vec<Violation>,
    /// Whether the family is a maximal nested collection on all vertices.
    pub maximal: bool,
}

impl ValidationReport {
    /// No violations.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn adjacent_sets(tree: &Tree, a: &[Vertex], b: &[Vertex]) -> bool {
    a.iter()
        .any(|&x| tree.neighbors(x).iter().any(|y| vset::contains(b, *y)))
}

/// Checks the nested-collection rules and maximality.
///
/// For pairwise disjoint connected members of a tree, the components of the
/// union are exactly the members iff no two members are adjacent, so the
/// union rule is checked pairwise.
pub fn validate_nested_collection(tree: &Tree, family: &[Vec<Vertex>]) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen: BTreeSet<VertexSet> = BTreeSet::new();
    let mut good: Vec<VertexSet> = Vec::new();
    for raw in family {
        let set = vset::normalize(raw.clone());
        if set.is_empty() {
            violations.push(Violation::EmptySet);
            continue;
        }
        if set.iter().any(|&v| !tree.contains(v)) {
            violations.push(Violation::UnknownVertex { set });
            continue;
        }
        if !seen.insert(set.clone()) {
            violations.push(Violation::Duplicate { set });
            continue;
        }
        if !tree.is_connected(&set) {
            violations.push(Violation::NotConnected { set: set.clone() });
        }
        good.push(set);
    }
    good.sort();
    for i in 0..good.len() {
        for j in i + 1..good.len() {
            let (a, b) = (&good[i], &good[j]);
            if vset::intersects(a, b) {
                if !vset::is_subset(a, b) && !vset::is_subset(b, a) {
                    violations.push(Violation::CrossingPair {
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
            } else if adjacent_sets(tree, a, b) {
                violations.push(Violation::DisjointUnion {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
        }
    }
    let maximal = violations.is_empty()
        && good.len() == tree.len()
        && good.iter().any(|s| s.len() == tree.len());
    ValidationReport {
        violations,
        maximal,
    }
}

/// How the first below-neighbor `a_1` of a vertex is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum A1Rule {
    /// `a_1` is the smallest-labeled neighbor below `v`.
    SmallestLabel,
    /// `a_1` is the largest-labeled neighbor below `v`.
    #[default]
    LargestLabel,
}

/// Tunable choices made while deriving branch data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContextOptions {
    /// Tie-break for `a_1`.
    pub a1_rule: A1Rule,
}

/// Data for one neighbor `a_i` of a vertex `v` in Γ′.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    /// The neighbor `a_i`.
    pub neighbor: Vertex,
    /// Whether `a_i <_𝓘 v`.
    pub below: bool,
    /// `I^i_1 ⊋ … ⊋ I^i_{c_i}`: members containing `a_i` but not `v`.
    pub chain: Vec<VertexSet>,
    /// `a^i_j = m_𝓘(I^i_j)`.
    pub peaks: Vec<Vertex>,
}

impl Branch {
    /// `c_i`.
    pub fn c(&self) -> usize {
        self.chain.len()
    }

    /// `I^i_j` for `1 ≤ j ≤ c_i + 1`, the last being empty.
    pub fn set(&self, j: usize) -> &[Vertex] {
        if j >= 1 && j <= self.chain.len() {
            &self.chain[j - 1]
        } else {
            &[]
        }
    }

    /// `a^i_j` for `1 ≤ j ≤ c_i`.
    pub fn peak(&self, j: usize) -> Vertex {
        self.peaks[j - 1]
    }
}

/// Neighbors of a vertex ordered `a_1, …, a_r` (below) then `a_{r+1}, …, a_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchData {
    /// The vertex `v`.
    pub vertex: Vertex,
    /// All neighbors in Γ′ in branch order.
    pub branches: Vec<Branch>,
    /// Number of neighbors below `v`.
    pub r: usize,
}

impl BranchData {
    /// `p`, the degree of `v` in Γ′.
    pub fn p(&self) -> usize {
        self.branches.len()
    }

    /// Branch `i` with 1-based indexing.
    pub fn branch(&self, i: usize) -> &Branch {
        &self.branches[i - 1]
    }

    /// 1-based index of the branch whose neighbor is `a`.
    pub fn index_of(&self, a: Vertex) -> Option<usize> {
        self.branches
            .iter()
            .position(|b| b.neighbor == a)
            .map(|k| k + 1)
    }
}

/// Classification tag of a connected set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetClass {
    /// Member of the nested collection.
    InCollection,
    /// Rooted with respect to the collection.
    Rooted,
    /// Rooted portion is connected and rooted.
    WeaklyRooted,
    /// None of the above.
    NotWeaklyRooted,
}

/// Result of [`ClusterContext::classify_set`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// Classification tag.
    pub tag: SetClass,
    /// `S̄ = {v ∈ S : I_v ⊄ S}`.
    pub rooted_portion: VertexSet,
}

impl Classification {
    /// Whether the snake graph construction applies.
    pub fn is_weakly_rooted(&self) -> bool {
        self.tag != SetClass::NotWeaklyRooted
    }
}

/// A tree with a maximal nested collection and everything derived from it.
#[derive(Debug, Clone)]
pub struct ClusterContext {
    tree: Tree,
    extended: ExtendedTree,
    collection: NestedCollection,
    member_index: HashMap<VertexSet, usize>,
    i_of: BTreeMap<Vertex, usize>,
    m_of: Vec<Vertex>,
    covers: BTreeMap<Vertex, Vec<Vertex>>,
    branch: BTreeMap<Vertex, BranchData>,
    options: ContextOptions,
}

impl ClusterContext {
    /// Validates `family` and derives order and branch data with default options.
    pub fn new(tree: Tree, family: NestedCollection) -> Result<Self> {
        Self::with_options(tree, family, ContextOptions::default())
    }

    /// Validates `family` and derives order and branch data.
    pub fn with_options(
        tree: Tree,
        family: NestedCollection,
        options: ContextOptions,
    ) -> Result<Self> {
        let report = validate_nested_collection(&tree, family.sets());
        if !report.maximal {
            let msg = if report.violations.is_empty() {
                format!(
                    "{} members on {} vertices or missing the full vertex set",
                    family.sets().len(),
                    tree.len()
                )
            } else {
                report
                    .violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            return Err(Error::NotMaximalNested(msg));
        }
        let extended = ExtendedTree::new(tree.clone());
        let sets = family.sets();
        let member_index: HashMap<VertexSet, usize> = sets
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();
        let mut i_of = BTreeMap::new();
        for &v in tree.vertices() {
            let best = sets
                .iter()
                .enumerate()
                .filter(|(_, s)| vset::contains(s, v))
                .min_by_key(|(_, s)| s.len())
                .map(|(k, _)| k)
                .expect("the full vertex set is a member");
            i_of.insert(v, best);
        }
        let mut m_of = vec![Vertex::MAX; sets.len()];
        for (&v, &k) in &i_of {
            if m_of[k] != Vertex::MAX {
                return Err(Error::NotMaximalNested(format!(
                    "{} is the smallest member for two vertices",
                    vset::render(&sets[k])
                )));
            }
            m_of[k] = v;
        }
        let mut ctx = ClusterContext {
            tree,
            extended,
            collection: family,
            member_index,
            i_of,
            m_of,
            covers: BTreeMap::new(),
            branch: BTreeMap::new(),
            options,
        };
        let verts: Vec<Vertex> = ctx.tree.vertices().to_vec();
        for &v in &verts {
            let iv = ctx.i_of(v).to_vec();
            let rest = vset::minus(&iv, &[v]);
            let mut cov: Vec<Vertex> = ctx
                .tree
                .components(&rest)
                .iter()
                .map(|c| ctx.max_of_connected(c))
                .collect();
            cov.sort_unstable();
            ctx.covers.insert(v, cov);
        }
        for &v in &verts {
            let bd = ctx.derive_branch(v);
            ctx.branch.insert(v, bd);
        }
        Ok(ctx)
    }

    fn derive_branch(&self, v: Vertex) -> BranchData {
        let mut below = Vec::new();
        let mut above = Vec::new();
        for &a in self.extended.neighbors(v) {
            if self.less(a, v) {
                let mut chain: Vec<VertexSet> = self
                    .collection
                    .sets()
                    .iter()
                    .filter(|s| vset::contains(s, a) && !vset::contains(s, v))
                    .cloned()
                    .collect();
                chain.sort_by_key(|s| std::cmp::Reverse(s.len()));
                let peaks = chain
                    .iter()
                    .map(|s| self.m_of_member(s).expect("member"))
                    .collect();
                below.push(Branch {
                    neighbor: a,
                    below: true,
                    chain,
                    peaks,
                });
            } else {
                above.push(Branch {
                    neighbor: a,
                    below: false,
                    chain: Vec::new(),
                    peaks: Vec::new(),
                });
            }
        }
        below.sort_by_key(|b| b.neighbor);
        if self.options.a1_rule == A1Rule::LargestLabel && !below.is_empty() {
            let last = below.pop().expect("nonempty");
            below.insert(0, last);
        }
        above.sort_by_key(|b| b.neighbor);
        let r = below.len();
        below.extend(above);
        BranchData {
            vertex: v,
            branches: below,
            r,
        }
    }

    /// The base tree Γ.
    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    /// Γ′.
    pub fn extended(&self) -> &ExtendedTree {
        &self.extended
    }

    /// The nested collection 𝓘.
    pub fn collection(&self) -> &NestedCollection {
        &self.collection
    }

    /// Options used to derive branch data.
    pub fn options(&self) -> ContextOptions {
        self.options
    }

    /// `I_v`, the smallest member containing `v`.
    pub fn i_of(&self, v: Vertex) -> &[Vertex] {
        &self.collection.sets()[self.i_of[&v]]
    }

    /// Whether `s` is a member of 𝓘.
    pub fn is_member(&self, s: &[Vertex]) -> bool {
        self.member_index.contains_key(s)
    }

    /// `m_𝓘(I)` for a member `I`.
    pub fn m_of_member(&self, s: &[Vertex]) -> Option<Vertex> {
        self.member_index.get(s).map(|&k| self.m_of[k])
    }

    /// The largest element of a connected set: the peak of the smallest member
    /// containing it.
    pub fn max_of_connected(&self, s: &[Vertex]) -> Vertex {
        let k = self
            .collection
            .sets()
            .iter()
            .enumerate()
            .filter(|(_, m)| vset::is_subset(s, m))
            .min_by_key(|(_, m)| m.len())
            .map(|(k, _)| k)
            .expect("the full vertex set contains every subset");
        self.m_of[k]
    }

    /// `a <_𝓘 b` on Γ′: base vertices compare by membership, companions sit on top.
    pub fn less(&self, a: Vertex, b: Vertex) -> bool {
        if a == b {
            return false;
        }
        match (self.extended.is_companion(a), self.extended.is_companion(b)) {
            (false, false) => vset::contains(self.i_of(b), a),
            (false, true) => true,
            _ => false,
        }
    }

    /// `𝒞_v`: vertices covered by `v`.
    pub fn covers(&self, v: Vertex) -> &[Vertex] {
        self.covers.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Branch data of a base vertex.
    pub fn branch(&self, v: Vertex) -> &BranchData {
        &self.branch[&v]
    }

    /// `N_Γ′(S)`.
    pub fn set_neighbors(&self, s: &[Vertex]) -> VertexSet {
        self.extended.set_neighbors(s)
    }

    /// Connected components of `s` in Γ.
    pub fn components(&self, s: &[Vertex]) -> Vec<VertexSet> {
        self.tree.components(s)
    }

    /// Whether two connected sets form a nested collection.
    pub fn compatible(&self, a: &[Vertex], b: &[Vertex]) -> Result<bool> {
        for s in [a, b] {
            if !self.tree.is_connected(s) {
                return Err(Error::NotConnected(s.to_vec()));
            }
        }
        if vset::intersects(a, b) {
            Ok(vset::is_subset(a, b) || vset::is_subset(b, a))
        } else {
            Ok(!adjacent_sets(&self.tree, a, b))
        }
    }

    /// Members of 𝓘 incompatible with `s`.
    pub fn incompatible_members(&self, s: &[Vertex]) -> Vec<VertexSet> {
        self.collection
            .sets()
            .iter()
            .filter(|m| !self.compatible(m, s).unwrap_or(true))
            .cloned()
            .collect()
    }

    /// Whether a connected set is rooted.
    pub fn is_rooted(&self, s: &[Vertex]) -> bool {
        if s.is_empty() {
            return false;
        }
        let top = self.max_of_connected(s);
        for &i in s {
            let path = self.tree.path(i, top);
            for &j in s {
                if i == j {
                    continue;
                }
                if self.less(i, j) != path.contains(&j) {
                    return false;
                }
            }
        }
        true
    }

    /// `S̄ = {v ∈ S : I_v ⊄ S}`.
    pub fn rooted_portion(&self, s: &[Vertex]) -> VertexSet {
        s.iter()
            .copied()
            .filter(|&v| !vset::is_subset(self.i_of(v), s))
            .collect()
    }

    /// Classifies a nonempty connected set.
    pub fn classify_set(&self, s: &[Vertex]) -> Result<Classification> {
        let s = vset::normalize(s.to_vec());
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(&x) = s.iter().find(|&&x| !self.tree.contains(x)) {
            return Err(Error::UnknownVertex(x));
        }
        if !self.tree.is_connected(&s) {
            return Err(Error::NotConnected(s));
        }
        let bar = self.rooted_portion(&s);
        let tag = if self.is_member(&s) {
            SetClass::InCollection
        } else if self.is_rooted(&s) {
            SetClass::Rooted
        } else if self.tree.is_connected(&bar) && self.is_rooted(&bar) {
            SetClass::WeaklyRooted
        } else {
            SetClass::NotWeaklyRooted
        };
        Ok(Classification {
            tag,
            rooted_portion: bar,
        })
    }

    /// Whether `s` is nonempty, connected and weakly rooted (members included).
    pub fn is_weakly_rooted(&self, s: &[Vertex]) -> bool {
        self.classify_set(s)
            .map(|c| c.is_weakly_rooted())
            .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ctx0;

    fn path3() -> Tree {
        Tree::new(vec![1, 2, 3], vec![(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn validation_flags_crossing_pair() {
        let r = validate_nested_collection(&path3(), &[vec![1, 2], vec![2, 3]]);
        assert!(matches!(r.violations[0], Violation::CrossingPair { .. }));
        assert!(!r.maximal);
    }

    #[test]
    fn validation_flags_disjoint_union() {
        let r = validate_nested_collection(&path3(), &[vec![1, 2], vec![3]]);
        assert!(matches!(r.violations[0], Violation::DisjointUnion { .. }));
    }

    #[test]
    fn validation_accepts_chain() {
        let r = validate_nested_collection(&path3(), &[vec![2], vec![1, 2], vec![1, 2, 3]]);
        assert!(r.is_valid() && r.maximal);
    }

    #[test]
    fn validation_flags_disconnected_member() {
        let r = validate_nested_collection(&path3(), &[vec![1, 3]]);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotConnected { .. })));
    }

    #[test]
    fn tree_rejects_cycles_and_forests() {
        assert!(Tree::new(vec![1, 2, 3], vec![(1, 2), (2, 3), (3, 1)]).is_err());
        assert!(Tree::new(vec![1, 2, 3, 4], vec![(1, 2), (3, 4)]).is_err());
        assert!(Tree::new(vec![1, 2], vec![(1, 1)]).is_err());
    }

    #[test]
    fn ctx0_peaks_and_smallest_members() {
        let ctx = ctx0();
        assert_eq!(ctx.i_of(4), &[0, 4, 5, 6, 7]);
        assert_eq!(ctx.i_of(7), &[0, 5, 6, 7]);
        assert_eq!(ctx.i_of(0), &[0, 5, 6]);
        assert_eq!(ctx.i_of(5), &[5, 6]);
        assert_eq!(ctx.i_of(6), &[6]);
        assert_eq!(ctx.i_of(8), &[8]);
        assert_eq!(ctx.i_of(2), &[2]);
        assert_eq!(ctx.i_of(1), &[1, 2]);
        for &v in ctx.tree().vertices() {
            assert_eq!(ctx.m_of_member(ctx.i_of(v)), Some(v));
        }
    }

    #[test]
    fn ctx0_companion_labels() {
        let ctx = ctx0();
        let ext = ctx.extended();
        assert_eq!(ext.companion_labels(), vec![10, 11, 12, 13, 14]);
        assert_eq!(ext.companions_of(0), &[10]);
        assert_eq!(ext.companions_of(9), &[14]);
        assert_eq!(ext.display(12), "7'");
    }

    #[test]
    fn ctx0_branch_of_4() {
        let ctx = ctx0();
        let b = ctx.branch(4);
        assert_eq!((b.p(), b.r), (3, 1));
        let a1 = b.branch(1);
        assert_eq!(a1.neighbor, 5);
        assert_eq!(a1.c(), 3);
        assert_eq!(a1.set(1), &[0, 5, 6, 7]);
        assert_eq!(a1.set(2), &[0, 5, 6]);
        assert_eq!(a1.set(3), &[5, 6]);
        assert_eq!(a1.peaks, vec![7, 0, 5]);
        assert!(a1.set(4).is_empty());
    }

    #[test]
    fn ctx0_branch_of_3() {
        let ctx = ctx0();
        let b = ctx.branch(3);
        assert_eq!(b.r, 3);
        let cs: BTreeMap<Vertex, usize> = b.branches[..3]
            .iter()
            .map(|br| (br.neighbor, br.c()))
            .collect();
        assert_eq!(cs, BTreeMap::from([(2, 2), (4, 1), (8, 1)]));
    }

    #[test]
    fn ctx0_classification() {
        let ctx = ctx0();
        assert_eq!(
            ctx.classify_set(&[3, 4, 5, 6, 8]).unwrap().tag,
            SetClass::Rooted
        );
        let c = ctx.classify_set(&[0, 3, 4, 5, 6, 8]).unwrap();
        assert_eq!(c.tag, SetClass::WeaklyRooted);
        assert_eq!(c.rooted_portion, vec![3, 4]);
        assert_eq!(
            ctx.classify_set(&[5, 6]).unwrap().tag,
            SetClass::InCollection
        );
        assert!(matches!(
            ctx.classify_set(&[2, 5]),
            Err(Error::NotConnected(_))
        ));
    }

    #[test]
    fn ctx0_compatibility() {
        let ctx = ctx0();
        assert!(!ctx.compatible(&[2], &[0, 3, 4, 5, 6, 8]).unwrap());
        assert!(ctx.compatible(&[5, 6], &[0, 3, 4, 5, 6, 8]).unwrap());
        assert!(!ctx.compatible(&[0, 5, 6, 7], &[0, 3, 4, 5, 6, 8]).unwrap());
    }

    #[test]
    fn ctx0_order_and_covers() {
        let ctx = ctx0();
        assert!(ctx.less(5, 4));
        assert!(!ctx.less(4, 5));
        assert!(ctx.less(3, 12));
        assert!(!ctx.less(12, 3));
        assert_eq!(ctx.covers(4), &[7]);
        assert_eq!(ctx.covers(3), &[1, 4, 8]);
        assert_eq!(ctx.max_of_connected(&[0, 3, 4, 5, 6, 8]), 3);
    }

    #[test]
    fn singleton_tree_has_two_companions() {
        let t = Tree::new(vec![5], vec![]).unwrap();
        let ctx = ClusterContext::new(t, NestedCollection::new(vec![vec![5]])).unwrap();
        assert_eq!(ctx.extended().neighbors(5), &[6, 7]);
        assert_eq!(ctx.branch(5).r, 0);
    }
}
