//! Admissible matchings of snake graphs and the expansion `χ(𝒢)`.

use crate::cluster::vset;
use crate::error::{Error, Result};
use crate::snake::{EdgeKind, EdgeOrigin, SnakeGraph};
use crate::symbolic::{Monomial, RationalExpr};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A set of edge ids of a fixed graph, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matching {
    /// Sorted edge ids.
    pub edges: Vec<usize>,
}

impl Matching {
    /// Builds a matching from edge ids in any order.
    pub fn new(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Matching { edges }
    }

    /// Whether edge `e` is used.
    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

/// Which rule a non-admissible edge set breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Some node meets too few or too many edges.
    Valence,
    /// Two edges sharing a node straddle a diagonal's label.
    One,
    /// Two disjoint boundary edges straddling a diagonal's label are not used together.
    Two,
    /// Two disjoint boundary edges matching a pair of nested diagonals are used together.
    Three,
    /// Two adjacent edges bound by a common diagonal are not used together.
    Four,
    /// The unused glue edges cannot be handed to the glued pieces so that each
    /// piece keeps its own valences.
    Seam,
}

impl Condition {
    /// Numeric tag: 0 for valence, 1–4 for the pairwise conditions, 5 for the seam split.
    pub fn tag(&self) -> u8 {
        match self {
            Condition::Valence => 0,
            Condition::One => 1,
            Condition::Two => 2,
            Condition::Three => 3,
            Condition::Four => 4,
            Condition::Seam => 5,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Valence => write!(f, "valence"),
            Condition::Seam => write!(f, "seam split"),
            c => write!(f, "condition {}", c.tag()),
        }
    }
}

/// The witness of a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionViolation {
    /// The broken rule.
    pub condition: Condition,
    /// Witnessing edges.
    pub edges: Vec<usize>,
    /// Witnessing diagonals.
    pub diagonals: Vec<usize>,
    /// Witnessing nodes (valence failures).
    pub nodes: Vec<usize>,
}

/// Outcome of [`is_admissible`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    /// Whether the edge set is an admissible matching.
    pub ok: bool,
    /// The first failure found: valence, then conditions 1–4, then the seam split.
    pub first_violation: Option<ConditionViolation>,
}

/// Selects which admissibility conditions are enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionMask {
    /// Enforce condition 1.
    pub one: bool,
    /// Enforce condition 2.
    pub two: bool,
    /// Enforce condition 3.
    pub three: bool,
    /// Enforce condition 4.
    pub four: bool,
    /// Enforce the seam split of glued graphs.
    pub seams: bool,
}

impl Default for ConditionMask {
    fn default() -> Self {
        ConditionMask::ALL
    }
}

impl ConditionMask {
    /// Every condition enforced.
    pub const ALL: ConditionMask = ConditionMask {
        one: true,
        two: true,
        three: true,
        four: true,
        seams: true,
    };

    /// Valences and conditions 1–4 only.
    pub const LITERAL: ConditionMask = ConditionMask {
        seams: false,
        ..ConditionMask::ALL
    };

    /// Every condition except `c`.
    pub fn without(c: Condition) -> Self {
        ConditionMask::ALL.minus(c)
    }

    /// This mask with `c` no longer enforced.
    pub fn minus(self, c: Condition) -> Self {
        let mut m = self;
        match c {
            Condition::One => m.one = false,
            Condition::Two => m.two = false,
            Condition::Three => m.three = false,
            Condition::Four => m.four = false,
            Condition::Seam => m.seams = false,
            Condition::Valence => {}
        }
        m
    }

    fn enforces(&self, c: Condition) -> bool {
        match c {
            Condition::One => self.one,
            Condition::Two => self.two,
            Condition::Three => self.three,
            Condition::Four => self.four,
            Condition::Seam => self.seams,
            Condition::Valence => true,
        }
    }
}

/// A pairwise rule between two edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRule {
    /// The rule's condition.
    pub condition: Condition,
    /// Smaller edge id.
    pub e1: usize,
    /// Larger edge id.
    pub e2: usize,
    /// Witnessing diagonals.
    pub diagonals: Vec<usize>,
}

/// Pairwise constraints of a graph: conflicts forbid co-presence, ties force it.
#[derive(Debug, Clone, Default)]
pub struct Constraints {
    /// Pairs that may not both be used (conditions 1 and 3).
    pub conflicts: Vec<PairRule>,
    /// Pairs that must be used together or not at all (conditions 2 and 4).
    pub ties: Vec<PairRule>,
}

/// Derives all pairwise rules of `g`.
pub fn constraints(g: &SnakeGraph) -> Constraints {
    let nd = g.node_diagonals();
    let ne = g.node_edges();
    let m = g.edges.len();
    let ed: Vec<Vec<usize>> = (0..m)
        .map(|e| {
            let mut ds: Vec<usize> = g.edges[e]
                .endpoints
                .iter()
                .flat_map(|&n| nd[n].iter().copied())
                .collect();
            ds.sort_unstable();
            ds.dedup();
            ds
        })
        .collect();
    let internal: Vec<bool> = g
        .edges
        .iter()
        .map(|e| e.kind == EdgeKind::Internal)
        .collect();
    let near_internal: Vec<bool> = (0..m)
        .map(|e| {
            g.edges[e].endpoints.iter().any(|&n| {
                ne[n]
                    .iter()
                    .any(|&f| f != e && internal[f] && g.edges[f].origin != EdgeOrigin::Shared)
            })
        })
        .collect();
    let w = |e: usize| g.w_edge(e);
    let wd = |d: usize| g.diagonals[d].label.as_slice();
    let share = |a: usize, b: usize| {
        g.edges[a]
            .endpoints
            .iter()
            .any(|n| g.edges[b].endpoints.contains(n))
    };
    let mut out = Constraints::default();
    for a in 0..m {
        for b in a + 1..m {
            let adjacent = share(a, b);
            let common: Vec<usize> = ed[a]
                .iter()
                .copied()
                .filter(|d| ed[b].contains(d))
                .collect();
            let ordered = [(a, b), (b, a)];
            // Condition 1.
            if adjacent {
                let ds: Vec<usize> = common
                    .iter()
                    .copied()
                    .filter(|&d| {
                        ordered.iter().any(|&(x, y)| {
                            vset::is_proper_subset(w(x), wd(d))
                                && vset::is_proper_subset(wd(d), w(y))
                        })
                    })
                    .collect();
                if !ds.is_empty() {
                    out.conflicts.push(PairRule {
                        condition: Condition::One,
                        e1: a,
                        e2: b,
                        diagonals: ds,
                    });
                }
            }
            let both_boundary = !internal[a] && !internal[b];
            // Condition 2.
            if !adjacent && both_boundary && !w(a).is_empty() && !w(b).is_empty() {
                let ds: Vec<usize> = common
                    .iter()
                    .copied()
                    .filter(|&d| {
                        ordered.iter().any(|&(x, y)| {
                            vset::is_proper_subset(w(x), wd(d))
                                && vset::is_proper_subset(wd(d), w(y))
                        })
                    })
                    .collect();
                if !ds.is_empty() {
                    out.ties.push(PairRule {
                        condition: Condition::Two,
                        e1: a,
                        e2: b,
                        diagonals: ds,
                    });
                }
            }
            // Condition 3.
            if !adjacent && both_boundary {
                let mut witness = None;
                'outer: for &d1 in &common {
                    for &d2 in &common {
                        if d1 == d2 {
                            continue;
                        }
                        for &(x, y) in &ordered {
                            if w(x) == wd(d1) && w(y) == wd(d2) && vset::is_subset(wd(d1), wd(d2)) {
                                witness = Some(vec![d1.min(d2), d1.max(d2)]);
                                break 'outer;
                            }
                        }
                    }
                }
                if let Some(ds) = witness {
                    out.conflicts.push(PairRule {
                        condition: Condition::Three,
                        e1: a,
                        e2: b,
                        diagonals: ds,
                    });
                }
            }
            // Condition 4.
            if adjacent {
                let kinds_ok = (internal[a] && internal[b])
                    || (both_boundary && near_internal[a] && near_internal[b]);
                if kinds_ok {
                    let ea = &g.edges[a].endpoints;
                    let eb = &g.edges[b].endpoints;
                    let only_a: Vec<usize> =
                        ea.iter().copied().filter(|n| !eb.contains(n)).collect();
                    let only_b: Vec<usize> =
                        eb.iter().copied().filter(|n| !ea.contains(n)).collect();
                    let ds: Vec<usize> = (0..g.diagonals.len())
                        .filter(|&d| {
                            vset::is_subset(w(a), wd(d))
                                && vset::is_subset(w(b), wd(d))
                                && only_a.iter().any(|n| nd[*n].contains(&d))
                                && only_b.iter().any(|n| nd[*n].contains(&d))
                        })
                        .collect();
                    if !ds.is_empty() {
                        out.ties.push(PairRule {
                            condition: Condition::Four,
                            e1: a,
                            e2: b,
                            diagonals: ds,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Checks an edge set against valences and the four conditions.
pub fn is_admissible(g: &SnakeGraph, p: &[usize]) -> Result<AdmissibilityReport> {
    is_admissible_with(g, p, ConditionMask::ALL)
}

/// Checks an edge set against valences and the enforced conditions.
pub fn is_admissible_with(
    g: &SnakeGraph,
    p: &[usize],
    mask: ConditionMask,
) -> Result<AdmissibilityReport> {
    if let Some(&bad) = p.iter().find(|&&e| e >= g.edges.len()) {
        return Err(Error::UnknownEdgeId(bad));
    }
    let m = Matching::new(p.to_vec());
    let mut count = vec![0u32; g.nodes.len()];
    for &e in &m.edges {
        for &n in &g.edges[e].endpoints {
            count[n] += 1;
        }
    }
    let bad: Vec<usize> = g
        .nodes
        .iter()
        .filter(|n| !n.valence.admits(count[n.id]))
        .map(|n| n.id)
        .collect();
    if !bad.is_empty() {
        return Ok(AdmissibilityReport {
            ok: false,
            first_violation: Some(ConditionViolation {
                condition: Condition::Valence,
                edges: Vec::new(),
                diagonals: Vec::new(),
                nodes: bad,
            }),
        });
    }
    let rules = constraints(g);
    let mut failures: Vec<ConditionViolation> = Vec::new();
    for r in rules
        .conflicts
        .iter()
        .filter(|r| mask.enforces(r.condition))
    {
        if m.contains(r.e1) && m.contains(r.e2) {
            failures.push(violation(r));
        }
    }
    for r in rules.ties.iter().filter(|r| mask.enforces(r.condition)) {
        if m.contains(r.e1) != m.contains(r.e2) {
            failures.push(violation(r));
        }
    }
    if mask.seams {
        let mut chosen = vec![false; g.edges.len()];
        for &e in &m.edges {
            chosen[e] = true;
        }
        if !g.splits_along_seams(&chosen) {
            let mut nodes: Vec<usize> = g.seams.iter().flat_map(|s| s.nodes).collect();
            nodes.sort_unstable();
            nodes.dedup();
            failures.push(ConditionViolation {
                condition: Condition::Seam,
                edges: g.seams.iter().map(|s| s.edge).collect(),
                diagonals: Vec::new(),
                nodes,
            });
        }
    }
    failures.sort_by(|a, b| (a.condition, &a.edges).cmp(&(b.condition, &b.edges)));
    Ok(AdmissibilityReport {
        ok: failures.is_empty(),
        first_violation: failures.into_iter().next(),
    })
}

fn violation(r: &PairRule) -> ConditionViolation {
    ConditionViolation {
        condition: r.condition,
        edges: vec![r.e1, r.e2],
        diagonals: r.diagonals.clone(),
        nodes: Vec::new(),
    }
}

/// All admissible matchings in lexicographic order of their edge-id lists.
pub fn enumerate_admissible(g: &SnakeGraph) -> Vec<Matching> {
    enumerate_with(g, ConditionMask::ALL)
}

/// All matchings admissible under the enforced conditions.
pub fn enumerate_with(g: &SnakeGraph, mask: ConditionMask) -> Vec<Matching> {
    let rules = constraints(g);
    let m = g.edges.len();
    let mut earlier_conflicts: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut earlier_ties: Vec<Vec<usize>> = vec![Vec::new(); m];
    for r in rules
        .conflicts
        .iter()
        .filter(|r| mask.enforces(r.condition))
    {
        earlier_conflicts[r.e2].push(r.e1);
    }
    for r in rules.ties.iter().filter(|r| mask.enforces(r.condition)) {
        earlier_ties[r.e2].push(r.e1);
    }
    let mut remaining = vec![0u32; g.nodes.len()];
    for e in &g.edges {
        for &n in &e.endpoints {
            remaining[n] += 1;
        }
    }
    let mut state = Search {
        g,
        seams: mask.seams,
        earlier_conflicts,
        earlier_ties,
        count: vec![0; g.nodes.len()],
        remaining,
        chosen: vec![false; m],
        out: Vec::new(),
    };
    state.dfs(0);
    let mut out = state.out;
    out.sort();
    out
}

struct Search<'a> {
    g: &'a SnakeGraph,
    seams: bool,
    earlier_conflicts: Vec<Vec<usize>>,
    earlier_ties: Vec<Vec<usize>>,
    count: Vec<u32>,
    remaining: Vec<u32>,
    chosen: Vec<bool>,
    out: Vec<Matching>,
}

impl Search<'_> {
    fn dfs(&mut self, e: usize) {
        let g = self.g;
        if e == g.edges.len() {
            if g.nodes.iter().all(|n| n.valence.admits(self.count[n.id]))
                && (!self.seams || g.splits_along_seams(&self.chosen))
            {
                let edges = (0..e).filter(|&k| self.chosen[k]).collect();
                self.out.push(Matching { edges });
            }
            return;
        }
        let ends = &g.edges[e].endpoints;
        for &n in ends {
            self.remaining[n] -= 1;
        }
        for take in [true, false] {
            if !self.allowed(e, take) {
                continue;
            }
            if take {
                for &n in ends {
                    self.count[n] += 1;
                }
            }
            self.chosen[e] = take;
            let feasible = ends.iter().all(|&n| {
                let v = g.nodes[n].valence;
                self.count[n] <= v.a + v.b && self.count[n] + self.remaining[n] >= v.a
            });
            if feasible {
                self.dfs(e + 1);
            }
            self.chosen[e] = false;
            if take {
                for &n in ends {
                    self.count[n] -= 1;
                }
            }
        }
        for &n in ends {
            self.remaining[n] += 1;
        }
    }

    fn allowed(&self, e: usize, take: bool) -> bool {
        if take && self.earlier_conflicts[e].iter().any(|&f| self.chosen[f]) {
            return false;
        }
        self.earlier_ties[e].iter().all(|&f| self.chosen[f] == take)
    }
}

/// Ground-truth enumeration: filters every edge subset through [`is_admissible_with`].
///
/// # Panics
/// If the graph has more than 24 edges.
pub fn brute_force(g: &SnakeGraph, mask: ConditionMask) -> Vec<Matching> {
    let m = g.edges.len();
    assert!(m <= 24, "brute force is limited to 24 edges");
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << m) {
        let p: Vec<usize> = (0..m).filter(|k| bits >> k & 1 == 1).collect();
        if is_admissible_with(g, &p, mask)
            .expect("ids are in range")
            .ok
        {
            out.push(Matching { edges: p });
        }
    }
    out.sort();
    out
}

/// `wt(P)`: the product of edge weights.
pub fn weight(g: &SnakeGraph, p: &Matching) -> Monomial {
    p.edges.iter().fold(Monomial::one(), |acc, &e| {
        acc.mul(&g.edges[e].weight.monomial())
    })
}

/// `wt(P)` after checking admissibility.
pub fn checked_weight(g: &SnakeGraph, p: &Matching) -> Result<Monomial> {
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
    Ok(weight(g, p))
}

/// `χ(𝒢) = Σ_P wt(P) / ℓ(𝒢)` over admissible matchings.
pub fn chi(g: &SnakeGraph) -> RationalExpr {
    chi_of(g, &enumerate_admissible(g))
}

/// `Σ_P wt(P) / ℓ(𝒢)` over the given matchings.
pub fn chi_of(g: &SnakeGraph, matchings: &[Matching]) -> RationalExpr {
    let sum = matchings.iter().fold(RationalExpr::zero(), |acc, p| {
        acc.add(&weight(g, p).to_expr())
    });
    sum.div(&g.ell().to_expr())
        .expect("ℓ is a nonzero monomial")
}
