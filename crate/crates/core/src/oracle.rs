//! Closed-form and recursive formulas for `Y_S` that never look at snake graphs.

use crate::cluster::{vset, ClusterContext, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::matcher::chi;
use crate::snake::build_snake_graph;
use crate::symbolic::{rf_equal, RationalExpr};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;

/// Memoized evaluator of `Y_S` in the cluster variables of a context.
#[derive(Debug)]
pub struct Oracle<'a> {
    ctx: &'a ClusterContext,
    memo: RefCell<HashMap<VertexSet, RationalExpr>>,
}

impl<'a> Oracle<'a> {
    /// An oracle with an empty cache.
    pub fn new(ctx: &'a ClusterContext) -> Self {
        Oracle {
            ctx,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// The context.
    pub fn context(&self) -> &ClusterContext {
        self.ctx
    }

    /// Number of cached sets.
    pub fn cache_len(&self) -> usize {
        self.memo.borrow().len()
    }

    /// `Y_C` for a cluster member, otherwise the product over components of `y_set`.
    fn reduce(&self, c: &[Vertex]) -> Result<RationalExpr> {
        if c.is_empty() {
            return Ok(RationalExpr::one());
        }
        self.y_set(c)
    }

    /// `Y_{I_w}` for `w ∈ 𝒞_u`, skipping `skip`.
    fn cover_product(&self, u: Vertex, skip: Option<Vertex>) -> RationalExpr {
        self.ctx
            .covers(u)
            .iter()
            .filter(|&&w| Some(w) != skip)
            .fold(RationalExpr::one(), |acc, &w| {
                acc.mul(&RationalExpr::var(self.ctx.i_of(w)))
            })
    }

    /// `A^i_j` for a vertex `v`, with non-member sets reduced to cluster variables.
    pub fn a_term(&self, v: Vertex, i: usize, j: usize) -> Result<RationalExpr> {
        let bd = self.ctx.branch(v);
        if i == 0 || i > bd.r {
            return Err(Error::IndexOutOfRange(format!(
                "branch {i} of {v} (r = {})",
                bd.r
            )));
        }
        let b = bd.branch(i);
        let c = b.c();
        if j == 0 || j > c {
            return Err(Error::IndexOutOfRange(format!(
                "chain index {j} of branch {i} (c = {c})"
            )));
        }
        let peak = b.peak(j);
        if j == c {
            return Ok(self.cover_product(peak, None));
        }
        let next = b.peak(j + 1);
        let path = vset::normalize(self.ctx.tree().path(v, peak));
        let rest = vset::minus(b.set(j + 1), &path);
        let sq = self.reduce(&rest)?;
        Ok(self.cover_product(peak, Some(next)).mul(&sq).mul(&sq))
    }

    /// `Z(v) = Y_{I_v} / ∏_{w ∈ 𝒞_v} Y_{I_w}`.
    pub fn z(&self, v: Vertex) -> RationalExpr {
        RationalExpr::var(self.ctx.i_of(v))
            .div(&self.cover_product(v, None))
            .expect("cluster variables are nonzero")
    }

    /// `Y_{J_m}` for `J_m = {v} ∪ I^1_{m_1} ∪ … ∪ I^r_{m_r}`.
    pub fn y_jm(&self, v: Vertex, m: &[usize]) -> Result<RationalExpr> {
        let bd = self.ctx.branch(v);
        if m.len() != bd.r {
            return Err(Error::IndexOutOfRange(format!(
                "expected {} indices, got {}",
                bd.r,
                m.len()
            )));
        }
        let mut outside = RationalExpr::one();
        let mut inner = self.z(v);
        for (k, &mi) in m.iter().enumerate() {
            let b = bd.branch(k + 1);
            if mi == 0 || mi > b.c() + 1 {
                return Err(Error::IndexOutOfRange(format!(
                    "m_{} = {mi} (c = {})",
                    k + 1,
                    b.c()
                )));
            }
            outside = outside.mul(&RationalExpr::var(b.set(mi)));
            for j in 1..mi {
                let den = RationalExpr::var(b.set(j)).mul(&RationalExpr::var(b.set(j + 1)));
                let term = self.a_term(v, k + 1, j)?.div(&den).expect("nonzero");
                inner = inner.add(&term);
            }
        }
        Ok(outside.mul(&inner))
    }

    /// `Y_{v}` from the singleton closed form.
    pub fn y_singleton(&self, v: Vertex) -> Result<RationalExpr> {
        if !self.ctx.tree().contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        if self.ctx.is_member(&[v]) {
            return Ok(RationalExpr::var(&[v]));
        }
        let bd = self.ctx.branch(v);
        let m: Vec<usize> = (1..=bd.r).map(|i| bd.branch(i).c() + 1).collect();
        self.y_jm(v, &m)
    }

    /// `Y_S` for any nonempty vertex subset.
    pub fn y_set(&self, s: &[Vertex]) -> Result<RationalExpr> {
        let s = vset::normalize(s.to_vec());
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(&bad) = s.iter().find(|&&x| !self.ctx.tree().contains(x)) {
            return Err(Error::UnknownVertex(bad));
        }
        if let Some(hit) = self.memo.borrow().get(&s) {
            return Ok(hit.clone());
        }
        let value = self.compute(&s)?;
        self.memo.borrow_mut().insert(s, value.clone());
        Ok(value)
    }

    fn compute(&self, s: &[Vertex]) -> Result<RationalExpr> {
        let parts = self.ctx.components(s);
        if parts.len() > 1 {
            let mut acc = RationalExpr::one();
            for p in &parts {
                acc = acc.mul(&self.y_set(p)?);
            }
            return Ok(acc);
        }
        if self.ctx.is_member(s) {
            return Ok(RationalExpr::var(s));
        }
        if s.len() == 1 {
            return self.y_singleton(s[0]);
        }
        let tree = self.ctx.tree();
        let (leaf, nb) = s
            .iter()
            .rev()
            .find_map(|&x| {
                let inside: Vec<Vertex> = tree
                    .neighbors(x)
                    .iter()
                    .copied()
                    .filter(|n| s.contains(n))
                    .collect();
                (inside.len() == 1).then(|| (x, inside[0]))
            })
            .expect("a tree on two or more vertices has a leaf");
        let without_leaf = vset::minus(s, &[leaf]);
        let mut both = vec![leaf, nb];
        both.sort_unstable();
        let without_both = vset::minus(s, &both);
        let left = self.y_set(&without_leaf)?.mul(&self.y_singleton(leaf)?);
        Ok(left.sub(&self.reduce(&without_both)?))
    }

    /// Replaces every non-cluster variable of `e` by its `y_set` value.
    pub fn to_cluster(&self, e: &RationalExpr) -> Result<RationalExpr> {
        let mut failure = None;
        let out = e.substitute(|var| {
            if self.ctx.is_member(var.index()) {
                None
            } else {
                match self.y_set(var.index()) {
                    Ok(x) => Some(x),
                    Err(err) => {
                        failure = Some(err);
                        None
                    }
                }
            }
        });
        match failure {
            Some(err) => Err(err),
            None => Ok(out),
        }
    }
}

/// Outcome of [`verify_expansion`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationResult {
    /// Whether `χ(𝒢_S)` equals `Y_S`.
    pub ok: bool,
    /// The set checked.
    pub set: VertexSet,
    /// `χ(𝒢_S)` as built from matchings, before substitution.
    pub chi: String,
    /// `χ(𝒢_S)` in cluster variables.
    pub chi_reduced: String,
    /// The oracle's `Y_S`.
    pub oracle: String,
}

/// Checks `χ(𝒢_S) = Y_S` with a fresh oracle.
pub fn verify_expansion(ctx: &ClusterContext, s: &[Vertex]) -> Result<VerificationResult> {
    verify_with(&Oracle::new(ctx), s)
}

/// Checks `χ(𝒢_S) = Y_S` with a shared oracle.
pub fn verify_with(oracle: &Oracle<'_>, s: &[Vertex]) -> Result<VerificationResult> {
    let s = vset::normalize(s.to_vec());
    let g = build_snake_graph(oracle.context(), &s)?;
    let raw = chi(&g);
    let reduced = oracle.to_cluster(&raw)?;
    let expected = oracle.y_set(&s)?;
    Ok(VerificationResult {
        ok: rf_equal(&reduced, &expected),
        set: s,
        chi: raw.to_string(),
        chi_reduced: reduced.to_string(),
        oracle: expected.to_string(),
    })
}
