//! Determinantal matching counts and negative continued fractions.

use crate::cluster::{vset, ClusterContext, SetClass, Vertex, VertexSet};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// The matrix `N_S`: rows and columns indexed by the rooted portion of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountMatrix {
    /// Row labels, ascending.
    pub order: VertexSet,
    /// Entries: `f(v)` on the diagonal, `-1` for tree edges inside the rooted portion.
    pub entries: Vec<Vec<i64>>,
}

impl CountMatrix {
    /// The determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        let rows: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        bareiss_determinant(rows)
    }

    /// Whether the matrix is tridiagonal in its row order.
    pub fn is_tridiagonal(&self) -> bool {
        let n = self.order.len();
        (0..n).all(|i| (0..n).all(|j| i.abs_diff(j) <= 1 || self.entries[i][j] == 0))
    }
}

/// `f(v) = 1 + Σ (m_i − 1)` with `m_i` minimal such that `{v} ∪ I^i_{m_i} ⊆ S`.
pub fn f_value(ctx: &ClusterContext, s: &[Vertex], v: Vertex) -> Result<u64> {
    let s = vset::normalize(s.to_vec());
    let class = ctx.classify_set(&s)?;
    if !class.is_weakly_rooted() {
        return Err(Error::NotWeaklyRooted(s));
    }
    if !vset::contains(&class.rooted_portion, v) {
        return Err(Error::VertexNotInRootedPortion { vertex: v, set: s });
    }
    let bd = ctx.branch(v);
    let mut f = 1u64;
    for i in 1..=bd.r {
        let b = bd.branch(i);
        let m = (1..=b.c() + 1)
            .find(|&j| vset::is_subset(b.set(j), &s))
            .expect("the sentinel set is empty");
        f += (m - 1) as u64;
    }
    Ok(f)
}

/// Builds `N_S` for a weakly rooted set not in the collection.
pub fn count_matrix(ctx: &ClusterContext, s: &[Vertex]) -> Result<CountMatrix> {
    let s = vset::normalize(s.to_vec());
    let class = ctx.classify_set(&s)?;
    if !class.is_weakly_rooted() {
        return Err(Error::NotWeaklyRooted(s));
    }
    let order = class.rooted_portion.clone();
    let n = order.len();
    let mut entries = vec![vec![0i64; n]; n];
    for (i, &v) in order.iter().enumerate() {
        entries[i][i] = f_value(ctx, &s, v)? as i64;
        for (j, &w) in order.iter().enumerate() {
            if i != j && ctx.tree().neighbors(v).contains(&w) {
                entries[i][j] = -1;
            }
        }
    }
    Ok(CountMatrix { order, entries })
}

/// `det(N_S)`, the number of admissible matchings of `𝒢_S`; members of the collection give 1.
pub fn count_matchings(ctx: &ClusterContext, s: &[Vertex]) -> Result<BigInt> {
    let s = vset::normalize(s.to_vec());
    let class = ctx.classify_set(&s)?;
    match class.tag {
        SetClass::NotWeaklyRooted => Err(Error::NotWeaklyRooted(s)),
        SetClass::InCollection => Ok(BigInt::one()),
        _ => Ok(count_matrix(ctx, &s)?.determinant()),
    }
}

/// Determinant of a square integer matrix by Bareiss elimination.
///
/// # Panics
/// If the matrix is not square.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// The continuant `K(f_1,…,f_s)`: determinant of the tridiagonal matrix with `f` on the
/// diagonal and `-1` beside it.
pub fn continuant(fs: &[i64]) -> BigInt {
    let (mut before, mut cur) = (BigInt::zero(), BigInt::one());
    for &f in fs {
        let next = BigInt::from(f) * &cur - &before;
        before = cur;
        cur = next;
    }
    cur
}

/// A negative continued fraction together with its continuant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCf {
    /// `f_1 − 1/(f_2 − 1/(… − 1/f_s))`.
    pub value: BigRational,
    /// `K(f_1,…,f_s)`.
    pub continuant: BigInt,
}

/// Evaluates `[[f_1,…,f_s]]`.
///
/// Fails with `DivisionByZero` when an inner tail evaluates to zero; the continuant is
/// always available through [`continuant`].
pub fn negative_cf(fs: &[i64]) -> Result<NegativeCf> {
    let (&last, rest) = fs.split_last().ok_or(Error::EmptySet)?;
    let mut value = BigRational::from_integer(BigInt::from(last));
    for &f in rest.iter().rev() {
        if value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        value = BigRational::from_integer(BigInt::from(f)) - value.recip();
    }
    Ok(NegativeCf {
        value,
        continuant: continuant(fs),
    })
}
