//! Exact Laurent polynomials and rational functions over ℤ in variables
//! `Y_C` indexed by vertex subsets.
//!
//! Rational functions are kept as numerator/denominator polynomial pairs in a
//! normal form obtained without multivariate gcds: the common monomial
//! content and the integer content are removed, the denominator's leading
//! coefficient is made positive, and the quotient is replaced by a polynomial
//! whenever the denominator divides the numerator exactly. Equality is decided
//! by cross-multiplication, so a non-reduced representative is harmless.

use crate::cluster::{vset, Vertex, VertexSet};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

/// The variable `Y_C` for a nonempty vertex subset `C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetVariable(Arc<[Vertex]>);

impl SetVariable {
    /// Builds `Y_C`; the index is normalized to a sorted set.
    ///
    /// # Panics
    /// If `c` is empty: `Y_∅` is the constant 1, not a variable.
    pub fn new(c: &[Vertex]) -> Self {
        let c = vset::normalize(c.to_vec());
        assert!(!c.is_empty(), "Y of the empty set is the constant 1");
        SetVariable(c.into())
    }

    /// The index set `C`.
    pub fn index(&self) -> &[Vertex] {
        &self.0
    }
}

impl fmt::Display for SetVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y[{}]", vset::render(&self.0))
    }
}

/// A sparse exponent vector with no zero entries, ordered lexicographically
/// with the smallest variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Exponents(Vec<(SetVariable, i32)>);

impl Exponents {
    /// The empty exponent vector.
    pub fn one() -> Self {
        Exponents(Vec::new())
    }

    /// `var^e`.
    pub fn single(var: SetVariable, e: i32) -> Self {
        if e == 0 {
            Exponents::one()
        } else {
            Exponents(vec![(var, e)])
        }
    }

    /// Builds from arbitrary `(var, e)` pairs, combining repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (SetVariable, i32)>) -> Self {
        let mut map: BTreeMap<SetVariable, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Exponents(map.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    /// `(var, e)` pairs in variable order.
    pub fn pairs(&self) -> &[(SetVariable, i32)] {
        &self.0
    }

    /// Exponent of `var`.
    pub fn get(&self, var: &SetVariable) -> i32 {
        self.0
            .binary_search_by(|(v, _)| v.cmp(var))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    /// Whether no variable appears.
    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), sign * b[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + sign * b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Exponents(out)
    }

    /// Product of monomials (exponent addition).
    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    /// Quotient of monomials (exponent subtraction).
    pub fn div(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }

    /// Whether every exponent of `self` is at least that of `other`.
    pub fn divisible_by(&self, other: &Self) -> bool {
        other.0.iter().all(|(v, e)| self.get(v) >= *e)
    }

    /// Whether all exponents are nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|(_, e)| *e > 0)
    }

    /// Splits into nonnegative numerator and denominator parts.
    pub fn split(&self) -> (Exponents, Exponents) {
        let pos = self.0.iter().filter(|(_, e)| *e > 0).cloned().collect();
        let neg = self
            .0
            .iter()
            .filter(|(_, e)| *e < 0)
            .map(|(v, e)| (v.clone(), -e))
            .collect();
        (Exponents(pos), Exponents(neg))
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, ea)), None) => return 0.cmp(&0).then(ea.signum().cmp(&0)),
                (None, Some((_, eb))) => return 0.cmp(&eb.signum()),
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return ea.signum().cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb.signum()),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_exponents(f: &mut fmt::Formatter<'_>, e: &Exponents) -> fmt::Result {
    let mut first = true;
    for (v, k) in e.pairs() {
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if *k == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{k}")?;
        }
    }
    Ok(())
}

/// A Laurent monomial `coefficient · ∏ Y_C^{e_C}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    /// Integer coefficient.
    pub coefficient: BigInt,
    /// Exponents; negative entries allowed.
    pub exponents: Exponents,
}

impl Monomial {
    /// The monomial 1.
    pub fn one() -> Self {
        Monomial {
            coefficient: BigInt::one(),
            exponents: Exponents::one(),
        }
    }

    /// `Y_C^e`, or 1 when `C` is empty.
    pub fn var_pow(c: &[Vertex], e: i32) -> Self {
        if c.is_empty() {
            return Monomial::one();
        }
        Monomial {
            coefficient: BigInt::one(),
            exponents: Exponents::single(SetVariable::new(c), e),
        }
    }

    /// Product of monomials.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            coefficient: &self.coefficient * &other.coefficient,
            exponents: self.exponents.mul(&other.exponents),
        }
    }

    /// Converts to a rational expression.
    pub fn to_expr(&self) -> RationalExpr {
        let (pos, neg) = self.exponents.split();
        RationalExpr::new(
            Poly::term(pos, self.coefficient.clone()),
            Poly::term(neg, BigInt::one()),
        )
        .expect("monomial denominators are nonzero")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_one() {
            return write!(f, "{}", self.coefficient);
        }
        if self.coefficient == -BigInt::one() {
            write!(f, "-")?;
        } else if !self.coefficient.is_one() {
            write!(f, "{}*", self.coefficient)?;
        }
        write_exponents(f, &self.exponents)
    }
}

/// A polynomial with nonnegative exponents and integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, BigInt>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly::default()
    }

    /// The constant 1.
    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    /// A constant.
    pub fn constant(c: BigInt) -> Self {
        Poly::term(Exponents::one(), c)
    }

    /// A single term.
    pub fn term(e: Exponents, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether the polynomial has no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the polynomial is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the polynomial is the constant 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.is_one() && c.is_one())
    }

    /// The leading term under the lexicographic order.
    pub fn lead(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Sum.
    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    /// Product.
    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.mul(eb), ca * cb);
            }
        }
        out
    }

    /// Multiplies by `c · x^e`.
    pub fn mul_term(&self, e: &Exponents, c: &BigInt) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(e), v * c)).collect(),
        }
    }

    /// Negation.
    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// Gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (de, dc) = d.lead()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((re, rc)) = rem.lead() {
            if !re.divisible_by(&de) {
                return None;
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qe = re.div(&de);
            rem = rem.sub(&d.mul_term(&qe, &qc));
            q.add_term(qe, qc);
        }
        Some(q)
    }

    /// Variables that occur.
    pub fn variables(&self) -> BTreeSet<SetVariable> {
        self.terms
            .keys()
            .flat_map(|e| e.pairs().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &HashMap<SetVariable, BigRational>) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, k) in e.pairs() {
                let x = point.get(v).cloned().unwrap_or_else(BigRational::one);
                t *= num_traits::pow(x, *k as usize);
            }
            acc += t;
        }
        acc
    }

    /// Terms as monomials, leading term first.
    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| Monomial {
                coefficient: c.clone(),
                exponents: e.clone(),
            })
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let m = Monomial {
                coefficient: c.abs(),
                exponents: e.clone(),
            };
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-{m}")?,
                (0, false) => write!(f, "{m}")?,
                (_, true) => write!(f, " - {m}")?,
                (_, false) => write!(f, " + {m}")?,
            }
        }
        Ok(())
    }
}

/// An exact ratio of polynomials in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalExpr {
    num: Poly,
    den: Poly,
}

impl RationalExpr {
    /// Builds and normalizes `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalExpr { num, den }.normalized())
    }

    /// The constant 0.
    pub fn zero() -> Self {
        RationalExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    /// The constant 1.
    pub fn one() -> Self {
        RationalExpr::from_poly(Poly::one())
    }

    /// An integer constant.
    pub fn integer(c: i64) -> Self {
        RationalExpr::from_poly(Poly::constant(BigInt::from(c)))
    }

    /// A polynomial.
    pub fn from_poly(p: Poly) -> Self {
        RationalExpr {
            num: p,
            den: Poly::one(),
        }
        .normalized()
    }

    /// `Y_C`, or 1 when `C` is empty.
    pub fn var(c: &[Vertex]) -> Self {
        Monomial::var_pow(c, 1).to_expr()
    }

    /// Numerator.
    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator.
    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Whether the expression is 0.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether the denominator is a single term.
    pub fn is_laurent(&self) -> bool {
        self.den.len() == 1
    }

    /// Whether this is a Laurent polynomial whose coefficients are all positive.
    pub fn has_positive_coefficients(&self) -> bool {
        self.is_laurent()
            && self.den.terms().all(|(_, c)| c.is_positive())
            && self.num.terms().all(|(_, c)| c.is_positive())
    }

    /// For a Laurent expression, its terms as Laurent monomials with integer
    /// coefficients; `None` when the denominator is not a unit monomial.
    pub fn laurent_terms(&self) -> Option<Vec<Monomial>> {
        let (de, dc) = self.den.lead()?;
        if self.den.len() != 1 || !dc.is_one() {
            return None;
        }
        Some(
            self.num
                .monomials()
                .into_iter()
                .map(|m| Monomial {
                    coefficient: m.coefficient,
                    exponents: m.exponents.div(de),
                })
                .collect(),
        )
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return RationalExpr::zero();
        }
        let mut common: Option<BTreeMap<SetVariable, i32>> = None;
        for e in self.num.terms.keys().chain(self.den.terms.keys()) {
            let here: BTreeMap<SetVariable, i32> = e.pairs().iter().cloned().collect();
            common = Some(match common {
                None => here,
                Some(prev) => prev
                    .into_iter()
                    .filter_map(|(v, k)| here.get(&v).map(|h| (v, k.min(*h))))
                    .collect(),
            });
            if common.as_ref().is_some_and(|c| c.is_empty()) {
                break;
            }
        }
        if let Some(c) = common.filter(|c| !c.is_empty()) {
            let shift = Exponents(c.into_iter().collect());
            self.num = Poly {
                terms: self
                    .num
                    .terms
                    .iter()
                    .map(|(e, v)| (e.div(&shift), v.clone()))
                    .collect(),
            };
            self.den = Poly {
                terms: self
                    .den
                    .terms
                    .iter()
                    .map(|(e, v)| (e.div(&shift), v.clone()))
                    .collect(),
            };
        }
        let g = self.num.content().gcd(&self.den.content());
        if !g.is_one() && !g.is_zero() {
            self.num = Poly {
                terms: self
                    .num
                    .terms
                    .iter()
                    .map(|(e, v)| (e.clone(), v / &g))
                    .collect(),
            };
            self.den = Poly {
                terms: self
                    .den
                    .terms
                    .iter()
                    .map(|(e, v)| (e.clone(), v / &g))
                    .collect(),
            };
        }
        if self.den.lead().is_some_and(|(_, c)| c.is_negative()) {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
        if self.den.len() > 1 {
            if let Some(q) = self.num.div_exact(&self.den) {
                self.num = q;
                self.den = Poly::one();
            }
        }
        self
    }

    /// Sum.
    pub fn add(&self, other: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RationalExpr {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            }
            .normalized();
        }
        if self.is_laurent() && other.is_laurent() {
            let (ea, ca) = self.den.lead().expect("nonzero");
            let (eb, cb) = other.den.lead().expect("nonzero");
            let mut pairs: BTreeMap<SetVariable, i32> = ea.pairs().iter().cloned().collect();
            for (v, k) in eb.pairs() {
                let slot = pairs.entry(v.clone()).or_insert(0);
                *slot = (*slot).max(*k);
            }
            let lcm_e = Exponents(pairs.into_iter().collect());
            let lcm_c = ca.lcm(cb);
            let na = self.num.mul_term(&lcm_e.div(ea), &(&lcm_c / ca));
            let nb = other.num.mul_term(&lcm_e.div(eb), &(&lcm_c / cb));
            return RationalExpr {
                num: na.add(&nb),
                den: Poly::term(lcm_e, lcm_c),
            }
            .normalized();
        }
        RationalExpr {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    /// Negation.
    pub fn neg(&self) -> RationalExpr {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    /// Difference.
    pub fn sub(&self, other: &RationalExpr) -> RationalExpr {
        self.add(&other.neg())
    }

    /// Product.
    pub fn mul(&self, other: &RationalExpr) -> RationalExpr {
        if self.is_zero() || other.is_zero() {
            return RationalExpr::zero();
        }
        RationalExpr {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    /// Quotient.
    pub fn div(&self, other: &RationalExpr) -> Result<RationalExpr> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalExpr {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        }
        .normalized())
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, k: i32) -> Result<RationalExpr> {
        let base = if k < 0 {
            RationalExpr::one().div(self)?
        } else {
            self.clone()
        };
        let mut out = RationalExpr::one();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Variables that occur.
    pub fn variables(&self) -> BTreeSet<SetVariable> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v
    }

    /// Evaluates at a rational point; `None` if the denominator vanishes.
    pub fn eval(&self, point: &HashMap<SetVariable, BigRational>) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// Replaces variables for which `bindings` returns a value.
    pub fn substitute<F>(&self, mut bindings: F) -> RationalExpr
    where
        F: FnMut(&SetVariable) -> Option<RationalExpr>,
    {
        let mut cache: HashMap<SetVariable, Option<RationalExpr>> = HashMap::new();
        for v in self.variables() {
            let b = bindings(&v);
            cache.insert(v, b);
        }
        if cache.values().all(Option::is_none) {
            return self.clone();
        }
        let mut powers: HashMap<(SetVariable, i32), RationalExpr> = HashMap::new();
        let mut eval_poly = |p: &Poly| -> RationalExpr {
            let mut acc = RationalExpr::zero();
            for (e, c) in p.terms() {
                let mut kept = Vec::new();
                let mut t = RationalExpr::from_poly(Poly::constant(c.clone()));
                for (v, k) in e.pairs() {
                    match &cache[v] {
                        Some(b) => {
                            let key = (v.clone(), *k);
                            let pw = powers
                                .entry(key)
                                .or_insert_with(|| b.pow(*k).expect("positive power"))
                                .clone();
                            t = t.mul(&pw);
                        }
                        None => kept.push((v.clone(), *k)),
                    }
                }
                let mono = Poly::term(Exponents(kept), BigInt::one());
                acc = acc.add(&t.mul(&RationalExpr::from_poly(mono)));
            }
            acc
        };
        let n = eval_poly(&self.num);
        let d = eval_poly(&self.den);
        n.div(&d).expect("substituted denominator is nonzero")
    }

    /// Substitutes from a map.
    pub fn substitute_map(&self, bindings: &HashMap<SetVariable, RationalExpr>) -> RationalExpr {
        self.substitute(|v| bindings.get(v).cloned())
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| -> String {
            if p.len() == 1 {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// Number of random evaluation points tried before the exact check.
pub const EQUALITY_POINTS: usize = 3;

/// Seed of the evaluation points used by [`rf_equal`].
pub const EQUALITY_SEED: u64 = 0x5eed_cafe;

/// Evaluation points shared by both sides of an equality test.
pub fn sample_points(
    vars: &BTreeSet<SetVariable>,
    count: usize,
    seed: u64,
) -> Vec<HashMap<SetVariable, BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            vars.iter()
                .map(|v| {
                    let p: i64 = rng.gen_range(1..=997);
                    let q: i64 = rng.gen_range(1..=61);
                    (v.clone(), BigRational::new(p.into(), q.into()))
                })
                .collect()
        })
        .collect()
}

/// Exact equality by cross-multiplication: `num(a)·den(b) = num(b)·den(a)`.
pub fn rf_equal_exact(a: &RationalExpr, b: &RationalExpr) -> bool {
    a.num.mul(&b.den) == b.num.mul(&a.den)
}

/// Equality with a fast rejection path: both sides are evaluated at
/// [`EQUALITY_POINTS`] pseudo-random rational points, and only on agreement
/// are the cross products compared exactly.
pub fn rf_equal(a: &RationalExpr, b: &RationalExpr) -> bool {
    if a == b {
        return true;
    }
    let mut vars = a.variables();
    vars.extend(b.variables());
    for point in sample_points(&vars, EQUALITY_POINTS, EQUALITY_SEED) {
        if let (Some(x), Some(y)) = (a.eval(&point), b.eval(&point)) {
            if x != y {
                return false;
            }
        }
    }
    rf_equal_exact(a, b)
}

/// Product of `Y_C` over the connected components of a set, via `f`.
pub fn product_over<I>(parts: I) -> RationalExpr
where
    I: IntoIterator<Item = RationalExpr>,
{
    parts
        .into_iter()
        .fold(RationalExpr::one(), |acc, x| acc.mul(&x))
}

/// Convenience: `Y_C` for a vertex set given as a slice, for tests and fixtures.
pub fn y(c: &[Vertex]) -> RationalExpr {
    RationalExpr::var(c)
}

/// Renders a vertex set variable index with digits concatenated, as in `Y_{5670}`.
pub fn compact_name(c: &VertexSet) -> String {
    c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a() -> RationalExpr {
        y(&[1])
    }
    fn b() -> RationalExpr {
        y(&[2])
    }

    #[test]
    fn identity_and_cancellation() {
        assert_eq!(a().add(&RationalExpr::zero()), a());
        assert_eq!(a().mul(&b()).div(&a()).unwrap(), b());
    }

    #[test]
    fn difference_of_squares_divides_exactly() {
        let num = a().mul(&a()).sub(&b().mul(&b()));
        let den = a().sub(&b());
        let q = num.div(&den).unwrap();
        assert_eq!(q, a().add(&b()));
        assert!(q.denominator().is_one());
        assert!(rf_equal(&q.mul(&den), &num));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(a().div(&RationalExpr::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn substitution() {
        let half = RationalExpr::integer(1)
            .div(&RationalExpr::integer(2))
            .unwrap();
        let v1 = SetVariable::new(&[1]);
        assert_eq!(a().substitute(|v| (v == &v1).then(|| half.clone())), half);
        let s = a().add(&b()).substitute(|v| (v == &v1).then(b));
        assert_eq!(s, RationalExpr::integer(2).mul(&b()));
    }

    #[test]
    fn equality_checks() {
        let x = a().div(&b()).unwrap();
        assert!(rf_equal(&x, &x.clone()));
        let lhs = a()
            .mul(&b())
            .add(&a())
            .div(&b())
            .unwrap()
            .div(&a())
            .unwrap();
        let rhs = b().add(&RationalExpr::one()).div(&b()).unwrap();
        assert!(rf_equal(&lhs, &rhs));
        assert!(!rf_equal(&a(), &b()));
    }

    #[test]
    fn rendering_is_canonical() {
        let e = a()
            .mul(&a())
            .add(&RationalExpr::integer(2).mul(&b()))
            .div(&y(&[1, 2]))
            .unwrap();
        assert_eq!(e.to_string(), "(Y[{1}]^2 + 2*Y[{2}])/Y[{1,2}]");
        assert_eq!(RationalExpr::var(&[]), RationalExpr::one());
    }

    #[test]
    fn normal_form_sign_and_content() {
        let e = RationalExpr::new(
            Poly::constant(BigInt::from(-4)),
            Poly::constant(BigInt::from(-6)),
        )
        .unwrap();
        assert_eq!(e.numerator(), &Poly::constant(BigInt::from(2)));
        assert_eq!(e.denominator(), &Poly::constant(BigInt::from(3)));
    }

    #[test]
    fn monomial_order_is_multiplicative() {
        let x = Exponents::single(SetVariable::new(&[1]), 1);
        let z = Exponents::single(SetVariable::new(&[2]), 5);
        assert!(x > z);
        let w = Exponents::single(SetVariable::new(&[3]), 2);
        assert!(x.mul(&w) > z.mul(&w));
    }

    fn small_expr() -> impl Strategy<Value = RationalExpr> {
        let atom = prop_oneof![
            (1u32..4).prop_map(|k| y(&[k])),
            (-3i64..4).prop_map(RationalExpr::integer),
        ];
        atom.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(x, z)| x.add(&z)),
                (inner.clone(), inner.clone()).prop_map(|(x, z)| x.mul(&z)),
                (inner.clone(), inner.clone()).prop_map(|(x, z)| x.sub(&z)),
                (inner.clone(), (1u32..4)).prop_map(|(x, k)| x.div(&y(&[k])).unwrap()),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(x in small_expr(), z in small_expr(), w in small_expr()) {
            prop_assert!(rf_equal(&x.add(&z).add(&w), &x.add(&z.add(&w))));
            prop_assert!(rf_equal(&x.mul(&z).mul(&w), &x.mul(&z.mul(&w))));
            prop_assert!(rf_equal(&x.mul(&z.add(&w)), &x.mul(&z).add(&x.mul(&w))));
            prop_assert!(rf_equal(&x.add(&z), &z.add(&x)));
        }

        #[test]
        fn normalization_is_idempotent(x in small_expr()) {
            let again = RationalExpr::new(x.numerator().clone(), x.denominator().clone()).unwrap();
            prop_assert_eq!(again, x);
        }

        #[test]
        fn evaluation_is_a_homomorphism(x in small_expr(), z in small_expr()) {
            let mut vars = x.variables();
            vars.extend(z.variables());
            for p in sample_points(&vars, 2, 7) {
                if let (Some(ex), Some(ez)) = (x.eval(&p), z.eval(&p)) {
                    prop_assert_eq!(x.add(&z).eval(&p), Some(ex.clone() + ez.clone()));
                    prop_assert_eq!(x.mul(&z).eval(&p), Some(ex * ez));
                }
            }
        }
    }
}
