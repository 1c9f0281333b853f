//! Exact multivariate polynomials over the rationals.
//!
//! Monomials are stored sparsely as sorted `(variable, exponent)` pairs, and a
//! [`SparsePoly`] never stores a zero coefficient. Products of linear forms are
//! the workhorse here (every polynomial the certifier builds is one), so they get
//! an integer fast path with a divide-and-conquer expansion that combines like
//! terms as soon as they appear.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::{AddAssign, Mul};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable sets differ: {0} vs {1} variables")]
    VariableMismatch(usize, usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("exponent map has {got} entries, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A map K from an index set (edges or variables) to non-negative exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentMap(Vec<u32>);

impl ExponentMap {
    pub fn new(values: Vec<u32>) -> Self {
        ExponentMap(values)
    }

    pub fn zeros(len: usize) -> Self {
        ExponentMap(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, idx: usize) -> u32 {
        self.0[idx]
    }

    pub fn set(&mut self, idx: usize, value: u32) {
        self.0[idx] = value;
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&k| k as u64).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Pointwise `self <= other`; maps of different length are incomparable.
    pub fn le(&self, other: &ExponentMap) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// K! = product of K(e)!.
    pub fn factorial(&self) -> BigUint {
        let mut acc = BigUint::one();
        for &k in &self.0 {
            for f in 2..=k {
                acc *= f;
            }
        }
        acc
    }

    pub fn to_monomial(&self) -> Monomial {
        Monomial(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| (v as u32, k))
                .collect(),
        )
    }
}

impl From<Vec<u32>> for ExponentMap {
    fn from(values: Vec<u32>) -> Self {
        ExponentMap(values)
    }
}

pub fn exp_factorial(k: &ExponentMap) -> BigUint {
    k.factorial()
}

/// A monomial x^K as sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(SmallVec<[(u32, u32); 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: u32) -> Self {
        Monomial(smallvec::smallvec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k).sum()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        match self.0.binary_search_by_key(&v, |&(var, _)| var) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    /// Highest variable index used, if any.
    pub fn max_var(&self) -> Option<u32> {
        self.0.last().map(|&(v, _)| v)
    }

    pub fn to_exponents(&self, nvars: usize) -> ExponentMap {
        let mut k = ExponentMap::zeros(nvars);
        for &(v, e) in &self.0 {
            k.set(v as usize, e);
        }
        k
    }

    /// Product of `self` with x_v.
    pub fn times_var(&self, v: u32) -> Monomial {
        let mut out = self.clone();
        match out.0.binary_search_by_key(&v, |&(var, _)| var) {
            Ok(i) => out.0[i].1 += 1,
            Err(i) => out.0.insert(i, (v, 1)),
        }
        out
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// K! for this monomial's exponent vector.
    pub fn factorial(&self) -> BigUint {
        let mut acc = BigUint::one();
        for &(_, k) in &self.0 {
            for f in 2..=k {
                acc *= f;
            }
        }
        acc
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, k)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{v}^{k}")?;
        }
        Ok(())
    }
}

/// A linear form `sum_j c_j x_j` given as `(variable, coefficient)` pairs.
pub type LinearForm = Vec<(u32, BigInt)>;

/// Exact polynomial in `nvars` variables with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(nvars: usize, v: u32) -> Self {
        assert!((v as usize) < nvars);
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(v), BigRational::one());
        p
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn from_integer_terms(nvars: usize, terms: HashMap<Monomial, BigInt>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, BigRational::from_integer(c)))
            .collect();
        SparsePoly { nvars, terms }
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if let Some(v) = m.max_var() {
            assert!((v as usize) < self.nvars, "variable x{v} outside {} variables", self.nvars);
        }
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m);
        match slot {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// coe(x^K, P); zero when the monomial is absent or `K` is over a different
    /// number of variables.
    pub fn coefficient(&self, k: &ExponentMap) -> BigRational {
        if k.len() != self.nvars {
            return BigRational::zero();
        }
        self.coefficient_of(&k.to_monomial())
    }

    /// mon(P): exponent vectors carrying a nonzero coefficient, sorted.
    pub fn support(&self) -> Vec<ExponentMap> {
        let mut out: Vec<_> = self.terms.keys().map(|m| m.to_exponents(self.nvars)).collect();
        out.sort_unstable();
        out
    }

    /// Common degree of all terms, or `None` for the zero polynomial or a
    /// non-homogeneous one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparsePoly {
        self.scale(&-BigRational::one())
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, other.nvars);
        let a: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let b: Vec<_> = other.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let prod = multiply_terms(&a, &b);
        SparsePoly {
            nvars: self.nvars,
            terms: prod.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Expanded product of integer linear forms over `nvars` variables. The
    /// empty product is the constant 1.
    pub fn product_of_linear_forms(nvars: usize, forms: &[LinearForm]) -> SparsePoly {
        for form in forms {
            for &(v, _) in form {
                assert!((v as usize) < nvars, "variable x{v} outside {nvars} variables");
            }
        }
        let terms = expand_forms(forms);
        Self::from_integer_terms(nvars, terms.into_iter().collect())
    }

    /// One `coeff monomial` line per term, lines sorted lexicographically.
    pub fn dump(&self) -> String {
        let mut lines: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c} {m}")).collect();
        lines.sort();
        let mut out = lines.join("\n");
        if !out.is_empty() {
            out.push('\n');
        }
        out
    }
}

// Below this many factors a product is expanded sequentially.
const PARALLEL_SPLIT: usize = 8;

fn expand_forms(forms: &[LinearForm]) -> Vec<(Monomial, BigInt)> {
    if forms.len() <= PARALLEL_SPLIT {
        let mut acc: Vec<(Monomial, BigInt)> = vec![(Monomial::one(), BigInt::one())];
        for form in forms {
            let mut next: HashMap<Monomial, BigInt> = HashMap::with_capacity(acc.len() * form.len());
            for (m, c) in &acc {
                for (v, a) in form {
                    if a.is_zero() {
                        continue;
                    }
                    *next.entry(m.times_var(*v)).or_default() += c * a;
                }
            }
            acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if acc.is_empty() {
                break;
            }
        }
        return acc;
    }
    let (left, right) = forms.split_at(forms.len() / 2);
    let (a, b) = rayon::join(|| expand_forms(left), || expand_forms(right));
    multiply_terms(&a, &b).into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn multiply_terms<C>(a: &[(Monomial, C)], b: &[(Monomial, C)]) -> Vec<(Monomial, C)>
where
    C: Clone + Default + AddAssign + Zero,
    for<'x> &'x C: Mul<&'x C, Output = C>,
{
    let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(a.len().max(b.len()));
    for (ma, ca) in a {
        for (mb, cb) in b {
            *acc.entry(ma.times(mb)).or_default() += ca * cb;
        }
    }
    acc.into_iter().collect()
}

/// F_M = prod_i (sum_j M[i][j] x_j) for a matrix given as integer rows.
pub fn poly_from_linear_forms(rows: &[Vec<i64>], nvars: usize) -> SparsePoly {
    let forms: Vec<LinearForm> = rows
        .iter()
        .map(|row| {
            assert_eq!(row.len(), nvars, "row width differs from variable count");
            row.iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(j, &a)| (j as u32, BigInt::from(a)))
                .collect()
        })
        .collect();
    SparsePoly::product_of_linear_forms(nvars, &forms)
}

/// <f, g> = sum_K K! coe(x^K, f) coe(x^K, g). Conjugation is the identity on
/// rational data.
pub fn inner_product(f: &SparsePoly, g: &SparsePoly) -> Result<BigRational, AlgebraError> {
    if f.nvars != g.nvars {
        return Err(AlgebraError::VariableMismatch(f.nvars, g.nvars));
    }
    if !f.is_homogeneous() || !g.is_homogeneous() {
        return Err(AlgebraError::NotHomogeneous);
    }
    if let (Some(df), Some(dg)) = (f.homogeneous_degree(), g.homogeneous_degree()) {
        if df != dg {
            return Err(AlgebraError::DegreeMismatch(df, dg));
        }
    }
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    let mut acc = BigRational::zero();
    for (m, c) in &small.terms {
        if let Some(d) = large.terms.get(m) {
            let weight = BigRational::from_integer(BigInt::from(m.factorial()));
            acc += weight * c * d;
        }
    }
    Ok(acc)
}

fn vertex_var(v: u32) -> u32 {
    v - 1
}

/// f_{A_G} = prod over edges {i,j}, i<j, of (x_i - x_j); vertex v is variable v-1.
pub fn vandermonde_poly(g: &Graph) -> SparsePoly {
    let forms: Vec<LinearForm> = g
        .edges()
        .iter()
        .map(|e| vec![(vertex_var(e.lo()), BigInt::one()), (vertex_var(e.hi()), -BigInt::one())])
        .collect();
    SparsePoly::product_of_linear_forms(g.n() as usize, &forms)
}

/// f_{B_G[K]} = prod over edges {i,j} of (x_i + x_j)^{K(e)}.
pub fn plus_power_poly(g: &Graph, k: &ExponentMap) -> Result<SparsePoly, AlgebraError> {
    if k.len() != g.edge_count() {
        return Err(AlgebraError::LengthMismatch { expected: g.edge_count(), got: k.len() });
    }
    let mut forms: Vec<LinearForm> = Vec::with_capacity(k.total() as usize);
    for (idx, e) in g.edges().iter().enumerate() {
        for _ in 0..k.get(idx) {
            forms.push(vec![(vertex_var(e.lo()), BigInt::one()), (vertex_var(e.hi()), BigInt::one())]);
        }
    }
    Ok(SparsePoly::product_of_linear_forms(g.n() as usize, &forms))
}

/// P_G over edge variables, built straight from the incidence sets E(i), E(j)
/// rather than through C_G.
pub fn edge_difference_poly(g: &Graph) -> SparsePoly {
    let forms: Vec<LinearForm> = g
        .edges()
        .iter()
        .map(|e| {
            let mut form: BTreeMap<u32, BigInt> = BTreeMap::new();
            for &f in g.incident(e.lo()) {
                *form.entry(f as u32).or_default() += 1;
            }
            for &f in g.incident(e.hi()) {
                *form.entry(f as u32).or_default() -= 1;
            }
            form.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        })
        .collect();
    SparsePoly::product_of_linear_forms(g.edge_count(), &forms)
}

/// P~_G over edge variables `0..|E|` followed by vertex variables
/// `|E|..|E|+n` (vertex v is variable `|E| + v - 1`).
pub fn total_weight_poly(g: &Graph) -> SparsePoly {
    let m = g.edge_count() as u32;
    let forms: Vec<LinearForm> = g
        .edges()
        .iter()
        .map(|e| {
            let mut form: BTreeMap<u32, BigInt> = BTreeMap::new();
            for &f in g.incident(e.lo()) {
                *form.entry(f as u32).or_default() += 1;
            }
            *form.entry(m + e.lo() - 1).or_default() += 1;
            for &f in g.incident(e.hi()) {
                *form.entry(f as u32).or_default() -= 1;
            }
            *form.entry(m + e.hi() - 1).or_default() -= 1;
            form.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        })
        .collect();
    SparsePoly::product_of_linear_forms(g.edge_count() + g.n() as usize, &forms)
}

/// Sum of |coefficients|, used as a relabeling invariant.
pub fn coefficient_mass(p: &SparsePoly) -> BigRational {
    p.terms().map(|(_, c)| c.abs()).fold(BigRational::zero(), |a, b| a + b)
}
