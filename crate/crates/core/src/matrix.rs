//! Integer matrices attached to a graph, row/column replication, and exact
//! permanents.
//!
//! The permanent uses Ryser's inclusion-exclusion formula walked in Gray-code
//! order, so each step adds or subtracts one column from the running row sums.
//! When the absolute row sums bound every product inside `i128`, terms are
//! computed in machine integers and the running total spills into a `BigInt`
//! before it could overflow; otherwise everything runs on `BigInt`. Both paths
//! are exact.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::ExponentMap;
use crate::graph::Graph;

pub const DEFAULT_PERMANENT_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("permanent side {side} exceeds limit {limit}")]
    TooLarge { side: usize, limit: usize },
    #[error("exponent map has {got} entries, axis has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("exponent total {got} differs from edge count {expected}")]
    TotalMismatch { expected: u64, got: u64 },
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error("integer overflow in matrix product")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Columns,
}

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

/// `{"rows": r, "cols": c, "entries": [[...], ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

impl TryFrom<MatrixFile> for IntMatrix {
    type Error = MatrixError;

    fn try_from(f: MatrixFile) -> Result<Self, Self::Error> {
        if f.entries.len() != f.rows {
            return Err(MatrixError::Malformed(format!(
                "declared {} rows, found {}",
                f.rows,
                f.entries.len()
            )));
        }
        if let Some(r) = f.entries.iter().position(|r| r.len() != f.cols) {
            return Err(MatrixError::Malformed(format!("row {r} does not have {} entries", f.cols)));
        }
        Ok(IntMatrix::from_rows(f.cols, &f.entries))
    }
}

impl From<IntMatrix> for MatrixFile {
    fn from(m: IntMatrix) -> Self {
        MatrixFile { rows: m.rows, cols: m.cols, entries: m.to_rows() }
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if a row has the wrong width.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            entries.extend_from_slice(r);
        }
        IntMatrix { rows: rows.len(), cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Malformed(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let term = self.get(r, k).checked_mul(other.get(k, c)).ok_or(MatrixError::Overflow)?;
                    acc = acc.checked_add(term).ok_or(MatrixError::Overflow)?;
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self, MatrixError> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| MatrixError::Malformed(e.to_string()))?;
        IntMatrix::try_from(file)
    }
}

/// A_G (oriented incidence), B_G (unoriented incidence) and C_G = A_G B_G^T.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrices {
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub c: IntMatrix,
}

/// Rows follow the canonical edge order. C is filled from the adjacency rule
/// (+1 when e' meets e at its smaller end, -1 at its larger end), not by
/// multiplying A and B.
pub fn build_matrices(g: &Graph) -> WeightMatrices {
    let m = g.edge_count();
    let n = g.n() as usize;
    let mut a = IntMatrix::zeros(m, n);
    let mut b = IntMatrix::zeros(m, n);
    let mut c = IntMatrix::zeros(m, m);
    for (idx, e) in g.edges().iter().enumerate() {
        let (s, t) = (e.lo() as usize - 1, e.hi() as usize - 1);
        a.set(idx, s, 1);
        a.set(idx, t, -1);
        b.set(idx, s, 1);
        b.set(idx, t, 1);
        for &f in g.incident(e.lo()) {
            if f != idx {
                c.set(idx, f, c.get(idx, f) + 1);
            }
        }
        for &f in g.incident(e.hi()) {
            if f != idx {
                c.set(idx, f, c.get(idx, f) - 1);
            }
        }
    }
    WeightMatrices { a, b, c }
}

/// A(K) (K(i) copies of column i) or A[K] (row analogue), copies kept in index order.
pub fn replicate(m: &IntMatrix, k: &ExponentMap, axis: Axis) -> Result<IntMatrix, MatrixError> {
    match axis {
        Axis::Rows => {
            if k.len() != m.rows {
                return Err(MatrixError::LengthMismatch { expected: m.rows, got: k.len() });
            }
            let mut rows = Vec::with_capacity(k.total() as usize);
            for r in 0..m.rows {
                for _ in 0..k.get(r) {
                    rows.push(m.row(r).to_vec());
                }
            }
            Ok(IntMatrix::from_rows(m.cols, &rows))
        }
        Axis::Columns => {
            if k.len() != m.cols {
                return Err(MatrixError::LengthMismatch { expected: m.cols, got: k.len() });
            }
            let picked: Vec<usize> = (0..m.cols).flat_map(|c| std::iter::repeat_n(c, k.get(c) as usize)).collect();
            let mut out = IntMatrix::zeros(m.rows, picked.len());
            for r in 0..m.rows {
                for (j, &c) in picked.iter().enumerate() {
                    out.set(r, j, m.get(r, c));
                }
            }
            Ok(out)
        }
    }
}

pub fn permanent(m: &IntMatrix) -> Result<BigInt, MatrixError> {
    permanent_with_limit(m, DEFAULT_PERMANENT_LIMIT)
}

// Sides at or below this run on one thread.
const PARALLEL_MIN_SIDE: usize = 12;
// log2 of the number of Gray-code ranges handed to the thread pool.
const CHUNK_BITS: usize = 8;

pub fn permanent_with_limit(m: &IntMatrix, limit: usize) -> Result<BigInt, MatrixError> {
    if m.rows != m.cols {
        return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n > limit {
        return Err(MatrixError::TooLarge { side: n, limit });
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    if (0..n).any(|r| m.row(r).iter().all(|&x| x == 0)) {
        return Ok(BigInt::zero());
    }

    // Ryser: per(M) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} m_ij.
    // Gray code index k visits S = k ^ (k >> 1); the empty set adds nothing.
    let total: u64 = 1 << n;
    let ranges: Vec<(u64, u64)> = if n <= PARALLEL_MIN_SIDE {
        vec![(1, total)]
    } else {
        let chunks = 1u64 << CHUNK_BITS.min(n);
        let step = total / chunks;
        (0..chunks).map(|c| ((c * step).max(1), (c + 1) * step)).collect()
    };

    let fits_i128 = row_bound(m) <= BigInt::from(i128::MAX);
    let partial = |&(lo, hi): &(u64, u64)| {
        if fits_i128 {
            ryser_range_i128(m, lo, hi)
        } else {
            ryser_range_big(m, lo, hi)
        }
    };
    let sum: BigInt = if ranges.len() == 1 {
        partial(&ranges[0])
    } else {
        let parts: Vec<BigInt> = ranges.par_iter().map(partial).collect();
        parts.into_iter().sum()
    };
    Ok(if n % 2 == 1 { -sum } else { sum })
}

// prod_i sum_j |m_ij|, the largest magnitude any Ryser product can reach.
fn row_bound(m: &IntMatrix) -> BigInt {
    (0..m.rows)
        .map(|r| BigInt::from(m.row(r).iter().map(|&x| (x as i128).abs()).sum::<i128>()))
        .product()
}

fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

fn init_sums<T: Copy + Zero + From<i64> + std::ops::AddAssign>(m: &IntMatrix, subset: u64) -> Vec<T> {
    let n = m.rows;
    let mut sums = vec![T::zero(); n];
    for c in 0..n {
        if subset >> c & 1 == 1 {
            for (r, s) in sums.iter_mut().enumerate() {
                *s += T::from(m.get(r, c));
            }
        }
    }
    sums
}

// Sum over Gray indices lo..hi of (-1)^|S| prod_i rowsum_i(S).
fn ryser_range_i128(m: &IntMatrix, lo: u64, hi: u64) -> BigInt {
    let n = m.rows;
    let cols: Vec<Vec<i128>> = (0..n).map(|c| (0..n).map(|r| m.get(r, c) as i128).collect()).collect();
    let mut subset = gray(lo);
    let mut sums: Vec<i128> = init_sums(m, subset);
    let mut spill = BigInt::zero();
    let mut acc: i128 = 0;
    let mut k = lo;
    loop {
        let mut prod: i128 = 1;
        for &s in &sums {
            prod *= s;
            if prod == 0 {
                break;
            }
        }
        if subset.count_ones() % 2 == 1 {
            prod = -prod;
        }
        match acc.checked_add(prod) {
            Some(v) => acc = v,
            None => {
                spill += BigInt::from(acc);
                acc = prod;
            }
        }
        k += 1;
        if k >= hi {
            break;
        }
        let bit = k.trailing_zeros() as usize;
        let col = &cols[bit];
        if subset >> bit & 1 == 1 {
            for (s, &x) in sums.iter_mut().zip(col) {
                *s -= x;
            }
        } else {
            for (s, &x) in sums.iter_mut().zip(col) {
                *s += x;
            }
        }
        subset ^= 1 << bit;
    }
    spill + BigInt::from(acc)
}

fn ryser_range_big(m: &IntMatrix, lo: u64, hi: u64) -> BigInt {
    let n = m.rows;
    let mut subset = gray(lo);
    let mut sums: Vec<BigInt> = (0..n)
        .map(|r| (0..n).filter(|&c| subset >> c & 1 == 1).map(|c| BigInt::from(m.get(r, c))).sum())
        .collect();
    let mut acc = BigInt::zero();
    let mut k = lo;
    loop {
        let mut prod = BigInt::one();
        for s in &sums {
            prod *= s;
            if prod.sign() == Sign::NoSign {
                break;
            }
        }
        if subset.count_ones() % 2 == 1 {
            acc -= prod;
        } else {
            acc += prod;
        }
        k += 1;
        if k >= hi {
            break;
        }
        let bit = k.trailing_zeros() as usize;
        let remove = subset >> bit & 1 == 1;
        for (r, s) in sums.iter_mut().enumerate() {
            let x = m.get(r, bit);
            if remove {
                *s -= x;
            } else {
                *s += x;
            }
        }
        subset ^= 1 << bit;
    }
    acc
}

/// coe(x^K, P_G) = per(C_G(K)) / K!.
pub fn coe_via_permanent(g: &Graph, k: &ExponentMap) -> Result<BigRational, MatrixError> {
    coe_via_permanent_with_limit(g, k, DEFAULT_PERMANENT_LIMIT)
}

pub fn coe_via_permanent_with_limit(g: &Graph, k: &ExponentMap, limit: usize) -> Result<BigRational, MatrixError> {
    let m = g.edge_count();
    if k.len() != m {
        return Err(MatrixError::LengthMismatch { expected: m, got: k.len() });
    }
    if k.total() != m as u64 {
        return Err(MatrixError::TotalMismatch { expected: m as u64, got: k.total() });
    }
    let c = build_matrices(g).c;
    let per = permanent_with_limit(&replicate(&c, k, Axis::Columns)?, limit)?;
    Ok(BigRational::new(per, BigInt::from(k.factorial())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(v[0].len(), &v)
    }

    #[test]
    fn triangle_matrices() {
        let w = build_matrices(&complete_graph(3));
        assert_eq!(w.c.to_rows(), vec![vec![0, 1, -1], vec![1, 0, -1], vec![1, -1, 0]]);
        assert_eq!(w.a.to_rows(), vec![vec![1, -1, 0], vec![1, 0, -1], vec![0, 1, -1]]);
        assert_eq!(w.b.to_rows(), vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn c_equals_a_times_b_transpose() {
        for n in 2..=7 {
            let w = build_matrices(&complete_graph(n));
            assert_eq!(w.a.matmul(&w.b.transpose()).unwrap(), w.c);
            for i in 0..w.c.rows() {
                assert_eq!(w.c.get(i, i), 0);
            }
        }
    }

    #[test]
    fn replicate_examples() {
        let c = build_matrices(&complete_graph(3)).c;
        let r = replicate(&c, &ExponentMap::new(vec![2, 1, 0]), Axis::Columns).unwrap();
        assert_eq!(r.to_rows(), vec![vec![0, 0, 1], vec![1, 1, 0], vec![1, 1, -1]]);
        let b = build_matrices(&complete_graph(4)).b;
        let k = ExponentMap::new(vec![0, 2, 0, 1, 0, 3]);
        let br = replicate(&b, &k, Axis::Rows).unwrap();
        assert_eq!((br.rows(), br.cols()), (6, 4));
        assert_eq!(br.row(0), b.row(1));
        assert!(replicate(&b, &ExponentMap::new(vec![1]), Axis::Rows).is_err());
    }

    #[test]
    fn permanent_examples() {
        for n in 0..6 {
            assert_eq!(permanent(&IntMatrix::identity(n)).unwrap(), BigInt::one());
        }
        assert_eq!(permanent(&mat(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]])).unwrap(), 6.into());
        assert_eq!(permanent(&mat(&[&[0, 0, 1], &[1, 1, 0], &[1, 1, -1]])).unwrap(), 2.into());
        assert_eq!(permanent(&mat(&[&[2, 1, -1], &[1, 2, 1], &[-1, 1, 2]])).unwrap(), 12.into());
    }

    #[test]
    fn permanent_errors() {
        assert_eq!(
            permanent(&IntMatrix::zeros(2, 3)),
            Err(MatrixError::NotSquare { rows: 2, cols: 3 })
        );
        assert_eq!(
            permanent_with_limit(&IntMatrix::identity(5), 4),
            Err(MatrixError::TooLarge { side: 5, limit: 4 })
        );
    }

    #[test]
    fn big_path_matches_small_path() {
        let small = mat(&[&[1, 1, 2], &[3, 1, 5], &[7, 11, 1]]);
        assert_eq!(ryser_range_i128(&small, 1, 8), ryser_range_big(&small, 1, 8));

        // entries large enough to force the BigInt path
        let big = 1i64 << 45;
        let m = mat(&[&[big, 1, 2], &[3, big, 5], &[7, 11, big]]);
        assert!(row_bound(&m) > BigInt::from(i128::MAX));
        let b = BigInt::from(big);
        // the six permutation products of [[b,1,2],[3,b,5],[7,11,b]]
        let by_hand = &b * &b * &b + &b * 5 * 11 + 3 * &b + 5 * 7 + 2 * 3 * 11 + 2 * &b * 7;
        assert_eq!(permanent(&m).unwrap(), by_hand);
    }

    #[test]
    fn coe_examples() {
        let t = complete_graph(3);
        let one = BigRational::one();
        assert_eq!(coe_via_permanent(&t, &ExponentMap::new(vec![2, 1, 0])).unwrap(), one);
        assert!(coe_via_permanent(&t, &ExponentMap::new(vec![1, 1, 1])).unwrap().is_zero());
        assert_eq!(
            coe_via_permanent(&t, &ExponentMap::new(vec![1, 1, 0])),
            Err(MatrixError::TotalMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn matrix_file_roundtrip_and_errors() {
        let m = IntMatrix::from_json(r#"{"rows":2,"cols":2,"entries":[[1,2],[3,4]]}"#).unwrap();
        assert_eq!(permanent(&m).unwrap(), 10.into());
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"rows":2,"cols":2,"entries":[[1,2],[3,4]]}"#);
        assert!(matches!(
            IntMatrix::from_json(r#"{"rows":2,"cols":2,"entries":[[1,2]]}"#),
            Err(MatrixError::Malformed(_))
        ));
    }
}
