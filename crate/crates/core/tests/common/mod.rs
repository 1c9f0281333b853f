#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use twcert::algebra::ExponentMap;
use twcert::graph::{Graph, Vertex};
use twcert::matrix::IntMatrix;

/// Sum over all permutations; only for tiny sides.
pub fn naive_permanent(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    assert!(m.rows() <= 8);
    fn go(m: &IntMatrix, row: usize, used: &mut Vec<bool>) -> BigInt {
        if row == m.rows() {
            return BigInt::from(1);
        }
        let mut acc = BigInt::from(0);
        for c in 0..m.cols() {
            if !used[c] && m.get(row, c) != 0 {
                used[c] = true;
                acc += go(m, row + 1, used) * m.get(row, c);
                used[c] = false;
            }
        }
        acc
    }
    go(m, 0, &mut vec![false; m.cols()])
}

pub fn matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(lo..=hi, rows * cols)
        .prop_map(move |flat| IntMatrix::from_rows(cols, &flat.chunks(cols).map(<[i64]>::to_vec).collect::<Vec<_>>()))
}

/// Exponent map over `vars` entries with the given total.
pub fn exponents(vars: usize, total: usize) -> impl Strategy<Value = ExponentMap> {
    prop::collection::vec(0..vars, total).prop_map(move |picks| {
        let mut k = vec![0u32; vars];
        for p in picks {
            k[p] += 1;
        }
        ExponentMap::new(k)
    })
}

/// Random simple graph on `n` vertices.
pub fn graph(n: Vertex) -> impl Strategy<Value = Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    prop::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
        Graph::new(n, pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| *p)).unwrap()
    })
}

/// Every simple graph on `n` vertices with at most `max_edges` edges.
pub fn all_graphs(n: Vertex, max_edges: usize) -> Vec<Graph> {
    let pairs: Vec<(Vertex, Vertex)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    (0u32..1 << pairs.len())
        .filter(|mask| mask.count_ones() as usize <= max_edges)
        .map(|mask| Graph::new(n, pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, p)| *p)).unwrap())
        .collect()
}

/// Every exponent map with entries at most `cap` summing to `total`.
pub fn all_exponents(len: usize, cap: u32, total: u32) -> Vec<ExponentMap> {
    fn go(i: usize, left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentMap>) {
        if i == cur.len() {
            if left == 0 {
                out.push(ExponentMap::new(cur.clone()));
            }
            return;
        }
        for v in 0..=cap.min(left) {
            cur[i] = v;
            go(i + 1, left - v, cap, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, total, cap, &mut vec![0; len], &mut out);
    out
}
