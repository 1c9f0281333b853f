//! Ground truth by brute force: proper total weightings from explicit lists,
//! search for exponent maps with a nonzero coefficient, and randomized checks
//! that such a map really guarantees a proper weighting from lists of the
//! matching sizes.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::ExponentMap;
use crate::graph::{Edge, EdgeMap, Graph, Vertex};
use crate::matrix::{coe_via_permanent_with_limit, MatrixError, DEFAULT_PERMANENT_LIMIT};

pub const DEFAULT_MAX_GRID: u64 = 10_000_000;

const NUMERATOR_RANGE: i64 = 1_000_000;
const MAX_DENOMINATOR: i64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("weighting does not assign {0}")]
    MissingAssignment(String),
    #[error("list assignment has {got} {what} lists, graph has {expected}")]
    ListCountMismatch { what: &'static str, expected: usize, got: usize },
    #[error("empty list for {0}")]
    EmptyList(String),
    #[error("grid has {size} points, limit is {limit}")]
    GridTooLarge { size: BigUint, limit: u64 },
    #[error("vertex {0} has a positive exponent; only (1, k) lists are supported")]
    VertexExponent(Vertex),
    #[error("coefficient of the requested monomial is zero")]
    ZeroCoefficient,
    #[error("edge {0} is not in the graph")]
    ForeignEdge(Edge),
    #[error("vertex {0} is not in the graph")]
    ForeignVertex(Vertex),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Map keyed by vertices, written as a JSON object with `"v"` keys in vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap<T>(pub Vec<(Vertex, T)>);

impl<T: Serialize> Serialize for VertexMap<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, x) in &self.0 {
            map.serialize_entry(&v.to_string(), x)?;
        }
        map.end()
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for VertexMap<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, T>::deserialize(d)?;
        let mut out = Vec::with_capacity(raw.len());
        for (k, x) in raw {
            let v: Vertex = k.trim().parse().map_err(|_| serde::de::Error::custom(format!("bad vertex key {k:?}")))?;
            out.push((v, x));
        }
        out.sort_by_key(|(v, _)| *v);
        if let Some(w) = out.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(serde::de::Error::custom(format!("vertex {} listed twice", w[0].0)));
        }
        Ok(VertexMap(out))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, OracleError> {
    s.trim().parse::<BigRational>().map_err(|e| OracleError::Malformed(format!("rational {s:?}: {e}")))
}

fn show(x: &BigRational) -> String {
    x.to_string()
}

/// Lists L(z) for every vertex and edge, each kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    vertices: Vec<Vec<BigRational>>,
    edges: Vec<Vec<BigRational>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListsFile {
    pub vertices: VertexMap<Vec<String>>,
    pub edges: EdgeMap<Vec<String>>,
}

impl ListAssignment {
    /// `vertices[v - 1]` is L(v), `edges[k]` is L of the k-th edge.
    pub fn new(g: &Graph, vertices: Vec<Vec<BigRational>>, edges: Vec<Vec<BigRational>>) -> Result<Self, OracleError> {
        if vertices.len() != g.n() as usize {
            return Err(OracleError::ListCountMismatch { what: "vertex", expected: g.n() as usize, got: vertices.len() });
        }
        if edges.len() != g.edge_count() {
            return Err(OracleError::ListCountMismatch { what: "edge", expected: g.edge_count(), got: edges.len() });
        }
        let tidy = |mut l: Vec<BigRational>| {
            l.sort();
            l.dedup();
            l
        };
        let vertices: Vec<_> = vertices.into_iter().map(tidy).collect();
        let edges: Vec<_> = edges.into_iter().map(tidy).collect();
        if let Some(v) = vertices.iter().position(Vec::is_empty) {
            return Err(OracleError::EmptyList(format!("vertex {}", v + 1)));
        }
        if let Some(e) = edges.iter().position(Vec::is_empty) {
            return Err(OracleError::EmptyList(format!("edge {}", g.edge(e))));
        }
        Ok(ListAssignment { vertices, edges })
    }

    pub fn vertex_list(&self, v: Vertex) -> &[BigRational] {
        &self.vertices[v as usize - 1]
    }

    pub fn edge_list(&self, idx: usize) -> &[BigRational] {
        &self.edges[idx]
    }

    /// Number of grid points, the product of all list sizes.
    pub fn grid_size(&self) -> BigUint {
        self.vertices.iter().chain(&self.edges).map(|l| BigUint::from(l.len())).product()
    }

    pub fn from_file(g: &Graph, file: ListsFile) -> Result<Self, OracleError> {
        let mut vertices = vec![Vec::new(); g.n() as usize];
        for (v, list) in file.vertices.0 {
            if v == 0 || v > g.n() {
                return Err(OracleError::ForeignVertex(v));
            }
            vertices[v as usize - 1] = list.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
        }
        let mut edges = vec![Vec::new(); g.edge_count()];
        for (e, list) in file.edges.0 {
            let idx = g.edge_index(e.lo(), e.hi()).ok_or(OracleError::ForeignEdge(e))?;
            edges[idx] = list.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
        }
        Self::new(g, vertices, edges)
    }

    pub fn from_json(g: &Graph, text: &str) -> Result<Self, OracleError> {
        let file: ListsFile = serde_json::from_str(text).map_err(|e| OracleError::Malformed(e.to_string()))?;
        Self::from_file(g, file)
    }

    pub fn to_file(&self, g: &Graph) -> ListsFile {
        ListsFile {
            vertices: VertexMap(
                self.vertices.iter().enumerate().map(|(i, l)| (i as Vertex + 1, l.iter().map(show).collect())).collect(),
            ),
            edges: EdgeMap(g.edges().iter().zip(&self.edges).map(|(e, l)| (*e, l.iter().map(show).collect())).collect()),
        }
    }
}

/// A value for every vertex and edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalWeighting {
    pub vertices: Vec<BigRational>,
    pub edges: Vec<BigRational>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightingFile {
    pub vertices: VertexMap<String>,
    pub edges: EdgeMap<String>,
}

impl TotalWeighting {
    pub fn to_file(&self, g: &Graph) -> WeightingFile {
        WeightingFile {
            vertices: VertexMap(self.vertices.iter().enumerate().map(|(i, x)| (i as Vertex + 1, show(x))).collect()),
            edges: EdgeMap(g.edges().iter().zip(&self.edges).map(|(e, x)| (*e, show(x))).collect()),
        }
    }

    /// Vertex totals phi(v) + sum of phi(e) over edges at v.
    pub fn totals(&self, g: &Graph) -> Vec<BigRational> {
        g.vertices()
            .map(|v| {
                g.incident(v).iter().fold(self.vertices[v as usize - 1].clone(), |acc, &e| acc + &self.edges[e])
            })
            .collect()
    }
}

pub fn is_proper(g: &Graph, w: &TotalWeighting) -> Result<bool, OracleError> {
    if w.vertices.len() != g.n() as usize {
        return Err(OracleError::MissingAssignment(format!("all {} vertices", g.n())));
    }
    if w.edges.len() != g.edge_count() {
        return Err(OracleError::MissingAssignment(format!("all {} edges", g.edge_count())));
    }
    let totals = w.totals(g);
    Ok(g.edges().iter().all(|e| totals[e.lo() as usize - 1] != totals[e.hi() as usize - 1]))
}

pub fn solve_list(g: &Graph, lists: &ListAssignment) -> Result<Option<TotalWeighting>, OracleError> {
    solve_list_with_limit(g, lists, DEFAULT_MAX_GRID)
}

/// First proper weighting in lexicographic grid order: vertices 1..n, then
/// edges in canonical order, each list ascending. Depth-first with every edge
/// constraint checked as soon as its last variable is set.
pub fn solve_list_with_limit(
    g: &Graph,
    lists: &ListAssignment,
    max_grid: u64,
) -> Result<Option<TotalWeighting>, OracleError> {
    let size = lists.grid_size();
    if size > BigUint::from(max_grid) {
        return Err(OracleError::GridTooLarge { size, limit: max_grid });
    }
    let n = g.n() as usize;
    let m = g.edge_count();
    // constraint k becomes decidable at position n + (last edge touching either end)
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n + m];
    for (k, e) in g.edges().iter().enumerate() {
        let last = g.incident(e.lo()).iter().chain(g.incident(e.hi())).copied().max().unwrap();
        ready[n + last].push(k);
    }
    let mut solver = ListSolver {
        g,
        lists,
        ready,
        totals: vec![BigRational::zero(); n],
        choice: vec![0; n + m],
    };
    if !solver.descend(0) {
        return Ok(None);
    }
    let pick = |pos: usize, list: &[BigRational]| list[solver.choice[pos]].clone();
    Ok(Some(TotalWeighting {
        vertices: (0..n).map(|v| pick(v, &lists.vertices[v])).collect(),
        edges: (0..m).map(|k| pick(n + k, &lists.edges[k])).collect(),
    }))
}

struct ListSolver<'a> {
    g: &'a Graph,
    lists: &'a ListAssignment,
    ready: Vec<Vec<usize>>,
    totals: Vec<BigRational>,
    choice: Vec<usize>,
}

impl ListSolver<'_> {
    fn touched(&self, pos: usize) -> (usize, Option<usize>) {
        let n = self.g.n() as usize;
        if pos < n {
            (pos, None)
        } else {
            let e = self.g.edge(pos - n);
            (e.lo() as usize - 1, Some(e.hi() as usize - 1))
        }
    }

    fn list(&self, pos: usize) -> &[BigRational] {
        let n = self.g.n() as usize;
        if pos < n {
            &self.lists.vertices[pos]
        } else {
            &self.lists.edges[pos - n]
        }
    }

    fn descend(&mut self, pos: usize) -> bool {
        if pos == self.choice.len() {
            return true;
        }
        let (a, b) = self.touched(pos);
        for idx in 0..self.list(pos).len() {
            let x = self.list(pos)[idx].clone();
            self.totals[a] += &x;
            if let Some(b) = b {
                self.totals[b] += &x;
            }
            let ok = self.ready[pos].iter().all(|&k| {
                let e = self.g.edge(k);
                self.totals[e.lo() as usize - 1] != self.totals[e.hi() as usize - 1]
            });
            if ok {
                self.choice[pos] = idx;
                if self.descend(pos + 1) {
                    return true;
                }
            }
            self.totals[a] -= &x;
            if let Some(b) = b {
                self.totals[b] -= &x;
            }
        }
        false
    }
}

/// Walks exponent maps bounded pointwise by `caps` with the given total, in
/// descending lexicographic order, until `visit` returns true.
fn descending_maps(caps: &[u32], total: u64, visit: &mut impl FnMut(&[u32]) -> Result<bool, OracleError>) -> Result<bool, OracleError> {
    let mut suffix_cap = vec![0u64; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        suffix_cap[i] = suffix_cap[i + 1] + caps[i] as u64;
    }
    let mut cur = vec![0u32; caps.len()];
    fn go(
        i: usize,
        left: u64,
        caps: &[u32],
        suffix_cap: &[u64],
        cur: &mut Vec<u32>,
        visit: &mut impl FnMut(&[u32]) -> Result<bool, OracleError>,
    ) -> Result<bool, OracleError> {
        if i == caps.len() {
            return if left == 0 { visit(cur) } else { Ok(false) };
        }
        let hi = (caps[i] as u64).min(left);
        let lo = left.saturating_sub(suffix_cap[i + 1]);
        for v in (lo..=hi).rev() {
            cur[i] = v as u32;
            if go(i + 1, left - v, caps, suffix_cap, cur, visit)? {
                return Ok(true);
            }
        }
        cur[i] = 0;
        Ok(false)
    }
    if total > suffix_cap[0] {
        return Ok(false);
    }
    go(0, total, caps, &suffix_cap, &mut cur, visit)
}

fn first_nonzero_below(g: &Graph, caps: &[u32], limit: usize) -> Result<Option<ExponentMap>, OracleError> {
    let m = g.edge_count();
    if m > limit {
        return Err(MatrixError::TooLarge { side: m, limit }.into());
    }
    let mut found = None;
    descending_maps(caps, m as u64, &mut |k| {
        let k = ExponentMap::new(k.to_vec());
        if !coe_via_permanent_with_limit(g, &k, limit)?.is_zero() {
            found = Some(k);
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(found)
}

pub fn find_sufficient(g: &Graph, b: u32) -> Result<Option<ExponentMap>, OracleError> {
    find_sufficient_with_limit(g, b, DEFAULT_PERMANENT_LIMIT)
}

/// First K (descending lexicographic) with entries at most `b`, total |E| and
/// coe(x^K, P_G) != 0.
pub fn find_sufficient_with_limit(g: &Graph, b: u32, limit: usize) -> Result<Option<ExponentMap>, OracleError> {
    first_nonzero_below(g, &vec![b; g.edge_count()], limit)
}

/// A witness K' <= K with total |E| and nonzero coefficient, if K is sufficient.
pub fn sufficient_witness(g: &Graph, k: &ExponentMap) -> Result<Option<ExponentMap>, OracleError> {
    if k.len() != g.edge_count() {
        return Err(MatrixError::LengthMismatch { expected: g.edge_count(), got: k.len() }.into());
    }
    first_nonzero_below(g, k.values(), DEFAULT_PERMANENT_LIMIT)
}

/// Exponents on all of V and E.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalExponents {
    pub vertices: ExponentMap,
    pub edges: ExponentMap,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EdgeExps {
    List(Vec<u32>),
    Map(EdgeMap<u32>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VertexExps {
    List(Vec<u32>),
    Map(VertexMap<u32>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ExponentFile {
    Bare(Vec<u32>),
    Full { edges: EdgeExps, vertices: Option<VertexExps> },
}

#[derive(Serialize)]
struct ExponentFileOut {
    edges: EdgeMap<u32>,
    vertices: VertexMap<u32>,
}

impl TotalExponents {
    pub fn edges_only(g: &Graph, edges: ExponentMap) -> Self {
        TotalExponents { vertices: ExponentMap::zeros(g.n() as usize), edges }
    }

    /// Accepts `[k, ...]` in edge order, or `{"edges": [...] | {"i-j": k},
    /// "vertices": [...] | {"v": k}}` with missing keys read as 0.
    pub fn from_json(g: &Graph, text: &str) -> Result<Self, OracleError> {
        let file: ExponentFile = serde_json::from_str(text).map_err(|e| OracleError::Malformed(e.to_string()))?;
        let (edges, vertices) = match file {
            ExponentFile::Bare(v) => (EdgeExps::List(v), None),
            ExponentFile::Full { edges, vertices } => (edges, vertices),
        };
        let edges = match edges {
            EdgeExps::List(v) => {
                if v.len() != g.edge_count() {
                    return Err(MatrixError::LengthMismatch { expected: g.edge_count(), got: v.len() }.into());
                }
                ExponentMap::new(v)
            }
            EdgeExps::Map(map) => {
                let mut k = ExponentMap::zeros(g.edge_count());
                for (e, x) in map.0 {
                    k.set(g.edge_index(e.lo(), e.hi()).ok_or(OracleError::ForeignEdge(e))?, x);
                }
                k
            }
        };
        let vertices = match vertices {
            None => ExponentMap::zeros(g.n() as usize),
            Some(VertexExps::List(v)) => {
                if v.len() != g.n() as usize {
                    return Err(MatrixError::LengthMismatch { expected: g.n() as usize, got: v.len() }.into());
                }
                ExponentMap::new(v)
            }
            Some(VertexExps::Map(map)) => {
                let mut k = ExponentMap::zeros(g.n() as usize);
                for (v, x) in map.0 {
                    if v == 0 || v > g.n() {
                        return Err(OracleError::ForeignVertex(v));
                    }
                    k.set(v as usize - 1, x);
                }
                k
            }
        };
        Ok(TotalExponents { vertices, edges })
    }

    fn to_file(&self, g: &Graph) -> ExponentFileOut {
        ExponentFileOut {
            edges: EdgeMap(g.edges().iter().enumerate().map(|(i, e)| (*e, self.edges.get(i))).collect()),
            vertices: VertexMap((0..self.vertices.len()).map(|i| (i as Vertex + 1, self.vertices.get(i))).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial: u64,
    pub lists: ListAssignment,
    pub weighting: Option<TotalWeighting>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnReport {
    pub graph: Graph,
    pub exponents: TotalExponents,
    pub seed: u64,
    pub trials: u64,
    pub failures: u64,
    pub outcomes: Vec<TrialOutcome>,
}

#[derive(Serialize)]
struct TrialOut {
    trial: u64,
    lists: ListsFile,
    weighting: Option<WeightingFile>,
}

#[derive(Serialize)]
struct CnReportOut<'a> {
    graph: &'a Graph,
    #[serde(rename = "K")]
    k: ExponentFileOut,
    seed: u64,
    trials: u64,
    failures: u64,
    outcomes: Vec<TrialOut>,
}

impl CnReport {
    pub fn to_json(&self) -> String {
        let out = CnReportOut {
            graph: &self.graph,
            k: self.exponents.to_file(&self.graph),
            seed: self.seed,
            trials: self.trials,
            failures: self.failures,
            outcomes: self
                .outcomes
                .iter()
                .map(|o| TrialOut {
                    trial: o.trial,
                    lists: o.lists.to_file(&self.graph),
                    weighting: o.weighting.as_ref().map(|w| w.to_file(&self.graph)),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&out).expect("report serialization is infallible")
    }
}

/// Rational with numerator in [-10^6, 10^6] and denominator in [1, 100].
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    let num = rng.gen_range(-NUMERATOR_RANGE..=NUMERATOR_RANGE);
    let den = rng.gen_range(1..=MAX_DENOMINATOR);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn distinct_rationals(rng: &mut impl Rng, count: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(count);
    while out.len() < count {
        let x = random_rational(rng);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn trial_rng(seed: u64, trial: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Random lists with |L(v)| = 1 and |L(e)| = K(e) + 1.
pub fn random_lists(g: &Graph, k: &ExponentMap, rng: &mut impl Rng) -> ListAssignment {
    let vertices = g.vertices().map(|_| vec![random_rational(rng)]).collect();
    let edges = (0..g.edge_count()).map(|i| distinct_rationals(rng, k.get(i) as usize + 1)).collect();
    ListAssignment::new(g, vertices, edges).expect("random lists are well formed")
}

pub fn cn_check(g: &Graph, k: &TotalExponents, trials: u64, seed: u64) -> Result<CnReport, OracleError> {
    cn_check_with_limits(g, k, trials, seed, DEFAULT_MAX_GRID, DEFAULT_PERMANENT_LIMIT)
}

/// Confirms coe(x^K, P_G) != 0, then solves `trials` seeded random list
/// instances with |L(e)| = K(e) + 1 and single-value vertex lists.
pub fn cn_check_with_limits(
    g: &Graph,
    k: &TotalExponents,
    trials: u64,
    seed: u64,
    max_grid: u64,
    permanent_limit: usize,
) -> Result<CnReport, OracleError> {
    if k.vertices.len() != g.n() as usize {
        return Err(MatrixError::LengthMismatch { expected: g.n() as usize, got: k.vertices.len() }.into());
    }
    if let Some(v) = (0..k.vertices.len()).find(|&v| k.vertices.get(v) > 0) {
        return Err(OracleError::VertexExponent(v as Vertex + 1));
    }
    if coe_via_permanent_with_limit(g, &k.edges, permanent_limit)?.is_zero() {
        return Err(OracleError::ZeroCoefficient);
    }
    let size: BigUint = k.edges.values().iter().map(|&x| BigUint::from(x) + BigUint::one()).product();
    if size > BigUint::from(max_grid) {
        return Err(OracleError::GridTooLarge { size, limit: max_grid });
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let lists = random_lists(g, &k.edges, &mut trial_rng(seed, trial));
            let weighting = solve_list_with_limit(g, &lists, max_grid)?;
            Ok(TrialOutcome { trial, lists, weighting })
        })
        .collect::<Result<_, OracleError>>()?;
    let failures = outcomes.iter().filter(|o| o.weighting.is_none()).count() as u64;
    Ok(CnReport { graph: g.clone(), exponents: k.clone(), seed, trials, failures, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn proper_examples() {
        let t = complete_graph(3);
        let flat = TotalWeighting { vertices: qs(&[0, 0, 0]), edges: qs(&[1, 1, 1]) };
        assert_eq!(is_proper(&t, &flat), Ok(false));
        let spread = TotalWeighting { vertices: qs(&[0, 0, 0]), edges: qs(&[1, 2, 3]) };
        assert_eq!(spread.totals(&t), qs(&[3, 4, 5]));
        assert_eq!(is_proper(&t, &spread), Ok(true));
        let k2 = complete_graph(2);
        for x in 1..4 {
            let w = TotalWeighting { vertices: qs(&[0, 0]), edges: qs(&[x]) };
            assert_eq!(is_proper(&k2, &w), Ok(false));
        }
        let short = TotalWeighting { vertices: qs(&[0, 0]), edges: qs(&[1, 2, 3]) };
        assert!(matches!(is_proper(&t, &short), Err(OracleError::MissingAssignment(_))));
    }

    #[test]
    fn solve_examples() {
        let k2 = complete_graph(2);
        let l = ListAssignment::new(&k2, vec![qs(&[0]), qs(&[0])], vec![qs(&[1, 2, 3])]).unwrap();
        assert_eq!(solve_list(&k2, &l), Ok(None));

        let t = complete_graph(3);
        let l = ListAssignment::new(&t, vec![qs(&[0]); 3], vec![qs(&[1, 2, 3]); 3]).unwrap();
        let w = solve_list(&t, &l).unwrap().unwrap();
        assert_eq!(is_proper(&t, &w), Ok(true));
        // zero vertex weights: proper iff the three edge weights are distinct
        assert_eq!(w.edges, qs(&[1, 2, 3]));

        let half = BigRational::new(1.into(), 2.into());
        let l = ListAssignment::new(
            &t,
            vec![qs(&[0]); 3],
            vec![vec![half.clone(), q(-7), q(11)], vec![q(5), half.clone()], vec![q(5)]],
        )
        .unwrap();
        let w = solve_list(&t, &l).unwrap().unwrap();
        assert_eq!(is_proper(&t, &w), Ok(true));
    }

    #[test]
    fn list_errors() {
        let t = complete_graph(3);
        assert!(matches!(
            ListAssignment::new(&t, vec![qs(&[0]); 2], vec![qs(&[1]); 3]),
            Err(OracleError::ListCountMismatch { what: "vertex", .. })
        ));
        assert_eq!(
            ListAssignment::new(&t, vec![qs(&[0]); 3], vec![qs(&[1]), vec![], qs(&[1])]),
            Err(OracleError::EmptyList("edge 1-3".into()))
        );
        let l = ListAssignment::new(&t, vec![qs(&[0, 1, 2]); 3], vec![qs(&[1, 2, 3]); 3]).unwrap();
        assert!(matches!(solve_list_with_limit(&t, &l, 100), Err(OracleError::GridTooLarge { .. })));
    }

    #[test]
    fn lists_file_parsing() {
        let t = complete_graph(3);
        let text = r#"{"vertices":{"1":["0"],"2":["0"],"3":["1/2"]},"edges":{"1-2":["1","2","3"],"1-3":["-1/3"],"2-3":["4"]}}"#;
        let l = ListAssignment::from_json(&t, text).unwrap();
        assert_eq!(l.vertex_list(3), &[BigRational::new(1.into(), 2.into())]);
        assert_eq!(l.edge_list(0).len(), 3);
        assert_eq!(serde_json::to_string(&l.to_file(&t)).unwrap(), text);
        let missing = r#"{"vertices":{"1":["0"],"2":["0"]},"edges":{"1-2":["1"],"1-3":["1"],"2-3":["1"]}}"#;
        assert_eq!(ListAssignment::from_json(&t, missing), Err(OracleError::EmptyList("vertex 3".into())));
        let bad = r#"{"vertices":{"1":["0"],"2":["0"],"3":["x"]},"edges":{"1-2":["1"],"1-3":["1"],"2-3":["1"]}}"#;
        assert!(matches!(ListAssignment::from_json(&t, bad), Err(OracleError::Malformed(_))));
    }

    #[test]
    fn sufficient_examples() {
        let t = complete_graph(3);
        assert_eq!(find_sufficient(&t, 2), Ok(Some(ExponentMap::new(vec![2, 1, 0]))));
        assert_eq!(find_sufficient(&complete_graph(2), 1), Ok(None));
        assert_eq!(find_sufficient(&complete_graph(2), 5), Ok(None));
        // entries capped at 1 force K = (1,1,1), whose coefficient vanishes
        assert_eq!(find_sufficient(&t, 1), Ok(None));
        let k5 = find_sufficient(&complete_graph(5), 2).unwrap().unwrap();
        assert_eq!(k5.total(), 10);
        assert!(k5.max_entry() <= 2);
    }

    #[test]
    fn witness_below_load() {
        let t = complete_graph(3);
        assert_eq!(sufficient_witness(&t, &ExponentMap::new(vec![2, 2, 2])), Ok(Some(ExponentMap::new(vec![2, 1, 0]))));
        assert_eq!(sufficient_witness(&t, &ExponentMap::new(vec![1, 1, 1])), Ok(None));
    }

    #[test]
    fn descending_order() {
        let mut seen = Vec::new();
        descending_maps(&[2, 2, 2], 3, &mut |k| {
            seen.push(k.to_vec());
            Ok(false)
        })
        .unwrap();
        assert_eq!(seen.first(), Some(&vec![2, 1, 0]));
        assert_eq!(seen.last(), Some(&vec![0, 1, 2]));
        assert_eq!(seen.len(), 7);
        assert!(seen.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn cn_triangle() {
        let t = complete_graph(3);
        let k = TotalExponents::edges_only(&t, ExponentMap::new(vec![2, 1, 0]));
        let report = cn_check(&t, &k, 100, 7).unwrap();
        assert_eq!((report.trials, report.failures), (100, 0));
        for o in &report.outcomes {
            assert_eq!(o.lists.edge_list(0).len(), 3);
            assert_eq!(is_proper(&t, o.weighting.as_ref().unwrap()), Ok(true));
        }
        assert_eq!(cn_check(&t, &k, 5, 7).unwrap().to_json(), cn_check(&t, &k, 5, 7).unwrap().to_json());
    }

    #[test]
    fn cn_preconditions() {
        let t = complete_graph(3);
        let zero = TotalExponents::edges_only(&t, ExponentMap::new(vec![1, 1, 1]));
        assert_eq!(cn_check(&t, &zero, 1, 0), Err(OracleError::ZeroCoefficient));
        let mut vertexy = TotalExponents::edges_only(&t, ExponentMap::new(vec![2, 1, 0]));
        vertexy.vertices.set(1, 1);
        assert_eq!(cn_check(&t, &vertexy, 1, 0), Err(OracleError::VertexExponent(2)));
        let short = TotalExponents::edges_only(&t, ExponentMap::new(vec![2, 0, 0]));
        assert!(matches!(cn_check(&t, &short, 1, 0), Err(OracleError::Matrix(MatrixError::TotalMismatch { .. }))));
    }

    #[test]
    fn exponent_file_forms() {
        let t = complete_graph(3);
        let want = TotalExponents::edges_only(&t, ExponentMap::new(vec![2, 1, 0]));
        assert_eq!(TotalExponents::from_json(&t, "[2,1,0]").unwrap(), want);
        assert_eq!(TotalExponents::from_json(&t, r#"{"edges":{"1-2":2,"1-3":1}}"#).unwrap(), want);
        let with_v = TotalExponents::from_json(&t, r#"{"edges":[2,1,0],"vertices":{"3":1}}"#).unwrap();
        assert_eq!(with_v.vertices, ExponentMap::new(vec![0, 0, 1]));
        assert!(TotalExponents::from_json(&t, "[2,1]").is_err());
        assert_eq!(
            TotalExponents::from_json(&t, r#"{"edges":{"1-4":1}}"#),
            Err(OracleError::ForeignEdge(Edge::new(1, 4)))
        );
    }
}
