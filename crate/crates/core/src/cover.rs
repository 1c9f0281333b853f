//! Path covering families and their certificates.
//!
//! A family picks, for every edge `{i, j}`, an even-length path from `i` to `j`.
//! Writing `x_i - x_j` as the alternating sum of `(x_a + x_b)` over the path's
//! edges puts the product of all edge differences in the span of products of
//! plus-terms, with each edge used as often as the paths traverse it. A load of
//! at most `b` everywhere makes the graph algebraic `(1, b+1)`-choosable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{vandermonde_poly, ExponentMap, LinearForm, SparsePoly};
use crate::graph::{h_graph, Decomposition, DecompositionError, Edge, EdgeMap, Graph, Vertex};

/// Hosts with more edges than this are only certified structurally.
pub const DEFAULT_SYMBOLIC_EDGE_LIMIT: usize = 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("odd clique family needs odd n >= 3, got {0}")]
    InvalidCliqueOrder(u32),
    #[error("path of length {0} is not of positive even length")]
    OddLengthPath(usize),
    #[error("path repeats vertex {0} in consecutive positions")]
    DegeneratePath(Vertex),
    #[error("family is hosted on a different graph")]
    HostMismatch,
    #[error("bound b must be positive")]
    InvalidBound,
    #[error("{families} families for {parts} parts")]
    PartCountMismatch { parts: usize, families: usize },
    #[error("family {0} does not cover exactly the edges of its part")]
    PartMismatch(usize),
    #[error("decomposition is not a partition: {0}")]
    NotPartition(#[from] DecompositionError),
    #[error("symbolic check capped at {limit} edges, host has {edges}")]
    SymbolicTooLarge { edges: usize, limit: usize },
    #[error("malformed family: {0}")]
    Malformed(String),
}

/// Why a family fails to be a path covering family of its host.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyDefect {
    #[error("edge {0} has no path")]
    MissingPath(Edge),
    #[error("path keyed by {0}, which is not a host edge")]
    ForeignKey(Edge),
    #[error("path for {edge} has odd or zero length {len}")]
    OddLength { edge: Edge, len: usize },
    #[error("path for {0} does not join its endpoints")]
    WrongEndpoints(Edge),
    #[error("path for {edge} steps along non-edge {a}-{b}")]
    NotAdjacent { edge: Edge, a: Vertex, b: Vertex },
    #[error("path for {edge} revisits vertex {vertex}")]
    RepeatedVertex { edge: Edge, vertex: Vertex },
}

/// One path per host edge, keyed by the edge it serves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFamily {
    host: Graph,
    paths: BTreeMap<Edge, Vec<Vertex>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FamilyFile {
    paths: EdgeMap<Vec<Vertex>>,
}

impl PathFamily {
    /// Wraps raw paths without checking them; see [`PathFamily::validate`].
    pub fn new(host: Graph, paths: BTreeMap<Edge, Vec<Vertex>>) -> Self {
        PathFamily { host, paths }
    }

    pub fn empty(host: Graph) -> Self {
        PathFamily { host, paths: BTreeMap::new() }
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn paths(&self) -> &BTreeMap<Edge, Vec<Vertex>> {
        &self.paths
    }

    pub fn path(&self, e: Edge) -> Option<&[Vertex]> {
        self.paths.get(&e).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn validate(&self) -> Result<(), FamilyDefect> {
        for &e in self.paths.keys() {
            if !self.host.has_edge(e.lo(), e.hi()) {
                return Err(FamilyDefect::ForeignKey(e));
            }
        }
        for &e in self.host.edges() {
            let path = self.paths.get(&e).ok_or(FamilyDefect::MissingPath(e))?;
            let len = path.len().saturating_sub(1);
            if len == 0 || len % 2 == 1 {
                return Err(FamilyDefect::OddLength { edge: e, len });
            }
            let (first, last) = (path[0], path[len]);
            if first == last || Edge::new(first, last) != e {
                return Err(FamilyDefect::WrongEndpoints(e));
            }
            let mut seen = path.clone();
            seen.sort_unstable();
            if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
                return Err(FamilyDefect::RepeatedVertex { edge: e, vertex: w[0] });
            }
            for w in path.windows(2) {
                if !self.host.has_edge(w[0], w[1]) {
                    return Err(FamilyDefect::NotAdjacent { edge: e, a: w[0], b: w[1] });
                }
            }
        }
        Ok(())
    }

    /// Moves every path through `map` onto `host`.
    pub fn relabel(&self, host: &Graph, map: impl Fn(Vertex) -> Vertex) -> PathFamily {
        let paths = self
            .paths
            .iter()
            .map(|(e, p)| (Edge::new(map(e.lo()), map(e.hi())), p.iter().map(|&v| map(v)).collect()))
            .collect();
        PathFamily { host: host.clone(), paths }
    }

    /// Reads `{"paths": {"i-j": [...]}}`; other top-level keys are ignored so a
    /// certificate file can be fed back in.
    pub fn from_json(text: &str, host: &Graph) -> Result<Self, CoverError> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| CoverError::Malformed(e.to_string()))?;
        Ok(PathFamily { host: host.clone(), paths: file.paths.0.into_iter().collect() })
    }

    pub fn to_json(&self) -> String {
        let file = FamilyFile { paths: EdgeMap(self.paths.iter().map(|(e, p)| (*e, p.clone())).collect()) };
        serde_json::to_string(&file).expect("family serialization is infallible")
    }
}

fn wrap_mod(x: u32, n: u32) -> Vertex {
    match x % n {
        0 => n,
        r => r,
    }
}

/// The midpoint family of K_n for odd n: P_{ij} = (i, t, j) with
/// t = i + (j-i)/2 when j-i is even and t = j + (n-(j-i))/2 (mod n) otherwise.
pub fn odd_clique_family(n: u32) -> Result<PathFamily, CoverError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(CoverError::InvalidCliqueOrder(n));
    }
    let host = crate::graph::complete_graph(n);
    let mut paths = BTreeMap::new();
    for &e in host.edges() {
        let (i, j) = (e.lo(), e.hi());
        let d = j - i;
        let t = if d % 2 == 0 { i + d / 2 } else { wrap_mod(j + (n - d) / 2, n) };
        paths.insert(e, vec![i, t, j]);
    }
    Ok(PathFamily { host, paths })
}

/// The midpoint family on a clique of `host` spanned by `vertices`, which are
/// relabeled in increasing order.
pub fn clique_family(host: &Graph, vertices: &[Vertex]) -> Result<PathFamily, CoverError> {
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    let base = odd_clique_family(vs.len() as u32)?;
    let sub = host.spanning_subgraph(
        base.paths
            .keys()
            .map(|e| host.edge_index(vs[e.lo() as usize - 1], vs[e.hi() as usize - 1]))
            .collect::<Option<Vec<_>>>()
            .ok_or(CoverError::HostMismatch)?,
    );
    Ok(base.relabel(&sub, |v| vs[v as usize - 1]))
}

/// K_F(e): how many paths of the family traverse e.
pub fn family_load(f: &PathFamily) -> ExponentMap {
    let mut load = ExponentMap::zeros(f.host.edge_count());
    for path in f.paths.values() {
        for w in path.windows(2) {
            if let Some(idx) = f.host.edge_index(w[0], w[1]) {
                load.set(idx, load.get(idx) + 1);
            }
        }
    }
    load
}

/// `sign * (x_a + x_b)` for `edge = {a, b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedEdge {
    pub edge: Edge,
    pub sign: i8,
}

/// The alternating sum `sum_l (-1)^l [i_l i_{l+1}]`, which telescopes to
/// `x_{i_0} - x_{i_2k}` once each edge symbol becomes `x_a + x_b`.
pub fn path_expansion(path: &[Vertex]) -> Result<Vec<SignedEdge>, CoverError> {
    let len = path.len().saturating_sub(1);
    if len == 0 || len % 2 == 1 {
        return Err(CoverError::OddLengthPath(len));
    }
    path.windows(2)
        .enumerate()
        .map(|(l, w)| {
            if w[0] == w[1] {
                return Err(CoverError::DegeneratePath(w[0]));
            }
            Ok(SignedEdge { edge: Edge::new(w[0], w[1]), sign: if l % 2 == 0 { 1 } else { -1 } })
        })
        .collect()
}

/// Substitutes `x_a + x_b` for each edge symbol; vertex v is variable v-1.
pub fn substitute(expansion: &[SignedEdge]) -> LinearForm {
    let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
    for t in expansion {
        for v in [t.edge.lo(), t.edge.hi()] {
            *acc.entry(v - 1).or_default() += t.sign as i32;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn difference_form(from: Vertex, to: Vertex) -> LinearForm {
    let mut form = vec![(from - 1, BigInt::one()), (to - 1, -BigInt::one())];
    form.sort_by_key(|(v, _)| *v);
    form
}

/// The gadget H with its covering family: midpoint families on the triangles
/// (1,2,4) and (2,3,5), plus the path (1,2,3) for the edge {1,3}.
pub fn h_gadget() -> (Graph, PathFamily) {
    let host = h_graph();
    let mut paths = BTreeMap::new();
    for tri in [[1, 2, 4], [2, 3, 5]] {
        let f = clique_family(&host, &tri).expect("gadget triangles are host cliques");
        paths.extend(f.paths);
    }
    paths.insert(Edge::new(1, 3), vec![1, 2, 3]);
    (host.clone(), PathFamily { host, paths })
}

/// The gadget family moved onto a copy of H inside `host`, with gadget vertex
/// v sent to `image[v - 1]`.
pub fn gadget_family(host: &Graph, image: [Vertex; 5]) -> Result<PathFamily, CoverError> {
    let (h, family) = h_gadget();
    let indices = h
        .edges()
        .iter()
        .map(|e| host.edge_index(image[e.lo() as usize - 1], image[e.hi() as usize - 1]))
        .collect::<Option<Vec<_>>>()
        .ok_or(CoverError::HostMismatch)?;
    let sub = host.spanning_subgraph(indices);
    Ok(family.relabel(&sub, |v| image[v as usize - 1]))
}

/// Unions part families into one family on `g`. Each family must serve exactly
/// the edges of its part, and the parts must partition E(g).
pub fn merge_families(g: &Graph, d: &Decomposition, families: &[PathFamily]) -> Result<PathFamily, CoverError> {
    d.validate(g)?;
    if d.parts.len() != families.len() {
        return Err(CoverError::PartCountMismatch { parts: d.parts.len(), families: families.len() });
    }
    let mut paths = BTreeMap::new();
    for (i, (part, fam)) in d.parts.iter().zip(families).enumerate() {
        let mut part_edges = part.edges.clone();
        part_edges.sort_unstable();
        if !fam.paths.keys().copied().eq(part_edges.iter().copied()) {
            return Err(CoverError::PartMismatch(i));
        }
        paths.extend(fam.paths.iter().map(|(e, p)| (*e, p.clone())));
    }
    Ok(PathFamily { host: g.clone(), paths })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifyMode {
    Structural,
    Symbolic,
    /// Symbolic when the host is within the symbolic edge cap.
    Auto,
}

impl std::str::FromStr for CertifyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "structural" => Ok(CertifyMode::Structural),
            "symbolic" => Ok(CertifyMode::Symbolic),
            "auto" => Ok(CertifyMode::Auto),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

impl CertifyMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CertifyMode::Structural => "structural",
            CertifyMode::Symbolic => "symbolic",
            CertifyMode::Auto => "auto",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
}

/// Outcome of checking a family against a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub host: Graph,
    pub family: PathFamily,
    pub load: ExponentMap,
    pub bound: u32,
    /// Resolved mode, never `Auto`.
    pub mode: CertifyMode,
    pub checks: Vec<CheckRecord>,
    pub accepted: bool,
    pub reason: Option<String>,
}

impl Certificate {
    pub fn conclusion(&self) -> String {
        if self.accepted {
            format!("algebraic (1,{})-choosable", self.bound + 1)
        } else {
            "none".to_string()
        }
    }

    pub fn to_file(&self) -> CertificateFile {
        let edges = self.host.edges();
        CertificateFile {
            graph: self.host.clone(),
            b: self.bound,
            paths: EdgeMap(self.family.paths.iter().map(|(e, p)| (*e, p.clone())).collect()),
            load: EdgeMap(edges.iter().enumerate().map(|(i, e)| (*e, self.load.get(i))).collect()),
            accepted: self.accepted,
            mode: self.mode.as_str().to_string(),
            conclusion: self.conclusion(),
            checks: self.checks.clone(),
            reason: self.reason.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("certificate serialization is infallible")
    }
}

/// Certificate file layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub graph: Graph,
    pub b: u32,
    pub paths: EdgeMap<Vec<Vertex>>,
    pub load: EdgeMap<u32>,
    pub accepted: bool,
    pub mode: String,
    pub conclusion: String,
    pub checks: Vec<CheckRecord>,
    pub reason: Option<String>,
}

pub fn certify(g: &Graph, f: &PathFamily, b: u32, mode: CertifyMode) -> Result<Certificate, CoverError> {
    certify_with_limit(g, f, b, mode, DEFAULT_SYMBOLIC_EDGE_LIMIT)
}

/// Runs the checks in order (structure, per-path identity, load, and in
/// symbolic mode the full product) and stops at the first failure. Only
/// contract violations are errors; a failed check yields a rejected
/// certificate carrying the reason.
pub fn certify_with_limit(
    g: &Graph,
    f: &PathFamily,
    b: u32,
    mode: CertifyMode,
    symbolic_limit: usize,
) -> Result<Certificate, CoverError> {
    if &f.host != g {
        return Err(CoverError::HostMismatch);
    }
    if b == 0 {
        return Err(CoverError::InvalidBound);
    }
    let m = g.edge_count();
    let mode = match mode {
        CertifyMode::Auto if m <= symbolic_limit => CertifyMode::Symbolic,
        CertifyMode::Auto => CertifyMode::Structural,
        CertifyMode::Symbolic if m > symbolic_limit => {
            return Err(CoverError::SymbolicTooLarge { edges: m, limit: symbolic_limit })
        }
        other => other,
    };

    let mut cert = Certificate {
        host: g.clone(),
        family: f.clone(),
        load: family_load(f),
        bound: b,
        mode,
        checks: Vec::new(),
        accepted: false,
        reason: None,
    };

    let structure = f.validate();
    cert.checks.push(CheckRecord { name: "structure".into(), passed: structure.is_ok() });
    if let Err(defect) = structure {
        cert.reason = Some(defect.to_string());
        return Ok(cert);
    }

    // every path is well formed now, so expansions cannot fail
    let mut factors = Vec::with_capacity(m);
    for (e, path) in &f.paths {
        let form = substitute(&path_expansion(path)?);
        if form != difference_form(path[0], path[path.len() - 1]) {
            cert.checks.push(CheckRecord { name: "path-identity".into(), passed: false });
            cert.reason = Some(format!("alternating sum for {e} does not telescope"));
            return Ok(cert);
        }
        // orient every factor as x_lo - x_hi
        let form = if path[0] == e.lo() {
            form
        } else {
            form.into_iter().map(|(v, c)| (v, -c)).collect()
        };
        factors.push(form);
    }
    cert.checks.push(CheckRecord { name: "path-identity".into(), passed: true });

    let over = (0..m).find(|&i| cert.load.get(i) > b);
    cert.checks.push(CheckRecord { name: "load".into(), passed: over.is_none() });
    if let Some(i) = over {
        cert.reason = Some(format!("load {} > {} on edge {}", cert.load.get(i), b, g.edge(i)));
        return Ok(cert);
    }

    if mode == CertifyMode::Symbolic {
        let product = SparsePoly::product_of_linear_forms(g.n() as usize, &factors);
        let ok = product == vandermonde_poly(g);
        cert.checks.push(CheckRecord { name: "symbolic".into(), passed: ok });
        if !ok {
            cert.reason = Some("expanded product differs from the edge-difference product".into());
            return Ok(cert);
        }
    }

    cert.accepted = true;
    Ok(cert)
}
