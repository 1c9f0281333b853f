//! Simple undirected graphs on vertices `1..=n` with a canonical edge order.
//!
//! Every edge is stored as `(i, j)` with `i < j`, and the edge list is kept in
//! lexicographic order. The position of an edge in that list is its index, and
//! every matrix row, exponent map and polynomial variable over edges uses it.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("endpoint {vertex} outside 1..={n}")]
    EndpointOutOfRange { vertex: Vertex, n: Vertex },
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("malformed graph: {0}")]
    Malformed(String),
}

/// An undirected edge `{i, j}`, always held with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    /// Builds the edge `{a, b}` in canonical orientation. Panics on a loop.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        assert_ne!(a, b, "loop edge {a}-{b}");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl FromStr for Edge {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Malformed(format!("edge key {s:?} is not of the form \"i-j\""));
        let (a, b) = s.split_once('-').ok_or_else(bad)?;
        let a: Vertex = a.trim().parse().map_err(|_| bad())?;
        let b: Vertex = b.trim().parse().map_err(|_| bad())?;
        if a == b {
            return Err(GraphError::Loop(a));
        }
        Ok(Edge::new(a, b))
    }
}

/// On-disk shape of a graph: `{"n": 3, "edges": [[1,2],[1,3]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: Vertex,
    pub edges: Vec<[Vertex; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct Graph {
    n: Vertex,
    edges: Vec<Edge>,
    // incident[v - 1] lists edge indices in increasing order
    incident: Vec<Vec<usize>>,
}

impl Graph {
    /// Canonicalizes `pairs` (any orientation, any order) into a graph on `1..=n`.
    pub fn new(n: Vertex, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::EndpointOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            edges.push(Edge::new(a, b));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0]));
        }
        Ok(Self::from_sorted(n, edges))
    }

    fn from_sorted(n: Vertex, edges: Vec<Edge>) -> Self {
        let mut incident = vec![Vec::new(); n as usize];
        for (idx, e) in edges.iter().enumerate() {
            incident[e.lo() as usize - 1].push(idx);
            incident[e.hi() as usize - 1].push(idx);
        }
        Graph { n, edges, incident }
    }

    pub fn empty(n: Vertex) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn n(&self) -> Vertex {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, idx: usize) -> Edge {
        self.edges[idx]
    }

    pub fn edge_index(&self, a: Vertex, b: Vertex) -> Option<usize> {
        if a == b {
            return None;
        }
        self.edges.binary_search(&Edge::new(a, b)).ok()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edge_index(a, b).is_some()
    }

    /// Indices of the edges incident to `v` (the set E(v)), increasing.
    pub fn incident(&self, v: Vertex) -> &[usize] {
        &self.incident[v as usize - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incident(v).len()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.incident(v).iter().map(move |&e| self.edges[e].other(v).unwrap())
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n as usize];
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen[start as usize - 1] {
                continue;
            }
            seen[start as usize - 1] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if !seen[u as usize - 1] {
                        seen[u as usize - 1] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The spanning subgraph keeping only the listed edge indices.
    pub fn spanning_subgraph(&self, edge_indices: impl IntoIterator<Item = usize>) -> Graph {
        let mut edges: Vec<Edge> = edge_indices.into_iter().map(|i| self.edges[i]).collect();
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted(self.n, edges)
    }

    /// Places `other` on fresh vertices `n+1..=n+other.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge(e.lo() + shift, e.hi() + shift)));
        Self::from_sorted(self.n + other.n, edges)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        parse_graph(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }
}

/// Parses the graph file format. Re-runs [`Graph::new`] so the structured error
/// survives instead of being flattened into a serde message.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
    Graph::try_from(file)
}

impl TryFrom<GraphFile> for Graph {
    type Error = GraphError;

    fn try_from(file: GraphFile) -> Result<Self, Self::Error> {
        Graph::new(file.n, file.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl From<Graph> for GraphFile {
    fn from(g: Graph) -> Self {
        GraphFile {
            n: g.n,
            edges: g.edges.iter().map(|e| [e.lo(), e.hi()]).collect(),
        }
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b] = <[Vertex; 2]>::deserialize(d)?;
        if a == b {
            return Err(serde::de::Error::custom(format!("loop at vertex {a}")));
        }
        Ok(Edge::new(a, b))
    }
}

/// A map keyed by edges, written as a JSON object with `"i-j"` keys in
/// canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap<T>(pub Vec<(Edge, T)>);

impl<T: Serialize> Serialize for EdgeMap<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (e, v) in &self.0 {
            map.serialize_entry(&e.to_string(), v)?;
        }
        map.end()
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for EdgeMap<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = std::collections::BTreeMap::<String, T>::deserialize(d)?;
        let mut out = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            let e: Edge = k.parse().map_err(serde::de::Error::custom)?;
            out.push((e, v));
        }
        out.sort_by_key(|(e, _)| *e);
        if let Some(w) = out.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(serde::de::Error::custom(format!("edge {} listed twice", w[0].0)));
        }
        Ok(EdgeMap(out))
    }
}

/// Shapes a decomposition part can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Shape {
    #[serde(rename = "triangle")]
    Triangle,
    #[serde(rename = "k5")]
    K5,
    #[serde(rename = "k7")]
    K7,
    #[serde(rename = "H")]
    H,
    /// A lone edge; only used when assembling families by hand.
    #[serde(rename = "edge")]
    Edge,
}

impl Shape {
    pub fn clique(order: usize) -> Option<Shape> {
        match order {
            3 => Some(Shape::Triangle),
            5 => Some(Shape::K5),
            7 => Some(Shape::K7),
            _ => None,
        }
    }

    /// Clique order, or `None` for the gadget.
    pub fn clique_order(self) -> Option<usize> {
        match self {
            Shape::Triangle => Some(3),
            Shape::K5 => Some(5),
            Shape::K7 => Some(7),
            Shape::H | Shape::Edge => None,
        }
    }
}

/// Edges of the gadget H on vertices 1..=5: triangles (1,2,4) and (2,3,5)
/// joined by the edge {1,3}.
pub const H_EDGES: [(Vertex, Vertex); 7] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (2, 5), (3, 5)];

pub fn h_graph() -> Graph {
    Graph::new(5, H_EDGES).expect("gadget edges are valid")
}

/// One block of a decomposition. For cliques `vertices` is sorted; for the
/// gadget it lists the images of H's vertices 1..=5 in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub shape: Shape,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl Part {
    pub fn clique(vertices: &[Vertex]) -> Part {
        let shape = Shape::clique(vertices.len()).expect("clique of order 3, 5 or 7");
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        let edges = clique_edges(&vs);
        Part { shape, vertices: vs, edges }
    }

    pub fn single_edge(e: Edge) -> Part {
        Part { shape: Shape::Edge, vertices: vec![e.lo(), e.hi()], edges: vec![e] }
    }

    /// H embedded with vertex `v` of the gadget sent to `image[v - 1]`.
    pub fn gadget(image: [Vertex; 5]) -> Part {
        let mut edges: Vec<Edge> = H_EDGES
            .iter()
            .map(|&(a, b)| Edge::new(image[a as usize - 1], image[b as usize - 1]))
            .collect();
        edges.sort_unstable();
        Part { shape: Shape::H, vertices: image.to_vec(), edges }
    }

    /// The edges implied by `shape` and `vertices`, sorted.
    pub fn implied_edges(&self) -> Option<Vec<Edge>> {
        let mut distinct = self.vertices.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != self.vertices.len() {
            return None;
        }
        match (self.shape, self.vertices.len()) {
            (Shape::H, 5) => {
                let image: [Vertex; 5] = self.vertices.clone().try_into().ok()?;
                Some(Part::gadget(image).edges)
            }
            (Shape::Edge, 2) => Some(clique_edges(&distinct)),
            (shape, k) if shape.clique_order() == Some(k) => Some(clique_edges(&distinct)),
            _ => None,
        }
    }
}

fn clique_edges(sorted: &[Vertex]) -> Vec<Edge> {
    let mut out = Vec::new();
    for (a, &i) in sorted.iter().enumerate() {
        for &j in &sorted[a + 1..] {
            out.push(Edge::new(i, j));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("part {0} does not match its declared shape")]
    ShapeMismatch(usize),
    #[error("edge {0} is not in the host graph")]
    ForeignEdge(Edge),
    #[error("edge {0} is covered twice")]
    Overlap(Edge),
    #[error("edge {0} is not covered")]
    Uncovered(Edge),
}

/// An edge partition of a host graph into shaped parts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub parts: Vec<Part>,
}

impl Decomposition {
    /// Checks that every part has its declared shape and that the parts
    /// partition E(g) exactly.
    pub fn validate(&self, g: &Graph) -> Result<(), DecompositionError> {
        let mut covered = vec![false; g.edge_count()];
        for (i, part) in self.parts.iter().enumerate() {
            let mut edges = part.edges.clone();
            edges.sort_unstable();
            if part.implied_edges().as_ref() != Some(&edges) {
                return Err(DecompositionError::ShapeMismatch(i));
            }
            for e in edges {
                let idx = g.edge_index(e.lo(), e.hi()).ok_or(DecompositionError::ForeignEdge(e))?;
                if std::mem::replace(&mut covered[idx], true) {
                    return Err(DecompositionError::Overlap(e));
                }
            }
        }
        match covered.iter().position(|c| !c) {
            Some(idx) => Err(DecompositionError::Uncovered(g.edge(idx))),
            None => Ok(()),
        }
    }

    pub fn count(&self, shape: Shape) -> usize {
        self.parts.iter().filter(|p| p.shape == shape).count()
    }
}

pub fn complete_graph(n: Vertex) -> Graph {
    let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| Edge(i, j))).collect();
    Graph::from_sorted(n, edges)
}

/// gcd of all positive vertex degrees; 0 when the graph has no edges.
pub fn graph_gcd(g: &Graph) -> usize {
    g.vertices().map(|v| g.degree(v)).fold(0, |acc, d| acc.gcd(&d))
}

/// `g` is `f`-divisible: |E(f)| divides |E(g)| and gcd(f) divides gcd(g).
pub fn is_divisible(g: &Graph, f: &Graph) -> bool {
    assert!(f.edge_count() > 0, "divisibility by an edgeless graph");
    let gf = graph_gcd(f);
    g.edge_count().is_multiple_of(f.edge_count()) && graph_gcd(g).is_multiple_of(gf)
}

/// Even degrees everywhere and all edges in one component.
pub fn is_eulerian(g: &Graph) -> bool {
    if g.vertices().any(|v| g.degree(v) % 2 == 1) {
        return false;
    }
    let nontrivial = g.components().into_iter().filter(|c| c.len() > 1).count();
    nontrivial <= 1
}

/// No connected component is a single edge.
pub fn is_nice(g: &Graph) -> bool {
    !g.components()
        .iter()
        .any(|c| c.len() == 2 && g.degree(c[0]) == 1 && g.degree(c[1]) == 1)
}
