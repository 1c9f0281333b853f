//! Exact edge decompositions by backtracking.
//!
//! Every search branches on the lexicographically smallest uncovered edge and
//! tries the blocks containing it in a fixed order, so results are
//! deterministic. Covered-edge states that are known to fail are memoized.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::graph::{complete_graph, is_divisible, Decomposition, Graph, Part, Vertex, H_EDGES};

pub const DEFAULT_MAX_EDGES: usize = 60;

/// Spare triangles allowed next to copies of H.
pub const MAX_SPARE_TRIANGLES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("graph has {edges} edges, decomposition limit is {limit}")]
    TooLarge { edges: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Triangles,
    OddCliques,
    Gadgets,
}

struct Block {
    part: Part,
    edges: Vec<usize>,
    triangle: bool,
}

struct Search<'a> {
    g: &'a Graph,
    mode: Mode,
    covered: Vec<bool>,
    remaining: usize,
    triangles: usize,
    chosen: Vec<Part>,
    failed: HashSet<(Vec<u64>, usize)>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, mode: Mode) -> Self {
        Search {
            g,
            mode,
            covered: vec![false; g.edge_count()],
            remaining: g.edge_count(),
            triangles: 0,
            chosen: Vec::new(),
            failed: HashSet::new(),
        }
    }

    fn free(&self, a: Vertex, b: Vertex) -> bool {
        self.g.edge_index(a, b).is_some_and(|i| !self.covered[i])
    }

    fn key(&self) -> (Vec<u64>, usize) {
        let mut bits = vec![0u64; self.covered.len().div_ceil(64)];
        for (i, &c) in self.covered.iter().enumerate() {
            if c {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        (bits, self.triangles)
    }

    fn apply(&mut self, block: &Block) {
        for &e in &block.edges {
            self.covered[e] = true;
        }
        self.remaining -= block.edges.len();
        self.triangles += block.triangle as usize;
        self.chosen.push(block.part.clone());
    }

    fn undo(&mut self, block: &Block) {
        for &e in &block.edges {
            self.covered[e] = false;
        }
        self.remaining += block.edges.len();
        self.triangles -= block.triangle as usize;
        self.chosen.pop();
    }

    fn block(&self, part: Part, triangle: bool) -> Block {
        let edges = part.edges.iter().map(|e| self.g.edge_index(e.lo(), e.hi()).unwrap()).collect();
        Block { part, edges, triangle }
    }

    /// Cliques of `order` through the edge {i, j} using only uncovered edges,
    /// in lexicographic order of their extra vertices.
    fn cliques_through(&self, i: Vertex, j: Vertex, order: usize) -> Vec<Block> {
        let common: Vec<Vertex> = self.g.vertices().filter(|&k| k != i && k != j && self.free(i, k) && self.free(j, k)).collect();
        let mut out = Vec::new();
        let mut pick = Vec::with_capacity(order - 2);
        self.extend_clique(&common, 0, order - 2, &mut pick, &mut |extra| {
            let mut vs = vec![i, j];
            vs.extend_from_slice(extra);
            out.push(Part::clique(&vs));
        });
        out.into_iter().map(|p| self.block(p, order == 3)).collect()
    }

    fn extend_clique(
        &self,
        pool: &[Vertex],
        from: usize,
        need: usize,
        pick: &mut Vec<Vertex>,
        emit: &mut impl FnMut(&[Vertex]),
    ) {
        if need == 0 {
            emit(pick);
            return;
        }
        for idx in from..pool.len() {
            let v = pool[idx];
            if pick.iter().all(|&u| self.free(u, v)) {
                pick.push(v);
                self.extend_clique(pool, idx + 1, need - 1, pick, emit);
                pick.pop();
            }
        }
    }

    /// Copies of H through the edge {u, v} on uncovered edges, one per edge
    /// set, ordered by their sorted edge indices.
    fn gadgets_through(&self, u: Vertex, v: Vertex) -> Vec<Block> {
        let mut found: BTreeMap<Vec<usize>, [Vertex; 5]> = BTreeMap::new();
        for &(a, b) in &H_EDGES {
            for (x, y) in [(u, v), (v, u)] {
                let mut image = [0; 5];
                image[a as usize - 1] = x;
                image[b as usize - 1] = y;
                self.extend_gadget(&mut image, &mut found);
            }
        }
        found.into_values().map(|image| self.block(Part::gadget(image), false)).collect()
    }

    fn extend_gadget(&self, image: &mut [Vertex; 5], found: &mut BTreeMap<Vec<usize>, [Vertex; 5]>) {
        let Some(slot) = image.iter().position(|&w| w == 0) else {
            let part = Part::gadget(*image);
            let mut idx: Vec<usize> = part.edges.iter().map(|e| self.g.edge_index(e.lo(), e.hi()).unwrap()).collect();
            idx.sort_unstable();
            found.entry(idx).or_insert(*image);
            return;
        };
        let h_vertex = slot as Vertex + 1;
        for w in self.g.vertices() {
            if image.contains(&w) {
                continue;
            }
            let fits = H_EDGES.iter().all(|&(a, b)| {
                let other = if a == h_vertex {
                    b
                } else if b == h_vertex {
                    a
                } else {
                    return true;
                };
                let mapped = image[other as usize - 1];
                mapped == 0 || self.free(mapped, w)
            });
            if fits {
                image[slot] = w;
                self.extend_gadget(image, found);
                image[slot] = 0;
            }
        }
    }

    fn candidates(&self, pivot: usize) -> Vec<Block> {
        let e = self.g.edge(pivot);
        let (i, j) = (e.lo(), e.hi());
        match self.mode {
            Mode::Triangles => self.cliques_through(i, j, 3),
            Mode::OddCliques => [3, 5, 7].iter().flat_map(|&k| self.cliques_through(i, j, k)).collect(),
            Mode::Gadgets => {
                let mut out = self.gadgets_through(i, j);
                if self.triangles < MAX_SPARE_TRIANGLES {
                    out.extend(self.cliques_through(i, j, 3));
                }
                out
            }
        }
    }

    fn viable(&self) -> bool {
        match self.mode {
            Mode::Triangles => self.remaining.is_multiple_of(3),
            Mode::OddCliques => true,
            Mode::Gadgets => gadget_count_feasible(self.remaining, MAX_SPARE_TRIANGLES - self.triangles),
        }
    }

    fn solve(&mut self) -> bool {
        if self.remaining == 0 {
            return true;
        }
        if !self.viable() {
            return false;
        }
        let key = self.key();
        if self.failed.contains(&key) {
            return false;
        }
        let pivot = self.covered.iter().position(|c| !c).expect("remaining > 0");
        for block in self.candidates(pivot) {
            self.apply(&block);
            if self.solve() {
                return true;
            }
            self.undo(&block);
        }
        self.failed.insert(key);
        false
    }

    /// Marks the edges of `parts` as already used.
    fn preload(&mut self, parts: &[Part]) {
        for p in parts {
            let block = self.block(p.clone(), false);
            self.apply(&block);
        }
    }
}

// Some t <= spare with 3t <= m and 7 | m - 3t.
fn gadget_count_feasible(m: usize, spare: usize) -> bool {
    (0..=spare).any(|t| 3 * t <= m && (m - 3 * t).is_multiple_of(7))
}

fn check_size(g: &Graph, limit: usize) -> Result<(), DecomposeError> {
    if g.edge_count() > limit {
        return Err(DecomposeError::TooLarge { edges: g.edge_count(), limit });
    }
    Ok(())
}

fn all_degrees_even(g: &Graph) -> bool {
    g.vertices().all(|v| g.degree(v).is_multiple_of(2))
}

pub fn triangle_decompose(g: &Graph) -> Result<Option<Decomposition>, DecomposeError> {
    triangle_decompose_with_limit(g, DEFAULT_MAX_EDGES)
}

/// Partition of E(g) into triangles, or `None` when none exists.
pub fn triangle_decompose_with_limit(g: &Graph, limit: usize) -> Result<Option<Decomposition>, DecomposeError> {
    check_size(g, limit)?;
    if g.edge_count() == 0 {
        return Ok(Some(Decomposition::default()));
    }
    if !is_divisible(g, &complete_graph(3)) {
        return Ok(None);
    }
    let mut search = Search::new(g, Mode::Triangles);
    Ok(search.solve().then_some(Decomposition { parts: search.chosen }))
}

pub fn odd_clique_decompose(g: &Graph) -> Result<Option<Decomposition>, DecomposeError> {
    odd_clique_decompose_with_limit(g, DEFAULT_MAX_EDGES)
}

/// Partition of E(g) into odd cliques. With |E| = i (mod 3), first tries
/// every choice of i vertex-disjoint 5-cliques whose removal leaves a
/// triangle-decomposable remainder, then falls back to a search over
/// K_3, K_5 and K_7 blocks.
pub fn odd_clique_decompose_with_limit(g: &Graph, limit: usize) -> Result<Option<Decomposition>, DecomposeError> {
    check_size(g, limit)?;
    if g.edge_count() == 0 {
        return Ok(Some(Decomposition::default()));
    }
    // every odd clique has even degrees, so a union of them does too
    if !all_degrees_even(g) {
        return Ok(None);
    }
    let spare = g.edge_count() % 3;
    let fives = {
        let probe = Search::new(g, Mode::OddCliques);
        let mut all = Vec::new();
        for &e in g.edges() {
            for b in probe.cliques_through(e.lo(), e.hi(), 5) {
                all.push(b.part);
            }
        }
        all.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        all.dedup();
        all
    };
    let attempt = |removed: &[Part]| {
        let mut search = Search::new(g, Mode::Triangles);
        search.preload(removed);
        search.solve().then_some(Decomposition { parts: search.chosen })
    };
    let disjoint = |a: &Part, b: &Part| a.vertices.iter().all(|v| !b.vertices.contains(v));
    let found = match spare {
        0 => attempt(&[]),
        1 => fives.iter().find_map(|k| attempt(std::slice::from_ref(k))),
        _ => fives.iter().enumerate().find_map(|(x, a)| {
            fives[x + 1..]
                .iter()
                .filter(|b| disjoint(a, b))
                .find_map(|b| attempt(&[a.clone(), b.clone()]))
        }),
    };
    if found.is_some() {
        return Ok(found);
    }
    let mut search = Search::new(g, Mode::OddCliques);
    Ok(search.solve().then_some(Decomposition { parts: search.chosen }))
}

pub fn h_decompose(g: &Graph) -> Result<Option<Decomposition>, DecomposeError> {
    h_decompose_with_limit(g, DEFAULT_MAX_EDGES)
}

/// Partition of E(g) into copies of H plus at most six triangles.
pub fn h_decompose_with_limit(g: &Graph, limit: usize) -> Result<Option<Decomposition>, DecomposeError> {
    check_size(g, limit)?;
    if !gadget_count_feasible(g.edge_count(), MAX_SPARE_TRIANGLES) {
        return Ok(None);
    }
    let mut search = Search::new(g, Mode::Gadgets);
    Ok(search.solve().then_some(Decomposition { parts: search.chosen }))
}
