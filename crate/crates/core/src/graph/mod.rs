//! Graph and digraph representations, counting primitives, generators,
//! sampling and edge-list I/O.

pub mod bits;
mod count;
mod digraph;
pub mod io;
mod labeling;
mod random;

pub use count::{count_induced_c5, count_induced_p3, count_triangles, is_induced_c5, is_induced_p3, EXACT_C5_BOUND};
pub use digraph::Digraph;
pub use labeling::{Part, PartLabeling, PartName};
pub use random::{flip_pairs, gnp, pair_from_index, random_cograph, sample_vertices};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Immutable simple undirected graph on vertices `0..n` with bitset rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "EdgeList", into = "EdgeList")]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct EdgeList {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<EdgeList> for Graph {
    type Error = Error;
    fn try_from(e: EdgeList) -> Result<Graph> {
        Graph::from_edges(e.n, &e.edges)
    }
}

impl From<Graph> for EdgeList {
    fn from(g: Graph) -> EdgeList {
        EdgeList {
            n: g.n,
            edges: g.edges().collect(),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        let words = bits::words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Graph {
        Graph::empty(n).complement()
    }

    /// Cycle `0-1-...-(n-1)-0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut b = GraphBuilder::new(n);
        for i in 0..n {
            b.add_edge(i, (i + 1) % n);
        }
        b.build()
    }

    /// Path on `n` vertices `0-1-...-(n-1)`. The 4-vertex path is the P₃ of
    /// the literature (paths are indexed by edge count).
    pub fn path(n: usize) -> Graph {
        let mut b = GraphBuilder::new(n);
        for i in 1..n {
            b.add_edge(i - 1, i);
        }
        b.build()
    }

    /// Builds a graph from an edge list; rejects self-loops, out-of-range
    /// endpoints and duplicate edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if b.has_edge(u, v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            b.add_edge(u, v);
        }
        Ok(b.build())
    }

    /// Builds a graph from a dense boolean matrix, rejecting asymmetric or
    /// self-looped input.
    pub fn from_matrix(m: &[Vec<bool>]) -> Result<Graph> {
        let n = m.len();
        let mut b = GraphBuilder::new(n);
        for (u, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!("row {u} has length {}, expected {n}", row.len())));
            }
            if row[u] {
                return Err(Error::SelfLoop(u));
            }
            for v in (u + 1)..n {
                if row[v] != m[v][u] {
                    return Err(Error::Asymmetric(u, v));
                }
                if row[v] {
                    b.add_edge(u, v);
                }
            }
        }
        Ok(b.build())
    }

    /// Graph whose edges are the set bits of `mask` over the pairs of
    /// `0..n` in lexicographic order `(0,1), (0,2), ..., (n-2,n-1)`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Graph {
        let mut b = GraphBuilder::new(n);
        let mut bit = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if (mask >> bit) & 1 == 1 {
                    b.add_edge(u, v);
                }
                bit += 1;
            }
        }
        b.build()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::test(self.row(u), v)
    }

    pub fn degree(&self, v: usize) -> usize {
        bits::count(self.row(v))
    }

    pub fn neighbors(&self, v: usize) -> bits::Ones<'_> {
        bits::ones(self.row(v))
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn complement(&self) -> Graph {
        let full = bits::full(self.n);
        let mut rows = self.rows.clone();
        for v in 0..self.n {
            let r = &mut rows[v * self.words..(v + 1) * self.words];
            for (w, f) in r.iter_mut().zip(&full) {
                *w = !*w & f;
            }
            bits::clear(r, v);
        }
        Graph {
            n: self.n,
            words: self.words,
            rows,
        }
    }

    /// Subgraph induced by `s`, with vertices renumbered in ascending order of `s`.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<Graph> {
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n: self.n });
        }
        let mut b = GraphBuilder::new(sorted.len());
        for (i, &u) in sorted.iter().enumerate() {
            for (j, &v) in sorted.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    b.add_edge(i, j);
                }
            }
        }
        Ok(b.build())
    }

    /// Copy with the pair `{u, v}` toggled.
    pub fn toggled(&self, u: usize, v: usize) -> Graph {
        let mut b = GraphBuilder::from_graph(self);
        b.toggle(u, v);
        b.build()
    }

    /// Adjacency rows as a comparable key; used for deterministic tie-breaks.
    pub fn adjacency_key(&self) -> &[u64] {
        &self.rows
    }
}

/// Mutable staging area for building a [`Graph`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> GraphBuilder {
        let g = Graph::empty(n);
        GraphBuilder {
            n,
            words: g.words,
            rows: g.rows,
        }
    }

    pub fn from_graph(g: &Graph) -> GraphBuilder {
        GraphBuilder {
            n: g.n,
            words: g.words,
            rows: g.rows.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn row_mut(&mut self, v: usize) -> &mut [u64] {
        &mut self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::test(&self.rows[u * self.words..(u + 1) * self.words], v)
    }

    /// Panics on a self-loop or out-of-range endpoint.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u}, {v}) for n = {}", self.n);
        bits::set(self.row_mut(u), v);
        bits::set(self.row_mut(v), u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u}, {v}) for n = {}", self.n);
        bits::clear(self.row_mut(u), v);
        bits::clear(self.row_mut(v), u);
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        if present {
            self.add_edge(u, v)
        } else {
            self.remove_edge(u, v)
        }
    }

    pub fn toggle(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad pair ({u}, {v}) for n = {}", self.n);
        bits::toggle(self.row_mut(u), v);
        bits::toggle(self.row_mut(v), u);
    }

    pub fn build(self) -> Graph {
        Graph {
            n: self.n,
            words: self.words,
            rows: self.rows,
        }
    }
}

/// Number of unordered pairs, `C(n, 2)`.
pub fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `C(n, k)` as f64 (exact for the magnitudes used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
