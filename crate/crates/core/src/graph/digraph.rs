use super::bits;
use crate::error::{Error, Result};
use std::fmt;

/// Immutable directed graph; `row(u)` holds the out-neighbours of `u`.
/// Self-arcs are rejected, antiparallel pairs are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs().collect::<Vec<_>>())
    }
}

impl Digraph {
    pub fn empty(n: usize) -> Digraph {
        let words = bits::words_for(n);
        Digraph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Digraph> {
        let mut d = Digraph::empty(n);
        for &(u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if d.has_arc(u, v) {
                return Err(Error::DuplicateEdge(u, v));
            }
            let w = d.words;
            bits::set(&mut d.rows[u * w..(u + 1) * w], v);
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        bits::count(&self.rows)
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        bits::test(self.row(u), v)
    }

    pub fn out_neighbors(&self, u: usize) -> bits::Ones<'_> {
        bits::ones(self.row(u))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).map(move |v| (u, v)))
    }

    /// Sub-digraph induced by `s`, renumbered in ascending order of `s`.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<Digraph> {
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n: self.n });
        }
        let mut arcs = vec![];
        for (i, &u) in sorted.iter().enumerate() {
            for (j, &v) in sorted.iter().enumerate() {
                if self.has_arc(u, v) {
                    arcs.push((i, j));
                }
            }
        }
        Digraph::from_arcs(sorted.len(), &arcs)
    }
}
