//! Exact membership deciders. Every negative answer carries a witness: a
//! vertex set whose induced structure is itself outside the property.

mod cograph;
mod comparability;
mod perfect;

pub(crate) use cograph::components as cograph_components;
pub use cograph::is_cograph;
pub use comparability::{is_comparability, is_comparability_exhaustive, transitive_orientation, EXHAUSTIVE_BOUND};
pub use perfect::{find_odd_hole, is_perfect, is_perfect_with_bound, PERFECT_BOUND};

use crate::error::{Error, Result};
use crate::graph::{bits, Digraph, Graph, PartLabeling};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecognitionResult {
    pub member: bool,
    pub witness: Option<Vec<usize>>,
}

impl RecognitionResult {
    pub fn member() -> Self {
        RecognitionResult { member: true, witness: None }
    }

    pub fn non_member(witness: Vec<usize>) -> Self {
        RecognitionResult {
            member: false,
            witness: Some(witness),
        }
    }

    /// Witness vertices, sorted ascending.
    pub fn witness_set(&self) -> Option<Vec<usize>> {
        self.witness.as_ref().map(|w| {
            let mut s = w.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
    }
}

/// Hereditary graph properties with an exact recognizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    TriangleFree,
    Cograph,
    Comparability,
    Perfect,
    InducedHFree(Graph),
}

impl Property {
    pub fn recognize(&self, g: &Graph) -> Result<RecognitionResult> {
        match self {
            Property::TriangleFree => Ok(is_triangle_free(g)),
            Property::Cograph => Ok(is_cograph(g)),
            Property::Comparability => Ok(is_comparability(g)),
            Property::Perfect => is_perfect(g),
            Property::InducedHFree(h) => is_induced_h_free(g, h),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Property::TriangleFree => "triangle-free".into(),
            Property::Cograph => "cograph".into(),
            Property::Comparability => "comparability".into(),
            Property::Perfect => "perfect".into(),
            Property::InducedHFree(h) if *h == Graph::cycle(5) => "induced-c5-free".into(),
            Property::InducedHFree(h) if *h == Graph::path(4) => "induced-p3-free".into(),
            Property::InducedHFree(h) => format!("induced-h-free(n={},m={})", h.n(), h.m()),
        }
    }

    pub fn induced_c5_free() -> Property {
        Property::InducedHFree(Graph::cycle(5))
    }

    /// Re-checks a negative result from scratch: the witness must induce a
    /// subgraph that fails the property on its own.
    pub fn verify_witness(&self, g: &Graph, witness: &[usize]) -> Result<bool> {
        let sub = g.induced_subgraph(witness)?;
        Ok(match self {
            Property::TriangleFree => sub.n() == 3 && sub.m() == 3,
            Property::Cograph => sub.n() == 4 && crate::graph::is_induced_p3(&sub, [0, 1, 2, 3]),
            Property::Comparability => {
                if sub.n() <= EXHAUSTIVE_BOUND {
                    !is_comparability_exhaustive(&sub)?
                } else {
                    !is_comparability(&sub).member
                }
            }
            Property::Perfect => {
                let holey = |h: &Graph| h.n() >= 5 && h.n() % 2 == 1 && (0..h.n()).all(|v| h.degree(v) == 2) && is_connected(h);
                holey(&sub) || holey(&sub.complement())
            }
            Property::InducedHFree(h) => sub.n() == h.n() && isomorphic_small(&sub, h),
        })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Property> {
        Ok(match s {
            "triangle-free" => Property::TriangleFree,
            "cograph" | "induced-p3-free" => Property::Cograph,
            "comparability" => Property::Comparability,
            "perfect" => Property::Perfect,
            "induced-c5-free" => Property::induced_c5_free(),
            other => return Err(Error::InvalidParameter(format!("unknown property {other:?}"))),
        })
    }
}

fn is_connected(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let mut seen = vec![0u64; bits::words_for(g.n())];
    let mut stack = vec![0];
    bits::set(&mut seen, 0);
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if !bits::test(&seen, u) {
                bits::set(&mut seen, u);
                stack.push(u);
            }
        }
    }
    bits::count(&seen) == g.n()
}

pub fn is_triangle_free(g: &Graph) -> RecognitionResult {
    for u in 0..g.n() {
        for v in g.neighbors(u).filter(|&v| v > u) {
            let common: Vec<u64> = g.row(u).iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
            if let Some(w) = bits::ones(&common).find(|&w| w > v) {
                return RecognitionResult::non_member(vec![u, v, w]);
            }
        }
    }
    RecognitionResult::member()
}

/// Largest pattern accepted by [`is_induced_h_free`].
pub const MAX_PATTERN: usize = 6;

fn pair_bit(k: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// Every labelled copy of `h` on `0..k`, as pair masks.
fn labelled_copies(h: &Graph) -> HashSet<u16> {
    let k = h.n();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut out = HashSet::new();
    fn heap(perm: &mut Vec<usize>, m: usize, h: &Graph, out: &mut HashSet<u16>) {
        if m <= 1 {
            let k = perm.len();
            let mut mask = 0u16;
            for (u, v) in h.edges() {
                mask |= 1 << pair_bit(k, perm[u], perm[v]);
            }
            out.insert(mask);
            return;
        }
        for i in 0..m {
            heap(perm, m - 1, h, out);
            let j = if m % 2 == 0 { i } else { 0 };
            perm.swap(j, m - 1);
        }
    }
    heap(&mut perm, k, h, &mut out);
    out
}

fn isomorphic_small(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.m() != b.m() || a.n() > MAX_PATTERN {
        return false;
    }
    let k = a.n();
    let mut mask = 0u16;
    for (u, v) in a.edges() {
        mask |= 1 << pair_bit(k, u, v);
    }
    labelled_copies(b).contains(&mask)
}

/// Induced-`h`-freeness by enumerating `|V(h)|`-subsets in lexicographic order.
/// The witness is the first subset inducing a copy of `h`.
pub fn is_induced_h_free(g: &Graph, h: &Graph) -> Result<RecognitionResult> {
    let k = h.n();
    if k > MAX_PATTERN {
        return Err(Error::ExactBoundExceeded {
            what: "induced-H enumeration (pattern size)",
            n: k,
            bound: MAX_PATTERN,
        });
    }
    let copies = labelled_copies(h);
    let target_m = h.m() as u32;
    let mut chosen = Vec::with_capacity(k);
    fn rec(g: &Graph, k: usize, start: usize, chosen: &mut Vec<usize>, mask: u16, target_m: u32, copies: &HashSet<u16>) -> bool {
        if mask.count_ones() > target_m {
            return false;
        }
        if chosen.len() == k {
            return copies.contains(&mask);
        }
        let need = k - chosen.len();
        for v in start..=(g.n().saturating_sub(need)) {
            if v >= g.n() {
                break;
            }
            let idx = chosen.len();
            let mut m = mask;
            for (i, &u) in chosen.iter().enumerate() {
                if g.has_edge(u, v) {
                    m |= 1 << pair_bit(k, i, idx);
                }
            }
            chosen.push(v);
            if rec(g, k, v + 1, chosen, m, target_m, copies) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    if k <= g.n() && rec(g, k, 0, &mut chosen, 0, target_m, &copies) {
        return Ok(RecognitionResult::non_member(chosen));
    }
    Ok(RecognitionResult::member())
}

/// Poset axioms: no loops (guaranteed by [`Digraph`]), no antiparallel
/// pair, transitivity. Witness `[u, v]` for an antiparallel pair or the
/// path `[a, b, c]` with `a→b→c` but no `a→c`.
pub fn is_poset(d: &Digraph) -> RecognitionResult {
    for (u, v) in d.arcs() {
        if u < v && d.has_arc(v, u) {
            return RecognitionResult::non_member(vec![u, v]);
        }
    }
    for a in 0..d.n() {
        for b in d.out_neighbors(a) {
            for c in d.out_neighbors(b) {
                if c != a && !d.has_arc(a, c) {
                    return RecognitionResult::non_member(vec![a, b, c]);
                }
            }
        }
    }
    RecognitionResult::member()
}

/// Orients every edge from the earlier part of `labeling` to the later one
/// (ties by vertex index) and checks that the orientation is transitive.
/// Witness: `[a, b, c]` in order with `a~b`, `b~c`, `a≁c`.
pub fn check_order_transitivity(g: &Graph, labeling: &PartLabeling) -> Result<RecognitionResult> {
    if labeling.n() != g.n() {
        return Err(Error::Labeling(format!("labeling covers {} vertices, graph has {}", labeling.n(), g.n())));
    }
    let key = |v: usize| (labeling.position(v), v);
    for b in 0..g.n() {
        let (mut before, mut after) = (vec![], vec![0u64; bits::words_for(g.n())]);
        for u in g.neighbors(b) {
            if key(u) < key(b) {
                before.push(u);
            } else {
                bits::set(&mut after, u);
            }
        }
        for a in before {
            let missing: Vec<u64> = after.iter().zip(g.row(a)).map(|(x, r)| x & !r).collect();
            if let Some(c) = bits::first(&missing) {
                return Ok(RecognitionResult::non_member(vec![a, b, c]));
            }
        }
    }
    Ok(RecognitionResult::member())
}
