//! Triangle packings and covers, greedy induced-C₅ packings, and the
//! farness lower bounds they certify.

use crate::error::{invalid, Error, Result};
use crate::graph::{bits, is_induced_c5, Graph, GraphBuilder, Part, PartLabeling, PartName};
use crate::rng::Stream;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// Exact packing/cover search is refused above this many vertices.
pub const EXACT_PACKING_MAX_N: usize = 14;
/// ... or above this many triangles.
pub const EXACT_PACKING_MAX_TRIANGLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PackingKind {
    Triangle,
    InducedC5,
}

impl PackingKind {
    pub fn arity(self) -> usize {
        match self {
            PackingKind::Triangle => 3,
            PackingKind::InducedC5 => 5,
        }
    }
}

/// Vertex tuples, each inducing the structure named by `kind`, such that no
/// vertex pair lies in two tuples. For triangles this is edge-disjointness;
/// for C₅s it is "pairwise share at most one vertex". Either way a single
/// pair edit destroys at most one tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPacking {
    pub kind: PackingKind,
    pub tuples: Vec<Vec<usize>>,
    pub host_n: usize,
    #[serde(default)]
    pub verified: bool,
}

impl WitnessPacking {
    pub fn new(kind: PackingKind, tuples: Vec<Vec<usize>>, host_n: usize) -> WitnessPacking {
        WitnessPacking {
            kind,
            tuples,
            host_n,
            verified: false,
        }
    }

    pub fn empty(kind: PackingKind, host_n: usize) -> WitnessPacking {
        WitnessPacking::new(kind, vec![], host_n)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Checks every tuple against `g` and the pair-disjointness rule, and
    /// marks the packing verified on success.
    pub fn verify(&mut self, g: &Graph) -> Result<()> {
        self.verified = false;
        check_packing(self, g)?;
        self.verified = true;
        Ok(())
    }

    pub fn verified_in(mut self, g: &Graph) -> Result<WitnessPacking> {
        self.verify(g)?;
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("packing serializes")
    }

    pub fn from_json(s: &str) -> Result<WitnessPacking> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

fn check_packing(p: &WitnessPacking, g: &Graph) -> Result<()> {
    let fail = |msg: String| Err(Error::Unverified(msg));
    if p.host_n != g.n() {
        return fail(format!("packing is for n = {}, graph has {}", p.host_n, g.n()));
    }
    let mut seen_pairs = HashSet::new();
    for (i, t) in p.tuples.iter().enumerate() {
        if t.len() != p.kind.arity() {
            return fail(format!("tuple {i} has {} vertices", t.len()));
        }
        if t.iter().any(|&v| v >= g.n()) {
            return fail(format!("tuple {i} has an out-of-range vertex"));
        }
        let ok = match p.kind {
            PackingKind::Triangle => t[0] != t[1] && t[1] != t[2] && t[0] != t[2] && g.has_edge(t[0], t[1]) && g.has_edge(t[1], t[2]) && g.has_edge(t[0], t[2]),
            PackingKind::InducedC5 => {
                let q = [t[0], t[1], t[2], t[3], t[4]];
                q.iter().collect::<HashSet<_>>().len() == 5 && is_induced_c5(g, q)
            }
        };
        if !ok {
            return fail(format!("tuple {i} = {t:?} does not induce a {:?}", p.kind));
        }
        for a in 0..t.len() {
            for b in (a + 1)..t.len() {
                let pair = (t[a].min(t[b]), t[a].max(t[b]));
                if !seen_pairs.insert(pair) {
                    return fail(format!("pair {pair:?} of tuple {i} already used by an earlier tuple"));
                }
            }
        }
    }
    Ok(())
}

/// All triangles `[a, b, c]` with `a < b < c`, lexicographic.
pub fn triangles(g: &Graph) -> Vec<[usize; 3]> {
    let mut out = vec![];
    for a in 0..g.n() {
        for b in g.neighbors(a).filter(|&b| b > a) {
            for c in g.neighbors(b).filter(|&c| c > b) {
                if g.has_edge(a, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PackMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverMode {
    Exact,
    FromPacking,
}

/// Triangles as bitmasks over an edge numbering, for the exact searches.
struct TriangleSystem {
    edges: Vec<(usize, usize)>,
    tris: Vec<[usize; 3]>,
    masks: Vec<u128>,
}

impl TriangleSystem {
    fn build(g: &Graph) -> Result<TriangleSystem> {
        if g.n() > EXACT_PACKING_MAX_N {
            return Err(Error::ExactBoundExceeded {
                what: "exact triangle packing/cover",
                n: g.n(),
                bound: EXACT_PACKING_MAX_N,
            });
        }
        let tris = triangles(g);
        if tris.len() > EXACT_PACKING_MAX_TRIANGLES {
            return invalid(format!("{} triangles exceed the exact-search guard {EXACT_PACKING_MAX_TRIANGLES}", tris.len()));
        }
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let index: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let masks = tris
            .iter()
            .map(|&[a, b, c]| (1u128 << index[&(a, b)]) | (1u128 << index[&(a, c)]) | (1u128 << index[&(b, c)]))
            .collect();
        Ok(TriangleSystem { edges, tris, masks })
    }
}

fn max_packing(sys: &TriangleSystem) -> Vec<usize> {
    struct Search<'a> {
        masks: &'a [u128],
        edges: &'a [(usize, usize)],
        best: Vec<usize>,
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        fn upper_bound(&self, avail: &[usize]) -> usize {
            let union = avail.iter().fold(0u128, |u, &t| u | self.masks[t]);
            let by_edges = union.count_ones() as usize / 3;
            // a triangle uses two edges at each of its vertices
            let mut deg = [0usize; 128];
            let mut u = union;
            while u != 0 {
                let e = u.trailing_zeros() as usize;
                u &= u - 1;
                let (a, b) = self.edges[e];
                deg[a] += 1;
                deg[b] += 1;
            }
            let by_vertices = deg.iter().map(|d| d / 2).sum::<usize>() / 3;
            avail.len().min(by_edges).min(by_vertices)
        }

        fn run(&mut self, avail: Vec<usize>) {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            if avail.is_empty() || self.chosen.len() + self.upper_bound(&avail) <= self.best.len() {
                return;
            }
            // branch on the edge lying in the fewest available triangles
            let mut count: HashMap<u32, usize> = HashMap::new();
            for &t in &avail {
                let mut m = self.masks[t];
                while m != 0 {
                    *count.entry(m.trailing_zeros()).or_default() += 1;
                    m &= m - 1;
                }
            }
            let (&edge, _) = count.iter().min_by_key(|(&e, &c)| (c, e)).unwrap();
            let bit = 1u128 << edge;
            let through: Vec<usize> = avail.iter().copied().filter(|&t| self.masks[t] & bit != 0).collect();
            for &t in &through {
                let next: Vec<usize> = avail.iter().copied().filter(|&s| self.masks[s] & self.masks[t] == 0).collect();
                self.chosen.push(t);
                self.run(next);
                self.chosen.pop();
            }
            let next: Vec<usize> = avail.into_iter().filter(|&s| self.masks[s] & bit == 0).collect();
            self.run(next);
        }
    }

    let mut s = Search {
        masks: &sys.masks,
        edges: &sys.edges,
        best: vec![],
        chosen: vec![],
    };
    s.run((0..sys.masks.len()).collect());
    s.best.sort_unstable();
    s.best
}

fn greedy_indices(masks: &[u128], order: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut used = 0u128;
    let mut out = vec![];
    for t in order {
        if masks[t] & used == 0 {
            used |= masks[t];
            out.push(t);
        }
    }
    out
}

fn min_cover(sys: &TriangleSystem) -> u128 {
    struct Search<'a> {
        masks: &'a [u128],
        best: u128,
    }

    impl Search<'_> {
        fn run(&mut self, uncovered: &[usize], cover: u128, forbidden: u128) {
            if uncovered.is_empty() {
                if cover.count_ones() < self.best.count_ones() {
                    self.best = cover;
                }
                return;
            }
            // edge-disjoint uncovered triangles each need their own cover edge
            let lb = greedy_indices(self.masks, uncovered.iter().copied()).len() as u32;
            if cover.count_ones() + lb >= self.best.count_ones() {
                return;
            }
            let pivot = *uncovered.iter().min_by_key(|&&t| (self.masks[t] & !forbidden).count_ones()).unwrap();
            let mut options = self.masks[pivot] & !forbidden;
            let mut forbid = forbidden;
            while options != 0 {
                let e = options.trailing_zeros();
                options &= options - 1;
                let bit = 1u128 << e;
                let rest: Vec<usize> = uncovered.iter().copied().filter(|&t| self.masks[t] & bit == 0).collect();
                if rest.iter().all(|&t| self.masks[t] & !(forbid | bit) != 0) {
                    self.run(&rest, cover | bit, forbid);
                }
                // later branches never use this edge
                forbid |= bit;
            }
        }
    }

    let packing = greedy_indices(&sys.masks, 0..sys.masks.len());
    let initial = packing.iter().fold(0u128, |c, &t| c | sys.masks[t]);
    let mut s = Search {
        masks: &sys.masks,
        best: initial,
    };
    let all: Vec<usize> = (0..sys.masks.len()).collect();
    s.run(&all, 0, 0);
    s.best
}

/// Edge-disjoint triangle packing. Exact mode returns a maximum packing
/// (branch and bound); greedy mode a maximal one, scanning triangles in
/// lexicographic order, or in random order when `rng` is given.
pub fn triangle_packing(g: &Graph, mode: PackMode, rng: Option<&mut Stream>) -> Result<WitnessPacking> {
    let tuples: Vec<Vec<usize>> = match mode {
        PackMode::Exact => {
            let sys = TriangleSystem::build(g)?;
            max_packing(&sys).into_iter().map(|t| sys.tris[t].to_vec()).collect()
        }
        PackMode::Greedy => {
            let mut tris = triangles(g);
            if let Some(r) = rng {
                tris.shuffle(r);
            }
            let mut used: HashSet<(usize, usize)> = HashSet::new();
            let mut out = vec![];
            for [a, b, c] in tris {
                let es = [(a.min(b), a.max(b)), (a.min(c), a.max(c)), (b.min(c), b.max(c))];
                if es.iter().all(|e| !used.contains(e)) {
                    used.extend(es);
                    out.push(vec![a, b, c]);
                }
            }
            out
        }
    };
    WitnessPacking::new(PackingKind::Triangle, tuples, g.n()).verified_in(g)
}

/// An edge set meeting every triangle. Exact mode is a minimum cover;
/// `FromPacking` takes all edges of a maximum packing (at most 3τ edges).
pub fn triangle_cover(g: &Graph, mode: CoverMode) -> Result<Vec<(usize, usize)>> {
    let sys = TriangleSystem::build(g)?;
    let mask = match mode {
        CoverMode::Exact => min_cover(&sys),
        CoverMode::FromPacking => max_packing(&sys).iter().fold(0u128, |c, &t| c | sys.masks[t]),
    };
    Ok((0..sys.edges.len()).filter(|&e| mask >> e & 1 == 1).map(|e| sys.edges[e]).collect())
}

/// Induced C₅s in a C₅ gadget, one per planted triangle of `F`.
///
/// The gadget layout is `V1 = 0..2n`, `V4 = 2n..4n`, and `F`'s vertex `i`
/// at `4n + i`. For planted triangle `T_i`, vertices of `V1`/`V4` used by an
/// earlier tuple whose triangle meets `T_i` are excluded, and the
/// lexicographically least `(v1, v4)` pair not used by any earlier tuple is
/// taken.
pub fn greedy_c5_packing(gadget: &Graph, labeling: &PartLabeling, planted: &WitnessPacking) -> Result<WitnessPacking> {
    if planted.kind != PackingKind::Triangle {
        return invalid("planted packing must consist of triangles");
    }
    if gadget.n() % 5 != 0 || labeling.n() != gadget.n() {
        return Err(Error::Labeling("gadget must have 5n vertices and a matching labeling".into()));
    }
    let n = gadget.n() / 5;
    if planted.host_n != n {
        return invalid(format!("planted triangles live on {} vertices, F has {n}", planted.host_n));
    }
    let v1 = labeling.vertices(PartName::V1);
    let v4 = labeling.vertices(PartName::V4);
    let offset = 4 * n;
    let mut used_pairs: HashSet<(usize, usize)> = HashSet::new();
    let mut tuples: Vec<Vec<usize>> = Vec::with_capacity(planted.len());
    for (i, t) in planted.tuples.iter().enumerate() {
        let tri: Vec<usize> = t.iter().map(|&v| v + offset).collect();
        let mut banned1 = HashSet::new();
        let mut banned4 = HashSet::new();
        for (j, earlier) in tuples.iter().enumerate() {
            if planted.tuples[j].iter().any(|v| t.contains(v)) {
                banned1.insert(earlier[3]);
                banned4.insert(earlier[4]);
            }
        }
        let pick = v1
            .iter()
            .filter(|v| !banned1.contains(*v))
            .flat_map(|&a| v4.iter().filter(|v| !banned4.contains(*v)).map(move |&b| (a, b)))
            .find(|p| !used_pairs.contains(p));
        let Some((a, b)) = pick else {
            return Err(Error::Exhausted(format!(
                "no free (V1, V4) pair for planted triangle {i}; are the planted triangles edge-disjoint?"
            )));
        };
        used_pairs.insert((a, b));
        tuples.push(vec![tri[0], tri[1], tri[2], a, b]);
    }
    WitnessPacking::new(PackingKind::InducedC5, tuples, gadget.n()).verified_in(gadget)
}

/// `|tuples| / n²`: a lower bound on the normalized edit distance to the
/// matching freeness property, since each pair edit kills at most one tuple.
pub fn farness_lower_bound(packing: &WitnessPacking, n: usize) -> Result<f64> {
    if !packing.verified {
        return Err(Error::Unverified("farness needs a verified packing".into()));
    }
    if n == 0 {
        return Ok(0.0);
    }
    Ok(packing.len() as f64 / (n * n) as f64)
}

/// One random induced C₅ grown along a path `b - a - e` and closed through
/// `c ~ b` and a common neighbour `d` of `c` and `e`; `None` if a step fails.
fn sample_induced_c5(g: &Graph, rng: &mut Stream) -> Option<[usize; 5]> {
    let pick = |row: &[u64], rng: &mut Stream| -> Option<usize> {
        let k = bits::count(row);
        (k > 0).then(|| bits::ones(row).nth(rng.gen_range(0..k)).unwrap())
    };
    let n = g.n();
    let a = rng.gen_range(0..n);
    let b = pick(g.row(a), rng)?;
    let e = pick(g.row(a), rng)?;
    if b == e || g.has_edge(b, e) {
        return None;
    }
    let mut cand = g.row(b).to_vec();
    for (w, (&ra, &re)) in cand.iter_mut().zip(g.row(a).iter().zip(g.row(e))) {
        *w &= !ra & !re;
    }
    bits::clear(&mut cand, a);
    bits::clear(&mut cand, e);
    let c = pick(&cand, rng)?;
    let mut cand = g.row(c).to_vec();
    for (i, w) in cand.iter_mut().enumerate() {
        *w &= g.row(e)[i] & !g.row(a)[i] & !g.row(b)[i];
    }
    bits::clear(&mut cand, a);
    bits::clear(&mut cand, b);
    let d = pick(&cand, rng)?;
    let q = [a, b, c, d, e];
    debug_assert!(is_induced_c5(g, q));
    Some(q)
}

/// Pair-disjoint induced C₅s found by `attempts` random growth attempts,
/// kept greedily in the order found. A certified (weak) farness witness for
/// graphs too large to search exhaustively.
pub fn random_c5_packing(g: &Graph, attempts: usize, rng: &mut Stream) -> Result<WitnessPacking> {
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut tuples = vec![];
    if g.n() >= 5 {
        for _ in 0..attempts {
            let Some(q) = sample_induced_c5(g, rng) else { continue };
            let mut ps = Vec::with_capacity(10);
            for i in 0..5 {
                for j in (i + 1)..5 {
                    ps.push((q[i].min(q[j]), q[i].max(q[j])));
                }
            }
            if ps.iter().all(|p| !used.contains(p)) {
                used.extend(ps);
                tuples.push(q.to_vec());
            }
        }
    }
    WitnessPacking::new(PackingKind::InducedC5, tuples, g.n()).verified_in(g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripartiteExtract {
    pub f: Graph,
    /// Parts X, Y, Z (possibly empty).
    pub labeling: PartLabeling,
    pub retained: WitnessPacking,
}

/// Keeps the edges of `g` that cross between different parts of the given
/// assignment (values 0, 1, 2 for X, Y, Z) and the packing triangles with
/// one vertex in each part.
pub fn tripartite_with_assignment(g: &Graph, packing: &WitnessPacking, assignment: &[u8]) -> Result<TripartiteExtract> {
    if assignment.len() != g.n() || assignment.iter().any(|&a| a > 2) {
        return invalid("assignment must give each vertex a part in 0..3");
    }
    if packing.kind != PackingKind::Triangle || packing.host_n != g.n() {
        return invalid("expected a triangle packing of g");
    }
    let mut b = GraphBuilder::new(g.n());
    for (u, v) in g.edges() {
        if assignment[u] != assignment[v] {
            b.add_edge(u, v);
        }
    }
    let f = b.build();
    let parts = [PartName::X, PartName::Y, PartName::Z]
        .iter()
        .enumerate()
        .map(|(i, &name)| Part {
            name,
            vertices: (0..g.n()).filter(|&v| assignment[v] as usize == i).collect(),
        })
        .collect();
    let labeling = PartLabeling::new(g.n(), parts, true)?;
    let kept = packing
        .tuples
        .iter()
        .filter(|t| {
            let mut seen = [false; 3];
            t.iter().for_each(|&v| seen[assignment[v] as usize] = true);
            seen.iter().all(|&s| s)
        })
        .cloned()
        .collect();
    let retained = WitnessPacking::new(PackingKind::Triangle, kept, g.n()).verified_in(&f)?;
    Ok(TripartiteExtract { f, labeling, retained })
}

/// Best of `retries` uniform random tripartitions (most retained packing
/// triangles; earliest draw on ties). Each packing triangle survives a
/// single draw with probability 3!/3³ = 2/9.
pub fn random_tripartite_extract(g: &Graph, packing: &WitnessPacking, rng: &mut Stream, retries: usize) -> Result<TripartiteExtract> {
    let mut best: Option<TripartiteExtract> = None;
    for _ in 0..retries.max(1) {
        let assignment: Vec<u8> = (0..g.n()).map(|_| rng.gen_range(0..3u8)).collect();
        let e = tripartite_with_assignment(g, packing, &assignment)?;
        if best.as_ref().is_none_or(|b| e.retained.len() > b.retained.len()) {
            best = Some(e);
        }
    }
    Ok(best.expect("at least one draw"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_triangles, gnp};
    use crate::rng::Seed;

    /// Oracle: maximum edge-disjoint triangle family by plain subset recursion.
    fn brute_tau(g: &Graph) -> usize {
        fn go(tris: &[[usize; 3]], i: usize, used: &mut HashSet<(usize, usize)>) -> usize {
            if i == tris.len() {
                return 0;
            }
            let skip = go(tris, i + 1, used);
            let [a, b, c] = tris[i];
            let es = [(a, b), (a, c), (b, c)];
            if es.iter().any(|e| used.contains(e)) {
                return skip;
            }
            es.iter().for_each(|&e| {
                used.insert(e);
            });
            let take = 1 + go(tris, i + 1, used);
            es.iter().for_each(|e| {
                used.remove(e);
            });
            skip.max(take)
        }
        go(&triangles(g), 0, &mut HashSet::new())
    }

    /// Oracle: minimum triangle cover by trying edge subsets in size order.
    fn brute_nu(g: &Graph) -> usize {
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let tris = triangles(g);
        for k in 0..=edges.len() {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let chosen: HashSet<(usize, usize)> = idx.iter().map(|&i| edges[i]).collect();
                if tris
                    .iter()
                    .all(|&[a, b, c]| chosen.contains(&(a, b)) || chosen.contains(&(a, c)) || chosen.contains(&(b, c)))
                {
                    return k;
                }
                // next k-combination
                let mut i = k;
                while i > 0 && idx[i - 1] == edges.len() - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        unreachable!("all edges cover all triangles")
    }

    #[test]
    fn packing_examples() {
        assert_eq!(triangle_packing(&Graph::complete(3), PackMode::Exact, None).unwrap().len(), 1);
        assert_eq!(triangle_packing(&Graph::complete(4), PackMode::Exact, None).unwrap().len(), 1);
        assert_eq!(brute_tau(&Graph::complete(4)), 1);
        assert_eq!(triangle_packing(&Graph::complete(7), PackMode::Exact, None).unwrap().len(), 7);
        assert!(triangle_packing(&Graph::empty(15), PackMode::Exact, None).is_err());
        assert!(triangle_packing(&Graph::empty(15), PackMode::Greedy, None).unwrap().is_empty());
    }

    #[test]
    fn cover_examples() {
        assert_eq!(triangle_cover(&Graph::complete(3), CoverMode::Exact).unwrap().len(), 1);
        let k4 = triangle_cover(&Graph::complete(4), CoverMode::Exact).unwrap();
        assert_eq!(k4.len(), 2);
        assert_eq!(brute_nu(&Graph::complete(4)), 2);
        assert!(triangle_cover(&Graph::cycle(6), CoverMode::Exact).unwrap().is_empty());
        assert_eq!(triangle_cover(&Graph::complete(4), CoverMode::FromPacking).unwrap().len(), 3);
    }

    #[test]
    fn exact_searches_match_oracles() {
        for s in 0..120 {
            let mut r = Seed(s).stream();
            let n = 5 + s as usize % 4;
            let g = gnp(n, [0.4, 0.6, 0.8][s as usize % 3], &mut r).unwrap();
            let tau = triangle_packing(&g, PackMode::Exact, None).unwrap().len();
            assert_eq!(tau, brute_tau(&g), "{g:?}");
            let cover = triangle_cover(&g, CoverMode::Exact).unwrap();
            assert_eq!(cover.len(), brute_nu(&g), "{g:?}");
            let greedy = triangle_packing(&g, PackMode::Greedy, Some(&mut r)).unwrap().len();
            assert!(greedy <= tau && 3 * greedy >= tau);
        }
    }

    #[test]
    fn cover_really_covers() {
        for s in 0..40 {
            let g = gnp(11, 0.6, &mut Seed(s).stream()).unwrap();
            for mode in [CoverMode::Exact, CoverMode::FromPacking] {
                let mut b = GraphBuilder::from_graph(&g);
                for (u, v) in triangle_cover(&g, mode).unwrap() {
                    b.remove_edge(u, v);
                }
                assert_eq!(count_triangles(&b.build()), 0);
            }
        }
    }

    #[test]
    fn verification_rejects_overlap_and_fakes() {
        let k4 = Graph::complete(4);
        let mut p = WitnessPacking::new(PackingKind::Triangle, vec![vec![0, 1, 2], vec![0, 1, 3]], 4);
        assert!(p.verify(&k4).is_err());
        assert!(!p.verified);
        let mut fake = WitnessPacking::new(PackingKind::Triangle, vec![vec![0, 1, 2]], 5);
        assert!(fake.verify(&Graph::cycle(5)).is_err());
        assert!(farness_lower_bound(&fake, 5).is_err());
    }

    #[test]
    fn farness_examples() {
        let p = triangle_packing(&Graph::complete(4), PackMode::Exact, None).unwrap();
        assert_eq!(farness_lower_bound(&p, 4).unwrap(), 1.0 / 16.0);
        let e = WitnessPacking::empty(PackingKind::Triangle, 4).verified_in(&Graph::complete(4)).unwrap();
        assert_eq!(farness_lower_bound(&e, 4).unwrap(), 0.0);
    }

    #[test]
    fn json_shape() {
        let p = triangle_packing(&Graph::complete(3), PackMode::Exact, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(v["kind"], "triangle");
        assert_eq!(v["tuples"], serde_json::json!([[0, 1, 2]]));
        assert_eq!(v["host_n"], 3);
        assert_eq!(v["verified"], true);
        assert_eq!(WitnessPacking::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn tripartite_forced_and_empty() {
        let k3 = Graph::complete(3);
        let p = triangle_packing(&k3, PackMode::Exact, None).unwrap();
        let e = tripartite_with_assignment(&k3, &p, &[0, 1, 2]).unwrap();
        assert_eq!(e.retained.len(), 1);
        let e = tripartite_with_assignment(&k3, &p, &[0, 0, 2]).unwrap();
        assert_eq!(e.retained.len(), 0);
        assert_eq!(e.f.m(), 2);
        let empty = WitnessPacking::empty(PackingKind::Triangle, 3);
        let e = random_tripartite_extract(&k3, &empty, &mut Seed(1).stream(), 3).unwrap();
        assert!(e.retained.is_empty());
    }

    #[test]
    fn random_c5_packing_verifies() {
        let mut rng = Seed(8).stream();
        let g = gnp(40, 0.3, &mut rng).unwrap();
        let p = random_c5_packing(&g, 5000, &mut rng).unwrap();
        assert!(p.verified && p.len() > 5);
        assert!(random_c5_packing(&Graph::complete(9), 100, &mut rng).unwrap().is_empty());
        assert_eq!(random_c5_packing(&Graph::cycle(5), 200, &mut rng).unwrap().len(), 1);
    }
}
