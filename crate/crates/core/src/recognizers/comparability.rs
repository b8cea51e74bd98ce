use super::RecognitionResult;
use crate::error::{Error, Result};
use crate::graph::{bits, Digraph, Graph};

/// Largest graph accepted by [`is_comparability_exhaustive`].
pub const EXHAUSTIVE_BOUND: usize = 8;

/// Transitive orientation by edge-class forcing, or `None` if there is none.
///
/// Repeatedly takes the lowest unoriented edge `u<v`, orients it `u→v` and
/// closes under forcing in the residual graph: an arc `a→b` forces `a→c`
/// for every residual neighbour `c` of `a` not adjacent to `b`, and `c→b`
/// for every residual neighbour `c` of `b` not adjacent to `a`. A class
/// forced into both directions of one edge means no transitive orientation
/// exists. Each finished class is removed from the residual graph before
/// the next one is started. The union is finally checked for transitivity.
pub fn transitive_orientation(g: &Graph) -> Option<Digraph> {
    let n = g.n();
    let words = bits::words_for(n);
    let mut residual: Vec<u64> = (0..n).flat_map(|v| g.row(v).iter().copied()).collect();
    let mut mark = vec![false; n * n];
    let mut arcs = Vec::with_capacity(g.m());
    let row = |res: &Vec<u64>, v: usize| res[v * words..(v + 1) * words].to_vec();
    let mut next_u = 0;
    loop {
        while next_u < n && bits::first(&residual[next_u * words..(next_u + 1) * words]).is_none() {
            next_u += 1;
        }
        if next_u >= n {
            break;
        }
        let u = next_u;
        // residual rows are symmetric, so the lowest neighbour of the lowest
        // vertex with residual edges gives the lowest residual edge overall
        let v = bits::first(&residual[u * words..(u + 1) * words]).unwrap();
        debug_assert!(v > u);
        let mut class = vec![(u, v)];
        mark[u * n + v] = true;
        let mut i = 0;
        while i < class.len() {
            let (a, b) = class[i];
            i += 1;
            let (ra, rb) = (row(&residual, a), row(&residual, b));
            let from_a: Vec<usize> = bits::ones(&ra).filter(|&c| c != b && !bits::test(&rb, c)).collect();
            let into_b: Vec<usize> = bits::ones(&rb).filter(|&c| c != a && !bits::test(&ra, c)).collect();
            for (x, y) in from_a.into_iter().map(|c| (a, c)).chain(into_b.into_iter().map(|c| (c, b))) {
                if mark[y * n + x] {
                    return None;
                }
                if !mark[x * n + y] {
                    mark[x * n + y] = true;
                    class.push((x, y));
                }
            }
        }
        for &(a, b) in &class {
            bits::clear(&mut residual[a * words..(a + 1) * words], b);
            bits::clear(&mut residual[b * words..(b + 1) * words], a);
        }
        arcs.extend(class);
    }
    let d = Digraph::from_arcs(n, &arcs).expect("each edge is oriented once");
    is_transitive(&d).then_some(d)
}

fn is_transitive(d: &Digraph) -> bool {
    (0..d.n()).all(|a| d.out_neighbors(a).all(|b| d.row(b).iter().zip(d.row(a)).all(|(nb, na)| nb & !na == 0)))
}

/// Comparability recognition. On failure the witness is a vertex-minimal
/// subset (greedy deletion in index order) that still has no transitive
/// orientation.
pub fn is_comparability(g: &Graph) -> RecognitionResult {
    if transitive_orientation(g).is_some() {
        return RecognitionResult::member();
    }
    let mut keep: Vec<usize> = (0..g.n()).collect();
    let mut i = 0;
    while i < keep.len() {
        let trial: Vec<usize> = keep.iter().copied().filter(|&v| v != keep[i]).collect();
        let sub = g.induced_subgraph(&trial).expect("subset of vertex range");
        if transitive_orientation(&sub).is_none() {
            keep = trial;
        } else {
            i += 1;
        }
    }
    RecognitionResult::non_member(keep)
}

/// Reference decision by backtracking over all orientations of the edges,
/// pruning any partial orientation that already contains `a→b→c` without
/// `a→c` available. Only for graphs on at most [`EXHAUSTIVE_BOUND`] vertices.
pub fn is_comparability_exhaustive(g: &Graph) -> Result<bool> {
    let n = g.n();
    if n > EXHAUSTIVE_BOUND {
        return Err(Error::ExactBoundExceeded {
            what: "exhaustive orientation search",
            n,
            bound: EXHAUSTIVE_BOUND,
        });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    // dir[a][b] = Some(true) if oriented a→b
    let mut dir = vec![[None::<bool>; EXHAUSTIVE_BOUND]; EXHAUSTIVE_BOUND];

    fn arc(dir: &[[Option<bool>; EXHAUSTIVE_BOUND]], a: usize, b: usize) -> bool {
        dir[a][b] == Some(true)
    }

    fn consistent(g: &Graph, dir: &[[Option<bool>; EXHAUSTIVE_BOUND]]) -> bool {
        let n = g.n();
        for a in 0..n {
            for b in 0..n {
                if !arc(dir, a, b) {
                    continue;
                }
                for c in 0..n {
                    if c == a || !arc(dir, b, c) {
                        continue;
                    }
                    if !g.has_edge(a, c) || arc(dir, c, a) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn go(g: &Graph, edges: &[(usize, usize)], i: usize, dir: &mut Vec<[Option<bool>; EXHAUSTIVE_BOUND]>) -> bool {
        if !consistent(g, dir) {
            return false;
        }
        if i == edges.len() {
            return true;
        }
        let (u, v) = edges[i];
        for forward in [true, false] {
            dir[u][v] = Some(forward);
            dir[v][u] = Some(!forward);
            if go(g, edges, i + 1, dir) {
                return true;
            }
        }
        dir[u][v] = None;
        dir[v][u] = None;
        false
    }

    Ok(go(g, &edges, 0, &mut dir))
}
