use super::{bits, Graph};
use crate::error::{Error, Result};

/// Exact induced-C₅ counting is refused above this many vertices.
pub const EXACT_C5_BOUND: usize = 64;

/// Number of triangles, by row intersection over each edge `u < v`
/// counting common neighbours `w > v`.
pub fn count_triangles(g: &Graph) -> u64 {
    let mut total = 0u64;
    for u in 0..g.n() {
        let ru = g.row(u);
        for v in g.neighbors(u).filter(|&v| v > u) {
            total += bits::and_count_above(ru, g.row(v), v) as u64;
        }
    }
    total
}

/// True iff the four vertices induce a path with three edges.
pub fn is_induced_p3(g: &Graph, q: [usize; 4]) -> bool {
    let mut deg = [0u8; 4];
    let mut edges = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if g.has_edge(q[i], q[j]) {
                deg[i] += 1;
                deg[j] += 1;
                edges += 1;
            }
        }
    }
    // 3 edges on 4 vertices: path, star, or triangle plus isolated vertex
    edges == 3 && deg.iter().all(|&d| d == 1 || d == 2)
}

/// True iff the five vertices induce a 5-cycle (2-regular on 5 vertices).
pub fn is_induced_c5(g: &Graph, q: [usize; 5]) -> bool {
    (0..5).all(|i| (0..5).filter(|&j| j != i && g.has_edge(q[i], q[j])).count() == 2)
}

/// Number of 4-vertex subsets inducing P₃.
///
/// Every induced P₃ `a-b-c-d` has a unique middle edge `bc`; for each edge we
/// count pairs `a ∈ N(b) \ N[c]`, `d ∈ N(c) \ N[b]` with `a ≁ d`.
pub fn count_induced_p3(g: &Graph) -> u64 {
    let n = g.n();
    let words = bits::words_for(n);
    let mut only_b = vec![0u64; words];
    let mut only_c = vec![0u64; words];
    let mut total = 0u64;
    for (b, c) in g.edges() {
        let (rb, rc) = (g.row(b), g.row(c));
        for w in 0..words {
            only_b[w] = rb[w] & !rc[w];
            only_c[w] = rc[w] & !rb[w];
        }
        bits::clear(&mut only_b, c);
        bits::clear(&mut only_c, b);
        let nb = bits::count(&only_b) as u64;
        let nc = bits::count(&only_c) as u64;
        if nb == 0 || nc == 0 {
            continue;
        }
        let adjacent: u64 = bits::ones(&only_b).map(|a| bits::and_count(g.row(a), &only_c) as u64).sum();
        total += nb * nc - adjacent;
    }
    total
}

/// Number of 5-vertex subsets inducing C₅, by subset enumeration.
/// Refused above [`EXACT_C5_BOUND`] vertices.
pub fn count_induced_c5(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n > EXACT_C5_BOUND {
        return Err(Error::ExactBoundExceeded {
            what: "exact induced-C5 count",
            n,
            bound: EXACT_C5_BOUND,
        });
    }
    let adj: Vec<u64> = (0..n).map(|v| g.row(v).first().copied().unwrap_or(0)).collect();
    let mut total = 0u64;
    // every vertex of an induced C5 has degree 2 inside it, so prune on >2
    let mut stack = [0usize; 5];
    fn rec(adj: &[u64], stack: &mut [usize; 5], depth: usize, start: usize, mask: u64, total: &mut u64) {
        let n = adj.len();
        if depth == 5 {
            if stack.iter().all(|&v| (adj[v] & mask).count_ones() == 2) {
                *total += 1;
            }
            return;
        }
        for v in start..n {
            let m = mask | (1u64 << v);
            if (adj[v] & m).count_ones() > 2 || stack[..depth].iter().any(|&u| (adj[u] & m).count_ones() > 2) {
                continue;
            }
            stack[depth] = v;
            rec(adj, stack, depth + 1, v + 1, m, total);
        }
    }
    rec(&adj, &mut stack, 0, 0, 0, &mut total);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{pairs, GraphBuilder};
    use proptest::prelude::*;

    fn permutations(k: usize) -> Vec<Vec<usize>> {
        fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == used.len() {
                out.push(cur.clone());
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    go(cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = vec![];
        go(&mut vec![], &mut vec![false; k], &mut out);
        out
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    /// Oracle: a subset induces `h` if some bijection maps h's edge set onto
    /// the subset's edge set exactly.
    fn naive_count(g: &Graph, h: &Graph, perms: &[Vec<usize>]) -> u64 {
        let k = h.n();
        subsets(g.n(), k)
            .into_iter()
            .filter(|s| {
                perms
                    .iter()
                    .any(|p| (0..k).all(|i| ((i + 1)..k).all(|j| h.has_edge(i, j) == g.has_edge(s[p[i]], s[p[j]]))))
            })
            .count() as u64
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(count_triangles(&Graph::complete(3)), 1);
        assert_eq!(count_triangles(&Graph::complete(4)), 4);
        assert_eq!(count_triangles(&Graph::cycle(5)), 0);
        assert_eq!(count_triangles(&Graph::complete(70)), 70 * 69 * 68 / 6);
    }

    #[test]
    fn p3_examples() {
        assert_eq!(count_induced_p3(&Graph::path(4)), 1);
        assert_eq!(count_induced_p3(&Graph::cycle(5)), 5);
        assert_eq!(count_induced_p3(&Graph::complete(4)), 0);
    }

    #[test]
    fn c5_examples() {
        assert_eq!(count_induced_c5(&Graph::cycle(5)).unwrap(), 1);
        assert_eq!(count_induced_c5(&Graph::complete(5)).unwrap(), 0);
        assert!(count_induced_c5(&Graph::empty(65)).is_err());
        assert_eq!(count_induced_c5(&Graph::empty(64)).unwrap(), 0);
    }

    #[test]
    fn exhaustive_agreement_up_to_six_vertices() {
        let p = Graph::path(4);
        let c = Graph::cycle(5);
        let p4 = permutations(4);
        let p5 = permutations(5);
        for n in 0..=6 {
            for mask in 0u64..(1u64 << pairs(n)) {
                let g = Graph::from_pair_mask(n, mask);
                assert_eq!(count_induced_p3(&g), naive_count(&g, &p, &p4), "{g:?}");
                assert_eq!(count_induced_c5(&g).unwrap(), naive_count(&g, &c, &p5), "{g:?}");
            }
        }
    }

    fn arb_graph(n: usize) -> impl Strategy<Value = Graph> {
        proptest::collection::vec(any::<bool>(), pairs(n)).prop_map(move |bits| {
            let mut b = GraphBuilder::new(n);
            let mut i = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if bits[i] {
                        b.add_edge(u, v);
                    }
                    i += 1;
                }
            }
            b.build()
        })
    }

    proptest! {
        #[test]
        fn triangle_count_drops_by_common_neighbours(g in arb_graph(20), pick in any::<prop::sample::Index>()) {
            let edges: Vec<_> = g.edges().collect();
            prop_assume!(!edges.is_empty());
            let (u, v) = edges[pick.index(edges.len())];
            let common = bits::and_count(g.row(u), g.row(v)) as u64;
            prop_assert_eq!(count_triangles(&g) - count_triangles(&g.toggled(u, v)), common);
        }

        #[test]
        fn p3_count_matches_quadruple_scan(g in arb_graph(11)) {
            let brute = subsets(g.n(), 4)
                .into_iter()
                .filter(|s| is_induced_p3(&g, [s[0], s[1], s[2], s[3]]))
                .count() as u64;
            prop_assert_eq!(count_induced_p3(&g), brute);
        }
    }
}
