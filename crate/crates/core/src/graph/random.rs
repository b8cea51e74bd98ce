use super::{pairs, Graph, GraphBuilder};
use crate::error::{invalid, Result};
use crate::rng::Stream;
use rand::seq::{index, SliceRandom};
use rand::Rng;

/// Uniform `d`-subset of `0..n`, without replacement, returned ascending.
pub fn sample_vertices(n: usize, d: usize, rng: &mut Stream) -> Result<Vec<usize>> {
    if d > n {
        return invalid(format!("sample size d = {d} exceeds n = {n}"));
    }
    let mut s = index::sample(rng, n, d).into_vec();
    s.sort_unstable();
    Ok(s)
}

/// The `i`-th pair of `0..n` in lexicographic order.
pub fn pair_from_index(n: usize, mut i: usize) -> (usize, usize) {
    let mut u = 0;
    loop {
        let row = n - 1 - u;
        if i < row {
            return (u, u + 1 + i);
        }
        i -= row;
        u += 1;
    }
}

pub fn gnp(n: usize, p: f64, rng: &mut Stream) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("edge probability {p} not in [0, 1]"));
    }
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                b.add_edge(u, v);
            }
        }
    }
    Ok(b.build())
}

/// Random cograph from a random cotree: the shuffled vertex list is split
/// recursively into two nonempty halves that are joined by disjoint union or
/// by join, each with probability ½.
pub fn random_cograph(n: usize, rng: &mut Stream) -> Result<Graph> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut b = GraphBuilder::new(n);
    let mut stack = vec![order];
    while let Some(vs) = stack.pop() {
        if vs.len() <= 1 {
            continue;
        }
        let cut = rng.gen_range(1..vs.len());
        let join = rng.gen_bool(0.5);
        let (left, right) = vs.split_at(cut);
        if join {
            for &u in left {
                for &v in right {
                    b.add_edge(u, v);
                }
            }
        }
        stack.push(right.to_vec());
        stack.push(left.to_vec());
    }
    Ok(b.build())
}

/// Toggles `k` distinct uniformly chosen pairs.
pub fn flip_pairs(g: &Graph, k: usize, rng: &mut Stream) -> Result<Graph> {
    let total = pairs(g.n());
    if k > total {
        return invalid(format!("cannot flip {k} pairs of a graph with {total} pairs"));
    }
    let mut b = GraphBuilder::from_graph(g);
    for i in index::sample(rng, total, k).into_iter() {
        let (u, v) = pair_from_index(g.n(), i);
        b.toggle(u, v);
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;

    #[test]
    fn sample_edge_cases() {
        let mut r = Seed(3).stream();
        assert!(sample_vertices(5, 0, &mut r).unwrap().is_empty());
        assert_eq!(sample_vertices(5, 5, &mut r).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(sample_vertices(5, 6, &mut r).is_err());
    }

    #[test]
    fn pairs_uniform_chi_square() {
        // 10 pairs, 1e5 draws; each frequency within 3 standard errors of 0.1
        let mut r = Seed(11).stream();
        let draws = 100_000;
        let mut counts = [0usize; 10];
        for _ in 0..draws {
            let s = sample_vertices(5, 2, &mut r).unwrap();
            let idx = (0..s[0]).map(|u| 4 - u).sum::<usize>() + (s[1] - s[0] - 1);
            counts[idx] += 1;
        }
        let se = (0.1f64 * 0.9 / draws as f64).sqrt();
        for c in counts {
            assert!((c as f64 / draws as f64 - 0.1).abs() < 3.0 * se, "{counts:?}");
        }
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - 10_000.0).powi(2) / 10_000.0).sum();
        // 9 degrees of freedom; 0.999 quantile is 27.88
        assert!(chi2 < 27.88, "chi2 = {chi2}");
    }

    #[test]
    fn pair_index_enumerates_lexicographically() {
        let n = 7;
        let got: Vec<_> = (0..pairs(n)).map(|i| pair_from_index(n, i)).collect();
        let want: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn gnp_extremes() {
        let mut r = Seed(0).stream();
        assert_eq!(gnp(9, 0.0, &mut r).unwrap(), Graph::empty(9));
        assert_eq!(gnp(9, 1.0, &mut r).unwrap(), Graph::complete(9));
        assert!(gnp(9, 1.5, &mut r).is_err());
    }

    #[test]
    fn flip_pairs_toggles_exactly_k() {
        let mut r = Seed(5).stream();
        let g = gnp(12, 0.5, &mut r).unwrap();
        let h = flip_pairs(&g, 17, &mut r).unwrap();
        let diff = (0..12)
            .flat_map(|u| ((u + 1)..12).map(move |v| (u, v)))
            .filter(|&(u, v)| g.has_edge(u, v) != h.has_edge(u, v))
            .count();
        assert_eq!(diff, 17);
        assert!(flip_pairs(&g, 67, &mut r).is_err());
    }
}
