use super::RecognitionResult;
use crate::graph::{bits, is_induced_p3, Graph};

/// Components of `g[set]` (or of its complement), each as a sorted vertex
/// list, ordered by least vertex.
pub(crate) fn components(g: &Graph, set: &[u64], in_complement: bool) -> Vec<Vec<usize>> {
    let mut left = set.to_vec();
    let mut out = vec![];
    while let Some(start) = bits::first(&left) {
        bits::clear(&mut left, start);
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            let row = g.row(v);
            let next: Vec<usize> = if in_complement {
                bits::ones(&left).filter(|&u| !bits::test(row, u)).collect()
            } else {
                bits::ones(&left).filter(|&u| bits::test(row, u)).collect()
            };
            for u in next {
                bits::clear(&mut left, u);
                comp.push(u);
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Cograph recognition by recursive decomposition: a subgraph on at most
/// one vertex is fine; otherwise split into the components of the subgraph
/// or, failing that, of its complement. A subgraph where neither splits
/// contains an induced P₃, found by scanning its quadruples in index order.
pub fn is_cograph(g: &Graph) -> RecognitionResult {
    let mut stack = vec![(0..g.n()).collect::<Vec<_>>()];
    while let Some(vs) = stack.pop() {
        if vs.len() <= 1 {
            continue;
        }
        let set = bits::from_indices(g.n(), &vs);
        let mut comps = components(g, &set, false);
        if comps.len() == 1 {
            comps = components(g, &set, true);
        }
        if comps.len() == 1 {
            let w = first_p3(g, &vs).expect("a graph with connected complement and at least two vertices contains an induced P3");
            return RecognitionResult::non_member(w.to_vec());
        }
        stack.extend(comps.into_iter().rev());
    }
    RecognitionResult::member()
}

fn first_p3(g: &Graph, vs: &[usize]) -> Option<[usize; 4]> {
    let k = vs.len();
    for a in 0..k {
        for b in (a + 1)..k {
            for c in (b + 1)..k {
                for d in (c + 1)..k {
                    let q = [vs[a], vs[b], vs[c], vs[d]];
                    if is_induced_p3(g, q) {
                        return Some(q);
                    }
                }
            }
        }
    }
    None
}
