use super::RecognitionResult;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default vertex bound for [`is_perfect`].
pub const PERFECT_BOUND: usize = 14;

/// An induced odd cycle of length at least five, in cycle order.
///
/// Depth-first search over chordless paths `s, p1, ..., pk` whose vertices
/// all exceed the start `s`; a vertex adjacent to `s` closes the cycle and
/// may not extend the path.
pub fn find_odd_hole(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];

    fn extend(g: &Graph, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
        let s = path[0];
        let last = *path.last().unwrap();
        let inner: Vec<usize> = if path.len() >= 2 { path[1..path.len() - 1].to_vec() } else { vec![] };
        let candidates: Vec<usize> = g.neighbors(last).filter(|&v| v > s && !on_path[v]).collect();
        for v in candidates {
            if inner.iter().any(|&p| g.has_edge(p, v)) {
                continue;
            }
            if path.len() >= 2 && g.has_edge(s, v) {
                let len = path.len() + 1;
                if len >= 5 && len % 2 == 1 {
                    path.push(v);
                    return true;
                }
                continue;
            }
            path.push(v);
            on_path[v] = true;
            if extend(g, path, on_path) {
                return true;
            }
            on_path[v] = false;
            path.pop();
        }
        false
    }

    for s in 0..n {
        path.clear();
        path.push(s);
        on_path[s] = true;
        if extend(g, &mut path, &mut on_path) {
            return Some(path);
        }
        on_path[s] = false;
    }
    None
}

/// Perfectness via odd holes and odd antiholes, for graphs on at most
/// [`PERFECT_BOUND`] vertices.
pub fn is_perfect(g: &Graph) -> Result<RecognitionResult> {
    is_perfect_with_bound(g, PERFECT_BOUND)
}

pub fn is_perfect_with_bound(g: &Graph, bound: usize) -> Result<RecognitionResult> {
    if g.n() > bound {
        return Err(Error::ExactBoundExceeded {
            what: "perfectness check",
            n: g.n(),
            bound,
        });
    }
    if let Some(h) = find_odd_hole(g) {
        return Ok(RecognitionResult::non_member(h));
    }
    if let Some(h) = find_odd_hole(&g.complement()) {
        return Ok(RecognitionResult::non_member(h));
    }
    Ok(RecognitionResult::member())
}
