//! Plain-text edge-list format.
//!
//! ```text
//! # comment
//! n m            (or: n m directed)
//! u v            m lines; undirected requires 0 <= u < v < n
//! ```

use super::{Digraph, Graph};
use crate::error::{Error, Result};

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse().or_else(|_| perr(line, format!("expected a non-negative integer, got {tok:?}")))
}

fn parse_pairs(text: &str, directed: bool) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut lines = content_lines(text);
    let Some((hl, header)) = lines.next() else {
        return perr(0, "missing header line");
    };
    let is_directed = match header.as_slice() {
        [_, _] => false,
        [_, _, "directed"] => true,
        _ => return perr(hl, "header must be `n m` or `n m directed`"),
    };
    if is_directed != directed {
        return perr(
            hl,
            if directed {
                "expected a directed header `n m directed`"
            } else {
                "expected an undirected header `n m`"
            },
        );
    }
    let n = parse_usize(hl, header[0])?;
    let m = parse_usize(hl, header[1])?;
    let mut seen = std::collections::HashSet::new();
    let mut pairs = Vec::with_capacity(m);
    for (ln, toks) in lines {
        if toks.len() != 2 {
            return perr(ln, "expected `u v`");
        }
        let u = parse_usize(ln, toks[0])?;
        let v = parse_usize(ln, toks[1])?;
        if u >= n || v >= n {
            return perr(ln, format!("vertex out of range 0..{n}"));
        }
        if u == v {
            return perr(ln, format!("self-loop at {u}"));
        }
        if !directed && u > v {
            return perr(ln, format!("edge ({u}, {v}) must be written with u < v"));
        }
        if !seen.insert((u, v)) {
            return perr(ln, format!("duplicate pair ({u}, {v})"));
        }
        pairs.push((u, v));
    }
    if pairs.len() != m {
        return perr(hl, format!("header declares {m} pairs, found {}", pairs.len()));
    }
    Ok((n, pairs))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let (n, edges) = parse_pairs(text, false)?;
    Graph::from_edges(n, &edges)
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let (n, arcs) = parse_pairs(text, true)?;
    Digraph::from_arcs(n, &arcs)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut s = format!("{} {} directed\n", d.n(), d.arc_count());
    for (u, v) in d.arcs() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}
