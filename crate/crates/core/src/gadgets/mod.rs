//! Hard instances with machine-checkable certificates: 3-AP-free sets,
//! Ruzsa–Szemerédi graphs, the five-part C₅/comparability gadget and the
//! poset gadget.

mod ap;

pub use ap::{ap3_free_set, find_progression, ApFreeSet, ApMode, BEHREND_BOUND, EXACT_AP_BOUND};

use crate::error::{Error, Result};
use crate::graph::sample_vertices;
use crate::graph::{count_induced_c5, count_triangles, is_induced_c5, Digraph, Graph, GraphBuilder, Part, PartLabeling, PartName};
use crate::packing::{farness_lower_bound, greedy_c5_packing, triangle_packing, PackMode, PackingKind, WitnessPacking, EXACT_PACKING_MAX_N};
use crate::recognizers::{check_order_transitivity, is_comparability, is_poset, is_triangle_free};
use crate::rng::Seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub seed: Option<u64>,
}

impl Provenance {
    fn new(construction: &str) -> Provenance {
        Provenance {
            construction: construction.into(),
            params: BTreeMap::new(),
            seed: None,
        }
    }

    fn with(mut self, key: &str, value: impl Serialize) -> Provenance {
        self.params.insert(key.into(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }
}

/// A constructed instance with its labeling, a verified witness packing and
/// the farness lower bound `|certificate| / n²` it certifies.
///
/// For the poset gadget (`G = Digraph`) the certificate lives in the
/// underlying tripartite graph `T`, which shares the vertex set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetBundle<G = Graph> {
    pub graph: G,
    pub labeling: PartLabeling,
    pub certificate: WitnessPacking,
    pub farness: f64,
    pub provenance: Provenance,
}

/// Ruzsa–Szemerédi graph on `X ∪ Y ∪ Z` with `|X| = k`, `|Y| = 2k`,
/// `|Z| = 3k`: for each `x ∈ 1..=k` and `a ∈ S` the triangle
/// `X_x, Y_{x+a}, Z_{x+2a}`. These `k·|S|` triangles are edge-disjoint and,
/// because `S` has no 3-term progression, they are the only triangles.
///
/// Vertex indices: `X_x = x-1`, `Y_y = k+y-1`, `Z_z = 3k+z-1`.
pub fn rs_graph(k: usize, s: &ApFreeSet) -> Result<GadgetBundle> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    // re-check: the set type guarantees it, but bundles may be deserialized
    if let Some((a, b, c)) = find_progression(s.elements()) {
        return Err(Error::Precondition(format!("{a}, {b}, {c} is an arithmetic progression")));
    }
    if let Some(&bad) = s.elements().iter().find(|&&a| a == 0 || a > k) {
        return Err(Error::Precondition(format!("element {bad} of S outside 1..={k}")));
    }
    let n = k.checked_mul(6).ok_or_else(|| Error::InvalidParameter("index overflow".into()))?;
    let xi = |x: usize| x - 1;
    let yi = |y: usize| k + y - 1;
    let zi = |z: usize| 3 * k + z - 1;
    let mut b = GraphBuilder::new(n);
    let mut planted = vec![];
    for x in 1..=k {
        for &a in s.elements() {
            let (u, v, w) = (xi(x), yi(x + a), zi(x + 2 * a));
            b.add_edge(u, v);
            b.add_edge(v, w);
            b.add_edge(u, w);
            planted.push(vec![u, v, w]);
        }
    }
    let g = b.build();
    let t = planted.len();
    let certificate = WitnessPacking::new(PackingKind::Triangle, planted, n).verified_in(&g)?;
    let found = count_triangles(&g);
    if found != t as u64 {
        return Err(Error::Unverified(format!("expected exactly {t} triangles, found {found}")));
    }
    let labeling = PartLabeling::new(
        n,
        vec![
            Part {
                name: PartName::X,
                vertices: (0..k).collect(),
            },
            Part {
                name: PartName::Y,
                vertices: (k..3 * k).collect(),
            },
            Part {
                name: PartName::Z,
                vertices: (3 * k..6 * k).collect(),
            },
        ],
        false,
    )?;
    let farness = farness_lower_bound(&certificate, n)?;
    Ok(GadgetBundle {
        graph: g,
        labeling,
        certificate,
        farness,
        provenance: Provenance::new("rs").with("k", k).with("S", s.elements()),
    })
}

fn check_tripartite(g: &Graph, labeling: &PartLabeling, names: [PartName; 3]) -> Result<()> {
    if labeling.n() != g.n() {
        return Err(Error::Labeling(format!("labeling covers {} vertices, graph has {}", labeling.n(), g.n())));
    }
    let mut got = labeling.names();
    got.sort();
    let mut want = names.to_vec();
    want.sort();
    if got != want {
        return Err(Error::Labeling(format!("expected parts {want:?}, got {got:?}")));
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| labeling.position(u) == labeling.position(v)) {
        return Err(Error::Precondition(format!(
            "not tripartite under the labeling: edge ({u}, {v}) inside part {}",
            labeling.name_of(u)
        )));
    }
    Ok(())
}

fn default_packing(f: &Graph) -> Result<WitnessPacking> {
    if f.n() <= EXACT_PACKING_MAX_N {
        if let Ok(p) = triangle_packing(f, PackMode::Exact, None) {
            return Ok(p);
        }
    }
    triangle_packing(f, PackMode::Greedy, None)
}

/// Five-part gadget on `5n` vertices built from a tripartite `F` with parts
/// `V2, V3, V5`: `V1`, `V4` are new parts of size `2n`; every part is
/// independent; `V1–V4`, `V1–V5`, `V2–V4` are complete; `V1–V2`, `V1–V3`,
/// `V3–V4`, `V4–V5` are empty; `V2–V3` and `V3–V5` copy `F`; `V2–V5` is the
/// bipartite complement of `F`. Each triangle of `F` plus one vertex of `V1`
/// and one of `V4` induces a C₅.
///
/// Layout: `V1 = 0..2n`, `V4 = 2n..4n`, `F`'s vertex `i` at `4n + i`. The
/// labeling lists parts in the order `V1..V5`.
pub fn build_c5_gadget(f: &Graph, labeling: &PartLabeling, planted: Option<WitnessPacking>) -> Result<GadgetBundle> {
    use PartName::*;
    check_tripartite(f, labeling, [V2, V3, V5])?;
    let n = f.n();
    if n == 0 {
        return Err(Error::InvalidParameter("F must have at least one vertex".into()));
    }
    let planted = match planted {
        Some(mut p) => {
            p.verify(f)?;
            p
        }
        None => default_packing(f)?,
    };
    let total = 5 * n;
    let off = 4 * n;
    let v1: Vec<usize> = (0..2 * n).collect();
    let v4: Vec<usize> = (2 * n..4 * n).collect();
    let lift = |name| labeling.vertices(name).iter().map(|&v| v + off).collect::<Vec<_>>();
    let (v2, v3, v5) = (lift(V2), lift(V3), lift(V5));
    let mut b = GraphBuilder::new(total);
    for (xs, ys) in [(&v1, &v4), (&v1, &v5), (&v2, &v4)] {
        for &x in xs {
            for &y in ys {
                b.add_edge(x, y);
            }
        }
    }
    for (xs, ys, copy) in [(&v2, &v3, true), (&v3, &v5, true), (&v2, &v5, false)] {
        for &x in xs {
            for &y in ys {
                if f.has_edge(x - off, y - off) == copy {
                    b.add_edge(x, y);
                }
            }
        }
    }
    let g = b.build();
    let part = |name, vertices: Vec<usize>| Part { name, vertices };
    let gl = PartLabeling::new(total, vec![part(V1, v1), part(V2, v2), part(V3, v3), part(V4, v4), part(V5, v5)], true)?;
    let certificate = greedy_c5_packing(&g, &gl, &planted)?;
    let farness = farness_lower_bound(&certificate, total)?;
    Ok(GadgetBundle {
        graph: g,
        labeling: gl,
        certificate,
        farness,
        provenance: Provenance::new("c5-gadget").with("f_n", n).with("planted", planted.len()),
    })
}

/// Re-checks the between-part rules of a C₅ gadget against `F`.
pub fn audit_c5_gadget(bundle: &GadgetBundle, f: &Graph) -> Result<()> {
    use PartName::*;
    let g = &bundle.graph;
    let l = &bundle.labeling;
    let n = f.n();
    if g.n() != 5 * n {
        return Err(Error::Unverified(format!("gadget has {} vertices, expected {}", g.n(), 5 * n)));
    }
    let off = 4 * n;
    #[derive(Clone, Copy)]
    enum Rule {
        Empty,
        Complete,
        CopyF,
        ComplementF,
    }
    let order = [V1, V2, V3, V4, V5];
    let rule = |a: PartName, b: PartName| -> Rule {
        let key = |p: PartName| order.iter().position(|&q| q == p).unwrap();
        let (a, b) = if key(a) <= key(b) { (a, b) } else { (b, a) };
        match (a, b) {
            (V1, V4) | (V1, V5) | (V2, V4) => Rule::Complete,
            (V2, V3) | (V3, V5) => Rule::CopyF,
            (V2, V5) => Rule::ComplementF,
            _ => Rule::Empty,
        }
    };
    for u in 0..g.n() {
        for v in (u + 1)..g.n() {
            let (pu, pv) = (l.name_of(u), l.name_of(v));
            let want = match rule(pu, pv) {
                Rule::Empty => false,
                Rule::Complete => pu != pv,
                Rule::CopyF => f.has_edge(u - off, v - off),
                Rule::ComplementF => !f.has_edge(u - off, v - off),
            };
            if g.has_edge(u, v) != want {
                return Err(Error::Unverified(format!("pair ({u}, {v}) between {pu} and {pv} breaks the gadget rule")));
            }
        }
    }
    let mut cert = bundle.certificate.clone();
    cert.verify(g)?;
    Ok(())
}

/// Induced C₅ counts of a small gadget: all copies, and those with exactly
/// one vertex in each of the five parts (the shape of the planted copies).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct C5Census {
    pub total: u64,
    pub one_per_part: u64,
}

pub fn c5_census(bundle: &GadgetBundle) -> Result<C5Census> {
    let total = count_induced_c5(&bundle.graph)?;
    let p = |name| bundle.labeling.vertices(name);
    use PartName::*;
    let mut one_per_part = 0;
    for &a in p(V1) {
        for &b in p(V2) {
            for &c in p(V3) {
                for &d in p(V4) {
                    for &e in p(V5) {
                        if is_induced_c5(&bundle.graph, [a, b, c, d, e]) {
                            one_per_part += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(C5Census { total, one_per_part })
}

/// Poset gadget on the vertex set of a tripartite `T` with parts
/// `V1, V2, V3`: arcs `v1→v2` and `v2→v3` for edges of `T`, arcs `v1→v3`
/// for non-edges of `T`, nothing else. A length-two path `v1→v2→v3` lacks
/// its shortcut exactly when `v1 v2 v3` is a triangle of `T`.
pub fn build_poset_gadget(t: &Graph, labeling: &PartLabeling, planted: Option<WitnessPacking>) -> Result<GadgetBundle<Digraph>> {
    use PartName::*;
    check_tripartite(t, labeling, [V1, V2, V3])?;
    let planted = match planted {
        Some(mut p) => {
            p.verify(t)?;
            p
        }
        None => default_packing(t)?,
    };
    let (p1, p2, p3) = (labeling.vertices(V1), labeling.vertices(V2), labeling.vertices(V3));
    let mut arcs = vec![];
    for &a in p1 {
        for &b in p2 {
            if t.has_edge(a, b) {
                arcs.push((a, b));
            }
        }
        for &c in p3 {
            if !t.has_edge(a, c) {
                arcs.push((a, c));
            }
        }
    }
    for &b in p2 {
        for &c in p3 {
            if t.has_edge(b, c) {
                arcs.push((b, c));
            }
        }
    }
    let d = Digraph::from_arcs(t.n(), &arcs)?;
    let farness = farness_lower_bound(&planted, t.n())?;
    // list the parts in V1, V2, V3 order
    let ordered = PartLabeling::new(
        t.n(),
        [V1, V2, V3]
            .iter()
            .map(|&name| Part {
                name,
                vertices: labeling.vertices(name).to_vec(),
            })
            .collect(),
        true,
    )?;
    Ok(GadgetBundle {
        graph: d,
        labeling: ordered,
        certificate: planted,
        farness,
        provenance: Provenance::new("poset-gadget").with("t_n", t.n()),
    })
}

/// Outcome of sampling a gadget the way a tester would.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleAudit {
    pub samples: u64,
    /// Samples whose portion in the source graph (`F` or `T`) has no triangle.
    pub portion_triangle_free: u64,
    /// Triangle-free-portion samples that passed the membership checks.
    pub passed: u64,
    /// Samples contradicting the expected rule, in draw order.
    pub exceptions: Vec<Vec<usize>>,
}

fn audit_samples<F>(n: usize, d: usize, samples: u64, seed: Seed, judge: F) -> Result<SampleAudit>
where
    F: Fn(&[usize]) -> Result<(bool, bool, bool)> + Sync,
{
    // judge returns (portion triangle-free, passed, exception)
    let outcomes: Vec<(Vec<usize>, (bool, bool, bool))> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_vertices(n, d, &mut seed.split(i).stream())?;
            let r = judge(&s)?;
            Ok((s, r))
        })
        .collect::<Result<_>>()?;
    let mut audit = SampleAudit {
        samples,
        ..SampleAudit::default()
    };
    for (s, (free, passed, exception)) in outcomes {
        audit.portion_triangle_free += free as u64;
        audit.passed += (free && passed) as u64;
        if exception {
            audit.exceptions.push(s);
        }
    }
    Ok(audit)
}

/// Uniform `d`-samples of a C₅ gadget built from `f`: every sample whose
/// `F`-portion is triangle-free must be ordered transitively by the part
/// order and be a comparability graph.
pub fn c5_sample_audit(bundle: &GadgetBundle, f: &Graph, d: usize, samples: u64, seed: Seed) -> Result<SampleAudit> {
    let g = &bundle.graph;
    let off = 4 * f.n();
    audit_samples(g.n(), d, samples, seed, |s| {
        let portion: Vec<usize> = s.iter().filter(|&&v| v >= off).map(|&v| v - off).collect();
        if !is_triangle_free(&f.induced_subgraph(&portion)?).member {
            return Ok((false, false, false));
        }
        let sub = g.induced_subgraph(s)?;
        let ordered = check_order_transitivity(&sub, &bundle.labeling.restrict(s)?)?.member;
        let ok = ordered && is_comparability(&sub).member;
        Ok((true, ok, !ok))
    })
}

/// Uniform `d`-samples of a poset gadget built from `t`: the sample is a
/// poset exactly when its `T`-portion is triangle-free.
pub fn poset_sample_audit(bundle: &GadgetBundle<Digraph>, t: &Graph, d: usize, samples: u64, seed: Seed) -> Result<SampleAudit> {
    audit_samples(t.n(), d, samples, seed, |s| {
        let free = is_triangle_free(&t.induced_subgraph(s)?).member;
        let poset = is_poset(&bundle.graph.induced_subgraph(s)?).member;
        Ok((free, poset, free != poset))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_induced_p3;
    use crate::packing::triangles;
    use crate::recognizers::is_induced_h_free;

    fn labeled(n: usize, parts: &[(PartName, &[usize])]) -> PartLabeling {
        PartLabeling::new(n, parts.iter().map(|&(name, v)| Part { name, vertices: v.to_vec() }).collect(), true).unwrap()
    }

    fn single_triangle() -> (Graph, PartLabeling) {
        use PartName::*;
        (Graph::complete(3), labeled(3, &[(V2, &[0]), (V3, &[1]), (V5, &[2])]))
    }

    #[test]
    fn rs_examples() {
        let s = ApFreeSet::new(5, vec![1, 2, 4]).unwrap();
        let b = rs_graph(5, &s).unwrap();
        assert_eq!(b.graph.n(), 30);
        assert_eq!(b.graph.m(), 45);
        assert_eq!(count_triangles(&b.graph), 15);
        // brute-force enumeration equals the planted list
        let mut planted: Vec<Vec<usize>> = b.certificate.tuples.clone();
        planted.iter_mut().for_each(|t| t.sort_unstable());
        planted.sort();
        let found: Vec<Vec<usize>> = triangles(&b.graph).into_iter().map(|t| t.to_vec()).collect();
        assert_eq!(found, planted);
        assert_eq!(b.farness, 15.0 / 900.0);

        let one = rs_graph(1, &ApFreeSet::new(1, vec![1]).unwrap()).unwrap();
        assert_eq!(count_triangles(&one.graph), 1);
        assert!(rs_graph(2, &ApFreeSet::new(5, vec![1, 4]).unwrap()).is_err());
    }

    #[test]
    fn rs_is_triangle_free_witness_is_planted() {
        let b = rs_graph(5, &ApFreeSet::new(5, vec![1, 2, 4]).unwrap()).unwrap();
        let w = is_triangle_free(&b.graph).witness_set().unwrap();
        assert!(b.certificate.tuples.iter().any(|t| {
            let mut t = t.clone();
            t.sort_unstable();
            t == w
        }));
    }

    #[test]
    fn c5_gadget_single_triangle() {
        let (f, l) = single_triangle();
        let b = build_c5_gadget(&f, &l, None).unwrap();
        assert_eq!(b.graph.n(), 15);
        assert_eq!(b.certificate.len(), 1);
        let t = &b.certificate.tuples[0];
        assert_eq!(t, &vec![12, 13, 14, 0, 6]);
        assert!(is_induced_c5(&b.graph, [12, 13, 14, 0, 6]));
        audit_c5_gadget(&b, &f).unwrap();
        assert_eq!(b.farness, 1.0 / 225.0);

        let r = is_induced_h_free(&b.graph, &Graph::cycle(5)).unwrap();
        let w = r.witness_set().unwrap();
        assert_eq!(w.iter().filter(|&&v| v >= 12).count(), 3);
        assert_eq!(w.iter().filter(|&&v| v < 6).count(), 1);
        assert_eq!(w.iter().filter(|&&v| (6..12).contains(&v)).count(), 1);

        // subset enumeration oracle: every (v1, v4) pair completes the triangle
        let census = c5_census(&b).unwrap();
        assert_eq!(census.one_per_part, 36);
        assert!(census.total >= 36);
    }

    #[test]
    fn c5_gadget_rejects_non_tripartite() {
        use PartName::*;
        let f = Graph::complete(3);
        let l = labeled(3, &[(V2, &[0, 1]), (V3, &[]), (V5, &[2])]);
        assert!(matches!(build_c5_gadget(&f, &l, None), Err(Error::Precondition(_))));
        let l = labeled(3, &[(V1, &[0]), (V3, &[1]), (V5, &[2])]);
        assert!(build_c5_gadget(&f, &l, None).is_err());
    }

    #[test]
    fn c5_gadget_from_rs_graph() {
        use PartName::*;
        let rs = rs_graph(6, &ap3_free_set(6, ApMode::Exact).unwrap()).unwrap();
        let l = rs.labeling.renamed(&[(X, V2), (Y, V3), (Z, V5)]).unwrap();
        let b = build_c5_gadget(&rs.graph, &l, Some(rs.certificate.clone())).unwrap();
        assert_eq!(b.certificate.len(), rs.certificate.len());
        audit_c5_gadget(&b, &rs.graph).unwrap();
        // the order V1 < ... < V5 is transitive except on planted triangles
        let r = check_order_transitivity(&b.graph, &b.labeling).unwrap();
        let [a, m, c] = r.witness.unwrap()[..] else { panic!() };
        assert_eq!((b.labeling.name_of(a), b.labeling.name_of(m), b.labeling.name_of(c)), (V2, V3, V5));
    }

    #[test]
    fn c5_gadget_triangle_free_f_has_only_incidental_copies_counted() {
        use PartName::*;
        // path-like tripartite F without triangles
        let f = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let l = labeled(4, &[(V2, &[0, 3]), (V3, &[1]), (V5, &[2])]);
        let b = build_c5_gadget(&f, &l, None).unwrap();
        assert!(b.certificate.is_empty());
        assert_eq!(b.farness, 0.0);
        let census = c5_census(&b).unwrap();
        assert_eq!(census.one_per_part, 0);
        assert!(check_order_transitivity(&b.graph, &b.labeling).unwrap().member);
    }

    #[test]
    fn poset_gadget_examples() {
        use PartName::*;
        let l = labeled(3, &[(V1, &[0]), (V2, &[1]), (V3, &[2])]);
        let b = build_poset_gadget(&Graph::complete(3), &l, None).unwrap();
        assert!(b.graph.has_arc(0, 1) && b.graph.has_arc(1, 2) && !b.graph.has_arc(0, 2));
        assert!(!is_poset(&b.graph).member);
        assert_eq!(b.certificate.len(), 1);

        let t = Graph::from_edges(3, &[(0, 2)]).unwrap();
        let b = build_poset_gadget(&t, &l, None).unwrap();
        assert_eq!(b.graph.arc_count(), 0);
        assert!(is_poset(&b.graph).member);

        let t = Graph::empty(3);
        let b = build_poset_gadget(&t, &l, None).unwrap();
        assert_eq!(b.graph.arcs().collect::<Vec<_>>(), vec![(0, 2)]);
        assert!(is_poset(&b.graph).member);
    }

    #[test]
    fn p3_helper_consistency() {
        assert!(is_induced_p3(&Graph::path(4), [0, 1, 2, 3]));
    }

    #[test]
    fn sample_audits() {
        use PartName::*;
        let rs = rs_graph(6, &ap3_free_set(6, ApMode::Exact).unwrap()).unwrap();
        let l = rs.labeling.renamed(&[(X, V2), (Y, V3), (Z, V5)]).unwrap();
        let b = build_c5_gadget(&rs.graph, &l, Some(rs.certificate.clone())).unwrap();
        let a = c5_sample_audit(&b, &rs.graph, 15, 300, Seed(1)).unwrap();
        assert!(a.exceptions.is_empty());
        assert_eq!(a.passed, a.portion_triangle_free);
        assert!(a.portion_triangle_free > 0);

        let l = rs.labeling.renamed(&[(X, V1), (Y, V2), (Z, V3)]).unwrap();
        let p = build_poset_gadget(&rs.graph, &l, Some(rs.certificate.clone())).unwrap();
        let a = poset_sample_audit(&p, &rs.graph, 20, 300, Seed(2)).unwrap();
        assert!(a.exceptions.is_empty());
        assert!(a.portion_triangle_free > 0 && a.portion_triangle_free < 300);
    }
}
