//! Randomized search for graphs with few induced P₃s that are still far
//! from every cograph: graphs without a β-cut, or at edit distance at least
//! `εn²` from the cographs. Results are empirical upper bounds on the least
//! achievable density.

use crate::decomposition::{distance_to_property, find_beta_cut, CutMode, CutSearch, Distance, DISTANCE_MAX_CAP, DISTANCE_MAX_N, EXACT_CUT_BOUND};
use crate::error::{Error, Result};
use crate::graph::{count_induced_p3, gnp, pair_from_index, pairs, Graph};
use crate::recognizers::Property;
use crate::rng::{Seed, Stream};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    /// No β-cut, certified by the exact scan.
    NoBetaCut { beta: f64 },
    /// At least `ceil(ε n²)` edits from a cograph, certified by the exact oracle.
    FarFromCograph { epsilon: f64 },
}

impl Constraint {
    /// The lower bound on induced-P₃ density the analysis guarantees.
    pub fn lower_bound(&self) -> f64 {
        match *self {
            Constraint::NoBetaCut { beta } => (beta / 100.0).powi(12),
            Constraint::FarFromCograph { epsilon } => (epsilon / 100.0).powi(16),
        }
    }

    fn needed_edits(&self, n: usize) -> usize {
        match *self {
            Constraint::NoBetaCut { .. } => 0,
            // tolerate float noise such as 2/64 * 64
            Constraint::FarFromCograph { epsilon } => (epsilon * (n * n) as f64 - 1e-9).ceil().max(0.0) as usize,
        }
    }

    fn check(&self, g: &Graph) -> Result<bool> {
        match *self {
            Constraint::NoBetaCut { beta } => {
                let mut unused = Seed(0).stream();
                Ok(matches!(find_beta_cut(g, beta, CutMode::Exact, &mut unused)?, CutSearch::NoCut))
            }
            Constraint::FarFromCograph { .. } => {
                let need = self.needed_edits(g.n());
                if need == 0 {
                    return Ok(true);
                }
                Ok(distance_to_property(g, &Property::Cograph, need - 1)? == Distance::AboveCap)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub constraint: Constraint,
    pub graph: Graph,
    pub p3_count: u64,
    /// `p3_count / n⁴`.
    pub p3_density: f64,
    /// The constraint was re-checked exactly on `graph`.
    pub certified: bool,
    pub lower_bound: f64,
    pub seed: Seed,
    pub effort: usize,
}

impl ExtremalRecord {
    fn build(g: Graph, constraint: Constraint, seed: Seed, effort: usize) -> ExtremalRecord {
        let n = g.n();
        let p3_count = count_induced_p3(&g);
        ExtremalRecord {
            n,
            constraint,
            p3_density: density(p3_count, n),
            p3_count,
            graph: g,
            certified: true,
            lower_bound: constraint.lower_bound(),
            seed,
            effort,
        }
    }

    /// Record for a given graph; fails if the constraint does not hold.
    pub fn certify(g: Graph, constraint: Constraint) -> Result<ExtremalRecord> {
        if !constraint.check(&g)? {
            return Err(Error::Unverified(format!("graph does not satisfy {constraint:?}")));
        }
        Ok(ExtremalRecord::build(g, constraint, Seed(0), 0))
    }

    pub fn bound_holds(&self) -> bool {
        self.p3_density >= self.lower_bound
    }

    /// Recomputes the count, density, bound and certificate from the graph.
    pub fn recheck(&mut self) -> Result<()> {
        self.n = self.graph.n();
        self.p3_count = count_induced_p3(&self.graph);
        self.p3_density = density(self.p3_count, self.n);
        self.lower_bound = self.constraint.lower_bound();
        self.certified = self.constraint.check(&self.graph)?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// Parses a record and recomputes every derived field.
    pub fn from_json(s: &str) -> Result<ExtremalRecord> {
        let mut r: ExtremalRecord = serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("bad record: {e}")))?;
        r.recheck()?;
        Ok(r)
    }
}

fn density(count: u64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        count as f64 / (n as f64).powi(4)
    }
}

/// One restart: find a feasible start, then toggle random pairs, keeping
/// improvements and (with probability ½) equal-count moves that stay feasible.
fn climb(n: usize, constraint: Constraint, restart: u64, seed: Seed) -> Result<Option<(u64, Graph)>> {
    let mut rng: Stream = seed.split(restart).stream();
    let mut starts: Vec<Graph> = vec![];
    if restart == 0 {
        starts.push(Graph::empty(n));
        if n >= 3 {
            starts.push(Graph::cycle(n));
        }
        starts.push(Graph::path(n));
    }
    for _ in 0..64 {
        starts.push(gnp(n, 0.5, &mut rng)?);
    }
    let mut current = None;
    for g in starts {
        if constraint.check(&g)? {
            current = Some(g);
            break;
        }
    }
    let Some(mut g) = current else { return Ok(None) };
    let mut count = count_induced_p3(&g);
    let total = pairs(n);
    if total == 0 {
        return Ok(Some((count, g)));
    }
    for _ in 0..4 * total {
        if count == 0 {
            break;
        }
        let (u, v) = pair_from_index(n, rng.gen_range(0..total));
        let h = g.toggled(u, v);
        let c = count_induced_p3(&h);
        let take = c < count || (c == count && rng.gen_bool(0.5));
        if take && constraint.check(&h)? {
            g = h;
            count = c;
        }
    }
    Ok(Some((count, g)))
}

fn search(n: usize, constraint: Constraint, effort: usize, seed: Seed) -> Result<ExtremalRecord> {
    if effort == 0 {
        return Err(Error::InvalidParameter("effort must be at least 1".into()));
    }
    let best = (0..effort as u64).into_par_iter().map(|r| climb(n, constraint, r, seed)).try_reduce(
        || None,
        |a, b| {
            // fewest P₃s, ties to the least adjacency encoding
            Ok(match (a, b) {
                (Some(x), Some(y)) => Some(if (x.0, x.1.adjacency_key()) <= (y.0, y.1.adjacency_key()) { x } else { y }),
                (x, None) | (None, x) => x,
            })
        },
    )?;
    match best {
        Some((_, g)) => Ok(ExtremalRecord::build(g, constraint, seed, effort)),
        None => Err(Error::Exhausted(format!(
            "no graph on {n} vertices satisfying {constraint:?} found in {effort} restarts"
        ))),
    }
}

/// Graph on `n ≤ 22` vertices with no β-cut and as few induced P₃s as the
/// search finds, over `effort` restarts.
pub fn search_min_p3_density(n: usize, beta: f64, effort: usize, seed: Seed) -> Result<ExtremalRecord> {
    if n > EXACT_CUT_BOUND {
        return Err(Error::ExactBoundExceeded {
            what: "certified extremal search",
            n,
            bound: EXACT_CUT_BOUND,
        });
    }
    if !(0.0..0.5).contains(&beta) {
        return Err(Error::InvalidParameter(format!("beta = {beta} outside [0, 0.5)")));
    }
    search(n, Constraint::NoBetaCut { beta }, effort, seed)
}

/// Graph on `n ≤ 10` vertices at distance at least `ceil(ε n²)` from every
/// cograph with as few induced P₃s as the search finds.
pub fn estimate_f(n: usize, epsilon: f64, effort: usize, seed: Seed) -> Result<ExtremalRecord> {
    if n > DISTANCE_MAX_N {
        return Err(Error::ExactBoundExceeded {
            what: "certified farness search",
            n,
            bound: DISTANCE_MAX_N,
        });
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} outside [0, 1]")));
    }
    let c = Constraint::FarFromCograph { epsilon };
    let need = c.needed_edits(n);
    if need > DISTANCE_MAX_CAP + 1 {
        return Err(Error::ExactBoundExceeded {
            what: "edit distance needed for certification",
            n: need,
            bound: DISTANCE_MAX_CAP + 1,
        });
    }
    search(n, c, effort, seed)
}
