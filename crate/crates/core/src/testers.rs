//! One-sided sampling testers and the Monte-Carlo harness around them.

use crate::error::{Error, Result};
use crate::graph::{count_triangles, is_induced_p3, sample_vertices, Graph};
use crate::recognizers::{Property, RecognitionResult};
use crate::rng::{Seed, Stream};
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// 97.5% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Budgets larger than this are not run.
pub const DESK_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Accept,
    /// The sampled vertices (original indices) that exposed the violation.
    Reject {
        witness: Vec<usize>,
    },
}

impl Verdict {
    pub fn is_reject(&self) -> bool {
        matches!(self, Verdict::Reject { .. })
    }
}

/// Samples `d` vertices and accepts iff the induced subgraph passes `recognize`.
pub fn universal_tester_with<F>(g: &Graph, d: usize, recognize: F, rng: &mut Stream) -> Result<Verdict>
where
    F: Fn(&Graph) -> Result<RecognitionResult>,
{
    let s = sample_vertices(g.n(), d, rng)?;
    let sub = g.induced_subgraph(&s)?;
    Ok(if recognize(&sub)?.member {
        Verdict::Accept
    } else {
        Verdict::Reject { witness: s }
    })
}

pub fn universal_tester(g: &Graph, d: usize, property: &Property, rng: &mut Stream) -> Result<Verdict> {
    universal_tester_with(g, d, |h| property.recognize(h), rng)
}

/// `t` independent uniform triples; rejects on the first triangle.
pub fn triangle_tester(g: &Graph, t: usize, rng: &mut Stream) -> Result<Verdict> {
    if g.n() < 3 {
        return Err(Error::Precondition(format!("triangle tester needs n >= 3, got {}", g.n())));
    }
    for _ in 0..t {
        let s = sample_vertices(g.n(), 3, rng)?;
        if g.has_edge(s[0], s[1]) && g.has_edge(s[1], s[2]) && g.has_edge(s[0], s[2]) {
            return Ok(Verdict::Reject { witness: s });
        }
    }
    Ok(Verdict::Accept)
}

/// `t` independent uniform 4-subsets; rejects on the first induced P₃.
pub fn induced_p3_tester(g: &Graph, t: usize, rng: &mut Stream) -> Result<Verdict> {
    if g.n() < 4 {
        return Err(Error::Precondition(format!("induced P3 tester needs n >= 4, got {}", g.n())));
    }
    for _ in 0..t {
        let s = sample_vertices(g.n(), 4, rng)?;
        if is_induced_p3(g, [s[0], s[1], s[2], s[3]]) {
            return Ok(Verdict::Reject { witness: s });
        }
    }
    Ok(Verdict::Accept)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TesterKind {
    Universal { d: usize, property: Property },
    TripleDensity { t: usize },
    QuadrupleDensity { t: usize },
}

impl TesterKind {
    /// Pair queries per run: `C(d,2)`, `3t` or `6t`.
    pub fn queries_per_trial(&self) -> u64 {
        match self {
            TesterKind::Universal { d, .. } => (*d as u64) * (*d as u64).saturating_sub(1) / 2,
            TesterKind::TripleDensity { t } => 3 * *t as u64,
            TesterKind::QuadrupleDensity { t } => 6 * *t as u64,
        }
    }

    pub fn budget(&self) -> usize {
        match self {
            TesterKind::Universal { d, .. } => *d,
            TesterKind::TripleDensity { t } | TesterKind::QuadrupleDensity { t } => *t,
        }
    }

    pub fn with_budget(&self, b: usize) -> TesterKind {
        match self {
            TesterKind::Universal { property, .. } => TesterKind::Universal {
                d: b,
                property: property.clone(),
            },
            TesterKind::TripleDensity { .. } => TesterKind::TripleDensity { t: b },
            TesterKind::QuadrupleDensity { .. } => TesterKind::QuadrupleDensity { t: b },
        }
    }

    pub fn run(&self, g: &Graph, rng: &mut Stream) -> Result<Verdict> {
        match self {
            TesterKind::Universal { d, property } => universal_tester(g, *d, property, rng),
            TesterKind::TripleDensity { t } => triangle_tester(g, *t, rng),
            TesterKind::QuadrupleDensity { t } => induced_p3_tester(g, *t, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TesterConfig {
    pub kind: TesterKind,
    /// Largest `d` or `t` a budget search may try.
    pub budget_cap: usize,
    pub seed: Seed,
}

impl TesterConfig {
    pub fn new(kind: TesterKind, seed: Seed) -> TesterConfig {
        TesterConfig { kind, budget_cap: 4096, seed }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.budget_cap == 0 {
            return Err(Error::InvalidParameter("budget cap must be positive".into()));
        }
        match &self.kind {
            TesterKind::Universal { d, .. } if *d > n => Err(Error::InvalidParameter(format!("d = {d} exceeds n = {n}"))),
            TesterKind::TripleDensity { t: 0 } | TesterKind::QuadrupleDensity { t: 0 } => Err(Error::InvalidParameter("t must be at least 1".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TesterReport {
    pub config: TesterConfig,
    pub trials: u64,
    pub rejections: u64,
    pub rejection_rate: f64,
    pub wilson95: (f64, f64),
    pub queries_per_trial: u64,
}

/// Wilson score interval at 95% for `k` successes in `n` trials.
pub fn wilson95(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // clamp so the interval always contains p despite rounding
    ((centre - half).clamp(0.0, 1.0).min(p), (centre + half).clamp(0.0, 1.0).max(p))
}

/// Runs the configured tester `trials` times. Trial `i` draws from
/// `config.seed.split(i)`, so the report does not depend on the thread count.
pub fn estimate_detection(g: &Graph, config: &TesterConfig, trials: u64) -> Result<TesterReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    config.validate(g.n())?;
    let rejections = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = config.seed.split(i).stream();
            config.kind.run(g, &mut rng).map(|v| v.is_reject() as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(TesterReport {
        config: config.clone(),
        trials,
        rejections,
        rejection_rate: rejections as f64 / trials as f64,
        wilson95: wilson95(rejections, trials),
        queries_per_trial: config.kind.queries_per_trial(),
    })
}

/// `δ = T / n³` for a graph with `T` triangles.
pub fn triangle_delta(g: &Graph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    count_triangles(g) as f64 / (g.n() as f64).powi(3)
}

/// Smallest sample size `d` with `δ·d³ ≥ 1/3`, i.e. `(3δ)^(-1/3)`.
pub fn analytic_floor(delta: f64) -> Option<f64> {
    (delta > 0.0).then(|| (3.0 * delta).powf(-1.0 / 3.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub budget: usize,
    pub rejection_rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetSearch {
    /// Least budget whose lower Wilson bound reaches the target, if within the cap.
    pub budget: Option<usize>,
    pub cap_exceeded: bool,
    pub analytic_floor: Option<f64>,
    /// Every budget evaluated, ascending.
    pub curve: Vec<CurvePoint>,
}

/// Doubling, then binary search, for the least `d` (or `t`) whose measured
/// rejection rate reaches `target` with its lower Wilson bound. Each budget
/// is evaluated on the same per-trial substreams.
pub fn min_budget_for_detection(g: &Graph, config: &TesterConfig, target: f64, trials: u64, delta: Option<f64>) -> Result<BudgetSearch> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!("target {target} outside (0, 1)")));
    }
    let cap = match config.kind {
        TesterKind::Universal { .. } => config.budget_cap.min(g.n()),
        _ => config.budget_cap,
    };
    if cap == 0 {
        return Err(Error::InvalidParameter("nothing to search: budget cap is 0".into()));
    }
    let mut curve: Vec<CurvePoint> = vec![];
    let mut eval = |b: usize| -> Result<bool> {
        let cfg = TesterConfig {
            kind: config.kind.with_budget(b),
            ..config.clone()
        };
        let r = estimate_detection(g, &cfg, trials)?;
        curve.push(CurvePoint {
            budget: b,
            rejection_rate: r.rejection_rate,
            wilson_lo: r.wilson95.0,
            wilson_hi: r.wilson95.1,
        });
        Ok(r.wilson95.0 >= target)
    };
    let mut lo = 0; // largest budget known to fail
    let mut hi = 1;
    loop {
        if eval(hi)? {
            break;
        }
        lo = hi;
        if hi == cap {
            curve.sort_by_key(|p| p.budget);
            return Ok(BudgetSearch {
                budget: None,
                cap_exceeded: true,
                analytic_floor: delta.and_then(analytic_floor),
                curve,
            });
        }
        hi = (hi * 2).min(cap);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if eval(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    curve.sort_by_key(|p| p.budget);
    Ok(BudgetSearch {
        budget: Some(hi),
        cap_exceeded: false,
        analytic_floor: delta.and_then(analytic_floor),
        curve,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticCounts {
    /// `⌈2·(100/ε)^16⌉` quadruples for the induced P₃ tester.
    #[serde(serialize_with = "as_decimal")]
    pub p3_t: BigUint,
    pub exceeds_desk_budget: bool,
    pub triangle_note: &'static str,
}

fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// The sample counts the analysis prescribes for proximity `ε ∈ (0, 1]`.
pub fn analytic_sample_counts(epsilon: Ratio<u64>) -> Result<AnalyticCounts> {
    if epsilon.is_zero() || epsilon > Ratio::one() {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0, 1]")));
    }
    let inv = Ratio::new(BigUint::from(100u32) * epsilon.denom(), BigUint::from(*epsilon.numer()));
    let t = (inv.pow(16) * BigUint::from(2u32)).ceil().to_integer();
    Ok(AnalyticCounts {
        exceeds_desk_budget: t > BigUint::from(DESK_BUDGET),
        p3_t: t,
        triangle_note: "removal-lemma constant, not computable here",
    })
}
