//! Reproducible experiment pipelines, reports, and the invariant suites
//! behind `verify-suite`.

use crate::decomposition::{distance_to_property, find_beta_cut, find_cut, refine_along_cuts, CutKind, CutMode, CutSearch, Distance};
use crate::error::{Error, Result};
use crate::gadgets::{
    ap3_free_set, audit_c5_gadget, build_c5_gadget, build_poset_gadget, c5_sample_audit, poset_sample_audit, rs_graph, ApMode, EXACT_AP_BOUND,
};
use crate::graph::{binomial, count_induced_p3, count_triangles, flip_pairs, gnp, random_cograph, Graph, PartName};
use crate::packing::{farness_lower_bound, random_c5_packing, random_tripartite_extract, triangle_cover, triangle_packing, CoverMode, PackMode};
use crate::recognizers::{is_cograph, is_comparability, is_perfect, is_triangle_free, Property, RecognitionResult};
use crate::rng::Seed;
use crate::testers::{estimate_detection, universal_tester_with, wilson95, TesterConfig, TesterKind};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessParams {
    pub ks: Vec<usize>,
    pub ds: Vec<usize>,
    pub trials: u64,
    /// Tripartitions drawn per k; the one keeping most triangles is used.
    pub extract_retries: usize,
    /// Growth attempts for the control graph's C₅ packing.
    pub control_attempts: usize,
}

impl Default for HardnessParams {
    fn default() -> Self {
        HardnessParams {
            ks: vec![4, 6],
            ds: vec![0, 5, 10, 15, 20],
            trials: 500,
            extract_retries: 16,
            control_attempts: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EasyParams {
    pub n: usize,
    pub flips: Vec<usize>,
    pub ts: Vec<usize>,
    pub trials: u64,
}

impl Default for EasyParams {
    fn default() -> Self {
        EasyParams {
            n: 40,
            flips: vec![0, 10, 40, 160],
            ts: vec![1, 4, 16, 64],
            trials: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "pipeline")]
pub enum Pipeline {
    Hardness(HardnessParams),
    Easy(EasyParams),
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub seed: Seed,
    #[serde(flatten)]
    pub pipeline: Pipeline,
    #[serde(default)]
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub label: String,
    pub n: usize,
    pub m: usize,
}

impl GraphSummary {
    fn of(label: impl Into<String>, g: &Graph) -> GraphSummary {
        GraphSummary {
            label: label.into(),
            n: g.n(),
            m: g.m(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: Vec<String>,
    pub spec: ExperimentSpec,
    pub graphs: Vec<GraphSummary>,
    pub results: serde_json::Value,
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    /// The deterministic part of the report (everything except timings).
    pub fn payload(&self) -> String {
        serde_json::to_string(&(&self.spec, &self.graphs, &self.results)).expect("report serializes")
    }
}

/// Structural check of a serialized report against the schema in
/// `schema/report.schema.json`.
pub fn validate_report(v: &serde_json::Value) -> Result<()> {
    let bad = |msg: &str| Err(Error::InvalidParameter(format!("report: {msg}")));
    let Some(o) = v.as_object() else { return bad("not an object") };
    if o.get("schema_version").and_then(|s| s.as_str()) != Some(SCHEMA_VERSION) {
        return bad("schema_version must be \"1\"");
    }
    if !o.get("command").is_some_and(|c| c.as_array().is_some_and(|a| a.iter().all(|x| x.is_string()))) {
        return bad("command must be an array of strings");
    }
    if !o
        .get("spec")
        .is_some_and(|s| s.get("name").is_some_and(|n| n.is_string()) && s.get("seed").is_some_and(|n| n.is_u64()))
    {
        return bad("spec needs a string name and an integer seed");
    }
    let graphs_ok = o.get("graphs").and_then(|g| g.as_array()).is_some_and(|a| {
        a.iter()
            .all(|g| g.get("n").is_some_and(|x| x.is_u64()) && g.get("m").is_some_and(|x| x.is_u64()) && g.get("label").is_some_and(|x| x.is_string()))
    });
    if !graphs_ok {
        return bad("graphs must be {label, n, m} objects");
    }
    if !o.contains_key("results") {
        return bad("missing results");
    }
    if !o
        .get("timings_ms")
        .is_some_and(|t| t.as_object().is_some_and(|m| m.values().all(|x| x.is_u64())))
    {
        return bad("timings_ms must map names to integers");
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessRow {
    pub instance: String,
    pub property: String,
    pub k: usize,
    pub farness: f64,
    pub d: usize,
    pub rejection_rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlInfo {
    pub k: usize,
    pub p: f64,
    pub farness: f64,
    /// The control's certified farness reached the gadget's.
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismRow {
    pub k: usize,
    pub d: usize,
    pub samples: u64,
    pub portion_triangle_free: u64,
    pub passed: u64,
    pub exceptions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessResults {
    pub rows: Vec<HardnessRow>,
    pub controls: Vec<ControlInfo>,
    pub mechanism: Vec<MechanismRow>,
}

pub fn hardness_csv(rows: &[HardnessRow]) -> String {
    let mut s = String::from("instance,property,k,farness,d,rejection_rate,wilson_lo,wilson_hi\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.instance, r.property, r.k, r.farness, r.d, r.rejection_rate, r.wilson_lo, r.wilson_hi
        );
    }
    s
}

const CONTROL_PS: [f64; 12] = [0.02, 0.03, 0.04, 0.06, 0.08, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5];

/// rs_graph → random tripartition → C₅ gadget, and a gnp graph on the same
/// vertex count whose certified C₅-farness is at least the gadget's; both
/// measured with the universal tester for induced-C₅-freeness and
/// comparability.
pub fn pipeline_hardness(params: &HardnessParams, seed: Seed) -> Result<(HardnessResults, Vec<GraphSummary>)> {
    if params.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut rows = vec![];
    let mut controls = vec![];
    let mut mechanism = vec![];
    let mut graphs = vec![];
    let properties = [Property::induced_c5_free(), Property::Comparability];
    for &k in &params.ks {
        let mode = if k <= EXACT_AP_BOUND { ApMode::Exact } else { ApMode::Behrend };
        let rs = rs_graph(k, &ap3_free_set(k, mode)?)?;
        let mut rng = seed.named("extract").split(k as u64).stream();
        let ex = random_tripartite_extract(&rs.graph, &rs.certificate, &mut rng, params.extract_retries)?;
        let labeling = ex
            .labeling
            .renamed(&[(PartName::X, PartName::V2), (PartName::Y, PartName::V3), (PartName::Z, PartName::V5)])?;
        let gadget = build_c5_gadget(&ex.f, &labeling, Some(ex.retained.clone()))?;
        let big_n = gadget.graph.n();

        let mut control: Option<(f64, f64, Graph)> = None;
        for (i, &p) in CONTROL_PS.iter().enumerate() {
            let mut rng = seed.named("control").split(k as u64).split(i as u64).stream();
            let g = gnp(big_n, p, &mut rng)?;
            let f = farness_lower_bound(&random_c5_packing(&g, params.control_attempts, &mut rng)?, big_n)?;
            let better = control.as_ref().is_none_or(|c| f > c.1);
            if better {
                control = Some((p, f, g));
            }
            if f >= gadget.farness {
                break;
            }
        }
        let (p, control_farness, control_graph) = control.expect("control grid is nonempty");
        controls.push(ControlInfo {
            k,
            p,
            farness: control_farness,
            matched: control_farness >= gadget.farness,
        });
        graphs.push(GraphSummary::of(format!("gadget-k{k}"), &gadget.graph));
        graphs.push(GraphSummary::of(format!("control-k{k}"), &control_graph));

        for &d in params.ds.iter().filter(|&&d| d <= big_n) {
            for (instance, g, farness) in [("gadget", &gadget.graph, gadget.farness), ("control", &control_graph, control_farness)] {
                for (pi, property) in properties.iter().enumerate() {
                    let cfg = TesterConfig::new(
                        TesterKind::Universal { d, property: property.clone() },
                        seed.named(instance).split(k as u64).split(d as u64).split(pi as u64),
                    );
                    let r = estimate_detection(g, &cfg, params.trials)?;
                    rows.push(HardnessRow {
                        instance: instance.into(),
                        property: property.name(),
                        k,
                        farness,
                        d,
                        rejection_rate: r.rejection_rate,
                        wilson_lo: r.wilson95.0,
                        wilson_hi: r.wilson95.1,
                    });
                }
            }
            let audit = c5_sample_audit(&gadget, &ex.f, d, params.trials, seed.named("mechanism").split(k as u64).split(d as u64))?;
            mechanism.push(MechanismRow {
                k,
                d,
                samples: audit.samples,
                portion_triangle_free: audit.portion_triangle_free,
                passed: audit.passed,
                exceptions: audit.exceptions.len(),
            });
        }
    }
    Ok((HardnessResults { rows, controls, mechanism }, graphs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EasyRow {
    pub flips: usize,
    pub p3_density: f64,
    pub t: usize,
    pub rejection_rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    /// `1 - (1 - p)^t` with `p` the exact fraction of induced-P₃ quadruples.
    pub model: f64,
}

pub fn easy_csv(rows: &[EasyRow]) -> String {
    let mut s = String::from("flips,p3_density,t,rejection_rate,wilson_lo,wilson_hi,model\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.flips, r.p3_density, r.t, r.rejection_rate, r.wilson_lo, r.wilson_hi, r.model
        );
    }
    s
}

/// Random cographs perturbed by pair flips, measured with the quadruple
/// tester: detection follows the induced-P₃ density directly.
pub fn pipeline_easy(params: &EasyParams, seed: Seed) -> Result<(Vec<EasyRow>, Vec<GraphSummary>)> {
    if params.n < 4 {
        return Err(Error::InvalidParameter("easy pipeline needs n >= 4".into()));
    }
    let mut rows = vec![];
    let mut graphs = vec![];
    let base = random_cograph(params.n, &mut seed.named("cograph").stream())?;
    for &flips in &params.flips {
        let g = flip_pairs(&base, flips, &mut seed.named("flips").split(flips as u64).stream())?;
        graphs.push(GraphSummary::of(format!("cograph+{flips}"), &g));
        let count = count_induced_p3(&g);
        let p = count as f64 / binomial(params.n, 4);
        for &t in &params.ts {
            let cfg = TesterConfig::new(TesterKind::QuadrupleDensity { t }, seed.named("easy").split(flips as u64).split(t as u64));
            let r = estimate_detection(&g, &cfg, params.trials)?;
            rows.push(EasyRow {
                flips,
                p3_density: count as f64 / (params.n as f64).powi(4),
                t,
                rejection_rate: r.rejection_rate,
                wilson_lo: r.wilson95.0,
                wilson_hi: r.wilson95.1,
                model: 1.0 - (1.0 - p).powi(t as i32),
            });
        }
    }
    Ok((rows, graphs))
}

/// Runs a spec and assembles its report.
pub fn run_spec(spec: &ExperimentSpec, command: Vec<String>) -> Result<Report> {
    let start = Instant::now();
    let (results, graphs) = match &spec.pipeline {
        Pipeline::Hardness(p) => {
            let (r, g) = pipeline_hardness(p, spec.seed)?;
            (serde_json::to_value(r).expect("results serialize"), g)
        }
        Pipeline::Easy(p) => {
            let (r, g) = pipeline_easy(p, spec.seed)?;
            (serde_json::to_value(r).expect("results serialize"), g)
        }
    };
    let mut timings_ms = BTreeMap::new();
    timings_ms.insert("total".to_string(), start.elapsed().as_millis() as u64);
    Ok(Report {
        schema_version: SCHEMA_VERSION.into(),
        command,
        spec: spec.clone(),
        graphs,
        results,
        timings_ms,
    })
}

/// The recognizers the suites exercise; swap one out to check that the
/// suites notice.
#[derive(Clone, Copy)]
pub struct Recognizers {
    pub triangle_free: fn(&Graph) -> RecognitionResult,
    pub cograph: fn(&Graph) -> RecognitionResult,
    pub comparability: fn(&Graph) -> RecognitionResult,
    pub perfect: fn(&Graph) -> Result<RecognitionResult>,
}

impl Default for Recognizers {
    fn default() -> Self {
        Recognizers {
            triangle_free: is_triangle_free,
            cograph: is_cograph,
            comparability: is_comparability,
            perfect: is_perfect,
        }
    }
}

impl Recognizers {
    fn run(&self, p: &Property, g: &Graph) -> Result<RecognitionResult> {
        match p {
            Property::TriangleFree => Ok((self.triangle_free)(g)),
            Property::Cograph => Ok((self.cograph)(g)),
            Property::Comparability => Ok((self.comparability)(g)),
            Property::Perfect => (self.perfect)(g),
            other => other.recognize(g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Recognizers,
    Packing,
    Gadgets,
    Testers,
    Decomposition,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Recognizers, Suite::Packing, Suite::Gadgets, Suite::Testers, Suite::Decomposition];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Recognizers => "recognizers",
            Suite::Packing => "packing",
            Suite::Gadgets => "gadgets",
            Suite::Testers => "testers",
            Suite::Decomposition => "decomposition",
        }
    }

    /// `"all"` or a single suite name.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub suite: String,
    pub check: String,
    pub cases: u64,
    /// The falsifying instance, if the check failed.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

type Check = std::result::Result<u64, String>;

fn describe(g: &Graph) -> String {
    format!("n={} edges={:?}", g.n(), g.edges().collect::<Vec<_>>())
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("error: {e}"))
}

/// Small random instances: gnp at three densities, random cographs, and
/// cographs with a few flips.
fn instances(count: u64, seed: Seed, lo: usize, hi: usize) -> Vec<Graph> {
    (0..count)
        .map(|i| {
            let mut rng = seed.split(i).stream();
            let n = rng.gen_range(lo..=hi);
            match i % 4 {
                0 => random_cograph(n, &mut rng),
                1 => random_cograph(n, &mut rng).and_then(|g| flip_pairs(&g, 2.min(n * (n - 1) / 2), &mut rng)),
                _ => gnp(n, [0.3, 0.5, 0.7][(i as usize / 4) % 3], &mut rng),
            }
            .expect("valid parameters")
        })
        .collect()
}

fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    (0u64..1 << (n * (n - 1) / 2)).map(move |m| Graph::from_pair_mask(n, m))
}

fn for_each_graph<I, F>(graphs: I, f: F) -> Check
where
    I: IntoIterator<Item = Graph>,
    F: Fn(&Graph) -> std::result::Result<(), String>,
{
    let mut cases = 0;
    for g in graphs {
        f(&g).map_err(|e| format!("{e}; instance {}", describe(&g)))?;
        cases += 1;
    }
    Ok(cases)
}

fn recognizer_checks(seeds: u64, seed: Seed, rec: &Recognizers) -> Vec<(&'static str, Check)> {
    let small = || (1..=5).flat_map(all_graphs).chain(instances(seeds, seed.named("rec"), 6, 9));
    vec![
        (
            "cograph-equals-p3-free",
            for_each_graph(small(), |g| {
                let want = count_induced_p3(g) == 0;
                ((rec.cograph)(g).member == want)
                    .then_some(())
                    .ok_or(format!("cograph recognizer disagrees with P3 count (p3-free = {want})"))
            }),
        ),
        (
            "triangle-free-agrees-with-count",
            for_each_graph(small(), |g| {
                let want = count_triangles(g) == 0;
                ((rec.triangle_free)(g).member == want)
                    .then_some(())
                    .ok_or(format!("triangle-free = {want} but recognizer disagrees"))
            }),
        ),
        (
            "containment-chain",
            for_each_graph(small(), |g| {
                let co = (rec.cograph)(g).member;
                let cmp = (rec.comparability)(g).member;
                let perf = lib((rec.perfect)(g))?.member;
                if co && !cmp {
                    return Err("cograph but not comparability".into());
                }
                if cmp && !perf {
                    return Err("comparability but not perfect".into());
                }
                Ok(())
            }),
        ),
        (
            "witnesses-verify",
            for_each_graph(small(), |g| {
                for p in [Property::TriangleFree, Property::Cograph, Property::Comparability, Property::Perfect] {
                    let r = lib(rec.run(&p, g))?;
                    if !r.member {
                        let w = r.witness.ok_or(format!("{p}: no witness"))?;
                        if !lib(p.verify_witness(g, &w))? {
                            return Err(format!("{p}: witness {w:?} does not violate the property"));
                        }
                    }
                }
                Ok(())
            }),
        ),
    ]
}

fn packing_checks(seeds: u64, seed: Seed) -> Vec<(&'static str, Check)> {
    let graphs = (0..seeds).map(|i| {
        let mut rng = seed.named("pack").split(i).stream();
        let n = rng.gen_range(5..=10);
        gnp(n, [0.3, 0.5, 0.7][i as usize % 3], &mut rng).expect("valid p")
    });
    let tiny = (0..seeds.min(200)).map(|i| {
        let mut rng = seed.named("pack-small").split(i).stream();
        let n = rng.gen_range(3..=7);
        gnp(n, 0.5, &mut rng).expect("valid p")
    });
    vec![
        (
            "tau-nu-chain",
            for_each_graph(graphs, |g| {
                let tau = lib(triangle_packing(g, PackMode::Exact, None))?.len();
                let nu = lib(triangle_cover(g, CoverMode::Exact))?.len();
                let from = lib(triangle_cover(g, CoverMode::FromPacking))?.len();
                if !(tau <= nu && nu <= 3 * tau && from <= 3 * tau && nu <= from) {
                    return Err(format!("tau = {tau}, nu = {nu}, packing cover = {from}"));
                }
                Ok(())
            }),
        ),
        (
            "distance-at-least-tau",
            for_each_graph(tiny, |g| {
                let tau = lib(triangle_packing(g, PackMode::Exact, None))?.len();
                match lib(distance_to_property(g, &Property::TriangleFree, 5))? {
                    Distance::Exact(d) if d < tau => Err(format!("distance {d} < tau {tau}")),
                    _ => Ok(()),
                }
            }),
        ),
    ]
}

fn gadget_checks(seeds: u64, seed: Seed) -> Vec<(&'static str, Check)> {
    let rs_exact = || -> Check {
        let mut cases = 0;
        for k in 1..=12 {
            let s = lib(ap3_free_set(k, ApMode::Exact))?;
            let b = lib(rs_graph(k, &s))?;
            let got = count_triangles(&b.graph);
            if got != (k * s.len()) as u64 {
                return Err(format!("k = {k}: {got} triangles, planted {}", k * s.len()));
            }
            cases += 1;
        }
        Ok(cases)
    };
    let c5 = || -> Check {
        let mut cases = 0;
        for k in 3..=5 {
            let rs = lib(rs_graph(k, &lib(ap3_free_set(k, ApMode::Exact))?))?;
            let ex = lib(random_tripartite_extract(
                &rs.graph,
                &rs.certificate,
                &mut seed.named("gadget").split(k as u64).stream(),
                8,
            ))?;
            let l = lib(ex
                .labeling
                .renamed(&[(PartName::X, PartName::V2), (PartName::Y, PartName::V3), (PartName::Z, PartName::V5)]))?;
            let b = lib(build_c5_gadget(&ex.f, &l, Some(ex.retained.clone())))?;
            lib(audit_c5_gadget(&b, &ex.f)).map_err(|e| format!("k = {k}: {e}"))?;
            if b.certificate.len() != ex.retained.len() {
                return Err(format!("k = {k}: {} C5s for {} triangles", b.certificate.len(), ex.retained.len()));
            }
            let a = lib(c5_sample_audit(&b, &ex.f, 12, seeds, seed.named("c5-samples").split(k as u64)))?;
            if let Some(s) = a.exceptions.first() {
                return Err(format!("k = {k}: sample {s:?} has a triangle-free F-portion but fails the order check"));
            }
            cases += 1 + a.samples;
        }
        Ok(cases)
    };
    let poset = || -> Check {
        let rs = lib(rs_graph(6, &lib(ap3_free_set(6, ApMode::Exact))?))?;
        let l = lib(rs
            .labeling
            .renamed(&[(PartName::X, PartName::V1), (PartName::Y, PartName::V2), (PartName::Z, PartName::V3)]))?;
        let b = lib(build_poset_gadget(&rs.graph, &l, Some(rs.certificate.clone())))?;
        let a = lib(poset_sample_audit(&b, &rs.graph, 16, seeds, seed.named("poset-samples")))?;
        match a.exceptions.first() {
            Some(s) => Err(format!("sample {s:?}: poset status differs from T-portion triangle-freeness")),
            None => Ok(a.samples),
        }
    };
    let farness = || -> Check {
        let b = lib(rs_graph(1, &lib(ap3_free_set(1, ApMode::Exact))?))?;
        let n = b.graph.n();
        match lib(distance_to_property(&b.graph, &Property::TriangleFree, 5))? {
            Distance::Exact(d) if (d as f64) < b.farness * (n * n) as f64 => Err(format!("farness {} above distance {d}", b.farness)),
            _ => Ok(1),
        }
    };
    vec![
        ("rs-triangles-exact", rs_exact()),
        ("c5-gadget-audit-and-samples", c5()),
        ("poset-gadget-samples", poset()),
        ("farness-below-distance", farness()),
    ]
}

fn tester_checks(seeds: u64, seed: Seed, rec: &Recognizers) -> Vec<(&'static str, Check)> {
    let one_sided = || -> Check {
        let trials = seeds.max(1);
        let mut cases = 0;
        for i in 0..8u64 {
            let mut rng = seed.named("one-sided").split(i).stream();
            let co = lib(random_cograph(12 + i as usize, &mut rng))?;
            let bip = {
                let g = lib(gnp(12 + i as usize, 0.5, &mut rng))?;
                let half = g.n() / 2;
                let edges: Vec<_> = g.edges().filter(|&(u, v)| (u < half) != (v < half)).collect();
                lib(Graph::from_edges(g.n(), &edges))?
            };
            let runs: Vec<(&Graph, TesterKind)> = vec![(&co, TesterKind::QuadrupleDensity { t: 20 }), (&bip, TesterKind::TripleDensity { t: 20 })];
            for (g, kind) in runs {
                let r = lib(estimate_detection(g, &TesterConfig::new(kind.clone(), seed.split(i)), trials))?;
                if r.rejections > 0 {
                    return Err(format!("{kind:?} rejected an in-property graph: {}", describe(g)));
                }
                cases += trials;
            }
            for (g, p) in [
                (&co, Property::Cograph),
                (&bip, Property::TriangleFree),
                (&co, Property::Comparability),
                (&co, Property::Perfect),
            ] {
                for j in 0..trials {
                    let mut rng = seed.named("universal").split(i).split(j).stream();
                    let v = lib(universal_tester_with(g, 8, |h| rec.run(&p, h), &mut rng))?;
                    if v.is_reject() {
                        return Err(format!("universal tester for {p} rejected {v:?} on {}", describe(g)));
                    }
                }
                cases += trials;
            }
        }
        Ok(cases)
    };
    let deterministic = || -> Check {
        let g = lib(gnp(30, 0.3, &mut seed.named("det").stream()))?;
        let cfg = TesterConfig::new(TesterKind::TripleDensity { t: 5 }, seed);
        let a = lib(estimate_detection(&g, &cfg, 500))?;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
        let b = pool.install(|| lib(estimate_detection(&g, &cfg, 500)))?;
        if a != b {
            return Err("reports differ across thread counts".into());
        }
        let (lo, hi) = a.wilson95;
        if a.rejections > a.trials || !(lo <= a.rejection_rate && a.rejection_rate <= hi) || a.queries_per_trial != 15 {
            return Err(format!("report invariants broken: {a:?}"));
        }
        Ok(1)
    };
    let wilson = || -> Check {
        for n in [1u64, 10, 1000] {
            for k in 0..=n.min(10) {
                let (lo, hi) = wilson95(k, n);
                let p = k as f64 / n as f64;
                if !(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0) {
                    return Err(format!("wilson95({k}, {n}) = ({lo}, {hi})"));
                }
            }
        }
        Ok(3)
    };
    vec![
        ("one-sided", one_sided()),
        ("deterministic-reports", deterministic()),
        ("wilson-contains-rate", wilson()),
    ]
}

fn decomposition_checks(seeds: u64, seed: Seed) -> Vec<(&'static str, Check)> {
    let connected = |g: &Graph| -> bool {
        let mut seen = vec![false; g.n()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    let graphs = || instances(seeds, seed.named("dec"), 2, 10);
    vec![
        (
            "exact-cut-iff-disconnected-side",
            for_each_graph(graphs(), |g| {
                let has = lib(find_cut(g))?.is_some();
                let want = !connected(g) || !connected(&g.complement());
                (has == want).then_some(()).ok_or(format!("find_cut found = {has}, expected {want}"))
            }),
        ),
        (
            "cographs-have-exact-cuts",
            for_each_graph(graphs().into_iter().filter(|g| count_induced_p3(g) == 0), |g| {
                lib(find_cut(g))?.map(|_| ()).ok_or("cograph without an exact cut".into())
            }),
        ),
        (
            "refinement-parts-are-cut-free",
            for_each_graph(graphs(), |g| {
                let mut rng = seed.named("refine").stream();
                let r = lib(refine_along_cuts(g, 0.2, CutMode::Exact, &mut rng))?;
                for part in &r.parts {
                    let sub = lib(r.modified_graph.induced_subgraph(part))?;
                    if matches!(lib(find_beta_cut(&sub, 0.2, CutMode::Exact, &mut rng))?, CutSearch::Found(_)) {
                        return Err(format!("part {part:?} still has a 0.2-cut"));
                    }
                }
                Ok(())
            }),
        ),
        (
            "heuristic-cuts-are-beta-cuts",
            for_each_graph(graphs(), |g| {
                let mut rng = seed.named("heuristic").stream();
                if let CutSearch::Found(c) = lib(find_beta_cut(g, 0.25, CutMode::Heuristic { restarts: 4 }, &mut rng))? {
                    let cap = c.capacity() as f64;
                    let ok = match c.kind {
                        CutKind::Sparse => c.crossing_edges as f64 <= 0.25 * cap,
                        CutKind::Dense => c.crossing_edges as f64 >= 0.75 * cap,
                    };
                    if !ok {
                        return Err(format!("reported cut {c:?} is not a 0.25-cut"));
                    }
                }
                Ok(())
            }),
        ),
    ]
}

/// Runs the selected invariant suites over `seeds` random instances each.
pub fn verify_suite(suites: &[Suite], seeds: u64, seed: Seed, rec: &Recognizers) -> SuiteReport {
    let checks = suites
        .par_iter()
        .map(|&s| {
            let results = match s {
                Suite::Recognizers => recognizer_checks(seeds, seed, rec),
                Suite::Packing => packing_checks(seeds, seed),
                Suite::Gadgets => gadget_checks(seeds, seed),
                Suite::Testers => tester_checks(seeds, seed, rec),
                Suite::Decomposition => decomposition_checks(seeds, seed),
            };
            results
                .into_iter()
                .map(|(name, r)| CheckOutcome {
                    suite: s.name().into(),
                    check: name.into(),
                    cases: *r.as_ref().unwrap_or(&0),
                    failure: r.err(),
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    SuiteReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let r = verify_suite(&Suite::ALL, 40, Seed(1), &Recognizers::default());
        for c in &r.checks {
            assert!(c.passed(), "{}/{}: {:?}", c.suite, c.check, c.failure);
            assert!(c.cases > 0, "{}/{} ran no cases", c.suite, c.check);
        }
    }

    #[test]
    fn mutated_recognizer_is_caught() {
        fn never_comparability(_: &Graph) -> RecognitionResult {
            RecognitionResult::non_member(vec![])
        }
        fn always_cograph(_: &Graph) -> RecognitionResult {
            RecognitionResult::member()
        }
        let rec = Recognizers {
            comparability: never_comparability,
            ..Recognizers::default()
        };
        let r = verify_suite(&[Suite::Recognizers], 20, Seed(2), &rec);
        let chain = r.checks.iter().find(|c| c.check == "containment-chain").unwrap();
        let msg = chain.failure.as_ref().expect("chain must fail");
        assert!(msg.contains("cograph but not comparability") && msg.contains("edges="));

        let rec = Recognizers {
            cograph: always_cograph,
            ..Recognizers::default()
        };
        let r = verify_suite(&[Suite::Recognizers, Suite::Testers], 20, Seed(2), &rec);
        assert!(!r.passed());
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse_selection("all").unwrap().len(), 5);
        assert_eq!(Suite::parse_selection("packing").unwrap(), vec![Suite::Packing]);
        assert!(Suite::parse_selection("nope").is_err());
    }

    #[test]
    fn hardness_pipeline_small() {
        let params = HardnessParams {
            ks: vec![4],
            ds: vec![0, 8, 16],
            trials: 200,
            extract_retries: 8,
            control_attempts: 5000,
        };
        let (res, graphs) = pipeline_hardness(&params, Seed(3)).unwrap();
        assert_eq!(graphs.len(), 2);
        assert_eq!(res.rows.len(), 3 * 2 * 2);
        for r in res.rows.iter().filter(|r| r.d == 0) {
            assert_eq!(r.rejection_rate, 0.0);
        }
        assert!(res.mechanism.iter().all(|m| m.exceptions == 0 && m.passed == m.portion_triangle_free));
        let csv = hardness_csv(&res.rows);
        assert!(csv.starts_with("instance,property,k,farness,d,rejection_rate,wilson_lo,wilson_hi\n"));
        assert_eq!(csv.lines().count(), 13);
    }

    #[test]
    fn reports_reproduce_and_validate() {
        let spec = ExperimentSpec {
            name: "easy".into(),
            seed: Seed(5),
            pipeline: Pipeline::Easy(EasyParams {
                n: 16,
                flips: vec![0, 8],
                ts: vec![1, 8],
                trials: 300,
            }),
            outputs: vec![],
        };
        let a = run_spec(&spec, vec!["ptlab".into()]).unwrap();
        let b = run_spec(&spec, vec!["ptlab".into()]).unwrap();
        assert_eq!(a.payload(), b.payload());
        let v = serde_json::to_value(&a).unwrap();
        validate_report(&v).unwrap();
        let back: ExperimentSpec = serde_json::from_value(v["spec"].clone()).unwrap();
        assert_eq!(back, spec);
        let rows: Vec<EasyRow> = serde_json::from_value(a.results.clone()).unwrap();
        assert!(rows.iter().filter(|r| r.flips == 0).all(|r| r.rejection_rate == 0.0));
        let mut broken = v.clone();
        broken["schema_version"] = serde_json::json!("2");
        assert!(validate_report(&broken).is_err());
    }
}
