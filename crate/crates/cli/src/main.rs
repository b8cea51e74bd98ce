use clap::{Args, Parser, Subcommand, ValueEnum};
use ptlab_core::decomposition::{distance_to_property, find_beta_cut, refine_along_cuts, CutMode, Distance};
use ptlab_core::extremal::{estimate_f, search_min_p3_density, ExtremalRecord};
use ptlab_core::gadgets::{ap3_free_set, build_c5_gadget, build_poset_gadget, rs_graph, ApMode, GadgetBundle};
use ptlab_core::graph::io::{parse_graph, write_digraph, write_graph};
use ptlab_core::graph::{gnp, random_cograph, Part};
use ptlab_core::harness::{
    easy_csv, hardness_csv, run_spec, verify_suite, EasyParams, EasyRow, ExperimentSpec, HardnessParams, HardnessResults, Pipeline, Recognizers, Suite,
};
use ptlab_core::testers::{estimate_detection, min_budget_for_detection, triangle_delta, TesterConfig, TesterKind};
use ptlab_core::{Graph, PartLabeling, PartName, Property, Seed};
use serde::Serialize;
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] ptlab_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use ptlab_core::Error as E;
        match self {
            CliError::Failed(_) | CliError::Core(E::Unverified(_) | E::Exhausted(_)) => 1,
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "ptlab", version, about = "Graph property testing laboratory")]
struct Cli {
    /// Master seed; every random choice derives from it.
    #[arg(long, global = true, env = "PTLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph or gadget, with a JSON certificate sidecar.
    Gen(GenArgs),
    /// Decide a property exactly.
    Recognize {
        graph: PathBuf,
        #[arg(long)]
        property: String,
    },
    /// Run a tester repeatedly and report the rejection rate.
    Test(TestArgs),
    /// Rejection rate against budget, or the least budget reaching a target.
    Curve(CurveArgs),
    /// Refine along β-cuts.
    Decompose {
        graph: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        beta: f64,
        /// Heuristic restarts; exact scan when omitted.
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Exact edit distance to a property, up to a cap.
    Distance {
        graph: PathBuf,
        #[arg(long)]
        property: String,
        #[arg(long, default_value_t = 5)]
        cap: usize,
    },
    /// Search for graphs with few induced P₃s that are far from cographs.
    SearchExtremal {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "epsilon")]
        beta: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 100)]
        effort: usize,
    },
    /// Run invariant suites: all, recognizers, packing, gadgets, testers, decomposition.
    VerifySuite {
        #[arg(default_value = "all")]
        name: String,
        #[arg(long, default_value_t = 200)]
        seeds: u64,
    },
    /// Gadget versus farness-matched random control.
    PipelineHardness {
        #[arg(long, value_delimiter = ',', default_values_t = HardnessParams::default().ks)]
        ks: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = HardnessParams::default().ds)]
        ds: Vec<usize>,
        #[arg(long, default_value_t = HardnessParams::default().trials)]
        trials: u64,
    },
    /// Induced-P₃ tester on perturbed cographs.
    PipelineEasy {
        #[arg(long, default_value_t = EasyParams::default().n)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = EasyParams::default().flips)]
        flips: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = EasyParams::default().ts)]
        ts: Vec<usize>,
        #[arg(long, default_value_t = EasyParams::default().trials)]
        trials: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Gnp,
    Cograph,
    Rs,
    C5Gadget,
    PosetGadget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ApArg {
    Exact,
    Behrend,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    ap: ApArg,
    /// Source tripartite graph for the gadgets (an RS graph is used otherwise).
    #[arg(long)]
    from: Option<PathBuf>,
    /// Part (0, 1, 2) of each vertex of --from; found by search when omitted.
    #[arg(long, value_delimiter = ',')]
    parts: Option<Vec<u8>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TesterArg {
    Universal,
    Triangle,
    P3,
}

#[derive(Args)]
struct TesterSel {
    #[arg(long, value_enum)]
    tester: TesterArg,
    /// Property for the universal tester.
    #[arg(long)]
    property: Option<String>,
}

impl TesterSel {
    fn kind(&self, budget: usize) -> Result<TesterKind> {
        Ok(match self.tester {
            TesterArg::Universal => {
                let p = self
                    .property
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("--property is required for the universal tester".into()))?;
                TesterKind::Universal {
                    d: budget,
                    property: p.parse()?,
                }
            }
            TesterArg::Triangle => TesterKind::TripleDensity { t: budget },
            TesterArg::P3 => TesterKind::QuadrupleDensity { t: budget },
        })
    }
}

#[derive(Args)]
struct TestArgs {
    graph: PathBuf,
    #[command(flatten)]
    sel: TesterSel,
    /// Sample size d (universal) or number of tuples t.
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

#[derive(Args)]
struct CurveArgs {
    graph: PathBuf,
    #[command(flatten)]
    sel: TesterSel,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 4, 8, 16, 32])]
    budgets: Vec<usize>,
    /// Search for the least budget whose lower Wilson bound reaches this rate.
    #[arg(long)]
    target: Option<f64>,
    #[arg(long, default_value_t = 4096)]
    cap: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_graph(path: &Path) -> Result<Graph> {
    Ok(parse_graph(&read(path)?)?)
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

struct Output {
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Output {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.clone(), source }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn write_side(&self, value: &serde_json::Value) -> Result<()> {
        if let Some(p) = &self.out {
            let side = sidecar(p);
            let text = serde_json::to_string_pretty(value).expect("json") + "\n";
            fs::write(&side, text).map_err(|source| CliError::Io { path: side, source })?;
        }
        Ok(())
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<()> {
        self.emit(&(serde_json::to_string_pretty(value).expect("json") + "\n"))
    }

    fn csv_or_json<T: Serialize>(&self, csv: impl FnOnce() -> String, value: &T) -> Result<()> {
        match self.format {
            Some(Format::Csv) => self.emit(&csv()),
            _ => self.json(value),
        }
    }
}

/// Proper 3-colouring by backtracking in order of decreasing degree.
fn three_coloring(g: &Graph) -> Option<Vec<u8>> {
    fn go(g: &Graph, order: &[usize], i: usize, col: &mut [u8]) -> bool {
        let Some(&v) = order.get(i) else { return true };
        for c in 0..3 {
            if g.neighbors(v).all(|u| col[u] != c) {
                col[v] = c;
                if go(g, order, i + 1, col) {
                    return true;
                }
            }
        }
        col[v] = u8::MAX;
        false
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut col = vec![u8::MAX; g.n()];
    go(g, &order, 0, &mut col).then_some(col)
}

fn labeling_from_parts(n: usize, parts: &[u8], names: [PartName; 3]) -> Result<PartLabeling> {
    if parts.len() != n || parts.iter().any(|&p| p > 2) {
        return Err(CliError::Usage(format!("--parts needs {n} values in 0..3")));
    }
    let parts = names
        .iter()
        .enumerate()
        .map(|(i, &name)| Part {
            name,
            vertices: (0..n).filter(|&v| parts[v] as usize == i).collect(),
        })
        .collect();
    Ok(PartLabeling::new(n, parts, true)?)
}

fn certificate_json<G>(b: &GadgetBundle<G>, seed: u64) -> serde_json::Value {
    json!({
        "construction": b.provenance.construction,
        "params": b.provenance.params,
        "seed": seed,
        "packing": b.certificate,
        "farness": b.farness,
    })
}

fn gen(args: &GenArgs, seed: Seed, out: &Output) -> Result<()> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("--{flag} is required")));
    let ap = |k: usize| -> Result<_> {
        Ok(ap3_free_set(
            k,
            match args.ap {
                ApArg::Exact => ApMode::Exact,
                ApArg::Behrend => ApMode::Behrend,
            },
        )?)
    };
    // source tripartite graph and labeling for the gadgets
    let source = |names: [PartName; 3]| -> Result<(Graph, PartLabeling, Option<ptlab_core::packing::WitnessPacking>)> {
        match &args.from {
            Some(path) => {
                let f = load_graph(path)?;
                let parts = match &args.parts {
                    Some(p) => p.clone(),
                    None => {
                        three_coloring(&f).ok_or_else(|| CliError::Core(ptlab_core::Error::Precondition(format!("{} is not tripartite", path.display()))))?
                    }
                };
                let l = labeling_from_parts(f.n(), &parts, names)?;
                Ok((f, l, None))
            }
            None => {
                let rs = rs_graph(need(args.k, "k")?, &ap(need(args.k, "k")?)?)?;
                let l = rs
                    .labeling
                    .renamed(&[(PartName::X, names[0]), (PartName::Y, names[1]), (PartName::Z, names[2])])?;
                Ok((rs.graph, l, Some(rs.certificate)))
            }
        }
    };
    let raw_seed = seed.0;
    match args.kind {
        GenKind::Gnp => {
            let n = need(args.n, "n")?;
            let g = gnp(n, args.p, &mut seed.named("gen").stream())?;
            out.emit(&write_graph(&g))?;
            out.write_side(&json!({"construction": "gnp", "params": {"n": n, "p": args.p}, "seed": raw_seed, "packing": null, "farness": null}))
        }
        GenKind::Cograph => {
            let n = need(args.n, "n")?;
            let g = random_cograph(n, &mut seed.named("gen").stream())?;
            out.emit(&write_graph(&g))?;
            out.write_side(&json!({"construction": "cograph", "params": {"n": n}, "seed": raw_seed, "packing": null, "farness": null}))
        }
        GenKind::Rs => {
            let k = need(args.k, "k")?;
            let b = rs_graph(k, &ap(k)?)?;
            out.emit(&write_graph(&b.graph))?;
            out.write_side(&certificate_json(&b, raw_seed))
        }
        GenKind::C5Gadget => {
            let (f, l, planted) = source([PartName::V2, PartName::V3, PartName::V5])?;
            let b = build_c5_gadget(&f, &l, planted)?;
            out.emit(&write_graph(&b.graph))?;
            out.write_side(&certificate_json(&b, raw_seed))
        }
        GenKind::PosetGadget => {
            let (t, l, planted) = source([PartName::V1, PartName::V2, PartName::V3])?;
            let b = build_poset_gadget(&t, &l, planted)?;
            out.emit(&write_digraph(&b.graph))?;
            out.write_side(&certificate_json(&b, raw_seed))
        }
    }
}

fn property(s: &str) -> Result<Property> {
    s.parse::<Property>().map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let seed = Seed(cli.seed);
    let out = Output {
        out: cli.out.clone(),
        format: cli.format,
    };
    let argv: Vec<String> = std::env::args().collect();
    match &cli.command {
        Command::Gen(args) => gen(args, seed, &out),
        Command::Recognize { graph, property: p } => {
            let g = load_graph(graph)?;
            let r = property(p)?.recognize(&g)?;
            out.csv_or_json(
                || {
                    let w = r
                        .witness
                        .as_ref()
                        .map(|w| w.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
                        .unwrap_or_default();
                    format!("member,witness\n{},{w}\n", r.member)
                },
                &r,
            )
        }
        Command::Test(a) => {
            let g = load_graph(&a.graph)?;
            let cfg = TesterConfig::new(a.sel.kind(a.budget)?, seed);
            let r = estimate_detection(&g, &cfg, a.trials)?;
            out.csv_or_json(
                || {
                    format!(
                        "trials,rejections,rejection_rate,wilson_lo,wilson_hi,queries_per_trial\n{},{},{},{},{},{}\n",
                        r.trials, r.rejections, r.rejection_rate, r.wilson95.0, r.wilson95.1, r.queries_per_trial
                    )
                },
                &r,
            )
        }
        Command::Curve(a) => {
            let g = load_graph(&a.graph)?;
            let mut cfg = TesterConfig::new(a.sel.kind(1)?, seed);
            cfg.budget_cap = a.cap;
            let curve = match a.target {
                Some(target) => {
                    let delta = matches!(
                        cfg.kind,
                        TesterKind::Universal {
                            property: Property::TriangleFree,
                            ..
                        }
                    )
                    .then(|| triangle_delta(&g));
                    let s = min_budget_for_detection(&g, &cfg, target, a.trials, delta)?;
                    if out.format != Some(Format::Csv) {
                        return out.json(&s);
                    }
                    s.curve
                }
                None => {
                    let mut pts = vec![];
                    for &b in &a.budgets {
                        let c = TesterConfig {
                            kind: cfg.kind.with_budget(b),
                            ..cfg.clone()
                        };
                        let r = estimate_detection(&g, &c, a.trials)?;
                        pts.push(ptlab_core::testers::CurvePoint {
                            budget: b,
                            rejection_rate: r.rejection_rate,
                            wilson_lo: r.wilson95.0,
                            wilson_hi: r.wilson95.1,
                        });
                    }
                    pts
                }
            };
            out.csv_or_json(
                || {
                    let mut s = String::from("budget,rejection_rate,wilson_lo,wilson_hi\n");
                    for p in &curve {
                        s += &format!("{},{},{},{}\n", p.budget, p.rejection_rate, p.wilson_lo, p.wilson_hi);
                    }
                    s
                },
                &curve,
            )
        }
        Command::Decompose { graph, beta, restarts } => {
            let g = load_graph(graph)?;
            let mode = restarts.map_or(CutMode::Exact, |r| CutMode::Heuristic { restarts: r });
            let mut rng = seed.named("decompose").stream();
            let first = find_beta_cut(&g, *beta, mode, &mut rng)?;
            let refinement = refine_along_cuts(&g, *beta, mode, &mut rng)?;
            out.json(&json!({"cut": first, "refinement": {
                "parts": refinement.parts,
                "edited_pairs": refinement.edited_pairs,
                "certified": refinement.certified,
            }}))
        }
        Command::Distance { graph, property: p, cap } => {
            let g = load_graph(graph)?;
            let d = distance_to_property(&g, &property(p)?, *cap)?;
            let v = match d {
                Distance::Exact(d) => json!({"distance": d, "cap": cap}),
                Distance::AboveCap => json!({"distance": null, "above_cap": true, "cap": cap}),
            };
            out.json(&v)
        }
        Command::SearchExtremal { n, beta, epsilon, effort } => {
            let r: ExtremalRecord = match (beta, epsilon) {
                (Some(b), None) => search_min_p3_density(*n, *b, *effort, seed)?,
                (None, Some(e)) => estimate_f(*n, *e, *effort, seed)?,
                _ => return Err(CliError::Usage("give exactly one of --beta or --epsilon".into())),
            };
            if !r.bound_holds() {
                return Err(CliError::Failed(format!(
                    "record density {} below the lower bound {}",
                    r.p3_density, r.lower_bound
                )));
            }
            match &out.out {
                Some(_) => {
                    out.emit(&write_graph(&r.graph))?;
                    out.write_side(&serde_json::to_value(&r).expect("json"))
                }
                None => out.json(&r),
            }
        }
        Command::VerifySuite { name, seeds } => {
            let suites = Suite::parse_selection(name).map_err(|e| CliError::Usage(e.to_string()))?;
            let report = verify_suite(&suites, *seeds, seed, &Recognizers::default());
            let mut text = String::new();
            for c in &report.checks {
                match &c.failure {
                    None => text += &format!("PASS {}/{} ({} cases)\n", c.suite, c.check, c.cases),
                    Some(f) => text += &format!("FAIL {}/{}: {f}\n", c.suite, c.check),
                }
            }
            match out.format {
                Some(Format::Json) => out.json(&report)?,
                _ => out.emit(&text)?,
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Failed(format!(
                    "{} checks failed",
                    report.checks.iter().filter(|c| !c.passed()).count()
                )))
            }
        }
        Command::PipelineHardness { ks, ds, trials } => {
            let spec = ExperimentSpec {
                name: "pipeline-hardness".into(),
                seed,
                pipeline: Pipeline::Hardness(HardnessParams {
                    ks: ks.clone(),
                    ds: ds.clone(),
                    trials: *trials,
                    ..HardnessParams::default()
                }),
                outputs: cli.out.iter().map(|p| p.display().to_string()).collect(),
            };
            let report = run_spec(&spec, argv)?;
            let res: HardnessResults = serde_json::from_value(report.results.clone()).expect("hardness results");
            if let Some(m) = res.mechanism.iter().find(|m| m.exceptions > 0) {
                return Err(CliError::Failed(format!(
                    "k = {}, d = {}: {} samples broke the order mechanism",
                    m.k, m.d, m.exceptions
                )));
            }
            emit_report(&out, &report, || hardness_csv(&res.rows))
        }
        Command::PipelineEasy { n, flips, ts, trials } => {
            let spec = ExperimentSpec {
                name: "pipeline-easy".into(),
                seed,
                pipeline: Pipeline::Easy(EasyParams {
                    n: *n,
                    flips: flips.clone(),
                    ts: ts.clone(),
                    trials: *trials,
                }),
                outputs: cli.out.iter().map(|p| p.display().to_string()).collect(),
            };
            let report = run_spec(&spec, argv)?;
            let rows: Vec<EasyRow> = serde_json::from_value(report.results.clone()).expect("easy results");
            emit_report(&out, &report, || easy_csv(&rows))
        }
    }
}

/// CSV (default) or the full JSON report; with `--out`, the report also
/// goes to the sidecar.
fn emit_report(out: &Output, report: &ptlab_core::harness::Report, csv: impl FnOnce() -> String) -> Result<()> {
    let value = serde_json::to_value(report).expect("json");
    match out.format {
        Some(Format::Json) => out.json(&value),
        _ => {
            out.emit(&csv())?;
            out.write_side(&value)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
