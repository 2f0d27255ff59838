//! Command-line front end.
//!
//! Every command writes one JSON report (stdout unless `-o` is given) that
//! carries the schema version. Exit codes: 0 success, 1 a checked property
//! failed, 2 invalid input or usage.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chain::{self, check_necessity, NecessityCertificate, StateDistribution};
use crate::cuts::{build_hierarchy, verify_cycle_cut_instance};
use crate::embedding::{assign_frames, hierarchy_shape, FrameOptions};
use crate::error::Error;
use crate::instance::{
    gen_figure1, gen_random_cyclecut, held_karp_opt, load_instance, lp_value, support_multigraph,
    Blueprint, CostMode, Figure1Costs, Instance, Metric, HELD_KARP_MAX_N,
};
use crate::multigraph::{global_min_cut_value, is_connected_spanning};
use crate::rational::{self, Rational};
use crate::sampler::{
    exact_outcome_distribution, usage_stats, Pipeline, PipelineOptions, DEFAULT_OUTCOME_CAP,
};
use crate::REPORT_SCHEMA_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "cyclecut",
    version,
    about = "Randomized 4/3-approximate tours for half-integral cycle-cut TSP instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance.
    Gen(GenArgs),
    /// Validate an instance and test the cycle-cut property.
    Check(FileArgs),
    /// Print the hierarchy of critical cuts and their frames.
    Hierarchy(HierarchyArgs),
    /// Exact per-cut distributions, per-edge usage and expected cost.
    Expect(PipelineArgs),
    /// Monte Carlo usage statistics.
    Sample(SampleArgs),
    /// Sample one Eulerian tour.
    Tour(TourArgs),
    /// Feasible-region algebra.
    Region(RegionArgs),
    /// Enumerate every random branch of the sampler exactly.
    Oracle(OracleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Fig1,
    Random,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Costs {
    Unit,
    Random,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Internal vertices per path (fig1).
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Blueprint such as `((L,L),L,L)` (random family).
    #[arg(long)]
    blueprint: Option<String>,
    /// Leaf count of a random blueprint when none is given.
    #[arg(long, default_value_t = 6)]
    leaves: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Costs::Unit)]
    costs: Costs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FileArgs {
    file: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    file: PathBuf,
    /// Root vertex (defaults to the instance's root, then 0).
    #[arg(long)]
    root: Option<usize>,
    /// Root distribution as four rationals, e.g. `1/3,1/3,1/3,0`.
    #[arg(long = "p-root")]
    p_root: Option<String>,
    /// Run every chain in the opposite direction.
    #[arg(long)]
    reflect: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HierarchyArgs {
    file: PathBuf,
    #[arg(long)]
    root: Option<usize>,
    #[arg(long)]
    reflect: bool,
    /// Also write a Graphviz rendering here.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    common: PipelineArgs,
    #[arg(short = 'n', long = "samples")]
    samples: usize,
    #[arg(long)]
    seed: u64,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct TourArgs {
    #[command(flatten)]
    common: PipelineArgs,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "mode")]
struct RegionModes {
    /// Test membership of a distribution.
    #[arg(long)]
    check: Option<String>,
    /// Verify closure of the region on M random points.
    #[arg(long = "closure-samples")]
    closure_samples: Option<usize>,
    /// Certify why a distribution cannot sustain 2/3 usage.
    #[arg(long)]
    necessity: Option<String>,
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[command(flatten)]
    mode: RegionModes,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    common: PipelineArgs,
    /// Maximum number of branch combinations to enumerate.
    #[arg(long, default_value_t = DEFAULT_OUTCOME_CAP)]
    cap: usize,
    /// Include every outcome in the report.
    #[arg(long)]
    list: bool,
}

/// A finished report and the exit code it implies.
struct Report {
    body: Value,
    code: i32,
    /// Written as is, without the schema version (instance documents).
    raw: bool,
}

impl Report {
    fn ok(body: Value) -> Self {
        Report {
            body,
            code: EXIT_OK,
            raw: false,
        }
    }

    fn with_code(body: Value, code: i32) -> Self {
        Report {
            body,
            code,
            raw: false,
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    let output = output_path(&cli.command).map(Path::to_path_buf);
    let report = match dispatch(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            let code = if e.is_input_error() {
                EXIT_INVALID
            } else {
                EXIT_VIOLATION
            };
            Report::with_code(
                json!({ "error": { "kind": e.kind(), "message": e.to_string() } }),
                code,
            )
        }
    };
    match emit(report.body, report.raw, output.as_deref()) {
        Ok(()) => report.code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
    }
}

fn output_path(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Gen(a) => a.output.as_deref(),
        Command::Check(a) => a.output.as_deref(),
        Command::Hierarchy(a) => a.output.as_deref(),
        Command::Expect(a) => a.output.as_deref(),
        Command::Sample(a) => a.common.output.as_deref(),
        Command::Tour(a) => a.common.output.as_deref(),
        Command::Region(a) => a.output.as_deref(),
        Command::Oracle(a) => a.common.output.as_deref(),
    }
}

fn emit(mut body: Value, raw: bool, output: Option<&Path>) -> Result<(), String> {
    if let (false, Value::Object(map)) = (raw, &mut body) {
        map.insert("schema_version".into(), json!(REPORT_SCHEMA_VERSION));
    }
    let text = serde_json::to_string_pretty(&body).map_err(|e| e.to_string())? + "\n";
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: Command) -> Result<Report, Error> {
    match cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Check(a) => cmd_check(a),
        Command::Hierarchy(a) => cmd_hierarchy(a),
        Command::Expect(a) => cmd_expect(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Tour(a) => cmd_tour(a),
        Command::Region(a) => cmd_region(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}

fn read_instance(path: &Path) -> Result<Instance, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    load_instance(&text)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn fmt(x: &Rational) -> String {
    rational::format(x)
}

fn cmd_gen(a: GenArgs) -> Result<Report, Error> {
    let inst = match a.family {
        Family::Fig1 => {
            let costs = match a.costs {
                Costs::Unit => Figure1Costs::Unit,
                Costs::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
                    let count = 6 + 3 * (a.k + 1);
                    Figure1Costs::Explicit(
                        (0..count)
                            .map(|_| rational::ratio(rng.gen_range(1..=9), rng.gen_range(1..=4)))
                            .collect(),
                    )
                }
            };
            gen_figure1(a.k, costs)?
        }
        Family::Random => {
            let blueprint = match &a.blueprint {
                Some(text) => text.parse::<Blueprint>()?,
                None => Blueprint::random(&mut ChaCha8Rng::seed_from_u64(a.seed), a.leaves)?,
            };
            let costs = match a.costs {
                Costs::Unit => CostMode::Unit,
                Costs::Random => CostMode::RandomRational,
            };
            gen_random_cyclecut(&blueprint, a.seed, costs)?
        }
    };
    // the instance document itself is the output
    let body: Value = serde_json::from_str(&inst.to_json()).expect("instance json");
    Ok(Report {
        body,
        code: EXIT_OK,
        raw: true,
    })
}

fn cmd_check(a: FileArgs) -> Result<Report, Error> {
    let inst = read_instance(&a.file)?;
    let support = support_multigraph(&inst);
    let root = inst.root_or_default();
    let h = build_hierarchy(&support.graph, root)?;
    let report = verify_cycle_cut_instance(&h);
    let body = json!({
        "valid": true,
        "n": inst.n(),
        "support_edges": inst.edges().len(),
        "multigraph_edges": support.graph.edge_count(),
        "lp_value": fmt(&lp_value(&inst)),
        "min_cut": global_min_cut_value(&support.graph)?,
        "root": root,
        "cycle_cut_instance": report.is_cycle_cut_instance,
        "degree_cuts": report.offenders,
    });
    let code = if report.is_cycle_cut_instance {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok(Report::with_code(body, code))
}

fn cmd_hierarchy(a: HierarchyArgs) -> Result<Report, Error> {
    let inst = read_instance(&a.file)?;
    let g = support_multigraph(&inst).graph;
    let root = a.root.or(inst.root()).unwrap_or(0);
    let h = build_hierarchy(&g, root)?;
    if let Some(path) = &a.dot {
        std::fs::write(path, h.to_dot())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    let report = verify_cycle_cut_instance(&h);
    let mut body = json!({
        "root": root,
        "nodes": to_value(&h.nodes),
        "cycle_cut_instance": report.is_cycle_cut_instance,
        "degree_cuts": report.offenders,
    });
    if !report.is_cycle_cut_instance {
        let e = Error::DegreeCutPresent {
            nodes: report.offenders,
        };
        eprintln!("error: {e}");
        body["error"] = json!({ "kind": e.kind(), "message": e.to_string() });
        return Ok(Report::with_code(body, EXIT_VIOLATION));
    }
    let frames = assign_frames(&h, &g, FrameOptions { reflect: a.reflect })?;
    body["frames"] = to_value(&frames.iter().collect::<Vec<_>>());
    body["shape"] = json!(hierarchy_shape(&h, &g)?);
    Ok(Report::ok(body))
}

fn pipeline(a: &PipelineArgs) -> Result<Pipeline, Error> {
    let inst = read_instance(&a.file)?;
    let p_root = match &a.p_root {
        // region membership is checked by the pipeline (RegionViolation at the top cut)
        Some(text) => StateDistribution::parse(text)?,
        None => StateDistribution::default_root(),
    };
    let opts = PipelineOptions {
        root: a.root,
        p_root,
        frames: FrameOptions { reflect: a.reflect },
    };
    Pipeline::new(&inst, &opts)
}

fn cmd_expect(a: PipelineArgs) -> Result<Report, Error> {
    let p = pipeline(&a)?;
    let g = p.graph();
    let usage = p.expected_usage();
    let two_thirds = rational::ratio(2, 3);

    let mut consistent = true;
    let mut cuts = Vec::new();
    for node in p.hierarchy.composite_nodes() {
        let info = p.plan.get(node.id).expect("planned");
        let edge_usage = info.distribution.edge_usage();
        consistent &= chain::region_contains(&info.distribution) && edge_usage == two_thirds;
        let params: serde_json::Map<String, Value> = info
            .selected
            .params
            .named()
            .into_iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        cuts.push(json!({
            "node": node.id,
            "members": node.members,
            "k": node.children.len(),
            "twist": to_value(&info.twist),
            "distribution": to_value(&info.distribution),
            "params": params,
            "alpha": info.selected.alpha.iter().map(fmt).collect::<Vec<_>>(),
            "edge_usage": fmt(&edge_usage),
        }));
    }
    let root_edges = &p.hierarchy.root_edges;
    for (e, u) in usage.iter().enumerate() {
        let closed_form = if root_edges.contains(&e) {
            rational::half()
        } else {
            two_thirds.clone()
        };
        consistent &= *u == closed_form;
    }
    let expected = p.expected_cost();
    let lp = lp_value(&p.instance);
    let bound = &lp * rational::ratio(4, 3);
    let ratio = if lp.is_zero() {
        None
    } else {
        Some(fmt(&(&expected / &lp)))
    };
    let within = expected <= bound;
    let body = json!({
        "root": p.hierarchy.root_vertex,
        "p_root": to_value(&p.p_root),
        "cuts": cuts,
        "edges": g.edges().iter().map(|e| json!({
            "id": e.id, "u": e.u, "v": e.v, "cost": fmt(&e.cost), "expected_multiplicity": fmt(&usage[e.id]),
        })).collect::<Vec<_>>(),
        "expected_cost": fmt(&expected),
        "lp_value": fmt(&lp),
        "bound": fmt(&bound),
        "ratio": ratio,
        "within_bound": within,
        "closed_forms_consistent": consistent,
    });
    let code = if within && consistent {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok(Report::with_code(body, code))
}

fn cmd_sample(a: SampleArgs) -> Result<Report, Error> {
    if a.samples == 0 {
        return Err(Error::Parse("--samples must be at least 1".into()));
    }
    let p = pipeline(&a.common)?;
    let report = usage_stats(&p, a.samples, a.seed, a.jobs)?;
    let code = if report.violations.total() == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok(Report::with_code(to_value(&report), code))
}

fn cmd_tour(a: TourArgs) -> Result<Report, Error> {
    let p = pipeline(&a.common)?;
    let t = p.sample_tour(a.seed)?;
    let inst = &p.instance;
    let opt = if inst.n() <= HELD_KARP_MAX_N {
        Some(fmt(&held_karp_opt(inst, &Metric::ShortestPath)?))
    } else {
        None
    };
    let body = json!({
        "seed": a.seed,
        "multiplicities": t.multiplicities.as_slice(),
        "walk": t.walk.vertices,
        "walk_edges": t.walk.edges,
        "cost": fmt(&t.cost),
        "lp_value": fmt(&lp_value(inst)),
        "held_karp_opt": opt,
    });
    Ok(Report::ok(body))
}

fn cmd_region(a: RegionArgs) -> Result<Report, Error> {
    if let Some(text) = &a.mode.check {
        let p = StateDistribution::parse(text)?;
        let inside = chain::region_contains(&p);
        let body = json!({
            "distribution": to_value(&p),
            "in_region": inside,
            "verdict": if inside { "in region" } else { "not in region" },
        });
        return Ok(Report::with_code(
            body,
            if inside { EXIT_OK } else { EXIT_VIOLATION },
        ));
    }
    if let Some(m) = a.mode.closure_samples {
        return Ok(region_closure(m, a.seed));
    }
    let text = a.mode.necessity.as_deref().expect("clap enforces one mode");
    let p = StateDistribution::parse(text)?;
    let cert = check_necessity(&p)?;
    let detail = match &cert {
        NecessityCertificate::InRegion => json!({ "kind": "in_region" }),
        NecessityCertificate::TwoStep { max_sum, corner } => json!({
            "kind": "two_step", "max_first_two": fmt(max_sum), "corner": corner.iter().map(fmt).collect::<Vec<_>>(),
        }),
        NecessityCertificate::OneStep { max_sum, corner } => json!({
            "kind": "one_step", "max_first_two": fmt(max_sum), "corner": corner.iter().map(fmt).collect::<Vec<_>>(),
        }),
        NecessityCertificate::ExcessUsage { usage } => {
            json!({ "kind": "excess_usage", "edge_usage": fmt(usage) })
        }
    };
    Ok(Report::ok(json!({
        "distribution": to_value(&p),
        "infeasible": cert.is_infeasible(),
        "certificate": detail,
    })))
}

fn region_closure(m: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<StateDistribution> = chain::region_vertices().to_vec();
    points.extend((0..m).map(|_| chain::random_region_point(&mut rng)));
    let odd_target =
        StateDistribution::from_ratios([(4, 9), (2, 9), (2, 9), (1, 9)]).expect("fixed point");
    let mut failures = Vec::new();
    for p in &points {
        let p4 = &p.0[3];
        let half = rational::half();
        let sixth = rational::ratio(1, 6);
        let even_target = StateDistribution([
            &half - p4 * &half,
            &sixth + p4 * &half,
            &sixth + p4 * &half,
            &sixth - p4 * &half,
        ]);
        let even_ok = chain::select_params(p, 2)
            .and_then(|s| s.params.step(p))
            .map(|q| {
                q == even_target
                    && chain::region_contains(&q)
                    && chain::region_contains(&chain::swap12(&q))
            })
            .unwrap_or(false);
        let odd_ok = chain::select_params(p, 3)
            .and_then(|s| s.params.step(p))
            .map(|q| {
                q == odd_target
                    && chain::region_contains(&q)
                    && chain::region_contains(&chain::swap12(&q))
            })
            .unwrap_or(false);
        if !(even_ok && odd_ok) {
            failures.push(to_value(p));
        }
    }
    let body = json!({
        "points": points.len(),
        "seed": seed,
        "failures": failures,
        "closed": failures.is_empty(),
    });
    let code = if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Report::with_code(body, code)
}

fn cmd_oracle(a: OracleArgs) -> Result<Report, Error> {
    let p = pipeline(&a.common)?;
    let g = p.graph();
    let outcomes = exact_outcome_distribution(&p, a.cap)?;
    let total: Rational = outcomes.iter().map(|o| &o.probability).sum();
    let mut usage = vec![Rational::zero(); g.edge_count()];
    let mut cost = Rational::zero();
    let mut all_valid = true;
    for o in &outcomes {
        for (u, &x) in usage.iter_mut().zip(o.multiplicities.as_slice()) {
            *u += &o.probability * rational::int(x as i64);
        }
        cost += &o.probability * o.multiplicities.cost(g);
        all_valid &=
            o.multiplicities.all_degrees_even(g) && is_connected_spanning(g, &o.multiplicities);
    }
    let matches_closed_form = usage == p.expected_usage();
    let lp = lp_value(&p.instance);
    let mut body = json!({
        "outcomes": outcomes.len(),
        "total_probability": fmt(&total),
        "all_valid": all_valid,
        "expected_multiplicity": usage.iter().map(fmt).collect::<Vec<_>>(),
        "matches_closed_form": matches_closed_form,
        "expected_cost": fmt(&cost),
        "lp_value": fmt(&lp),
        "within_bound": cost <= &lp * rational::ratio(4, 3),
    });
    if a.list {
        body["list"] = json!(outcomes
            .iter()
            .map(|o| json!({ "multiplicities": o.multiplicities.as_slice(), "probability": fmt(&o.probability) }))
            .collect::<Vec<_>>());
    }
    let ok = all_valid && matches_closed_form && total.is_one();
    Ok(Report::with_code(
        body,
        if ok { EXIT_OK } else { EXIT_VIOLATION },
    ))
}
