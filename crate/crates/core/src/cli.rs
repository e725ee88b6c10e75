//! The `drsys` command-line tool.
//!
//! Exit codes: 0 verified positive, 1 verified negative (with a witness or
//! certificate), 2 parse or I/O failure, 3 inconclusive or unverified map.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cstar::{
    block_decomposition, fixed_point_intersection, indicator_family, induced_star_iso,
    FiniteGroupoid, LegMap, TOLERANCE,
};
use crate::error::{Error, Result};
use crate::funcspace::{check_prop_sigma, parse_weights};
use crate::graph::{parse_graph, DirectedGraph};
use crate::groupoid::{intertwine_check, isotropy_interior_trivial, DegreePreservingIso};
use crate::homcheck::{check_conjugacy, Homeomorphism};
use crate::report::Report;
use crate::system::DRSystem;
use crate::transducer::Transducer;

#[derive(Debug, Parser)]
#[command(name = "drsys", version, about = "Conjugacy checks for shifts on boundary path spaces of finite graphs")]
pub struct Cli {
    /// Seed for all sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Print nothing on success.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verify {
    /// Fixed points of all weighted actions form the diagonal.
    Lemma39,
    /// A conjugacy induces a *-isomorphism intertwining weighted actions.
    Prop312,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Counts, Condition L, periodic point counts, domain and range of the shift.
    Invariants {
        graph: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_period: usize,
    },
    /// Decides whether a map is a conjugacy, or separates the graphs by invariants.
    CheckConjugacy {
        graph_e: PathBuf,
        graph_f: PathBuf,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        inverse: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Checks the cocycle intertwining relation on the groupoid generators.
    CocycleIntertwine {
        graph_e: PathBuf,
        graph_f: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        inverse: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Finite groupoid algebra checks on an acyclic graph.
    Cstar {
        graph: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum)]
        verify: Verify,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        inverse: Option<PathBuf>,
        #[arg(long)]
        graph_f: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let start = Instant::now();
    let mut report = Report::new(command_name(&cli.command), echo(&cli.command), cli.seed);
    if let Err(e) = execute(&cli, &mut report) {
        report.exit_code = exit_code_for(&e);
        report.summary = format!("error: {e}");
        report.result = json!({ "error": e.to_string() });
    }
    report.timing_ms = start.elapsed().as_millis() as u64;
    if let Some(path) = &cli.json {
        if let Err(e) = fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if report.exit_code == 2 {
        eprintln!("{}", report.summary);
    } else if !cli.quiet {
        println!("{}", report.summary);
    }
    report.exit_code
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::Dangling { .. }
        | Error::DuplicateId { .. }
        | Error::Literal { .. }
        | Error::NotComposable { .. }
        | Error::BadCycle
        | Error::NotASink { .. }
        | Error::Overlap { .. }
        | Error::GraphMismatch
        | Error::Io(_) => 2,
        Error::NotAcyclic { .. } | Error::NotConjugacy(_) => 1,
        _ => 3,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Invariants { .. } => "invariants",
        Command::CheckConjugacy { .. } => "check-conjugacy",
        Command::CocycleIntertwine { .. } => "cocycle-intertwine",
        Command::Cstar { .. } => "cstar",
    }
}

fn p(path: &Option<PathBuf>) -> Value {
    path.as_ref().map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn echo(c: &Command) -> Value {
    match c {
        Command::Invariants { graph, max_period } => {
            json!({ "graph": graph.display().to_string(), "max_period": max_period })
        }
        Command::CheckConjugacy { graph_e, graph_f, map, inverse, depth } => json!({
            "graph_e": graph_e.display().to_string(),
            "graph_f": graph_f.display().to_string(),
            "map": p(map),
            "inverse": p(inverse),
            "depth": depth,
        }),
        Command::CocycleIntertwine { graph_e, graph_f, map, inverse, depth } => json!({
            "graph_e": graph_e.display().to_string(),
            "graph_f": graph_f.display().to_string(),
            "map": map.display().to_string(),
            "inverse": p(inverse),
            "depth": depth,
        }),
        Command::Cstar { graph, weights, verify, map, inverse, graph_f, depth } => json!({
            "graph": graph.display().to_string(),
            "weights": p(weights),
            "verify": match verify { Verify::Lemma39 => "lemma39", Verify::Prop312 => "prop312" },
            "map": p(map),
            "inverse": p(inverse),
            "graph_f": p(graph_f),
            "depth": depth,
        }),
    }
}

fn read(report: &mut Report, role: &str, path: &Path) -> Result<String> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    report.input(role, &path.display().to_string(), &text);
    Ok(text)
}

fn load_graph(report: &mut Report, role: &str, path: &Path) -> Result<DirectedGraph> {
    parse_graph(&read(report, role, path)?)
}

/// The forward map and its inverse: read from a file, or inverted letter by
/// letter when the forward map is a relabeling.
fn load_pair(
    report: &mut Report,
    e: &DirectedGraph,
    f: &DirectedGraph,
    map: &Path,
    inverse: Option<&PathBuf>,
) -> Result<(Transducer, Transducer)> {
    let t = Transducer::parse(&read(report, "map", map)?, e, f)?;
    let u = match inverse {
        Some(path) => Transducer::parse(&read(report, "inverse", path)?, f, e)?,
        None => t.invert_letterwise().ok_or_else(|| {
            Error::Unverified("no inverse given and the map is not a letter relabeling".into())
        })?,
    };
    Ok((t, u))
}

fn execute(cli: &Cli, report: &mut Report) -> Result<()> {
    match &cli.command {
        Command::Invariants { graph, max_period } => {
            let g = load_graph(report, "graph", graph)?;
            invariants(report, g, *max_period)
        }
        Command::CheckConjugacy { graph_e, graph_f, map, inverse, depth } => {
            let e = load_graph(report, "graph_e", graph_e)?;
            let f = load_graph(report, "graph_f", graph_f)?;
            match map {
                Some(m) => {
                    let (t, u) = load_pair(report, &e, &f, m, inverse.as_ref())?;
                    conjugacy_with_map(report, t, u, *depth, cli.seed)
                }
                None => conjugacy_by_invariants(report, &e, &f),
            }
        }
        Command::CocycleIntertwine { graph_e, graph_f, map, inverse, depth } => {
            let e = load_graph(report, "graph_e", graph_e)?;
            let f = load_graph(report, "graph_f", graph_f)?;
            let (t, u) = load_pair(report, &e, &f, map, inverse.as_ref())?;
            let iso = DegreePreservingIso::new(Homeomorphism::new(t, u)?)?;
            let r = intertwine_check(&iso, *depth)?;
            report.exit_code = if r.ok { 0 } else { 1 };
            report.summary = match &r.witness_g {
                None => format!("intertwining holds for all weights up to depth {depth} (lag {})", r.lag),
                Some(g) => format!(
                    "intertwining fails for `{g}` on `{}`",
                    r.witness_cylinder.clone().unwrap_or_default()
                ),
            };
            report.result = json!({ "intertwine": r, "inverse_lag": iso.inverse_lag() });
            Ok(())
        }
        Command::Cstar { graph, weights, verify, map, inverse, graph_f, depth } => {
            let e = load_graph(report, "graph", graph)?;
            match verify {
                Verify::Lemma39 => {
                    let ws = match weights {
                        Some(path) => {
                            let text = read(report, "weights", path)?;
                            Some(parse_weights(&e, &text)?.into_iter().map(|(_, w)| w).collect())
                        }
                        None => None,
                    };
                    lemma39(report, e, ws, cli.seed)
                }
                Verify::Prop312 => {
                    let (Some(fp), Some(m)) = (graph_f, map) else {
                        return Err(Error::Io("prop312 needs --graph-f and --map".into()));
                    };
                    let f = load_graph(report, "graph_f", fp)?;
                    for g in [&e, &f] {
                        if let Some(v) = g.vertex_on_cycle() {
                            return Err(Error::NotAcyclic { vertex: g.vertex_name(v).to_string() });
                        }
                    }
                    let (t, u) = load_pair(report, &e, &f, m, inverse.as_ref())?;
                    prop312(report, Homeomorphism::new(t, u)?, *depth, cli.seed)
                }
            }
        }
    }
}

fn invariants(report: &mut Report, g: DirectedGraph, max_period: usize) -> Result<()> {
    let sys = DRSystem::new(g);
    let g = sys.graph();
    let counts: Vec<Value> = (1..=max_period)
        .map(|p| sys.periodic_count(p).map_or(Value::Null, |c| json!(c)))
        .collect();
    let iso = isotropy_interior_trivial(&sys)?;
    let sinks: Vec<&str> = g.sinks().into_iter().map(|v| g.vertex_name(v)).collect();
    let lits = |cs: Vec<crate::graph::Cylinder>| -> Vec<String> {
        cs.iter().map(|c| g.path_literal(c.base())).collect()
    };
    report.summary = format!(
        "{} vertices, {} edges, {} sinks, condition L {}, periodic counts {}",
        g.vertex_count(),
        g.edge_count(),
        sinks.len(),
        if sys.is_topologically_free() { "holds" } else { "fails" },
        serde_json::to_string(&counts).expect("json"),
    );
    report.result = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "sinks": sinks.len(),
        "sink_names": sinks,
        "condition_l": sys.is_topologically_free(),
        "exitless_cycle": sys.exitless_cycle().map(|c| g.path_literal(&c)),
        "max_period": max_period,
        "periodic_counts": counts,
        "dom_cylinders": lits(sys.dom_cylinders()),
        "ran_cylinders": lits(sys.ran_cylinders()),
        "isotropy": iso,
    });
    Ok(())
}

const CERTIFICATE_PERIODS: usize = 6;

fn conjugacy_by_invariants(report: &mut Report, e: &DirectedGraph, f: &DirectedGraph) -> Result<()> {
    let (se, sf) = (DRSystem::new(e.clone()), DRSystem::new(f.clone()));
    let mut certificate = Value::Null;
    if e.sinks().len() != f.sinks().len() {
        certificate = json!({ "kind": "sink_count", "source": e.sinks().len(), "target": f.sinks().len() });
    } else {
        for p in 1..=CERTIFICATE_PERIODS {
            let (a, b) = (se.periodic_count(p)?, sf.periodic_count(p)?);
            if a != b {
                certificate = json!({ "kind": "periodic_count", "p": p, "source": a, "target": b });
                break;
            }
        }
    }
    if certificate.is_null() {
        report.exit_code = 3;
        report.summary = format!(
            "inconclusive: no map given; sink counts and periodic counts up to {CERTIFICATE_PERIODS} agree"
        );
    } else {
        report.exit_code = 1;
        report.summary = format!("not conjugate: {certificate}");
    }
    report.result = json!({ "is_conjugacy": if certificate.is_null() { Value::Null } else { json!(false) },
                            "certificate": certificate,
                            "periods_checked": CERTIFICATE_PERIODS });
    Ok(())
}

fn conjugacy_with_map(
    report: &mut Report,
    t: Transducer,
    u: Transducer,
    depth: usize,
    seed: u64,
) -> Result<()> {
    let verdict = check_conjugacy(&t, &u, depth, seed)?;
    if !verdict.is_homeomorphism {
        report.exit_code = 3;
        report.summary = format!(
            "unverified: {}",
            verdict.homeomorphism_failure.clone().unwrap_or_default()
        );
        report.result = json!({ "verdict": verdict });
        return Ok(());
    }
    let h = Homeomorphism::new(t, u)?;
    let sigma = check_prop_sigma(&h, depth)?;
    let operator_route = sigma.cond_upper && sigma.cond_lower;
    let agree = verdict.routes_agree && operator_route == verdict.is_conjugacy;
    report.exit_code = match (agree, verdict.is_conjugacy) {
        (false, _) => 3,
        (true, true) => 0,
        (true, false) => 1,
    };
    report.summary = if !agree {
        "inconclusive: the routes disagree".to_string()
    } else if verdict.is_conjugacy {
        format!("conjugacy (verified with {} product configurations)", h.certificate())
    } else {
        format!(
            "not a conjugacy: {:?} fails at {}",
            verdict.failing_condition.expect("negative verdict names a condition"),
            verdict.witness.clone().unwrap_or_default()
        )
    };
    report.result = json!({
        "verdict": verdict,
        "operator_route": sigma,
        "all_routes_agree": agree,
    });
    Ok(())
}

fn lemma39(
    report: &mut Report,
    e: DirectedGraph,
    weights: Option<Vec<crate::groupoid::IntegerWeight>>,
    seed: u64,
) -> Result<()> {
    let sys = DRSystem::new(e);
    let gr = FiniteGroupoid::build(&sys)?;
    let longest = sys.graph().longest_path().expect("acyclic");
    let from_file = weights.is_some();
    let weights = weights.unwrap_or_else(|| indicator_family(sys.graph(), longest));
    let blocks = block_decomposition(&gr)?;
    let fixed = fixed_point_intersection(&gr, &weights, seed)?;
    let ok = fixed.is_diagonal && fixed.numeric_agrees && fixed.max_residual < TOLERANCE;
    report.exit_code = if ok { 0 } else { 1 };
    report.summary = format!(
        "fixed points have dimension {} of {}; diagonal: {}; residual {:.1e}",
        fixed.dimension, fixed.algebra_dimension, fixed.is_diagonal, fixed.max_residual
    );
    report.result = json!({
        "weights_source": if from_file { "file" } else { "indicator_family" },
        "indicator_depth": if from_file { Value::Null } else { json!(longest) },
        "algebra_dimension": gr.len(),
        "blocks": blocks,
        "fixed_points": fixed,
    });
    Ok(())
}

fn prop312(report: &mut Report, h: Homeomorphism, depth: usize, seed: u64) -> Result<()> {
    match induced_star_iso(h.clone(), depth, seed) {
        Ok(phi) => {
            let star = phi.check_star_iso(seed)?;
            let tw = phi.verify_intertwining(depth, seed)?;
            let ok = star.ok() && tw.ok;
            report.exit_code = if ok { 0 } else { 1 };
            report.summary = format!(
                "*-isomorphism: {}; intertwining: {} (residual {:.1e})",
                star.ok(),
                tw.ok,
                tw.max_residual
            );
            report.result = json!({
                "conjugacy": true,
                "algebra_dimension": phi.source().len(),
                "star_isomorphism": star,
                "intertwining": tw,
            });
        }
        Err(Error::NotConjugacy(reason)) => {
            let legs = LegMap::new(h)?;
            let tw = legs.verify_intertwining(depth, seed)?;
            report.exit_code = 1;
            report.summary = format!(
                "not a conjugacy ({reason}); the leg map violates intertwining by {:.3}",
                tw.max_residual
            );
            report.result = json!({
                "conjugacy": false,
                "reason": reason,
                "leg_map_intertwining": tw,
            });
        }
        Err(e) => return Err(e),
    }
    Ok(())
}
