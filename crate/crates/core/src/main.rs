use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ktree_lab::asymptotics::{clustering_constant_closed_form, clustering_series};
use ktree_lab::harness::{
    self, compare, distance_experiment, geometric_ladder, mc_distribution, reference_table, selfcheck, Backend,
    ExperimentConfig, Formula, KvConfig, RunSummary,
};
use ktree_lab::metrics::{metrics_csv, GraphView};
use ktree_lab::oracle::{
    exact_empirical_distribution, recur_descendants, recur_outdegree, recur_root_outdegree, DEFAULT_ENUMERATION_CAP,
};
use ktree_lab::schedule::Schedule;
use ktree_lab::table::{NodeSelector, Parameter};
use ktree_lab::tree::format::{deserialize, format_trace, serialize};
use ktree_lab::{evolve, Error};

const AFTER_HELP: &str = "\
Every subcommand writes its data (CSV unless noted) to --output or stdout and a
JSON run summary {command, run_id, config, wall_clock_seconds, status, results}
to --summary or stderr. --config FILE reads `key = value` lines naming the
subcommand's long flags; flags given on the command line win.

Exit codes: 0 success, 1 usage or invalid input, 2 a check failed.";

#[derive(Parser)]
#[command(name = "ktree", version, about = "Random ordered increasing k-trees: simulation, exact laws, checks")]
#[command(after_help = AFTER_HELP, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize)]
struct Common {
    /// Data output file (default: stdout).
    #[arg(long, short, global = true)]
    #[serde(skip)]
    output: Option<PathBuf>,
    /// JSON run summary file (default: stderr).
    #[arg(long, global = true)]
    #[serde(skip)]
    summary: Option<PathBuf>,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Grow one random tree. Output: the tree text format, or with --trace the
    /// insertion trace (`trace k=<k>` then the slot choices).
    Generate(GenerateArgs),
    /// Per-node metrics of a tree. CSV columns:
    /// label,outdeg,deg,clustering_num,clustering_den,descendants,dist01,distK0
    Metrics(MetricsArgs),
    /// Closed-form pmf. CSV columns: m,prob_num,prob_den,prob_float
    /// (exact backend) or m,prob (float backend).
    Exact(ExactArgs),
    /// Exact pmf from the counting recurrences or by enumerating every tree.
    /// CSV columns: m,prob_num,prob_den,prob_float
    Oracle(OracleArgs),
    /// Monte Carlo distribution of a node parameter. CSV columns: m,count,freq
    Mc(McArgs),
    /// Root distances over a geometric ladder of sizes. CSV columns:
    /// n,ln_n,mean,variance,bar_mean,bar_variance
    Distance(DistanceArgs),
    /// Limiting mean clustering coefficient. CSV columns:
    /// k,value,tail_bound,terms,closed_form
    ClusteringConstant(ClusteringArgs),
    /// Exact/recurrence/enumeration identities at small sizes. CSV columns:
    /// name,passed,detail
    Selfcheck(SelfcheckArgs),
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit the insertion trace instead of the tree.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

#[derive(Args, Serialize)]
struct MetricsArgs {
    /// Tree file in the text format; otherwise a tree is grown from --k, --n, --seed.
    #[arg(long, conflicts_with_all = ["k", "n"])]
    input: Option<PathBuf>,
    #[arg(long, required_unless_present = "input")]
    k: Option<usize>,
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

#[derive(Args, Serialize)]
struct ExactArgs {
    /// Distribution: 1 out-degree of node j, 2 out-degree of the root,
    /// 3 out-degree of a random node, 5 descendants of node j,
    /// 6 descendants of a random node.
    #[arg(long)]
    thm: u32,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: u64,
    /// Node label, for selectors 1 and 5.
    #[arg(long)]
    j: Option<u64>,
    /// exact or float.
    #[arg(long, default_value = "exact")]
    backend: Backend,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
enum OracleMethod {
    Recurrence,
    Enumeration,
}

#[derive(Args, Serialize)]
struct OracleArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// outdegree, descendants, dist01 or distK0 (the last two by enumeration only).
    #[arg(long, default_value = "outdegree")]
    parameter: Parameter,
    /// A label j >= 1, root, random or last.
    #[arg(long, default_value = "1")]
    node: NodeSelector,
    #[arg(long, value_enum, default_value = "recurrence")]
    method: OracleMethod,
    /// Maximum number of trees to enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

#[derive(Args, Serialize)]
struct McArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// outdegree, descendants, clustering, dist01 or distK0.
    #[arg(long, default_value = "outdegree")]
    parameter: Parameter,
    /// A label j >= 1, root, random or last.
    #[arg(long, default_value = "random")]
    node: NodeSelector,
    #[arg(long, default_value_t = 10_000)]
    replicates: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// serial or parallel; both give identical output.
    #[arg(long, default_value = "parallel")]
    schedule: Schedule,
    /// Compare against the closed-form pmf and fail (exit 2) below --alpha.
    #[arg(long)]
    compare: bool,
    /// Chi-square significance level for --compare.
    #[arg(long, default_value_t = 1e-4)]
    alpha: f64,
    /// Backend of the closed-form reference.
    #[arg(long, default_value = "float")]
    backend: Backend,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

#[derive(Args, Serialize)]
struct DistanceArgs {
    #[arg(long)]
    k: usize,
    /// Smallest size is 2^from-exp.
    #[arg(long, default_value_t = 10)]
    from_exp: u32,
    /// Largest size is 2^to-exp.
    #[arg(long, default_value_t = 17)]
    to_exp: u32,
    #[arg(long, default_value_t = 10_000)]
    replicates: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "parallel")]
    schedule: Schedule,
    /// Fail (exit 2) when a slope is off by more than --slope-tol (relative)
    /// or a KS statistic exceeds --ks-max.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = 0.1)]
    slope_tol: f64,
    #[arg(long, default_value_t = 0.03)]
    ks_max: f64,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

#[derive(Args, Serialize)]
struct ClusteringArgs {
    #[arg(long)]
    k: usize,
    /// Bound on the neglected tail of the series.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

#[derive(Args, Serialize)]
struct SelfcheckArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    /// Sizes with more trees than this are skipped.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    #[arg(long, default_value = "parallel")]
    schedule: Schedule,
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
}

/// What a subcommand produced.
struct Outcome {
    data: String,
    results: Value,
    passed: bool,
}

impl Outcome {
    fn ok(data: String, results: Value) -> Self {
        Self {
            data,
            results,
            passed: true,
        }
    }
}

fn formula_for(parameter: Parameter, node: NodeSelector, n: usize) -> Option<(Formula, Option<u64>)> {
    let fixed = |j: u32| Some(j as u64);
    match (parameter, node) {
        (Parameter::Outdegree, NodeSelector::Fixed(j)) => Some((Formula::Outdegree, fixed(j))),
        (Parameter::Outdegree, NodeSelector::Last) => Some((Formula::Outdegree, Some(n as u64))),
        (Parameter::Outdegree, NodeSelector::Root) => Some((Formula::RootOutdegree, None)),
        (Parameter::Outdegree, NodeSelector::Random) => Some((Formula::RandomOutdegree, None)),
        (Parameter::Descendants, NodeSelector::Fixed(j)) => Some((Formula::Descendants, fixed(j))),
        (Parameter::Descendants, NodeSelector::Last) => Some((Formula::Descendants, Some(n as u64))),
        (Parameter::Descendants, NodeSelector::Random) => Some((Formula::RandomDescendants, None)),
        _ => None,
    }
}

fn run_generate(a: &GenerateArgs) -> ktree_lab::Result<Outcome> {
    let (tree, trace) = evolve(a.k, a.n, a.seed)?;
    let data = if a.trace { format_trace(&trace) } else { serialize(&tree) };
    Ok(Outcome::ok(data, json!({"nodes": tree.node_count(), "edges": tree.edge_count()})))
}

fn run_metrics(a: &MetricsArgs) -> ktree_lab::Result<Outcome> {
    let tree = match &a.input {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
            deserialize(&text)?
        }
        None => evolve(a.k.unwrap_or(0), a.n.unwrap_or(0), a.seed)?.0,
    };
    let rows = GraphView::new(&tree).all();
    Ok(Outcome::ok(metrics_csv(&rows), json!({"k": tree.k(), "n": tree.size()})))
}

fn run_exact(a: &ExactArgs) -> ktree_lab::Result<Outcome> {
    let formula = Formula::from_number(a.thm)?;
    let (data, total) = match a.backend {
        Backend::Exact => {
            let t = harness::exact_table(formula, a.k, a.n, a.j)?;
            (t.to_csv(), t.total().to_string())
        }
        Backend::Float => {
            let t = harness::float_table(formula, a.k, a.n, a.j)?;
            (t.to_csv(), t.total().to_string())
        }
    };
    Ok(Outcome::ok(data, json!({"distribution": formula, "total": total})))
}

fn run_oracle(a: &OracleArgs) -> ktree_lab::Result<Outcome> {
    let n = a.n as u64;
    let table = match a.method {
        OracleMethod::Enumeration => exact_empirical_distribution(a.k, a.n, a.parameter, a.node, a.cap)?,
        OracleMethod::Recurrence => {
            let node = if a.node == NodeSelector::Last { NodeSelector::Fixed(a.n as u32) } else { a.node };
            let counts = match (a.parameter, node) {
                (Parameter::Outdegree, NodeSelector::Fixed(j)) => recur_outdegree(a.k, n, j as u64)?,
                (Parameter::Outdegree, NodeSelector::Root) => recur_root_outdegree(a.k, n)?,
                (Parameter::Descendants, NodeSelector::Fixed(j)) => recur_descendants(a.k, n, j as u64)?,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "no recurrence for {} at node {}; use --method enumeration",
                        a.parameter, a.node
                    )))
                }
            };
            counts.to_pmf(a.parameter, node)
        }
    };
    Ok(Outcome::ok(table.to_csv(), json!({"total": table.total().to_string()})))
}

fn run_mc(a: &McArgs) -> ktree_lab::Result<Outcome> {
    let config = ExperimentConfig {
        backend: a.backend,
        ..ExperimentConfig::new(a.k, a.n, a.parameter, a.node)
            .replicates(a.replicates)
            .seed(a.seed)
            .schedule(a.schedule)
    };
    if a.parameter == Parameter::Clustering {
        if a.compare {
            return Err(Error::InvalidParameter("no closed form to compare clustering against".into()));
        }
        let t = harness::mc_clustering(&config)?;
        return Ok(Outcome::ok(t.to_csv(), json!({"sample_size": t.sample_size()})));
    }
    let t = mc_distribution(&config)?;
    let mut results = json!({"sample_size": t.sample_size(), "mean": t.mean()});
    let mut passed = true;
    if a.compare {
        let (formula, j) = formula_for(a.parameter, a.node, a.n).ok_or_else(|| {
            Error::InvalidParameter(format!("no closed form for {} at node {}", a.parameter, a.node))
        })?;
        let reference = reference_table(formula, a.k, a.n as u64, j, a.backend)?;
        let report = compare(&t, &reference)?;
        passed = report.p_value >= a.alpha;
        results["comparison"] = serde_json::to_value(&report).expect("plain data");
    }
    Ok(Outcome {
        data: t.to_csv(),
        results,
        passed,
    })
}

fn run_distance(a: &DistanceArgs) -> ktree_lab::Result<Outcome> {
    if a.from_exp >= a.to_exp || a.to_exp > 30 {
        return Err(Error::InvalidParameter("need from-exp < to-exp <= 30".into()));
    }
    let ladder = geometric_ladder(a.from_exp, a.to_exp);
    let report = distance_experiment(a.k, &ladder, a.replicates, a.seed, a.schedule)?;
    let errors = report.relative_errors();
    let passed =
        !a.check || (errors.iter().all(|&e| e <= a.slope_tol) && report.ks <= a.ks_max && report.bar_ks <= a.ks_max);
    let mut results = serde_json::to_value(&report).expect("plain data");
    results["relative_errors"] = json!(errors);
    Ok(Outcome {
        data: report.to_csv(),
        results,
        passed,
    })
}

fn run_clustering(a: &ClusteringArgs) -> ktree_lab::Result<Outcome> {
    let s = clustering_series(a.k, a.tol)?;
    let closed = clustering_constant_closed_form(a.k)?;
    let data = format!("k,value,tail_bound,terms,closed_form\n{},{:.12},{:e},{},{:.12}\n", a.k, s.value, s.tail_bound, s.terms, closed);
    Ok(Outcome::ok(data, json!({"series": s, "closed_form": closed})))
}

fn run_selfcheck(a: &SelfcheckArgs) -> ktree_lab::Result<Outcome> {
    let results = selfcheck(a.k, a.max_n, a.cap, a.schedule)?;
    let mut data = String::from("name,passed,detail\n");
    for r in &results {
        data.push_str(&format!("{},{},\"{}\"\n", r.name, r.passed, r.detail.replace('"', "'")));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    Ok(Outcome {
        data,
        results: json!({"checks": results.len(), "failed": failed}),
        passed: failed == 0,
    })
}

/// Splice `--config` file entries in front of the command-line flags.
fn expand_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let pos = args.iter().position(|a| a == "--config" || a.starts_with("--config="));
    let Some(pos) = pos else { return Ok(args) };
    let path = match args[pos].split_once('=') {
        Some((_, p)) => p.to_string(),
        None => args.get(pos + 1).cloned().ok_or("--config needs a file")?,
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let cfg = KvConfig::parse(&text).map_err(|e| format!("{path}: {e}"))?;
    let mut flags = Vec::new();
    for key in cfg.keys() {
        match cfg.raw(key).unwrap_or("") {
            "true" => flags.push(format!("--{key}")),
            "false" => {}
            v => flags.push(format!("--{key}={v}")),
        }
    }
    // after the subcommand name, which is the first non-flag argument
    let sub = args.iter().skip(1).position(|a| !a.starts_with('-')).map_or(1, |i| i + 2);
    let mut out = args[..sub.min(args.len())].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[sub.min(args.len())..]);
    Ok(out)
}

fn echo<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("plain data")
}

fn write_to(path: Option<&PathBuf>, text: &str, stderr: bool) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None if stderr => writeln!(std::io::stderr(), "{text}"),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let start = Instant::now();
    let (name, config, common, outcome) = match &cli.command {
        Command::Generate(a) => ("generate", echo(a), &a.common, run_generate(a)),
        Command::Metrics(a) => ("metrics", echo(a), &a.common, run_metrics(a)),
        Command::Exact(a) => ("exact", echo(a), &a.common, run_exact(a)),
        Command::Oracle(a) => ("oracle", echo(a), &a.common, run_oracle(a)),
        Command::Mc(a) => ("mc", echo(a), &a.common, run_mc(a)),
        Command::Distance(a) => ("distance", echo(a), &a.common, run_distance(a)),
        Command::ClusteringConstant(a) => ("clustering-constant", echo(a), &a.common, run_clustering(a)),
        Command::Selfcheck(a) => ("selfcheck", echo(a), &a.common, run_selfcheck(a)),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_to(common.output.as_ref(), &outcome.data, false) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    let summary = RunSummary {
        command: name.into(),
        run_id: harness::run_id(name, &config),
        config,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        status: if outcome.passed { "pass" } else { "fail" }.into(),
        results: outcome.results,
    };
    let text = serde_json::to_string_pretty(&summary).expect("plain data");
    if let Err(e) = write_to(common.summary.as_ref(), &text, true) {
        eprintln!("error: writing summary: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(if outcome.passed { 0 } else { 2 })
}
