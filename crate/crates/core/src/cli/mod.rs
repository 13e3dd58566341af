//! The `edgeshap` command line.
//!
//! Exit codes: 0 success, 2 regression or fairness mismatch, 64 usage error
//! (bad flags, method incompatible with the model, game too large), 65 input
//! error (unreadable scenario, unknown node or edge), 70 anything else.

pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::edge::{component_efficiency_check, fairness_delta, EdgeCharacteristic, EdgeGame};
use crate::error::Error;
use crate::game::{axiom_check, Axiom, ShapleyEngine, APPROX_TOLERANCE, DEFAULT_MAX_PLAYERS};
use crate::scenario::{fixtures, AnyAllocation, AnyEdgeGame, Scenario};
use crate::solve::{solve, Method, SolveOptions, Solution};
use crate::worth::Worth;
use report::{entries, render_checks, sig6, total_entry, AllocationEntry, CheckEntry, RunReport, Status, ValueEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Parser)]
#[command(name = "edgeshap", version, about = "Edge-based Shapley allocations for cooperative games on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Scenario JSON file.
    #[arg(long, value_name = "PATH", required_unless_present = "fixture", conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Name of a bundled scenario instead of a file.
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Worker threads; output is identical for any value.
    #[arg(long, value_name = "K")]
    threads: Option<usize>,
    /// Largest player count accepted for exact enumeration.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_PLAYERS)]
    max_players: usize,
}

#[derive(Debug, Args)]
struct MethodArgs {
    /// edge_shapley, edge_shapley_pruned, myerson, shapley, closed_form or sampled.
    #[arg(long, value_name = "M", default_value = "edge_shapley", value_parser = parse_method)]
    method: Method,
    /// Permutations drawn by the sampled method.
    #[arg(long, value_name = "N", default_value_t = 100_000)]
    samples: usize,
    /// Seed for the sampled method.
    #[arg(long, value_name = "S", default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute an allocation.
    Compute {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Exit with status 2 when the scenario's expected vector is not reproduced.
        #[arg(long)]
        check_expected: bool,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Compare allocations before and after removing a node or an edge.
    Whatif {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_name = "U", conflicts_with = "remove_edge", required_unless_present = "remove_edge")]
        remove_node: Option<String>,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        remove_edge: Option<Vec<String>>,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Check efficiency, symmetry, null-player, fairness, and component efficiency.
    Axioms {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// List bundled scenarios, or print one.
    Fixtures {
        #[arg(long, value_name = "NAME")]
        show: Option<String>,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::Scenario(_) | Error::TooManyNodes(_) => EXIT_DATA,
            Error::UnknownNode(_) | Error::UnknownEdge(..) => EXIT_DATA,
            Error::Capacity { .. } | Error::InvalidArgument(_) | Error::InvalidRoute(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok((text, target, code)) => match target {
            Some(path) => match std::fs::write(&path, text) {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    EXIT_INTERNAL
                }
            },
            None => {
                let _ = out.write_all(text.as_bytes());
                code
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

type Dispatched = (String, Option<PathBuf>, i32);

fn dispatch(command: Command) -> Result<Dispatched, Failure> {
    match command {
        Command::Compute {
            input,
            method,
            output,
            engine,
            check_expected,
            timing,
        } => {
            let scenario = load(&input)?;
            let (report, code) = cmd_compute(&scenario, &method, &engine, check_expected, timing)?;
            let text = match output.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
                Format::Table => report.to_table(),
            };
            Ok((text, output.output, code))
        }
        Command::Whatif {
            input,
            remove_node,
            remove_edge,
            method,
            output,
            engine,
        } => {
            let scenario = load(&input)?;
            let target = match (remove_node, remove_edge) {
                (Some(u), _) => Removal::Node(u),
                (None, Some(pair)) => Removal::Edge(pair[0].clone(), pair[1].clone()),
                (None, None) => unreachable!("clap requires one removal"),
            };
            let (report, code) = cmd_whatif(&scenario, &target, &method, &engine)?;
            let text = match output.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
                Format::Table => report.to_table(),
            };
            Ok((text, output.output, code))
        }
        Command::Axioms { input, output, engine } => {
            let scenario = load(&input)?;
            let report = cmd_axioms(&scenario, &engine)?;
            let code = if report.all_pass() { EXIT_OK } else { EXIT_MISMATCH };
            let text = match output.format {
                Format::Json | Format::Csv => report.to_json(),
                Format::Table => report.to_table(),
            };
            Ok((text, output.output, code))
        }
        Command::Fixtures { show } => {
            let text = match show {
                Some(name) => fixtures::source(&name)
                    .map(|t| t.to_string())
                    .ok_or_else(|| Failure::from(Error::Scenario(format!("no bundled fixture named `{name}`"))))?,
                None => fixtures::names().map(|n| format!("{n}\n")).collect(),
            };
            Ok((text, None, EXIT_OK))
        }
    }
}

fn load(input: &InputArgs) -> Result<Scenario, Failure> {
    let loaded = match (&input.input, &input.fixture) {
        (Some(path), _) => Scenario::load(path),
        (None, Some(name)) => fixtures::load(name),
        (None, None) => unreachable!("clap requires an input"),
    };
    loaded.map_err(|e| Failure {
        code: EXIT_DATA,
        message: e.to_string(),
    })
}

fn engine_from(args: &EngineArgs) -> ShapleyEngine {
    ShapleyEngine::new()
        .with_max_players(args.max_players)
        .with_threads(args.threads)
}

fn options_from(method: &MethodArgs, engine: &EngineArgs) -> Result<SolveOptions, Failure> {
    if method.samples == 0 {
        return Err(Error::InvalidArgument("--samples must be positive".into()).into());
    }
    Ok(SolveOptions {
        engine: engine_from(engine),
        samples: method.samples,
        seed: method.seed,
    })
}

fn run_report(scenario: &Scenario, solution: &Solution, options: &SolveOptions) -> RunReport {
    let sampled = solution.method == Method::Sampled;
    let grand = solution.grand_worth.exact_strings().map(|v| v[0].clone()).unwrap_or_else(|| {
        solution.grand_worth.to_f64()[0].render()
    });
    let mut checks = vec![CheckEntry::new(
        "efficiency",
        Status::from_bool(solution.efficient()),
        format!("sum = {}, grand worth = {grand}", solution.allocation.total_string()),
    )];
    if let Some(stats) = solution.prune_stats {
        checks.push(CheckEntry::new(
            "pruning",
            Status::Info,
            format!("{} of {} marginals evaluated", stats.evaluated, stats.full),
        ));
    }
    RunReport {
        scenario: scenario.name().to_string(),
        method: solution.method.to_string(),
        domain: solution.allocation.domain().to_string(),
        samples: sampled.then_some(options.samples),
        seed: sampled.then_some(options.seed),
        allocations: entries(&scenario.graph, &solution.allocation),
        total: total_entry(&solution.allocation),
        checks,
        elapsed_ms: None,
    }
}

fn cmd_compute(
    scenario: &Scenario,
    method: &MethodArgs,
    engine: &EngineArgs,
    check_expected: bool,
    timing: bool,
) -> Result<(RunReport, i32), Failure> {
    let options = options_from(method, engine)?;
    let started = Instant::now();
    let solution = solve(scenario, method.method, &options)?;
    let elapsed = started.elapsed();
    let mut report = run_report(scenario, &solution, &options);
    if timing {
        report.elapsed_ms = Some(elapsed.as_secs_f64() * 1e3);
    }

    let mut code = EXIT_OK;
    if scenario.expected.is_some() {
        let entry = if !scenario.metadata.verifiable {
            CheckEntry::new("expected", Status::Skip, "expected vector is not reproducible from this document")
        } else {
            let reg = scenario
                .check_expected(&solution.allocation)
                .expect("expected vector present");
            if check_expected && !reg.passed {
                code = EXIT_MISMATCH;
            }
            let mut entry = CheckEntry::new(
                "expected",
                Status::from_bool(reg.passed),
                format!("max abs error {}", sig6(reg.max_abs_error)),
            );
            entry.witnesses = reg.mismatched;
            entry
        };
        report.checks.push(entry);
    }
    Ok((report, code))
}

enum Removal {
    Node(String),
    Edge(String, String),
}

#[derive(Debug, Serialize)]
struct WhatifReport {
    removed: String,
    baseline: RunReport,
    modified: RunReport,
    deltas: Vec<AllocationEntry>,
    checks: Vec<CheckEntry>,
}

impl WhatifReport {
    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    fn to_csv(&self) -> String {
        let mut s = String::from("node,value\n");
        for e in &self.deltas {
            let _ = writeln!(s, "{},{}", e.node, report::csv_value(&e.value));
        }
        s
    }

    fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario: {}", self.baseline.scenario);
        let _ = writeln!(s, "method:   {} ({})", self.baseline.method, self.baseline.domain);
        let _ = writeln!(s, "removed:  {}", self.removed);
        let width = self.deltas.iter().map(|e| e.node.len()).max().unwrap_or(4).max(4);
        let _ = writeln!(s, "{:<width$}  {:>12}  {:>12}  {:>12}", "node", "baseline", "modified", "delta");
        for d in &self.deltas {
            let base = self.baseline.allocations.iter().find(|e| e.node == d.node);
            let modified = self.modified.allocations.iter().find(|e| e.node == d.node);
            let fmt = |e: Option<&AllocationEntry>| e.map(|e| sig6(e.value.decimal)).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "{:<width$}  {:>12}  {:>12}  {:>12}",
                d.node,
                fmt(base),
                fmt(modified),
                sig6(d.value.decimal)
            );
        }
        render_checks(&mut s, &self.checks);
        s
    }
}

fn cmd_whatif(
    scenario: &Scenario,
    target: &Removal,
    method: &MethodArgs,
    engine: &EngineArgs,
) -> Result<(WhatifReport, i32), Failure> {
    let options = options_from(method, engine)?;
    let (modified_scenario, removed) = match target {
        Removal::Node(u) => (scenario.remove_node(u)?, format!("node {u}")),
        Removal::Edge(a, b) => (scenario.remove_edge(a, b)?, format!("edge ({a}, {b})")),
    };
    let base = solve(scenario, method.method, &options)?;
    let modified = solve(&modified_scenario, method.method, &options)?;

    // Align the modified allocation to the baseline node order.
    let base_labels: Vec<&str> = scenario.graph.nodes().iter().map(|n| n.as_str()).collect();
    let aligned: Vec<Option<usize>> = base_labels
        .iter()
        .map(|l| modified_scenario.graph.index_of(l).ok())
        .collect();
    let deltas = aligned_deltas(&base.allocation, &modified.allocation, &aligned);
    let delta_entries: Vec<AllocationEntry> = entries(&scenario.graph, &deltas);

    let mut checks = Vec::new();
    let mut code = EXIT_OK;
    if let Removal::Edge(a, b) = target {
        let (ia, ib) = (scenario.graph.index_of(a)?, scenario.graph.index_of(b)?);
        let (da, db) = (&delta_entries[ia].value, &delta_entries[ib].value);
        let equal = match (&da.exact, &db.exact) {
            (Some(x), Some(y)) => x == y,
            _ => da.decimal.approx_eq(&db.decimal, APPROX_TOLERANCE),
        };
        let render = |v: &ValueEntry| v.exact.clone().unwrap_or_else(|| v.decimal.render());
        let detail = format!("delta_{a} = {}, delta_{b} = {}", render(da), render(db));
        let status = if method.method == Method::Sampled {
            Status::Info
        } else {
            if !equal {
                code = EXIT_MISMATCH;
            }
            Status::from_bool(equal)
        };
        checks.push(CheckEntry::new("fairness", status, detail));
    }

    Ok((
        WhatifReport {
            removed,
            baseline: run_report(scenario, &base, &options),
            modified: run_report(&modified_scenario, &modified, &options),
            deltas: delta_entries,
            checks,
        },
        code,
    ))
}

/// `modified - baseline` per baseline node; a removed node's delta is minus
/// its baseline value.
fn aligned_deltas(base: &AnyAllocation, modified: &AnyAllocation, aligned: &[Option<usize>]) -> AnyAllocation {
    use crate::game::Allocation;
    match (base, modified) {
        (AnyAllocation::Exact(b), AnyAllocation::Exact(m)) => AnyAllocation::Exact(Allocation::new(
            aligned
                .iter()
                .enumerate()
                .map(|(i, j)| match j {
                    Some(j) => m[*j].clone() - b[i].clone(),
                    None => -b[i].clone(),
                })
                .collect(),
        )),
        _ => {
            let (b, m) = (base.to_f64(), modified.to_f64());
            AnyAllocation::Approx(Allocation::new(
                aligned
                    .iter()
                    .enumerate()
                    .map(|(i, j)| match j {
                        Some(j) => m[*j] - b[i],
                        None => -b[i],
                    })
                    .collect(),
            ))
        }
    }
}

#[derive(Debug, Serialize)]
struct ComponentEntry {
    nodes: Vec<String>,
    allocated: ValueEntry,
    worth: ValueEntry,
    matches: bool,
}

#[derive(Debug, Serialize)]
struct AxiomsReport {
    scenario: String,
    domain: String,
    allocations: Vec<AllocationEntry>,
    checks: Vec<CheckEntry>,
    components: Vec<ComponentEntry>,
    node_additive: bool,
    edge_additive: bool,
}

impl AxiomsReport {
    /// Component efficiency is informational and never fails the run.
    fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario: {} ({})", self.scenario, self.domain);
        render_checks(&mut s, &self.checks);
        s
    }
}

fn value_entry<V: Worth>(v: &V) -> ValueEntry {
    ValueEntry {
        exact: (V::DOMAIN == crate::worth::Domain::Exact).then(|| v.render()),
        decimal: v.to_f64(),
    }
}

fn axioms_for<W: EdgeCharacteristic>(
    name: &str,
    eg: &EdgeGame<W>,
    engine: &ShapleyEngine,
) -> Result<AxiomsReport, Failure> {
    let g = eg.graph();
    let report = component_efficiency_check(engine, eg)?;
    let alloc = &report.allocation;
    let lifted = eg.lift();
    let names = |players: &[usize]| players.iter().map(|&i| g.label(i)).collect::<Vec<_>>().join("~");

    let mut checks = Vec::new();
    for axiom in [Axiom::Efficiency, Axiom::Symmetry, Axiom::NullPlayer] {
        let r = axiom_check(&lifted, alloc, axiom)?;
        let mut entry = CheckEntry::new(axiom.to_string(), Status::from_bool(r.passed), r.detail);
        entry.witnesses = r
            .witnesses
            .iter()
            .map(|w| format!("{}: {}", names(&w.players), w.detail))
            .collect();
        checks.push(entry);
    }

    let mut unequal = Vec::new();
    for (k, e) in g.edges().iter().enumerate() {
        let (da, db) = fairness_delta(engine, eg, k)?;
        if !da.approx_eq(&db, APPROX_TOLERANCE) {
            unequal.push(format!(
                "({}, {}): {} vs {}",
                g.label(e.from),
                g.label(e.to),
                da.render(),
                db.render()
            ));
        }
    }
    let mut fairness = CheckEntry::new(
        "fairness",
        Status::from_bool(unequal.is_empty()),
        format!("{} edges, {} with unequal endpoint deltas", g.edge_count(), unequal.len()),
    );
    fairness.witnesses = unequal;
    checks.push(fairness);

    let mismatched: Vec<String> = report
        .components
        .iter()
        .filter(|c| !c.matches)
        .map(|c| {
            format!(
                "{{{}}}: sum {} vs worth {}",
                g.labels_of(c.component).join(","),
                c.allocated.render(),
                c.worth.render()
            )
        })
        .collect();
    let mut component = CheckEntry::new(
        "component-efficiency",
        Status::Info,
        format!(
            "{} of {} components match; node-additive: {}, edge-additive: {}",
            report.components.len() - mismatched.len(),
            report.components.len(),
            report.node_additive,
            report.edge_additive
        ),
    );
    component.witnesses = mismatched;
    checks.push(component);

    Ok(AxiomsReport {
        scenario: name.to_string(),
        domain: W::Worth::DOMAIN.to_string(),
        allocations: alloc
            .iter()
            .enumerate()
            .map(|(i, v)| AllocationEntry {
                node: g.label(i).to_string(),
                value: value_entry(v),
            })
            .collect(),
        checks,
        components: report
            .components
            .iter()
            .map(|c| ComponentEntry {
                nodes: g.labels_of(c.component).iter().map(|s| s.to_string()).collect(),
                allocated: value_entry(&c.allocated),
                worth: value_entry(&c.worth),
                matches: c.matches,
            })
            .collect(),
        node_additive: report.node_additive,
        edge_additive: report.edge_additive,
    })
}

fn cmd_axioms(scenario: &Scenario, engine: &EngineArgs) -> Result<AxiomsReport, Failure> {
    let engine = engine_from(engine);
    engine.check_capacity(scenario.graph.node_count())?;
    match scenario.edge_game()? {
        AnyEdgeGame::Exact(eg) => axioms_for(scenario.name(), &eg, &engine),
        AnyEdgeGame::Approx(eg) => axioms_for(scenario.name(), &eg, &engine),
    }
}
