//! The `popgraph` command line.
//!
//! Every command writes to a caller-supplied sink and returns its exit code,
//! so the binary is a two-line wrapper and tests can drive commands
//! in-process.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage or input error |
//! | 2 | a run did not converge within its budget |
//! | 3 | reachability cap or construction budget exceeded |
//! | 4 | a result contradicts its oracle or a construction check failed |

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{check_stable, run, Output, Protocol, RunOptions, Verdict};
use crate::error::{Error, Result};
use crate::graph::{generate, write_graph_file, AgentId, Graph, GraphFamily, GraphSpec};
use crate::impossibility::{
    build_bipartite_triple, build_doubled_execution, build_line_ring_executions, build_triangle_to_ring_execution,
    edge_removal_counterexample,
};
use crate::protocols::ProtocolSpec;
use crate::scheduler::SchedulerSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_CONTRADICTION: i32 = 4;

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
pub const DEFAULT_CAP: usize = 10_000_000;

/// Maps a library error to the exit code it should produce.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::Budget(_) => EXIT_CAP,
        Error::Construction(_) | Error::ReplayMismatch { .. } => EXIT_CONTRADICTION,
        _ => EXIT_USAGE,
    }
}

fn fail(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    exit_code(e)
}

#[derive(Debug, Parser)]
#[command(name = "popgraph", version, about = "Graph class identification with population protocols")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one protocol run.
    Run(RunArgs),
    /// Decide stability exhaustively from the initial configuration.
    CheckStable(CheckArgs),
    /// Execute one of the impossibility constructions.
    Impossibility(ImpossibilityArgs),
    /// Batch runs over sizes and seeds, as CSV.
    Sweep(SweepArgs),
    /// Write a generated graph as an edge-list file.
    GenGraph(GenArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub protocol: String,
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value = "random:0")]
    pub scheduler: String,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    /// Quiet steps needed to declare convergence; defaults to 50 per edge.
    #[arg(long)]
    pub window: Option<u64>,
    /// Write the JSON trace here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub protocol: String,
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImpossibilityKind {
    WeakDouble,
    LineRing,
    Bipartite,
    ArbitraryInit,
}

#[derive(Debug, Args)]
pub struct ImpossibilityArgs {
    #[arg(value_enum)]
    pub kind: ImpossibilityKind,
    #[arg(long, default_value = "tree-id")]
    pub protocol: String,
    /// Base graph for weak-double and arbitrary-init.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long, default_value = "random:0")]
    pub scheduler: String,
    /// Step budget: search budget, triangle steps or stabilization budget.
    #[arg(long)]
    pub max_steps: Option<u64>,
    #[arg(long)]
    pub window: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Segments of the doubled execution.
    #[arg(long, default_value_t = 100)]
    pub segments: usize,
    /// Phases of the line/ring executions.
    #[arg(long, default_value_t = 8)]
    pub phases: usize,
    /// Edge removed by arbitrary-init, as `u-v`.
    #[arg(long, default_value = "0-1")]
    pub edge: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub protocol: String,
    /// Family: line, ring, star, complete, tree, tree+edge or kregular:K.
    #[arg(long)]
    pub graph: String,
    /// `random` seeds the scheduler with each run's seed.
    #[arg(long, default_value = "random")]
    pub scheduler: String,
    /// Seeds as `a..b`, `a..=b` or a comma list.
    #[arg(long, default_value = "0..10")]
    pub seeds: String,
    #[arg(long)]
    pub sizes: String,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    #[arg(long)]
    pub window: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match cli.command {
        Command::Run(a) => match RunConfig::from_args(&a) {
            Ok(cfg) => cmd_run(&cfg, out, err),
            Err(e) => fail(err, &e),
        },
        Command::CheckStable(a) => cmd_check_stable(&a.protocol, &a.graph, a.cap, a.out.as_deref(), out, err),
        Command::Impossibility(a) => cmd_impossibility(&a, out, err),
        Command::Sweep(a) => cmd_sweep(&a, out, err),
        Command::GenGraph(a) => cmd_gen_graph(&a.graph, a.out.as_deref(), out, err),
    }
}

/// A validated `run` invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub protocol: ProtocolSpec,
    pub graph: GraphSpec,
    pub scheduler: SchedulerSpec,
    pub max_steps: u64,
    /// `None` means 50 per edge.
    pub window: Option<u64>,
    pub out: Option<PathBuf>,
    pub emit_trace: bool,
}

impl RunConfig {
    pub fn new(protocol: &str, graph: &str, scheduler: &str) -> Result<Self> {
        Ok(RunConfig {
            protocol: protocol.parse()?,
            graph: graph.parse()?,
            scheduler: scheduler.parse()?,
            max_steps: DEFAULT_MAX_STEPS,
            window: None,
            out: None,
            emit_trace: false,
        })
    }

    fn from_args(a: &RunArgs) -> Result<Self> {
        let mut cfg = RunConfig::new(&a.protocol, &a.graph, &a.scheduler)?;
        cfg.max_steps = a.max_steps;
        cfg.window = a.window;
        cfg.emit_trace = a.out.is_some();
        cfg.out = a.out.clone();
        if let Some(w) = cfg.window {
            if w == 0 || w > cfg.max_steps {
                return Err(Error::InvalidConfiguration(format!("window {w} must be in 1..=max-steps")));
            }
        }
        Ok(cfg)
    }

    fn options(&self, g: &Graph) -> RunOptions {
        options_for(g, self.max_steps, self.window).record_steps(self.emit_trace)
    }
}

fn options_for(g: &Graph, max_steps: u64, window: Option<u64>) -> RunOptions {
    let opts = RunOptions::for_graph(g).max_steps(max_steps);
    let window = window.unwrap_or(opts.window).min(max_steps).max(1);
    opts.window(window)
}

fn write_out(path: Option<&std::path::Path>, body: &str) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, body)?;
    }
    Ok(())
}

fn output_summary(outputs: &[Output]) -> String {
    let yes = outputs.iter().filter(|&&o| o == Output::Yes).count();
    let line: String = outputs.iter().map(|o| o.as_char()).collect();
    format!("yes={yes} no={} [{line}]", outputs.len() - yes)
}

pub fn cmd_run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| -> Result<Verdict> {
        let g = generate(&cfg.graph)?;
        let p = cfg.protocol.instantiate(g.n())?;
        let trace = run(&p, &g, &cfg.graph.to_string(), &cfg.scheduler, cfg.options(&g))?;
        let outputs: Vec<Output> = trace.final_config.iter().map(|&s| p.gamma(s)).collect();
        writeln!(out, "verdict: {}", trace.verdict)?;
        writeln!(out, "steps: {}", trace.steps_taken)?;
        writeln!(out, "outputs: {}", output_summary(&outputs))?;
        if cfg.emit_trace {
            write_out(cfg.out.as_deref(), &trace.to_json())?;
        }
        Ok(trace.verdict)
    })();
    match result {
        Ok(v) if v.output().is_some() => EXIT_OK,
        Ok(_) => EXIT_TIMEOUT,
        Err(e) => fail(err, &e),
    }
}

#[derive(Debug, Serialize)]
struct CheckOutput<'a> {
    protocol: String,
    graph: String,
    class: Option<String>,
    expected: Option<Output>,
    matches: bool,
    #[serde(flatten)]
    report: &'a crate::engine::StabilityReport,
}

pub fn cmd_check_stable(
    protocol: &str,
    graph: &str,
    cap: usize,
    path: Option<&std::path::Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = (|| -> Result<bool> {
        let pspec: ProtocolSpec = protocol.parse()?;
        let gspec: GraphSpec = graph.parse()?;
        let g = generate(&gspec)?;
        let p = pspec.instantiate(g.n())?;
        let report = check_stable(&p, &g, cap)?;
        let expected = p.class().map(|c| Output::from_bool(c.holds(&g)));
        let matches = expected.is_some() && report.verdict.output() == expected;
        let body = serde_json::to_string_pretty(&CheckOutput {
            protocol: pspec.to_string(),
            graph: gspec.to_string(),
            class: p.class().map(|c| c.to_string()),
            expected,
            matches,
            report: &report,
        })?;
        writeln!(out, "{body}")?;
        write_out(path, &body)?;
        Ok(matches)
    })();
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CONTRADICTION,
        Err(e) => fail(err, &e),
    }
}

fn parse_edge(s: &str) -> Result<(AgentId, AgentId)> {
    let bad = || Error::InvalidGraph(format!("edge `{s}` is not of the form u-v"));
    let (u, v) = s.split_once('-').ok_or_else(bad)?;
    Ok((u.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?))
}

fn base_graph(a: &ImpossibilityArgs, default: &str) -> Result<(Graph, String)> {
    let spec: GraphSpec = a.graph.as_deref().unwrap_or(default).parse()?;
    Ok((generate(&spec)?, spec.to_string()))
}

/// Runs one construction; returns the JSON report and whether it passed.
pub fn impossibility_report(a: &ImpossibilityArgs) -> Result<(serde_json::Value, bool)> {
    let pspec: ProtocolSpec = a.protocol.parse()?;
    let proto = |n: usize| -> Result<Protocol> { pspec.instantiate(n) };
    let (value, passed) = match a.kind {
        ImpossibilityKind::WeakDouble => {
            let (g, label) = base_graph(a, "line:3")?;
            let p = proto(g.n())?;
            let ex = build_doubled_execution(&p, &g, &label, a.segments, a.max_steps.unwrap_or(DEFAULT_MAX_STEPS))?;
            let r = ex.report();
            (serde_json::to_value(&r)?, r.passed)
        }
        ImpossibilityKind::LineRing => {
            let p = proto(4)?;
            let ex = build_line_ring_executions(&p, a.phases)?;
            let r = ex.report(&p);
            (serde_json::to_value(&r)?, r.passed)
        }
        ImpossibilityKind::Bipartite => {
            let p = proto(3)?;
            let sched: SchedulerSpec = a.scheduler.parse()?;
            let ex = build_triangle_to_ring_execution(&p, &sched, a.max_steps.unwrap_or(10_000))?;
            let r = ex.report(build_bipartite_triple().checks());
            (serde_json::to_value(&r)?, r.passed)
        }
        ImpossibilityKind::ArbitraryInit => {
            let (g, label) = base_graph(a, "ring:4")?;
            let p = proto(g.n())?;
            let sched: SchedulerSpec = a.scheduler.parse()?;
            let opts = options_for(&g, a.max_steps.unwrap_or(DEFAULT_MAX_STEPS), a.window);
            let r = edge_removal_counterexample(&p, &g, &label, parse_edge(&a.edge)?, &sched, opts, a.cap)?;
            (serde_json::to_value(&r)?, r.passed)
        }
    };
    Ok((value, passed))
}

pub fn cmd_impossibility(a: &ImpossibilityArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| -> Result<bool> {
        let (value, passed) = impossibility_report(a)?;
        let body = serde_json::to_string_pretty(&value)?;
        writeln!(out, "{body}")?;
        write_out(a.out.as_deref(), &body)?;
        Ok(passed)
    })();
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CONTRADICTION,
        Err(e) => fail(err, &e),
    }
}

/// Integer list: `a..b`, `a..=b`, or comma separated values.
pub fn parse_list<T>(s: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>,
{
    let bad = || Error::InvalidConfiguration(format!("bad list `{s}`"));
    let num = |x: &str| x.trim().parse::<T>().map_err(|_| bad());
    if let Some((lo, hi)) = s.split_once("..") {
        let (hi, inclusive) = match hi.strip_prefix('=') {
            Some(h) => (h, true),
            None => (hi, false),
        };
        let (lo, hi): (u64, u64) = (num(lo)?.into(), num(hi)?.into());
        let hi = if inclusive { hi + 1 } else { hi };
        return (lo..hi).map(|x| T::try_from(x).map_err(|_| bad())).collect();
    }
    s.split(',').filter(|x| !x.trim().is_empty()).map(num).collect()
}

/// The graph a sweep uses for `family` at size `n` and `seed`.
///
/// Deterministic families ignore the seed. `tree+edge` adds one uniformly
/// chosen non-edge to a random tree.
pub fn sweep_graph(family: &str, n: usize, seed: u64) -> Result<(Graph, String)> {
    let spec = match family {
        "line" => GraphSpec::new(GraphFamily::Line(n)),
        "ring" => GraphSpec::new(GraphFamily::Ring(n)),
        "star" => GraphSpec::new(GraphFamily::Star(n)),
        "complete" => GraphSpec::new(GraphFamily::Complete(n)),
        "tree" => GraphSpec::new(GraphFamily::Tree { n, seed }),
        "tree+edge" => {
            let tree = generate(&GraphSpec::new(GraphFamily::Tree { n, seed }))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
            let (u, v) = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| !tree.has_edge(u, v))
                .choose(&mut rng)
                .ok_or_else(|| Error::InvalidGraph(format!("a tree on {n} agents has no non-edge")))?;
            GraphSpec::new(GraphFamily::Tree { n, seed }).add_edge(u, v)
        }
        f => match f.strip_prefix("kregular:").map(str::parse::<usize>) {
            Some(Ok(k)) => GraphSpec::new(GraphFamily::KRegular { k, n, seed }),
            _ => return Err(Error::GraphSpec { spec: family.into(), reason: "unknown sweep family".into() }),
        },
    };
    Ok((generate(&spec)?, spec.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub graph: String,
    pub verdict: Verdict,
    pub steps: u64,
    /// The class oracle's answer for this graph.
    pub expected: Option<Output>,
}

impl SweepRow {
    /// Converged to an output different from the oracle.
    pub fn contradicts(&self) -> bool {
        matches!((self.verdict.output(), self.expected), (Some(a), Some(b)) if a != b)
    }

    pub fn csv(&self) -> String {
        format!("{},{},{},{},{}", self.family, self.n, self.seed, self.verdict, self.steps)
    }
}

/// `random` (no seed) means "seed the scheduler with the run's seed".
pub fn sweep_scheduler(s: &str, seed: u64) -> Result<SchedulerSpec> {
    if s == "random" {
        Ok(SchedulerSpec::random(seed))
    } else {
        s.parse()
    }
}

/// One run per (size, seed), in parallel; rows come back sorted by size then
/// seed.
pub fn sweep(
    protocol: &ProtocolSpec,
    family: &str,
    scheduler: &str,
    sizes: &[usize],
    seeds: &[u64],
    max_steps: u64,
    window: Option<u64>,
) -> Result<Vec<SweepRow>> {
    let jobs: Vec<(usize, u64)> = sizes.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    jobs.par_iter()
        .map(|&(n, seed)| {
            let (g, label) = sweep_graph(family, n, seed)?;
            let p = protocol.instantiate(n)?;
            let sched = sweep_scheduler(scheduler, seed)?;
            let t = run(&p, &g, &label, &sched, options_for(&g, max_steps, window).record_steps(false))?;
            Ok(SweepRow {
                family: family.to_string(),
                n,
                seed,
                graph: label,
                verdict: t.verdict,
                steps: t.steps_taken,
                expected: p.class().map(|c| Output::from_bool(c.holds(&g))),
            })
        })
        .collect()
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| -> Result<i32> {
        let pspec: ProtocolSpec = a.protocol.parse()?;
        let sizes: Vec<usize> = parse_list::<u64>(&a.sizes)?.into_iter().map(|x| x as usize).collect();
        let seeds: Vec<u64> = parse_list(&a.seeds)?;
        let rows = sweep(&pspec, &a.graph, &a.scheduler, &sizes, &seeds, a.max_steps, a.window)?;
        let mut csv = String::from("family,n,seed,verdict,steps\n");
        for r in &rows {
            csv.push_str(&r.csv());
            csv.push('\n');
        }
        write!(out, "{csv}")?;
        write_out(a.out.as_deref(), &csv)?;
        Ok(if rows.iter().any(SweepRow::contradicts) {
            EXIT_CONTRADICTION
        } else if rows.iter().any(|r| r.verdict.output().is_none()) {
            EXIT_TIMEOUT
        } else {
            EXIT_OK
        })
    })();
    result.unwrap_or_else(|e| fail(err, &e))
}

pub fn cmd_gen_graph(graph: &str, path: Option<&std::path::Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| -> Result<()> {
        let g = generate(&graph.parse()?)?;
        let bytes = write_graph_file(&g);
        match path {
            Some(p) => std::fs::write(p, &bytes)?,
            None => out.write_all(&bytes)?,
        }
        Ok(())
    })();
    result.map(|()| EXIT_OK).unwrap_or_else(|e| fail(err, &e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list::<u64>("2..5").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_list::<u64>("2..=4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_list::<u64>("7, 9").unwrap(), vec![7, 9]);
        assert!(parse_list::<u64>("x..3").is_err());
    }

    #[test]
    fn tree_plus_edge_has_one_cycle() {
        for seed in 0..20 {
            let (g, _) = sweep_graph("tree+edge", 8, seed).unwrap();
            assert_eq!(g.edge_count(), 8);
            assert!(!crate::graph::is_tree(&g));
        }
        assert!(sweep_graph("tree+edge", 2, 0).is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::CapExceeded { cap: 1 }), EXIT_CAP);
        assert_eq!(exit_code(&Error::NoEdges), EXIT_USAGE);
    }
}
