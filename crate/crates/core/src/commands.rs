//! The `expander` command line: `grow`, `analyze`, `simulate`, `verify` and
//! `bench`.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad usage (flags, degree, size,
//! unreadable input or unwritable output).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analyzer::{
    bounds::{cheeger_check_with, CHEEGER_SLACK}, edge_expansion_exact, future_cut_suite, mixing_suite_exhaustive, mixing_suite_sampled,
    rayleigh_lower_bound_check, MAX_EXACT_VERTICES,
};
use crate::error::{GrowError, SimError};
use crate::format::{parse_graph, write_graph};
use crate::graph::{expansion_cost, graphs_equal, Degree, WeightedMultigraph};
use crate::grower::{state_at, ChangeLog, GrowthState, Sequence};
use crate::sim::{run_script_with, AdversaryScript};
use crate::spectral::spectral_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest graph the exhaustive mixing check enumerates (`3^n` pairs).
pub const MIXING_EXHAUSTIVE_MAX: usize = 12;
/// Sampled pairs for larger graphs.
pub const MIXING_SAMPLES: u64 = 10_000;
/// Largest graph on which `verify` runs the exact cut checks.
pub const VERIFY_EXACT_MAX: usize = 16;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

impl From<GrowError> for CliError {
    fn from(e: GrowError) -> Self {
        match e {
            GrowError::Graph(_) | GrowError::InvalidSize { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::DuplicateId(_)
            | SimError::UnknownId(_)
            | SimError::NoAttach
            | SimError::AtBaseSize(_)
            | SimError::Script(_)
            | SimError::Graph(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

fn failed(e: impl ToString) -> CliError {
    CliError::Failed(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "expander", version, about = "Grow, analyze and simulate incrementally grown expander multigraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write `G_n` as a graph file.
    Grow(GrowArgs),
    /// Exact and spectral expansion of a graph file.
    Analyze(AnalyzeArgs),
    /// Run an adversary script through the self-healing network.
    Simulate(SimulateArgs),
    /// Check every construction invariant along the sequence, or one graph file.
    Verify(VerifyArgs),
    /// Per-step expansion cost as CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct LiftSeed {
    /// Seed of the lift search.
    #[arg(long = "lift-seed", env = "GROW_LIFT_SEED", default_value_t = 1)]
    pub lift_seed: u64,
}

#[derive(Debug, Args)]
pub struct GrowArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub seed: LiftSeed,
    /// Graph file to write; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write every change log from the base clique up to `n` as JSON.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Cheeger sandwich with exact `h`.
    Cheeger,
    /// Expander mixing inequality over disjoint vertex-set pairs.
    Mixing,
    /// `lambda2` of the graph one split past a doubling.
    Rayleigh,
    /// Block identities of every cut against the target lift.
    FutureBlocks,
    /// Every cut weighs at least half the target-lift cut of its future sets.
    FutureHalf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Exact edge expansion by subset enumeration.
    #[arg(long)]
    pub exact: bool,
    /// Adjacency spectrum.
    #[arg(long)]
    pub spectral: bool,
    #[arg(long, value_enum)]
    pub suite: Vec<Suite>,
    /// Slack on the floating side of the Cheeger sandwich.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// `rayleigh` passes when `lambda2 >= d/2 - epsilon`.
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[command(flatten)]
    pub seed: LiftSeed,
    /// JSON report to write; stdout if absent.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub d: u32,
    /// Lift seed of the reference sequence.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Adversary script (JSON).
    #[arg(long, required_unless_present = "random_events")]
    pub script: Option<PathBuf>,
    /// Generate a random script of this many events instead.
    #[arg(long, conflicts_with = "script")]
    pub random_events: Option<usize>,
    #[arg(long, default_value_t = 0.7)]
    pub insert_prob: f64,
    #[arg(long, default_value_t = 0)]
    pub script_seed: u64,
    /// Report JSON to write; stdout if absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the network topology after every event here.
    #[arg(long)]
    pub snapshot_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Degrees to check, e.g. `--d 6,8,10`.
    #[arg(long, value_delimiter = ',', required_unless_present = "input")]
    pub d: Vec<u32>,
    #[arg(long, required_unless_present = "input")]
    pub n_max: Option<usize>,
    /// Check this graph file against the sequence instead.
    #[arg(long, conflicts_with_all = ["d", "n_max"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub seed: LiftSeed,
    /// JSON report to write; stdout if absent.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub d: u32,
    /// Number of doubling cycles to run.
    #[arg(long, default_value_t = 1)]
    pub cycles: u8,
    #[command(flatten)]
    pub seed: LiftSeed,
    /// CSV to write; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Errors go to stderr.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Grow(a) => grow(&a),
        Command::Analyze(a) => analyze(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Verify(a) => verify(&a),
        Command::Bench(a) => bench(&a),
    }
}

fn degree(d: u32) -> Result<Degree, CliError> {
    Degree::new(d).map_err(|e| CliError::Usage(e.to_string()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports always serialize");
    text.push('\n');
    text
}

/// Grows `G_n`, returning it with every change log since the base clique.
pub fn grow_sequence(d: u32, n: usize, seed: u64) -> Result<(WeightedMultigraph, Vec<ChangeLog>), CliError> {
    let d = degree(d)?;
    if n < d.base_size() {
        return Err(CliError::Usage(format!("n = {n} is below the base clique size {}", d.base_size())));
    }
    let mut seq = Sequence::new(d.get(), seed)?;
    let mut logs = Vec::with_capacity(n - seq.n());
    while seq.n() < n {
        logs.push(seq.advance()?);
    }
    Ok((seq.graph().clone(), logs))
}

fn grow(a: &GrowArgs) -> Result<(), CliError> {
    let (g, logs) = grow_sequence(a.d, a.n, a.seed.lift_seed)?;
    write_output(a.out.as_deref(), &write_graph(&g).map_err(failed)?)?;
    if let Some(path) = &a.trace {
        write_output(Some(path), &to_json(&logs))?;
    }
    Ok(())
}

fn cheeger_bounds(d: u32, lambda2: f64) -> (f64, f64) {
    let gap = (d as f64 - lambda2).max(0.0);
    (gap / 2.0, (2.0 * d as f64 * gap).sqrt())
}

/// The analysis report for one graph; exit status 1 if a suite fails.
pub fn analyze_graph(g: &WeightedMultigraph, a: &AnalyzeArgs) -> Result<(Value, bool), CliError> {
    let (d, n) = (g.d(), g.vertex_count());
    let both = !a.exact && !a.spectral;
    let slack = a.tolerance.unwrap_or(CHEEGER_SLACK);
    let mut report = json!({
        "n": n, "d": d, "h": null, "argmin": null, "lambda2": null, "lambda": null,
        "bounds": {}, "suite_results": [],
    });
    let mut h = None;
    if a.exact || (both && n <= MAX_EXACT_VERTICES) {
        let e = edge_expansion_exact(g).map_err(|e| CliError::Usage(e.to_string()))?;
        report["h"] = json!({"num": e.h.numer(), "den": e.h.denom()});
        report["argmin"] = json!(e.argmin_set);
        report["bounds"]["subsets_checked"] = json!(e.n_subsets_checked);
        h = Some(*e.h.numer() as f64 / *e.h.denom() as f64);
    }
    if a.spectral || both {
        let s = spectral_report(g).map_err(failed)?;
        report["lambda2"] = json!(s.lambda2);
        report["lambda"] = json!(s.lambda);
        let (lower, upper) = cheeger_bounds(d, s.lambda2);
        report["bounds"]["cheeger_lower"] = json!(lower);
        report["bounds"]["cheeger_upper"] = json!(upper);
        if let Some(h) = h {
            report["bounds"]["cheeger_holds"] = json!(lower - slack <= h && h <= upper + slack);
        }
    }
    let mut ok = true;
    let mut results = Vec::new();
    for suite in &a.suite {
        let (name, pass, detail) = run_suite(g, *suite, a, slack)?;
        ok &= pass;
        results.push(json!({"suite": name, "ok": pass, "detail": detail}));
    }
    report["suite_results"] = Value::Array(results);
    Ok((report, ok))
}

/// Requires `g` to be `G_n` of the sequence, returning its growth state.
fn sequence_state(g: &WeightedMultigraph, seed: u64) -> Result<GrowthState, CliError> {
    let state = state_at(g.d(), g.vertex_count(), seed)?;
    if !graphs_equal(g, state.current()) {
        return Err(CliError::Failed(format!(
            "input is not G_{} of the sequence for lift seed {seed}",
            g.vertex_count()
        )));
    }
    Ok(state)
}

fn run_suite(g: &WeightedMultigraph, suite: Suite, a: &AnalyzeArgs, slack: f64) -> Result<(&'static str, bool, Value), CliError> {
    let seed = a.seed.lift_seed;
    Ok(match suite {
        Suite::Cheeger => {
            let c = cheeger_check_with(g, slack).map_err(|e| CliError::Usage(e.to_string()))?;
            let detail = json!({
                "lower": c.lower, "upper": c.upper, "lambda2": c.lambda2,
                "h": {"num": c.h.numer(), "den": c.h.denom()},
            });
            ("cheeger", c.ok, detail)
        }
        Suite::Mixing => {
            let m = if g.vertex_count() <= MIXING_EXHAUSTIVE_MAX {
                mixing_suite_exhaustive(g)
            } else {
                mixing_suite_sampled(g, MIXING_SAMPLES, seed)
            }
            .map_err(failed)?;
            ("mixing", m.failures == 0, json!(m))
        }
        Suite::Rayleigh => {
            let base = g.degree_target().base_size();
            let m = g.vertex_count().saturating_sub(1);
            let i = (0..32u8).find(|&i| base << i == m).ok_or_else(|| {
                CliError::Usage(format!("rayleigh needs n - 1 = {base} * 2^i, got n = {}", g.vertex_count()))
            })?;
            sequence_state(g, seed)?;
            let r = rayleigh_lower_bound_check(g.d(), i, a.epsilon, seed).map_err(failed)?;
            ("rayleigh", r.ok && r.quotient_below_lambda2, json!(r))
        }
        Suite::FutureBlocks | Suite::FutureHalf => {
            let state = sequence_state(g, seed)?;
            let f = future_cut_suite(&state).map_err(|e| CliError::Usage(e.to_string()))?;
            if suite == Suite::FutureBlocks {
                ("future-blocks", f.block_failures == 0, json!(f))
            } else {
                ("future-half", f.half_failures == 0, json!(f))
            }
        }
    })
}

fn analyze(a: &AnalyzeArgs) -> Result<(), CliError> {
    let g = parse_graph(&read_input(&a.input)?).map_err(|e| CliError::Usage(e.to_string()))?;
    let (report, ok) = analyze_graph(&g, a)?;
    write_output(a.json.as_deref(), &to_json(&report))?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed("a requested suite failed".into()))
    }
}

fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    degree(a.d)?;
    let script = match (&a.script, a.random_events) {
        (Some(path), _) => AdversaryScript::from_json(&read_input(path)?)?,
        (None, Some(events)) => AdversaryScript::random(a.d, events, a.insert_prob, a.script_seed),
        (None, None) => return Err(CliError::Usage("need --script or --random-events".into())),
    };
    if let Some(dir) = &a.snapshot_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut io_error = None;
    let report = run_script_with(a.d, a.seed, &script, |index, sim| {
        if let Some(dir) = &a.snapshot_dir {
            let text = write_graph(&sim.snapshot()?)?;
            let path = dir.join(format!("event-{index:05}.graph"));
            if let Err(e) = fs::write(&path, text) {
                io_error.get_or_insert(CliError::Usage(format!("cannot write {}: {e}", path.display())));
            }
        }
        Ok(())
    })?;
    if let Some(e) = io_error {
        return Err(e);
    }
    write_output(a.report.as_deref(), &format!("{}\n", report.to_json()))
}

/// One failed check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyFailure {
    pub d: u32,
    pub n: usize,
    pub invariant: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: u64,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, d: u32, n: usize, invariant: &str, result: Result<(), String>) {
        self.checks += 1;
        if let Err(detail) = result {
            self.failures.push(VerifyFailure {
                d,
                n,
                invariant: invariant.into(),
                detail,
            });
        }
    }

    fn grow_error(&mut self, d: u32, n: usize, e: GrowError) {
        let invariant = match &e {
            GrowError::Invariant { lemma, .. } => *lemma,
            _ => "construction",
        };
        self.check(d, n, invariant, Err(e.to_string()));
    }
}

fn check_split_cost(d: u32, log: &ChangeLog, prev: &WeightedMultigraph, next: &WeightedMultigraph) -> Result<(), String> {
    let formula = 3 * log.unsplit_neighbors as u64 + 5 * log.split_neighbors as u64 / 2;
    let audited = expansion_cost(prev, next);
    if !log.split_neighbors.is_multiple_of(2) {
        return Err(format!("{} split neighbours, expected an even count", log.split_neighbors));
    }
    if log.cost != formula || audited != formula {
        return Err(format!("logged {}, audited {audited}, formula 3|U|+5|S|/2 = {formula}", log.cost));
    }
    if 2 * formula > 5 * d as u64 {
        return Err(format!("cost {formula} exceeds 5d/2"));
    }
    Ok(())
}

/// Checks on one graph of the sequence: Cheeger sandwich and, at doublings, the
/// mixing inequality.
fn check_graph_bounds(report: &mut VerifyReport, g: &WeightedMultigraph, doubled: bool) {
    let (d, n) = (g.d(), g.vertex_count());
    if n > VERIFY_EXACT_MAX {
        return;
    }
    let cheeger = cheeger_check_with(g, CHEEGER_SLACK).map_err(|e| e.to_string()).and_then(|c| {
        let h = *c.h.numer() as f64 / *c.h.denom() as f64;
        c.ok.then_some(())
            .ok_or_else(|| format!("h = {h} outside [{}, {}], lambda2 = {}", c.lower, c.upper, c.lambda2))
    });
    report.check(d, n, "cheeger sandwich", cheeger);
    if doubled {
        let suite = if n <= MIXING_EXHAUSTIVE_MAX {
            mixing_suite_exhaustive(g)
        } else {
            mixing_suite_sampled(g, MIXING_SAMPLES, 0)
        };
        let mixing = suite.map_err(|e| e.to_string()).and_then(|m| {
            (m.failures == 0)
                .then_some(())
                .ok_or_else(|| format!("{} of {} pairs violate it, lambda = {}", m.failures, m.pairs_checked, m.lambda))
        });
        report.check(d, n, "mixing inequality", mixing);
    }
}

/// Split invariants and, on small graphs, the cut checks against the target
/// lift.
fn check_state(report: &mut VerifyReport, state: &GrowthState) {
    let (d, n) = (state.degree().get(), state.n());
    report.checks += 1;
    if let Err(e) = state.check_invariants() {
        report.checks -= 1;
        report.grow_error(d, n, e);
    }
    if n > VERIFY_EXACT_MAX {
        return;
    }
    match future_cut_suite(state) {
        Ok(f) => {
            let count = |failures: u64| {
                (failures == 0)
                    .then_some(())
                    .ok_or_else(|| format!("{failures} of {} cuts", f.cuts_checked))
            };
            report.check(d, n, "future-cut blocks", count(f.block_failures));
            report.check(d, n, "future-cut half bound", count(f.half_failures));
        }
        Err(e) => report.check(d, n, "future-cut blocks", Err(e.to_string())),
    }
}

/// Runs every invariant check for each `d` along the sequence up to `n_max`.
pub fn verify_sequence(ds: &[u32], n_max: usize, seed: u64) -> Result<VerifyReport, CliError> {
    let mut report = VerifyReport::default();
    for &d in ds {
        let base = degree(d)?.base_size();
        if n_max < base {
            return Err(CliError::Usage(format!("--n-max {n_max} is below the base clique size {base} for d = {d}")));
        }
        let mut seq = Sequence::new(d, seed)?;
        check_graph_bounds(&mut report, seq.graph(), true);
        while seq.n() < n_max {
            let prev = seq.graph().clone();
            let n = prev.vertex_count() + 1;
            let log = match seq.advance() {
                Ok(log) => log,
                Err(e) => {
                    report.grow_error(d, n, e);
                    break;
                }
            };
            report.check(d, n, "split cost", check_split_cost(d, &log, &prev, seq.graph()));
            let doubled = n % base == 0 && (n / base).is_power_of_two();
            match seq.state() {
                Ok(state) => check_state(&mut report, &state.clone()),
                Err(e) => report.grow_error(d, n, e),
            }
            check_graph_bounds(&mut report, seq.graph(), doubled);
        }
    }
    Ok(report)
}

/// Checks a graph file against the sequence graph with the same `d` and `n`.
pub fn verify_graph_text(text: &str, seed: u64) -> Result<VerifyReport, CliError> {
    let mut report = VerifyReport::default();
    let g = match parse_graph(text) {
        Ok(g) => g,
        Err(e) => {
            report.check(0, 0, "graph file format", Err(e.to_string()));
            return Ok(report);
        }
    };
    let (d, n) = (g.d(), g.vertex_count());
    let state = match state_at(d, n, seed) {
        Ok(s) => s,
        Err(e) => {
            report.grow_error(d, n, e);
            return Ok(report);
        }
    };
    match state.check_graph(&g) {
        Ok(()) => report.check(d, n, "construction", Ok(())),
        Err(e) => {
            report.grow_error(d, n, e);
            return Ok(report);
        }
    }
    let want = state.current();
    let diff = want
        .edges()
        .chain(g.edges())
        .find(|(a, b, _)| g.weight(a, b) != want.weight(a, b))
        .map(|(a, b, _)| format!("{a}-{b} has weight {}, expected {}", g.weight(&a, &b), want.weight(&a, &b)));
    report.check(d, n, "sequence membership", diff.map_or(Ok(()), Err));
    Ok(report)
}

fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let seed = a.seed.lift_seed;
    let report = match (&a.input, a.n_max) {
        (Some(path), _) => verify_graph_text(&read_input(path)?, seed)?,
        (None, Some(n_max)) => verify_sequence(&a.d, n_max, seed)?,
        (None, None) => return Err(CliError::Usage("need --input or --d with --n-max".into())),
    };
    write_output(a.json.as_deref(), &to_json(&report))?;
    for f in &report.failures {
        eprintln!("FAIL d={} n={} {}: {}", f.d, f.n, f.invariant, f.detail);
    }
    if report.ok() {
        Ok(())
    } else {
        let first = &report.failures[0];
        Err(CliError::Failed(format!("{} violated: {}", first.invariant, first.detail)))
    }
}

/// Bench CSV: one row per split, then `max,<largest cost>,,`.
pub fn bench_csv(d: u32, cycles: u8, seed: u64) -> Result<String, CliError> {
    let base = degree(d)?.base_size();
    let n = base
        .checked_shl(cycles as u32)
        .filter(|n| *n <= base << 16)
        .ok_or_else(|| CliError::Usage(format!("too many cycles: {cycles}")))?;
    let (_, logs) = grow_sequence(d, n, seed)?;
    let mut out = String::from("n,cost,U_u,S_u\n");
    let mut max = 0;
    for (k, log) in logs.iter().enumerate() {
        let formula = 3 * log.unsplit_neighbors as u64 + 5 * log.split_neighbors as u64 / 2;
        if log.cost != formula {
            return Err(CliError::Failed(format!("step to n = {}: cost {} != {formula}", base + k + 1, log.cost)));
        }
        max = max.max(log.cost);
        out.push_str(&format!(
            "{},{},{},{}\n",
            base + k + 1,
            log.cost,
            log.unsplit_neighbors,
            log.split_neighbors
        ));
    }
    out.push_str(&format!("max,{max},,\n"));
    Ok(out)
}

fn bench(a: &BenchArgs) -> Result<(), CliError> {
    write_output(a.out.as_deref(), &bench_csv(a.d, a.cycles, a.seed.lift_seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        main_with(std::iter::once("expander").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(code(&["grow", "--d", "5", "--n", "8"]), EXIT_USAGE);
        assert_eq!(code(&["grow", "--d", "6", "--n", "3"]), EXIT_USAGE);
        assert_eq!(code(&["frobnicate"]), EXIT_USAGE);
        assert_eq!(code(&["bench", "--d", "7"]), EXIT_USAGE);
    }

    #[test]
    fn grow_base_case_is_the_doubled_clique() {
        let (g, logs) = grow_sequence(6, 4, 1).unwrap();
        assert!(logs.is_empty());
        assert_eq!(write_graph(&g).unwrap(), "6 4\n0: 1: 2\n0: 2: 2\n0: 3: 2\n1: 2: 2\n1: 3: 2\n2: 3: 2\n");
    }

    #[test]
    fn bench_one_cycle_for_degree_six() {
        let csv = bench_csv(6, 1, 1).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "n,cost,U_u,S_u");
        assert_eq!(rows[1], "5,9,3,0");
        assert_eq!(*rows.last().unwrap(), "max,15,,");
        assert_eq!(rows.len(), 6);
    }

    #[test]
    fn verify_passes_along_the_sequence() {
        let report = verify_sequence(&[6], 16, 1).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        assert!(report.checks > 40);
    }

    #[test]
    fn verify_names_the_broken_invariant() {
        let (g, _) = grow_sequence(6, 6, 1).unwrap();
        let text = write_graph(&g).unwrap();
        assert!(verify_graph_text(&text, 1).unwrap().ok());

        let line = text.lines().find(|l| l.ends_with(" 2")).unwrap();
        let corrupted = text.replacen(line, &format!("{} 3", &line[..line.len() - 2]), 1);
        let report = verify_graph_text(&corrupted, 1).unwrap();
        assert_eq!(report.failures[0].invariant, "regular degree");

        assert_eq!(verify_graph_text("6 4\n0: 1: x\n", 1).unwrap().failures[0].invariant, "graph file format");
    }
}
