//! Command-line driver tying parsing, analysis, validation, and reporting
//! together.
//!
//! One invocation processes one loop file. Exit codes are part of the
//! interface:
//!
//! * `0` — analysis completed; with `--trace-check` on, every printed
//!   invariant also held on the sampled runs.
//! * `1` — a printed invariant was falsified by a recorded run. This means
//!   a bug in the toolchain, and the offending assignment is printed.
//! * `2` — usage or input error (unreadable file, syntax error, a loop
//!   outside the supported fragment).
//! * `3` — a resource cap was hit; partial results were emitted and
//!   flagged.
//!
//! `--format structured` replaces the human-readable report with a single
//! JSON document built from the same data. Identical arguments on identical
//! input produce byte-identical structured output, so CI can diff it.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;

use crate::folinv::{
    analyze_arrays, ground_check, tptp_problem, var_name, ArrayAnalysis, SaturateConfig,
};
use crate::groebner::Limits;
use crate::loopspec::{parse_program, to_source, Program, Trace, UfInterp};
use crate::polyinv::{
    invariant_ideal, oracle_from_traces, presented_invariants, render, run_traces,
    snapshot_point, HarnessConfig, InvariantAnalysis, PipelineOptions, PolyError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Variable box bound for ground-checking quantified invariants.
const GROUND_BOUND: i64 = 20;

#[derive(Parser)]
#[command(name = "loopinv", about = "Loop invariant synthesis by symbol elimination")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive invariants for a loop and optionally validate them on runs.
    Analyze(AnalyzeArgs),
    /// Syntax-check a loop file and echo its canonical form.
    Parse(ParseArgs),
    /// Interpret a loop on one random input and dump the recorded run.
    Trace(TraceArgs),
    /// Fit degree-bounded identities to random runs (numeric oracle).
    Oracle(OracleArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Loop source file.
    file: PathBuf,
    /// Polynomial invariants over the scalar state (the default mode).
    #[arg(long)]
    poly: bool,
    /// Quantified array invariants; runs the polynomial pipeline first and
    /// feeds degree-one results into the axioms.
    #[arg(long)]
    fol: bool,
    /// Degree bound for the oracle cross-check run under --trace-check.
    #[arg(long, default_value_t = 3)]
    max_degree: u32,
    /// Longest path sequence folded into the polynomial ideal.
    #[arg(long, default_value_t = 3)]
    l_max: usize,
    /// Validate every invariant on this many random runs (0 = off).
    #[arg(long, default_value_t = 0)]
    trace_check: usize,
    /// Interpretation of declared functions during validation runs.
    #[arg(long, value_enum, default_value_t = UfChoice::Seeded)]
    uf: UfChoice,
    /// Seed for all randomized validation; recorded in the output.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Retained-clause cap for saturation.
    #[arg(long, default_value_t = SaturateConfig::default().max_retained)]
    max_retained: usize,
    /// Generated-clause cap for saturation.
    #[arg(long, default_value_t = SaturateConfig::default().max_generated)]
    max_generated: usize,
    /// Dump the saturation problem (axioms plus derived base clauses) as
    /// CNF to this path.
    #[arg(long, requires = "fol", value_name = "PATH")]
    tptp: Option<PathBuf>,
}

#[derive(Args)]
struct ParseArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct TraceArgs {
    file: PathBuf,
    /// Interpretation of declared functions.
    #[arg(long, value_enum, default_value_t = UfChoice::Seeded)]
    uf: UfChoice,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Iteration cap; a run that reaches it is marked step-capped.
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Length of every sampled array (guard bounds draw from 30..=60, so
    /// shrinking this below 61 may push reads out of extent).
    #[arg(long, default_value_t = 64)]
    array_len: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct OracleArgs {
    file: PathBuf,
    /// Candidate degree bound.
    #[arg(long, default_value_t = 3)]
    max_degree: u32,
    /// Number of random runs fitted against.
    #[arg(long, default_value_t = 25)]
    traces: usize,
    #[arg(long, value_enum, default_value_t = UfChoice::Seeded)]
    uf: UfChoice,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UfChoice {
    /// A fresh pseudo-random table per run, derived from the seed.
    Seeded,
    /// Every application evaluates to 0.
    Zero,
    /// Every application returns its first argument.
    Identity,
}

impl UfChoice {
    fn label(self) -> &'static str {
        match self {
            UfChoice::Seeded => "seeded",
            UfChoice::Zero => "zero",
            UfChoice::Identity => "identity",
        }
    }

    /// `None` lets the harness draw a fresh seeded table per trace.
    fn interp(self) -> Option<UfInterp> {
        match self {
            UfChoice::Seeded => None,
            UfChoice::Zero => Some(UfInterp::Zero),
            UfChoice::Identity => Some(UfInterp::Identity),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

pub fn run(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version arrive here too; they are not errors.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Analyze(a) => analyze(&a),
        Command::Parse(a) => parse(&a),
        Command::Trace(a) => trace(&a),
        Command::Oracle(a) => oracle(&a),
    }
}

fn load(file: &Path) -> Result<Program, i32> {
    let src = fs::read_to_string(file).map_err(|e| {
        eprintln!("loopinv: {}: {e}", file.display());
        EXIT_USAGE
    })?;
    parse_program(&src).map_err(|e| {
        eprintln!("loopinv: {}: {e}", file.display());
        EXIT_USAGE
    })
}

// ---------------------------------------------------------------- analyze

#[derive(Serialize)]
struct AnalyzeReport {
    config: ConfigEcho,
    program: ProgramInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    poly: Option<PolyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fol: Option<FolReport>,
}

#[derive(Serialize)]
struct ConfigEcho {
    file: String,
    modes: Vec<&'static str>,
    max_degree: u32,
    l_max: usize,
    trace_check: usize,
    uf: &'static str,
    seed: u64,
    max_retained: usize,
    max_generated: usize,
}

#[derive(Serialize)]
struct ProgramInfo {
    scalars: Vec<String>,
    arrays: Vec<String>,
    functions: Vec<String>,
    has_assertion: bool,
}

#[derive(Serialize)]
struct PolyReport {
    /// One identity per line, denominator-cleared, `= 0` implied.
    invariants: Vec<String>,
    rounds: Vec<RoundLine>,
    stabilized: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_check: Option<PolyTraceCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_coverage: Option<OracleCoverage>,
}

#[derive(Serialize)]
struct RoundLine {
    length: usize,
    sequences: usize,
    basis_size: usize,
}

#[derive(Serialize)]
struct PolyTraceCheck {
    traces: usize,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<PolyCounterexample>,
}

#[derive(Serialize)]
struct PolyCounterexample {
    invariant: String,
    trace: usize,
    iteration: usize,
    value: String,
    point: BTreeMap<String, String>,
}

/// How much of the degree-bounded candidate space fitted from the same
/// runs is provably inside the emitted ideal. Trace checking tests the
/// ideal's soundness; this tests its coverage.
#[derive(Serialize)]
struct OracleCoverage {
    max_degree: u32,
    candidates: usize,
    members: usize,
}

#[derive(Serialize)]
struct FolReport {
    invariants: Vec<FolInvariant>,
    saturation: SaturationStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    assertion_covered: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_check: Option<FolTraceCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tptp_file: Option<String>,
}

#[derive(Serialize)]
struct FolInvariant {
    formula: String,
    clause: String,
    /// Index of the derivation record in the saturation log.
    origin: usize,
    rule: String,
    parents: Vec<usize>,
}

#[derive(Serialize)]
struct SaturationStats {
    generated: usize,
    retained: usize,
    alive: usize,
    discarded: usize,
    capped: bool,
    stopped: bool,
}

#[derive(Serialize)]
struct FolTraceCheck {
    traces: usize,
    bound: i64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<FolCounterexample>,
}

#[derive(Serialize)]
struct FolCounterexample {
    formula: String,
    trace: usize,
    witness: BTreeMap<String, i64>,
}

fn analyze(a: &AnalyzeArgs) -> i32 {
    let program = match load(&a.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let poly_mode = a.poly || !a.fol;

    let mut modes = Vec::new();
    if poly_mode {
        modes.push("poly");
    }
    if a.fol {
        modes.push("fol");
    }
    let mut report = AnalyzeReport {
        config: ConfigEcho {
            file: a.file.display().to_string(),
            modes,
            max_degree: a.max_degree,
            l_max: a.l_max,
            trace_check: a.trace_check,
            uf: a.uf.label(),
            seed: a.seed,
            max_retained: a.max_retained,
            max_generated: a.max_generated,
        },
        program: program_info(&program),
        poly: None,
        fol: None,
    };

    let traces = if a.trace_check > 0 {
        let config = HarnessConfig {
            seed: a.seed,
            traces: a.trace_check,
            uf: a.uf.interp(),
            ..HarnessConfig::default()
        };
        match run_traces(&program, &config) {
            Ok(ts) => ts,
            Err(e) => {
                eprintln!("loopinv: {}: validation run failed: {e}", a.file.display());
                return EXIT_USAGE;
            }
        }
    } else {
        Vec::new()
    };

    let mut failed = false;
    let mut capped = false;

    if poly_mode {
        let options = PipelineOptions {
            max_sequence_length: a.l_max,
            limits: Limits::default(),
        };
        let analysis = match invariant_ideal(&program, &options) {
            Ok(x) => x,
            Err(e @ PolyError::UnsupportedPath { .. }) => {
                eprintln!("loopinv: {}: {e}", a.file.display());
                return EXIT_USAGE;
            }
            Err(PolyError::Resource(e)) => {
                report.poly = Some(PolyReport {
                    invariants: Vec::new(),
                    rounds: Vec::new(),
                    stabilized: false,
                    notes: vec![format!("aborted: {e}")],
                    trace_check: None,
                    oracle_coverage: None,
                });
                capped = true;
                return finish(a.format, &report, failed, capped);
            }
        };
        let section = poly_section(&program, &analysis, a, &traces);
        failed |= section.trace_check.as_ref().is_some_and(|t| !t.passed);
        capped |= !section.stabilized;
        report.poly = Some(section);
    }

    if a.fol {
        let config = SaturateConfig {
            max_retained: a.max_retained,
            max_generated: a.max_generated,
            ..SaturateConfig::default()
        };
        let analysis = analyze_arrays(&program, &config);
        let mut section = fol_section(&analysis, &traces);
        if let Some(path) = &a.tptp {
            let derived: Vec<_> = analysis.invariants.iter().map(|b| b.clause.clone()).collect();
            if let Err(e) = fs::write(path, tptp_problem(&analysis.axioms, &derived)) {
                eprintln!("loopinv: {}: {e}", path.display());
                return EXIT_USAGE;
            }
            section.tptp_file = Some(path.display().to_string());
        }
        failed |= section.trace_check.as_ref().is_some_and(|t| !t.passed);
        capped |= analysis.saturation.capped && !analysis.saturation.stopped;
        report.fol = Some(section);
    }

    finish(a.format, &report, failed, capped)
}

fn program_info(program: &Program) -> ProgramInfo {
    ProgramInfo {
        scalars: program.scalars.clone(),
        arrays: program.arrays.clone(),
        functions: program.funs.iter().map(|(f, k)| format!("{f}/{k}")).collect(),
        has_assertion: program.assertion.is_some(),
    }
}

fn poly_section(
    program: &Program,
    analysis: &InvariantAnalysis,
    a: &AnalyzeArgs,
    traces: &[Trace],
) -> PolyReport {
    let limits = Limits::default();
    let mut notes = Vec::new();
    let invariants = match presented_invariants(analysis, &limits) {
        Ok(ps) => ps,
        Err(e) => {
            // Fall back to the raw generators: correct, just not minimized.
            notes.push(format!("presentation not minimized: {e}"));
            analysis.basis.clone()
        }
    };
    let rendered: Vec<String> = invariants.iter().map(|p| format!("{} = 0", render(p))).collect();

    let trace_check = (!traces.is_empty()).then(|| {
        let mut counterexample = None;
        'search: for (p, text) in invariants.iter().zip(&rendered) {
            for (ti, t) in traces.iter().enumerate() {
                for (si, s) in t.snapshots.iter().enumerate() {
                    let point = snapshot_point(p.vars(), &analysis.init_symbols, t, s);
                    let v = p.eval(&point);
                    if !v.is_zero() {
                        counterexample = Some(PolyCounterexample {
                            invariant: text.clone(),
                            trace: ti,
                            iteration: si,
                            value: v.to_string(),
                            point: p
                                .vars()
                                .names()
                                .iter()
                                .zip(&point)
                                .map(|(n, x)| (n.clone(), x.to_string()))
                                .collect(),
                        });
                        break 'search;
                    }
                }
            }
        }
        PolyTraceCheck {
            traces: traces.len(),
            passed: counterexample.is_none(),
            counterexample,
        }
    });

    let oracle_coverage = (!traces.is_empty()).then(|| {
        let fitted = oracle_from_traces(program, traces, a.max_degree);
        let members = fitted
            .candidates
            .iter()
            .filter(|c| analysis.implies(c, &limits).unwrap_or(false))
            .count();
        OracleCoverage {
            max_degree: a.max_degree,
            candidates: fitted.candidates.len(),
            members,
        }
    });

    PolyReport {
        invariants: rendered,
        rounds: analysis
            .rounds
            .iter()
            .map(|r| RoundLine {
                length: r.length,
                sequences: r.sequences,
                basis_size: r.basis_size,
            })
            .collect(),
        stabilized: analysis.stabilized,
        notes,
        trace_check,
        oracle_coverage,
    }
}

fn fol_section(analysis: &ArrayAnalysis, traces: &[Trace]) -> FolReport {
    let sat = &analysis.saturation;
    let invariants: Vec<FolInvariant> = analysis
        .invariants
        .iter()
        .map(|b| {
            let record = &sat.clauses[b.origin];
            FolInvariant {
                formula: b.clause.implication_form(),
                clause: b.clause.to_string(),
                origin: b.origin,
                rule: format!("{:?}", record.rule).to_lowercase(),
                parents: record.parents.clone(),
            }
        })
        .collect();

    let trace_check = (!traces.is_empty()).then(|| {
        let mut counterexample = None;
        'search: for b in &analysis.invariants {
            for (ti, t) in traces.iter().enumerate() {
                let r = ground_check(&b.clause, t, GROUND_BOUND);
                if !r.holds {
                    let vars: Vec<u32> = b.clause.vars().into_iter().collect();
                    let witness = r.witness.unwrap_or_default();
                    counterexample = Some(FolCounterexample {
                        formula: b.clause.implication_form(),
                        trace: ti,
                        witness: vars
                            .iter()
                            .zip(&witness)
                            .map(|(&v, &x)| (var_name(v), x))
                            .collect(),
                    });
                    break 'search;
                }
            }
        }
        FolTraceCheck {
            traces: traces.len(),
            bound: GROUND_BOUND,
            passed: counterexample.is_none(),
            counterexample,
        }
    });

    FolReport {
        invariants,
        saturation: SaturationStats {
            generated: sat.generated,
            retained: sat.clauses.len(),
            alive: sat.alive().count(),
            discarded: sat.discarded,
            capped: sat.capped,
            stopped: sat.stopped,
        },
        assertion_covered: analysis.covers_assertion,
        notes: analysis.axioms.notes.clone(),
        trace_check,
        tptp_file: None,
    }
}

fn finish(format: Format, report: &AnalyzeReport, failed: bool, capped: bool) -> i32 {
    match format {
        Format::Structured => println!("{}", to_json(report)),
        Format::Text => print_analyze_text(report),
    }
    if failed {
        EXIT_VALIDATION
    } else if capped {
        EXIT_RESOURCE
    } else {
        EXIT_OK
    }
}

fn print_analyze_text(report: &AnalyzeReport) {
    let c = &report.config;
    println!(
        "{} | modes: {} | seed: {} | uf: {}",
        c.file,
        c.modes.join("+"),
        c.seed,
        c.uf
    );

    if let Some(poly) = &report.poly {
        println!();
        for line in &poly.invariants {
            println!("[poly] {line}");
        }
        if poly.invariants.is_empty() {
            println!("[poly] no invariants");
        }
        for note in &poly.notes {
            println!("poly note: {note}");
        }
        let rounds: Vec<String> = poly
            .rounds
            .iter()
            .map(|r| format!("L={} ({} sequences, basis {})", r.length, r.sequences, r.basis_size))
            .collect();
        println!(
            "poly rounds: {}{}",
            rounds.join("; "),
            if poly.stabilized { "" } else { " — NOT STABILIZED, results partial" }
        );
        if let Some(tc) = &poly.trace_check {
            match &tc.counterexample {
                None => println!("poly trace check: {} runs, all invariants vanish", tc.traces),
                Some(cx) => {
                    println!(
                        "poly trace check: FAILED — {} evaluates to {} on run {}, iteration {}",
                        cx.invariant, cx.value, cx.trace, cx.iteration
                    );
                    let point: Vec<String> =
                        cx.point.iter().map(|(n, v)| format!("{n}={v}")).collect();
                    println!("  at {}", point.join(", "));
                }
            }
        }
        if let Some(oc) = &poly.oracle_coverage {
            println!(
                "poly oracle coverage: {}/{} degree<={} trace-fitted candidates are ideal members",
                oc.members, oc.candidates, oc.max_degree
            );
        }
    }

    if let Some(fol) = &report.fol {
        println!();
        for inv in &fol.invariants {
            println!("[fol] {}", inv.formula);
        }
        if fol.invariants.is_empty() {
            println!("[fol] no invariants");
        }
        let s = &fol.saturation;
        println!(
            "fol saturation: {} generated, {} retained ({} alive), {} discarded{}{}",
            s.generated,
            s.retained,
            s.alive,
            s.discarded,
            if s.capped { ", CAPPED" } else { "" },
            if s.stopped { ", stopped at goal" } else { "" }
        );
        if let Some(covered) = fol.assertion_covered {
            println!(
                "fol assertion: {}",
                if covered { "covered by derived invariants" } else { "NOT covered" }
            );
        }
        if let Some(tc) = &fol.trace_check {
            match &tc.counterexample {
                None => println!(
                    "fol trace check: {} runs, bound {}, all invariants hold",
                    tc.traces, tc.bound
                ),
                Some(cx) => {
                    let witness: Vec<String> =
                        cx.witness.iter().map(|(n, v)| format!("{n}={v}")).collect();
                    println!(
                        "fol trace check: FAILED — {} falsified on run {} at {}",
                        cx.formula,
                        cx.trace,
                        witness.join(", ")
                    );
                }
            }
        }
        if let Some(path) = &fol.tptp_file {
            println!("fol problem dump: {path}");
        }
    }
}

// ------------------------------------------------------------------ parse

#[derive(Serialize)]
struct ParseReport {
    file: String,
    program: ProgramInfo,
    canonical: String,
}

fn parse(a: &ParseArgs) -> i32 {
    let program = match load(&a.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let report = ParseReport {
        file: a.file.display().to_string(),
        program: program_info(&program),
        canonical: to_source(&program),
    };
    match a.format {
        Format::Structured => println!("{}", to_json(&report)),
        Format::Text => print!("{}", report.canonical),
    }
    EXIT_OK
}

// ------------------------------------------------------------------ trace

#[derive(Serialize)]
struct TraceReport {
    file: String,
    seed: u64,
    uf: String,
    iterations: usize,
    step_capped: bool,
    paths_taken: Vec<usize>,
    snapshots: Vec<SnapshotJson>,
}

#[derive(Serialize)]
struct SnapshotJson {
    scalars: BTreeMap<String, String>,
    arrays: BTreeMap<String, Vec<String>>,
}

fn trace(a: &TraceArgs) -> i32 {
    let program = match load(&a.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let config = HarnessConfig {
        seed: a.seed,
        traces: 1,
        step_cap: a.steps,
        array_len: a.array_len,
        uf: a.uf.interp(),
    };
    let trace = match run_traces(&program, &config) {
        Ok(mut ts) => ts.remove(0),
        Err(e) => {
            eprintln!("loopinv: {}: {e}", a.file.display());
            return EXIT_USAGE;
        }
    };
    let report = TraceReport {
        file: a.file.display().to_string(),
        seed: a.seed,
        uf: uf_label(&trace.uf),
        iterations: trace.iterations(),
        step_capped: trace.step_capped,
        paths_taken: trace.paths_taken.clone(),
        snapshots: trace.snapshots.iter().map(snapshot_json).collect(),
    };
    match a.format {
        Format::Structured => println!("{}", to_json(&report)),
        Format::Text => print_trace_text(&report),
    }
    EXIT_OK
}

fn snapshot_json(s: &crate::loopspec::Snapshot) -> SnapshotJson {
    SnapshotJson {
        scalars: s.scalars.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        arrays: s
            .arrays
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(|x| x.to_string()).collect()))
            .collect(),
    }
}

fn uf_label(uf: &UfInterp) -> String {
    match uf {
        UfInterp::Zero => "zero".to_string(),
        UfInterp::Identity => "identity".to_string(),
        UfInterp::Seeded { seed } => format!("seeded({seed})"),
    }
}

fn print_trace_text(report: &TraceReport) {
    println!(
        "{} | seed: {} | uf: {} | {} iterations{}",
        report.file,
        report.seed,
        report.uf,
        report.iterations,
        if report.step_capped { " (step-capped)" } else { "" }
    );
    let scalar_line = |s: &SnapshotJson| -> String {
        s.scalars
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let array_lines = |s: &SnapshotJson| {
        for (name, cells) in &s.arrays {
            println!("  {name} = [{}]", cells.join(", "));
        }
    };
    let first = &report.snapshots[0];
    println!("initial: {}", scalar_line(first));
    array_lines(first);
    for (k, path) in report.paths_taken.iter().enumerate() {
        println!("iter {:>3} path {}: {}", k + 1, path, scalar_line(&report.snapshots[k + 1]));
    }
    if let [.., last] = &report.snapshots[..] {
        if report.iterations > 0 {
            println!("final arrays:");
            array_lines(last);
        }
    }
}

// ----------------------------------------------------------------- oracle

#[derive(Serialize)]
struct OracleReport {
    file: String,
    seed: u64,
    uf: &'static str,
    traces: usize,
    max_degree: u32,
    rows_seen: usize,
    rows_used: usize,
    candidates: Vec<String>,
}

fn oracle(a: &OracleArgs) -> i32 {
    let program = match load(&a.file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let config = HarnessConfig {
        seed: a.seed,
        traces: a.traces,
        uf: a.uf.interp(),
        ..HarnessConfig::default()
    };
    let traces = match run_traces(&program, &config) {
        Ok(ts) => ts,
        Err(e) => {
            eprintln!("loopinv: {}: {e}", a.file.display());
            return EXIT_USAGE;
        }
    };
    let fitted = oracle_from_traces(&program, &traces, a.max_degree);
    let report = OracleReport {
        file: a.file.display().to_string(),
        seed: a.seed,
        uf: a.uf.label(),
        traces: traces.len(),
        max_degree: a.max_degree,
        rows_seen: fitted.rows_seen,
        rows_used: fitted.rows_used,
        candidates: fitted.candidates.iter().map(|p| format!("{} = 0", render(p))).collect(),
    };
    match a.format {
        Format::Structured => println!("{}", to_json(&report)),
        Format::Text => {
            println!(
                "{} | seed: {} | uf: {} | {} runs | degree <= {}",
                report.file, report.seed, report.uf, report.traces, report.max_degree
            );
            println!(
                "fitted {} candidates from {} snapshots ({} pivotal)",
                report.candidates.len(),
                report.rows_seen,
                report.rows_used
            );
            for c in &report.candidates {
                println!("[oracle] {c}");
            }
        }
    }
    EXIT_OK
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut doc = serde_json::to_string_pretty(value).expect("reports serialize");
    doc.push('\n');
    doc
}

/// Write a report to stdout, treating a vanished reader (`loopinv ... |
/// head`) as normal termination rather than a panic.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(EXIT_OK);
    }
}
