//! Command-line front end. `run` does all the work against caller-supplied
//! writers so it can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ctl::{check, counterexample, format_trace, parse_spec_file, CheckError, SpecEntry, TraceStyle};
use crate::kripke::{build_structure, BuildError, BuildLimits, KripkeStructure, Trace, Value};
use crate::sim::{compare_modes, run_simulation, ControlMode, SimConfig, SimError};
use crate::traffic::{atoms_for_specs, builtin_spec_suite, TrafficModel, TrafficParams, Variant};

/// Largest structure `graph` exports without `--force`.
pub const GRAPH_STATE_LIMIT: usize = 5000;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    SpecFailed = 1,
    Usage = 2,
    CapExceeded = 3,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "signalcheck",
    version,
    about = "Model checking and simulation of an adaptive four-way traffic signal"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the controller model and check CTL specifications against it.
    Check(CheckArgs),
    /// Run one traffic simulation and write per-lane statistics as CSV.
    Simulate(SimulateArgs),
    /// Sweep arrival rates under both control modes and write a CSV table.
    Compare(CompareArgs),
    /// Export the controller's state graph in DOT format.
    Graph(GraphArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Maximum green duration in ticks.
    #[arg(long, default_value_t = 18)]
    t_thr: u32,
    /// Largest queue length drawn at each handover.
    #[arg(long, default_value_t = 20)]
    q_max: u32,
    #[arg(long, default_value = "fixed", value_parser = parse_variant)]
    variant: Variant,
    /// Saturation value for wait counters (default 3*(t_thr+1)+3).
    #[arg(long)]
    wait_cap: Option<u32>,
}

impl ModelArgs {
    fn params(&self) -> TrafficParams {
        let mut params = TrafficParams::new(self.t_thr, self.q_max);
        if let Some(cap) = self.wait_cap {
            params.wait_cap = cap;
        }
        params
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceArg {
    Full,
    Delta,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Spec file; the built-in suite is used when omitted.
    #[arg(long)]
    specs: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "delta")]
    trace: TraceArg,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    max_states: Option<usize>,
    #[arg(long)]
    max_transitions: Option<usize>,
    /// Include wall-clock time in the report (otherwise it goes to stderr).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value = "adaptive", value_parser = parse_mode)]
    mode: ControlMode,
    /// Arrival probability per lane per tick: one value or four comma-separated.
    #[arg(long, default_value = "0.1")]
    rate: String,
    #[arg(long, default_value_t = 10_000)]
    horizon: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 18)]
    t_thr: u32,
    /// Green length in fixed mode (default t_thr).
    #[arg(long)]
    period: Option<u32>,
    /// Detection zone length in vehicles (default t_thr).
    #[arg(long)]
    detection: Option<u32>,
    /// Output path, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Comma-separated arrival probabilities.
    #[arg(long, default_value = "0.02,0.05,0.1,0.25,0.5,1.0")]
    rates: String,
    #[arg(long, default_value_t = 100_000)]
    horizon: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 18)]
    t_thr: u32,
    #[arg(long)]
    period: Option<u32>,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value = "-")]
    out: String,
    /// Export even when the graph has more than 5000 states.
    #[arg(long)]
    force: bool,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<ControlMode, String> {
    s.parse()
}

/// A failure that ends the command with a message on stderr.
struct Failure {
    code: ExitCode,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: ExitCode::Usage,
        message: message.into(),
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        let code = match e {
            BuildError::CapExceeded { .. } => ExitCode::CapExceeded,
            _ => ExitCode::Usage,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        usage(e.to_string())
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        usage(format!("i/o error: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                ExitCode::Usage
            } else {
                let _ = write!(stdout, "{text}");
                ExitCode::Pass
            };
        }
    };
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a, stdout, stderr),
        Command::Simulate(a) => cmd_simulate(a, stdout),
        Command::Compare(a) => cmd_compare(a, stdout, stderr),
        Command::Graph(a) => cmd_graph(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn model(args: &ModelArgs) -> Result<(TrafficParams, TrafficModel), Failure> {
    let params = args.params();
    let model = TrafficModel::new(params, args.variant).map_err(|e| usage(e.to_string()))?;
    Ok((params, model))
}

fn load_specs(path: &Option<PathBuf>, params: &TrafficParams) -> Result<Vec<SpecEntry>, Failure> {
    let Some(path) = path else {
        return Ok(builtin_spec_suite(params));
    };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let specs = parse_spec_file(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if specs.is_empty() {
        return Err(usage(format!("{} contains no SPEC lines", path.display())));
    }
    Ok(specs)
}

/// Machine-readable result of `check`.
#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub model: ModelInfo,
    pub state_count: usize,
    pub transition_count: usize,
    pub specs: Vec<SpecReport>,
    pub totals: Totals,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct ModelInfo {
    pub name: &'static str,
    pub variant: String,
    pub t_thr_ticks: u32,
    pub q_max: u32,
    pub wait_cap: u32,
}

#[derive(Debug, Serialize)]
pub struct SpecReport {
    pub name: String,
    pub source: String,
    pub verdict: &'static str,
    pub trace: Option<TraceReport>,
}

#[derive(Debug, Serialize)]
pub struct TraceReport {
    pub loop_back: Option<usize>,
    pub note: Option<String>,
    pub steps: Vec<TraceStepReport>,
}

#[derive(Debug, Serialize)]
pub struct TraceStepReport {
    pub state: usize,
    pub values: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Serialize)]
pub struct Totals {
    pub specs: usize,
    pub passed: usize,
    pub failed: usize,
}

impl TraceReport {
    fn new(trace: &Trace) -> Self {
        let steps = trace
            .steps
            .iter()
            .map(|step| TraceStepReport {
                state: step.state,
                values: step
                    .values
                    .iter()
                    .map(|(k, v)| {
                        let v = match v {
                            Value::Int(i) => serde_json::Value::from(*i),
                            Value::Sym(s) => serde_json::Value::from(s.as_ref()),
                        };
                        (k.clone(), v)
                    })
                    .collect(),
            })
            .collect();
        Self {
            loop_back: trace.loop_back,
            note: trace.note.clone(),
            steps,
        }
    }
}

fn cmd_check(args: &CheckArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let (params, model) = model(&args.model)?;
    let specs = load_specs(&args.specs, &params)?;
    let defaults = BuildLimits::default();
    let limits = BuildLimits {
        max_states: args.max_states.unwrap_or(defaults.max_states),
        max_transitions: args.max_transitions.unwrap_or(defaults.max_transitions),
    };
    let ks = build_structure(&model, &atoms_for_specs(&params, &specs), limits)?;

    let mut reports = Vec::with_capacity(specs.len());
    let mut traces = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let result = check(&ks, spec)?;
        let trace = if result.holds || args.trace == TraceArg::None {
            None
        } else {
            counterexample(&ks, spec, &result)?
        };
        reports.push(SpecReport {
            name: spec.display_name(i),
            source: spec.source_text.clone(),
            verdict: if result.holds { "pass" } else { "fail" },
            trace: trace.as_ref().map(TraceReport::new),
        });
        traces.push(trace);
    }
    let passed = reports.iter().filter(|r| r.verdict == "pass").count();
    let elapsed_ms = started.elapsed().as_millis() as u64;
    let report = CheckReport {
        schema_version: SCHEMA_VERSION,
        model: ModelInfo {
            name: "traffic",
            variant: args.model.variant.to_string(),
            t_thr_ticks: params.t_thr_ticks,
            q_max: params.q_max,
            wait_cap: params.wait_cap,
        },
        state_count: ks.state_count(),
        transition_count: ks.transition_count(),
        totals: Totals {
            specs: reports.len(),
            passed,
            failed: reports.len() - passed,
        },
        specs: reports,
        wall_clock_ms: args.timing.then_some(elapsed_ms),
    };

    match args.format {
        FormatArg::Json => {
            serde_json::to_writer_pretty(&mut *stdout, &report).map_err(|e| usage(e.to_string()))?;
            writeln!(stdout)?;
        }
        FormatArg::Text => {
            let style = match args.trace {
                TraceArg::Full => TraceStyle::Full,
                _ => TraceStyle::Delta,
            };
            stdout.write_all(render_text(&report, &traces, &ks, style).as_bytes())?;
        }
    }
    if !args.timing {
        writeln!(stderr, "checked in {elapsed_ms} ms")?;
    }
    Ok(if report.totals.failed == 0 {
        ExitCode::Pass
    } else {
        ExitCode::SpecFailed
    })
}

fn render_text(report: &CheckReport, traces: &[Option<Trace>], ks: &KripkeStructure, style: TraceStyle) -> String {
    let m = &report.model;
    let mut out = String::new();
    writeln!(
        out,
        "model: {} variant={} t_thr={} q_max={} wait_cap={}",
        m.name, m.variant, m.t_thr_ticks, m.q_max, m.wait_cap
    )
    .unwrap();
    writeln!(
        out,
        "states: {}, transitions: {}",
        ks.state_count(),
        ks.transition_count()
    )
    .unwrap();
    for (spec, trace) in report.specs.iter().zip(traces) {
        let verdict = if spec.verdict == "pass" { "true" } else { "false" };
        writeln!(out, "-- specification {} ({}) is {verdict}", spec.source, spec.name).unwrap();
        if let Some(trace) = trace {
            out.push_str("-- as demonstrated by the following execution sequence\n");
            out.push_str(&format_trace(trace, style));
        }
    }
    let t = &report.totals;
    writeln!(
        out,
        "summary: {} specs, {} passed, {} failed",
        t.specs, t.passed, t.failed
    )
    .unwrap();
    if let Some(ms) = report.wall_clock_ms {
        writeln!(out, "time: {ms} ms").unwrap();
    }
    out
}

fn parse_rates(text: &str) -> Result<Vec<f64>, Failure> {
    let rates = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| usage(format!("'{s}' is not a number"))))
        .collect::<Result<Vec<_>, _>>()?;
    if rates.is_empty() {
        return Err(usage("rate list is empty"));
    }
    if let Some(p) = rates.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(usage(format!("rate {p} is outside [0, 1]")));
    }
    Ok(rates)
}

fn emit(out: &str, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    if out == "-" {
        stdout.write_all(text.as_bytes())?;
    } else {
        std::fs::write(out, text).map_err(|e| usage(format!("cannot write {out}: {e}")))?;
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<ExitCode, Failure> {
    let rates = parse_rates(&args.rate)?;
    let arrival_prob = match rates[..] {
        [p] => [p; 4],
        [a, b, c, d] => [a, b, c, d],
        _ => return Err(usage("--rate takes one value or four comma-separated values")),
    };
    let config = SimConfig {
        mode: args.mode,
        t_thr_ticks: args.t_thr,
        fixed_period_ticks: args.period.unwrap_or(args.t_thr),
        arrival_prob,
        horizon_ticks: args.horizon,
        seed: args.seed,
        detection_distance_ticks: args.detection.unwrap_or(args.t_thr),
    };
    let stats = run_simulation(&config)?;
    emit(&args.out, &stats.to_csv(), stdout)?;
    Ok(ExitCode::Pass)
}

fn cmd_compare(args: &CompareArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<ExitCode, Failure> {
    let rates = parse_rates(&args.rates)?;
    let base = SimConfig {
        fixed_period_ticks: args.period.unwrap_or(args.t_thr),
        horizon_ticks: args.horizon,
        seed: args.seed,
        ..SimConfig::new(ControlMode::Adaptive, args.t_thr)
    };
    let cmp = compare_modes(&base, &rates)?;
    for w in &cmp.warnings {
        writeln!(stderr, "warning: {w}")?;
    }
    emit(&args.out, &cmp.to_csv(), stdout)?;
    Ok(ExitCode::Pass)
}

fn cmd_graph(args: &GraphArgs, stdout: &mut dyn Write) -> Result<ExitCode, Failure> {
    let (params, model) = model(&args.model)?;
    let atoms = atoms_for_specs(&params, &[]);
    let ks = if args.force {
        build_structure(&model, &atoms, BuildLimits::default())?
    } else {
        let limits = BuildLimits {
            max_states: GRAPH_STATE_LIMIT + 1,
            ..BuildLimits::default()
        };
        match build_structure(&model, &atoms, limits) {
            Err(BuildError::CapExceeded { .. }) => {
                return Err(usage(format!(
                    "the state graph has more than {GRAPH_STATE_LIMIT} states; \
                     choose smaller --t-thr/--q-max or pass --force"
                )))
            }
            other => other?,
        }
    };
    if !args.force && ks.state_count() > GRAPH_STATE_LIMIT {
        return Err(usage(format!(
            "the state graph has {} states (limit {GRAPH_STATE_LIMIT}); pass --force to export it",
            ks.state_count()
        )));
    }
    let dot = ks.export_dot(&[]).map_err(|e| usage(e.to_string()))?;
    emit(&args.out, &dot, stdout)?;
    Ok(ExitCode::Pass)
}
