//! The `rrr` command-line harness: instance generation, MAP benchmarks and
//! log-partition benchmarks.
//!
//! Every report embeds the configuration that produced it (minus output
//! locations), so rerunning the same command reproduces it byte-for-byte.
//! Exit codes: 0 success, 1 usage error, 2 input-format error, 3 budget or
//! cap violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::export::{
    write_atomic, write_chain_trace_csv, write_logz_table_csv, write_lrp_trace_csv,
    write_samples_csv, LogzRow,
};
use crate::generate::{gen_hard_rbm, gen_random_rbm, HardRbmOptions};
use crate::gibbs::{annealed_gibbs_uniform, rrr_ag_clamped, AnnealSchedule, ChainState, Clamp};
use crate::io::Instance;
use crate::model::{canonicalize_auxiliary, Domain, RbmParams};
use crate::oracle::{brute_force_map, DEFAULT_ENUMERATION_CAP};
use crate::partition::{
    ais_logz, exact_logz_mrf, exact_logz_rbm, rrr_is_exact_support, rrr_is_from_batch, rrr_low,
    Budget, EstimateReport, Estimator,
};
use crate::reduce::Embedding;
use crate::relax::{solve_lrp, LrpOptions, RelaxedSolution};
use crate::rng::derive_seed;
use crate::rounding::{build_px_k2, rrr_map_sample, SampleBatch};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_BUDGET,
            message: message.into(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_)
        | Error::Format(_)
        | Error::Json(_)
        | Error::DimensionMismatch { .. }
        | Error::DomainMismatch { .. }
        | Error::NonFinite(_)
        | Error::InvalidAssignment { .. }
        | Error::IndexOutOfRange { .. } => EXIT_INPUT,
        Error::CapExceeded { .. }
        | Error::UnsupportedWidth(_)
        | Error::InvalidOption(_)
        | Error::EmptyBatch => EXIT_BUDGET,
        Error::ZeroProposalProbability => EXIT_USAGE,
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        Self {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err).into()
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "rrr",
    version,
    about = "Randomized relax-and-round MAP inference and log-partition estimation for binary MRFs and RBMs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random or planted-hard RBM instance.
    Gen(GenArgs),
    /// Search for high-scoring assignments with one or more methods.
    Map(MapArgs),
    /// Estimate the log-partition function.
    Logz(LogzArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Random,
    Hard,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Pm1,
    #[value(name = "01")]
    ZeroOne,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Pm1 => Domain::PlusMinusOne,
            DomainArg::ZeroOne => Domain::ZeroOne,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: InstanceKind,
    /// Number of visible units.
    #[arg(long)]
    pub m: usize,
    /// Number of hidden units.
    #[arg(long)]
    pub p: usize,
    /// Planted pairs (hard instances only).
    #[arg(long, default_value_t = 3)]
    pub pairs: usize,
    /// Planted coupling weight (hard instances only).
    #[arg(long, default_value_t = 5000.0)]
    pub couple: f64,
    /// Planted bias on both units of each pair (hard instances only).
    #[arg(long, default_value_t = 500.0)]
    pub bias: f64,
    /// Unit values of the written instance; parameters are drawn identically.
    #[arg(long, value_enum, default_value = "pm1")]
    pub domain: DomainArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum MapMethod {
    #[serde(rename = "rrr")]
    Rrr,
    #[serde(rename = "ag")]
    Ag,
    #[serde(rename = "rrr-ag")]
    RrrAg,
    #[serde(rename = "brute")]
    Brute,
}

#[derive(Debug, Args, Serialize)]
pub struct MapArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub methods: Vec<MapMethod>,
    #[arg(long)]
    pub seed: u64,
    /// Relaxation width k.
    #[arg(long, default_value_t = 2)]
    pub width: usize,
    /// Rounded samples drawn by rrr.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    /// Sweeps per annealed Gibbs chain.
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 10.0)]
    pub t_high: f64,
    /// Chains for ag and rrr-ag.
    #[arg(long, default_value_t = 8)]
    pub chains: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Directory for CSV plot data (relaxation trace, sample scores, chain traces).
    #[arg(long)]
    #[serde(skip)]
    pub dump_dir: Option<PathBuf>,
    /// Record wall-clock seconds (makes reports non-reproducible).
    #[arg(long)]
    #[serde(skip)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum LogzMethod {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "ais")]
    Ais,
    #[serde(rename = "rrr-low")]
    RrrLow,
    #[serde(rename = "rrr-is")]
    RrrIs,
}

#[derive(Debug, Args, Serialize)]
pub struct LogzArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub methods: Vec<LogzMethod>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub num_temps: usize,
    #[arg(long, default_value_t = 100)]
    pub num_runs: usize,
    /// Rounded samples shared by rrr-low and rrr-is.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 2)]
    pub width: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub timing: bool,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{shown}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{shown}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a, stdout),
        Command::Map(a) => cmd_map(a, stdout),
        Command::Logz(a) => cmd_logz(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_instance(path: &Path) -> CliResult<Instance> {
    Instance::read(path).map_err(|e| CliError {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

pub fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let rbm = match args.kind {
        InstanceKind::Random => gen_random_rbm(args.m, args.p, args.seed),
        InstanceKind::Hard => {
            let opts = HardRbmOptions {
                pairs: args.pairs,
                couple: args.couple,
                bias: args.bias,
            };
            gen_hard_rbm(args.m, args.p, &opts, args.seed)
        }
    }
    .map_err(|e| CliError::usage(e.to_string()))?;
    let rbm = match Domain::from(args.domain) {
        Domain::PlusMinusOne => rbm,
        d => RbmParams::new(
            rbm.weights().clone(),
            rbm.visible_bias().to_vec(),
            rbm.hidden_bias().to_vec(),
            d,
        )?,
    };
    emit(args.out.as_deref(), &Instance::Rbm(rbm).to_json()?, stdout)
}

fn embed(instance: &Instance) -> CliResult<Embedding> {
    Ok(match instance {
        Instance::Mrf(p) => Embedding::of_mrf(p)?,
        Instance::Rbm(r) => Embedding::of_rbm(r)?,
    })
}

#[derive(Serialize)]
struct InstanceSummary {
    kind: &'static str,
    domain: Domain,
    variables: usize,
    embedded_variables: usize,
}

impl InstanceSummary {
    fn new(instance: &Instance, emb: &Embedding) -> Self {
        let domain = match instance {
            Instance::Mrf(p) => p.domain(),
            Instance::Rbm(r) => r.domain(),
        };
        Self {
            kind: instance.kind(),
            domain,
            variables: emb.source_len(),
            embedded_variables: emb.mrf.n(),
        }
    }
}

fn require_positive(name: &str, value: usize) -> CliResult<()> {
    if value == 0 {
        return Err(CliError::budget(format!("--{name} must be positive")));
    }
    Ok(())
}

fn lrp_options(width: usize, restarts: usize, max_iters: usize, seed: u64) -> LrpOptions {
    LrpOptions {
        width,
        restarts,
        max_iters,
        seed,
        ..LrpOptions::default()
    }
}

#[derive(Serialize)]
struct MethodResult {
    method: MapMethod,
    score: f64,
    assignment: Vec<i8>,
    /// Work in sweep-equivalents (one matrix-vector product each).
    #[serde(skip_serializing_if = "Option::is_none")]
    cost_sweeps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    corners_enumerated: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relaxation_objective: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    relaxation_trace: Vec<f64>,
    /// Score after each sweep of the winning chain.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    score_trace: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_secs: Option<f64>,
}

#[derive(Serialize)]
struct MapReport<'a> {
    command: &'static str,
    config: &'a MapArgs,
    instance: InstanceSummary,
    results: Vec<MethodResult>,
    winner: MapMethod,
    best_score: f64,
    best_assignment: Vec<i8>,
}

fn assignment_string(values: &[i8]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_map(args: &MapArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let instance = read_instance(&args.instance)?;
    let emb = embed(&instance)?;
    let n = emb.mrf.n();
    let wants = |m: MapMethod| args.methods.contains(&m);
    let relaxed = wants(MapMethod::Rrr) || wants(MapMethod::RrrAg);
    let annealed = wants(MapMethod::Ag) || wants(MapMethod::RrrAg);
    if relaxed {
        require_positive("restarts", args.restarts)?;
        require_positive("max-iters", args.max_iters)?;
        if args.width == 0 || args.width > n {
            return Err(CliError::budget(format!(
                "--width must be between 1 and {n}, got {}",
                args.width
            )));
        }
    }
    if wants(MapMethod::Rrr) {
        require_positive("samples", args.samples)?;
    }
    if annealed {
        require_positive("chains", args.chains)?;
        require_positive("sweeps", args.sweeps)?;
    }
    if wants(MapMethod::Brute) && n > DEFAULT_ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            what: "brute-force variables",
            value: n,
            cap: DEFAULT_ENUMERATION_CAP,
        }
        .into());
    }
    let schedule = if annealed {
        AnnealSchedule::linear(args.t_high, args.sweeps)?
    } else {
        AnnealSchedule::constant(0)
    };
    if let Some(dir) = &args.dump_dir {
        fs::create_dir_all(dir)?;
    }
    let dump = |name: &str, write: &dyn Fn(&mut Vec<u8>) -> std::io::Result<()>| -> CliResult<()> {
        if let Some(dir) = &args.dump_dir {
            let mut buf = Vec::new();
            write(&mut buf)?;
            write_atomic(&dir.join(name), &buf)?;
        }
        Ok(())
    };
    let clock = |start: Instant| args.timing.then(|| start.elapsed().as_secs_f64());

    let start = Instant::now();
    let relaxation: Option<RelaxedSolution> = if relaxed {
        let opts = lrp_options(args.width, args.restarts, args.max_iters, derive_seed(args.seed, 0));
        let sol = solve_lrp(&emb.mrf, &opts)?;
        dump("relaxation_trace.csv", &|w| write_lrp_trace_csv(w, &sol.trace))?;
        Some(sol)
    } else {
        None
    };
    let relax_secs = clock(start);
    let relax_cost = relaxation.as_ref().map_or(0, |s| s.total_iterations as u64);
    let clamp = if emb.auxiliary { Clamp::Auxiliary } else { Clamp::None };

    let chain_result = |method: MapMethod, state: ChainState, cost: u64, secs| MethodResult {
        method,
        score: emb.source_score(state.best_score),
        assignment: emb.recover(&state.best).into_values(),
        cost_sweeps: Some(cost),
        corners_enumerated: None,
        relaxation_objective: None,
        relaxation_trace: Vec::new(),
        score_trace: state
            .score_trace
            .iter()
            .map(|&s| emb.source_score(s))
            .collect(),
        wall_clock_secs: secs,
    };

    let mut results = Vec::new();
    for &method in &args.methods {
        let start = Instant::now();
        let result = match method {
            MapMethod::Rrr => {
                let sol = relaxation.as_ref().expect("relaxation solved");
                let batch = rrr_map_sample(&emb.mrf, &sol.x, args.samples, derive_seed(args.seed, 1))?;
                let shifted = SampleBatch {
                    samples: Vec::new(),
                    scores: batch.scores.iter().map(|&s| emb.source_score(s)).collect(),
                    seed: batch.seed,
                };
                dump("samples.csv", &|w| write_samples_csv(w, &shifted))?;
                let (best, s) = batch.best().expect("samples >= 1");
                MethodResult {
                    method,
                    score: emb.source_score(s),
                    assignment: emb.recover(best).into_values(),
                    cost_sweeps: Some(relax_cost + args.samples as u64),
                    corners_enumerated: None,
                    relaxation_objective: Some(sol.objective),
                    relaxation_trace: sol.trace.clone(),
                    score_trace: Vec::new(),
                    wall_clock_secs: clock(start).zip(relax_secs).map(|(a, b)| a + b),
                }
            }
            MapMethod::Ag => {
                let state = annealed_gibbs_uniform(&emb.mrf, &schedule, args.chains, clamp, derive_seed(args.seed, 2))?;
                dump("ag_trace.csv", &|w| write_chain_trace_csv(w, &state, &schedule, emb.offset))?;
                let cost = (args.chains * args.sweeps) as u64;
                chain_result(method, state, cost, clock(start))
            }
            MapMethod::RrrAg => {
                let sol = relaxation.as_ref().expect("relaxation solved");
                let state = rrr_ag_clamped(&emb.mrf, &sol.x, &schedule, args.chains, clamp, derive_seed(args.seed, 3))?;
                dump("rrr_ag_trace.csv", &|w| write_chain_trace_csv(w, &state, &schedule, emb.offset))?;
                let cost = relax_cost + (args.chains * (1 + args.sweeps)) as u64;
                chain_result(method, state, cost, clock(start).zip(relax_secs).map(|(a, b)| a + b))
            }
            MapMethod::Brute => {
                let (best, s) = brute_force_map(&emb.mrf)?;
                MethodResult {
                    method,
                    score: emb.source_score(s),
                    assignment: emb.recover(&best).into_values(),
                    cost_sweeps: None,
                    corners_enumerated: Some(1u64 << n),
                    relaxation_objective: None,
                    relaxation_trace: Vec::new(),
                    score_trace: Vec::new(),
                    wall_clock_secs: clock(start),
                }
            }
        };
        results.push(result);
    }

    let winner = results
        .iter()
        .fold(None::<&MethodResult>, |best, r| match best {
            Some(b) if b.score >= r.score => Some(b),
            _ => Some(r),
        })
        .expect("at least one method");
    let text = match args.format {
        Format::Json => to_json(&MapReport {
            command: "map",
            config: args,
            instance: InstanceSummary::new(&instance, &emb),
            winner: winner.method,
            best_score: winner.score,
            best_assignment: winner.assignment.clone(),
            results,
        })?,
        Format::Csv => {
            let mut s = String::from("method,score,cost_sweeps,winner,assignment\n");
            for r in &results {
                let name = serde_json::to_value(r.method).map_err(Error::from)?;
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    name.as_str().unwrap_or_default(),
                    r.score,
                    r.cost_sweeps.map(|c| c.to_string()).unwrap_or_default(),
                    u8::from(r.method == winner.method),
                    assignment_string(&r.assignment)
                ));
            }
            s
        }
    };
    emit(args.out.as_deref(), &text, stdout)
}

#[derive(Serialize)]
struct LogzEntry {
    #[serde(flatten)]
    report: EstimateReport,
    /// rrr-is only: the estimator's exact expectation over the rounding support.
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_support_log_z: Option<f64>,
}

#[derive(Serialize)]
struct LogzTable {
    #[serde(rename = "True")]
    truth: Option<f64>,
    #[serde(rename = "AIS")]
    ais: Option<f64>,
    #[serde(rename = "rrr-low")]
    rrr_low: Option<f64>,
    #[serde(rename = "rrr-IS")]
    rrr_is: Option<f64>,
}

#[derive(Serialize)]
struct LogzReport<'a> {
    command: &'static str,
    config: &'a LogzArgs,
    instance: InstanceSummary,
    estimates: Vec<LogzEntry>,
    table: LogzTable,
}

pub fn cmd_logz(args: &LogzArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let instance = read_instance(&args.instance)?;
    let emb = embed(&instance)?;
    let wants = |m: LogzMethod| args.methods.contains(&m);
    let rounded = wants(LogzMethod::RrrLow) || wants(LogzMethod::RrrIs);
    if wants(LogzMethod::Ais) && !matches!(instance, Instance::Rbm(_)) {
        return Err(CliError::usage("ais requires an RBM instance"));
    }
    if wants(LogzMethod::Exact) {
        let (what, size) = match &instance {
            Instance::Mrf(p) => ("variables", p.n()),
            Instance::Rbm(r) => ("visible units", r.m()),
        };
        if size > DEFAULT_ENUMERATION_CAP {
            return Err(Error::CapExceeded {
                what,
                value: size,
                cap: DEFAULT_ENUMERATION_CAP,
            }
            .into());
        }
    }
    if wants(LogzMethod::Ais) {
        require_positive("num-runs", args.num_runs)?;
        if args.num_temps < 2 {
            return Err(CliError::budget("--num-temps must be at least 2"));
        }
    }
    if rounded {
        require_positive("samples", args.samples)?;
        require_positive("restarts", args.restarts)?;
        require_positive("max-iters", args.max_iters)?;
        if args.width == 0 || args.width > emb.mrf.n() {
            return Err(CliError::budget(format!(
                "--width must be between 1 and {}, got {}",
                emb.mrf.n(),
                args.width
            )));
        }
    }
    if wants(LogzMethod::RrrIs) && args.width != 2 {
        return Err(Error::UnsupportedWidth(args.width).into());
    }

    let strip = |mut r: EstimateReport, start: Instant| {
        r.wall_clock_secs = args.timing.then(|| start.elapsed().as_secs_f64());
        r
    };
    let start = Instant::now();
    let sampled = if rounded {
        let opts = lrp_options(args.width, args.restarts, args.max_iters, derive_seed(args.seed, 2));
        let sol = solve_lrp(&emb.mrf, &opts)?;
        let batch = rrr_map_sample(&emb.mrf, &sol.x, args.samples, derive_seed(args.seed, 3))?;
        Some((sol, batch))
    } else {
        None
    };
    let rounding_cost = sampled
        .as_ref()
        .map_or(0, |(s, b)| (s.total_iterations + b.len()) as u64);
    let shift = emb.offset - emb.log_multiplicity();

    let mut estimates = Vec::new();
    let mut table = LogzTable {
        truth: None,
        ais: None,
        rrr_low: None,
        rrr_is: None,
    };
    for &method in &args.methods {
        let t0 = Instant::now();
        let entry = match method {
            LogzMethod::Exact => {
                let log_z = match &instance {
                    Instance::Mrf(p) => exact_logz_mrf(p)?,
                    Instance::Rbm(r) => exact_logz_rbm(r)?,
                };
                table.truth = Some(log_z);
                LogzEntry {
                    report: strip(EstimateReport::new(Estimator::Exact, log_z, Budget::default(), None), t0),
                    exact_support_log_z: None,
                }
            }
            LogzMethod::Ais => {
                let Instance::Rbm(rbm) = &instance else {
                    unreachable!("checked above")
                };
                let report = ais_logz(rbm, args.num_temps, args.num_runs, derive_seed(args.seed, 1))?;
                table.ais = Some(report.log_z);
                LogzEntry {
                    report: strip(report, t0),
                    exact_support_log_z: None,
                }
            }
            LogzMethod::RrrLow => {
                let (_, batch) = sampled.as_ref().expect("samples drawn");
                // x and −x are the same original corner when an auxiliary
                // variable is present; canonicalize before deduplicating.
                let canon = SampleBatch {
                    samples: if emb.auxiliary {
                        batch.samples.iter().map(canonicalize_auxiliary).collect()
                    } else {
                        batch.samples.clone()
                    },
                    scores: batch.scores.clone(),
                    seed: batch.seed,
                };
                let mut report = rrr_low(&emb.mrf, &canon)?;
                report.log_z += emb.offset;
                report.budget.sweeps = Some(rounding_cost);
                table.rrr_low = Some(report.log_z);
                LogzEntry {
                    report: strip(report, start),
                    exact_support_log_z: None,
                }
            }
            LogzMethod::RrrIs => {
                let (sol, batch) = sampled.as_ref().expect("samples drawn");
                let dist = build_px_k2(&sol.x)?;
                let mut report = rrr_is_from_batch(&emb.mrf, &dist, &sol.x, batch)?;
                report.log_z += shift;
                report.budget.sweeps = Some(rounding_cost);
                table.rrr_is = Some(report.log_z);
                let exact_support = rrr_is_exact_support(&emb.mrf, &sol.x)? + shift;
                LogzEntry {
                    report: strip(report, start),
                    exact_support_log_z: Some(exact_support),
                }
            }
        };
        estimates.push(entry);
    }

    let text = match args.format {
        Format::Json => to_json(&LogzReport {
            command: "logz",
            config: args,
            instance: InstanceSummary::new(&instance, &emb),
            estimates,
            table,
        })?,
        Format::Csv => {
            let mut buf = Vec::new();
            let row = LogzRow {
                truth: table.truth,
                ais: table.ais,
                rrr_low: table.rrr_low,
                rrr_is: table.rrr_is,
            };
            write_logz_table_csv(&mut buf, &[row])?;
            String::from_utf8(buf).expect("CSV is UTF-8")
        }
    };
    emit(args.out.as_deref(), &text, stdout)
}
