//! The `minfinity` command-line runner.
//!
//! Exit codes: 0 ok, 1 verification violation, 2 usage, 3 numerical or
//! evaluation failure, 4 I/O.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{sample_contour, stationarity_scan, Axis, ContourGrid, GridCell};
use crate::augment::{value_and_gradient, AugConfig, SaturationPolicy, DEFAULT_B_CLAMP, DEFAULT_LAMBDA};
use crate::field::{field_by_name, registry, Interval, ThetaVector};
use crate::optimize::{
    compare_baseline, resolve_start, run_with, Objective, OptimizerKind, OptimizerSpec, Outcome, StartSpec, Thresholds,
    DEFAULT_AUX_START,
};
use crate::render::{default_levels, render_svg};
use crate::verify::{run_suites, Suite, VerifyConfig};

pub const SEED_ENV: &str = "MINFINITY_SEED";

pub mod exit {
    pub const OK: u8 = 0;
    pub const VIOLATION: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const NUMERICAL: u8 = 3;
    pub const IO: u8 = 4;
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(m: impl ToString) -> Self {
        Self { code: exit::USAGE, message: m.to_string() }
    }
    fn numerical(m: impl ToString) -> Self {
        Self { code: exit::NUMERICAL, message: m.to_string() }
    }
    fn io(path: &Path, e: io::Error) -> Self {
        Self { code: exit::IO, message: format!("{}: {e}", path.display()) }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "minfinity", version, about = "Augmented loss landscapes: evaluation, optimization and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the shipped fields as JSON.
    Fields,
    /// Evaluate L, L̃ and the gradient of L̃ at one point.
    Eval(EvalArgs),
    /// Sample L̃ over an (a, b) grid at a fixed base-loss value.
    Contour(ContourArgs),
    /// Run a property suite; exit 1 on any violation.
    Verify(VerifyArgs),
    /// Run one optimizer and classify the trajectory.
    Optimize(RunArgs),
    /// Run plain and augmented descent side by side.
    Compare(RunArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub field: String,
    /// Comma-separated coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub theta: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,
}

#[derive(Debug, Args)]
pub struct ContourArgs {
    #[arg(long = "l-slice", default_value_t = 1.0)]
    pub l_slice: f64,
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,
    #[arg(long = "a-range", value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-2.0, 2.0])]
    pub a_range: Vec<f64>,
    #[arg(long = "b-range", value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-2.0, 4.0])]
    pub b_range: Vec<f64>,
    /// Points per axis; give two values for separate a and b resolutions.
    #[arg(long, value_delimiter = ',', default_values_t = [101])]
    pub resolution: Vec<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write contour.svg.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,
    /// Restrict to one field (default: every shipped field).
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub grad_points: Option<usize>,
    #[arg(long)]
    pub finder_seeds: Option<usize>,
    #[arg(long)]
    pub infimum_points: Option<usize>,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartKind {
    Explicit,
    SeededRandom,
    BadMinimum,
    GlobalMinimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerArg {
    Gd,
    Momentum,
    Adam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Augmented,
    Plain,
}

/// Flags shared by `optimize` and `compare`; each overrides the config file.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub optimizer: Option<OptimizerArg>,
    #[arg(long)]
    pub step_size: Option<f64>,
    #[arg(long)]
    pub momentum: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<u64>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub start: Option<StartKind>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Which registered bad minimum to start from.
    #[arg(long)]
    pub bad_index: Option<usize>,
    /// `optimize` only.
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved settings for `optimize` and `compare`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub field: String,
    pub lambda: f64,
    pub b_clamp: f64,
    pub saturation: SaturationPolicy,
    pub optimizer: OptimizerSpec,
    pub start: StartSpec,
    pub objective: Objective,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub formats: Vec<OutputFormat>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            field: "rastrigin-1d".into(),
            lambda: DEFAULT_LAMBDA,
            b_clamp: DEFAULT_B_CLAMP,
            saturation: SaturationPolicy::default(),
            optimizer: OptimizerSpec::default(),
            start: StartSpec::SeededRandom,
            objective: Objective::Augmented,
            out: PathBuf::from("."),
            seed: None,
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
        }
    }
}

impl RunConfig {
    fn wants(&self, f: OutputFormat) -> bool {
        self.formats.contains(&f)
    }

    fn aug_config(&self) -> CliResult<AugConfig> {
        AugConfig::new(self.lambda, self.b_clamp, self.saturation).map_err(CliError::usage)
    }

    fn thresholds(&self) -> Thresholds {
        Thresholds {
            grad_tol: self.optimizer.grad_tol,
            ..Thresholds::default()
        }
    }
}

/// Seed precedence: flag, then config file, then `MINFINITY_SEED`, then 0.
pub fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag.or(file) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{SEED_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(0),
    }
}

pub fn resolve_run_config(args: &RunArgs) -> CliResult<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(f) = &args.field {
        cfg.field = f.clone();
    }
    if let Some(l) = args.lambda {
        cfg.lambda = l;
    }
    if let Some(k) = args.optimizer {
        cfg.optimizer.kind = match k {
            OptimizerArg::Gd => OptimizerKind::Gd,
            OptimizerArg::Momentum => OptimizerKind::Momentum,
            OptimizerArg::Adam => OptimizerKind::Adam,
        };
    }
    if let Some(s) = args.step_size {
        cfg.optimizer.step_size = s;
    }
    if let Some(m) = args.momentum {
        cfg.optimizer.momentum = m;
    }
    if let Some(n) = args.max_steps {
        cfg.optimizer.max_steps = n;
    }
    if let Some(t) = args.grad_tol {
        cfg.optimizer.grad_tol = t;
    }
    if let Some(o) = args.objective {
        cfg.objective = match o {
            ObjectiveArg::Augmented => Objective::Augmented,
            ObjectiveArg::Plain => Objective::Plain,
        };
    }
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }

    let start_flags = args.theta.is_some() || args.a.is_some() || args.b.is_some() || args.bad_index.is_some();
    if args.start.is_some() || start_flags {
        let (cur_a, cur_b) = match &cfg.start {
            StartSpec::Explicit { a, b, .. } | StartSpec::BadMinimum { a, b, .. } | StartSpec::GlobalMinimum { a, b } => {
                (*a, *b)
            }
            StartSpec::SeededRandom => DEFAULT_AUX_START,
        };
        let a = args.a.unwrap_or(cur_a);
        let b = args.b.unwrap_or(cur_b);
        let kind = args.start.unwrap_or(match (&cfg.start, &args.theta, args.bad_index) {
            (_, Some(_), _) => StartKind::Explicit,
            (_, _, Some(_)) => StartKind::BadMinimum,
            (StartSpec::Explicit { .. }, ..) => StartKind::Explicit,
            (StartSpec::BadMinimum { .. }, ..) => StartKind::BadMinimum,
            (StartSpec::GlobalMinimum { .. }, ..) => StartKind::GlobalMinimum,
            (StartSpec::SeededRandom, ..) => StartKind::SeededRandom,
        });
        cfg.start = match kind {
            StartKind::Explicit => {
                let theta = match (&args.theta, &cfg.start) {
                    (Some(t), _) => t.clone(),
                    (None, StartSpec::Explicit { theta, .. }) => theta.clone(),
                    _ => return Err(CliError::usage("an explicit start needs --theta")),
                };
                StartSpec::Explicit { theta, a, b }
            }
            StartKind::SeededRandom => StartSpec::SeededRandom,
            StartKind::BadMinimum => {
                let index = match (args.bad_index, &cfg.start) {
                    (Some(i), _) => i,
                    (None, StartSpec::BadMinimum { index, .. }) => *index,
                    _ => 0,
                };
                StartSpec::BadMinimum { index, a, b }
            }
            StartKind::GlobalMinimum => StartSpec::GlobalMinimum { a, b },
        };
    }
    cfg.seed = Some(resolve_seed(args.seed, cfg.seed)?);
    cfg.optimizer.validate().map_err(CliError::usage)?;
    cfg.aug_config()?;
    field_by_name(&cfg.field).map_err(CliError::usage)?;
    Ok(cfg)
}

fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> io::Result<()>) -> CliResult<()> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    write(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    write_file(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::from)?;
        writeln!(w)
    })
}

/// Writes one line to stdout. A closed pipe (`| head`) is not an error.
fn emit(line: impl std::fmt::Display) -> CliResult<()> {
    match writeln!(io::stdout().lock(), "{line}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::io(Path::new("<stdout>"), e)),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    emit(serde_json::to_string_pretty(value).map_err(CliError::numerical)?)
}

#[derive(Serialize)]
struct FieldInfo<'a> {
    name: &'a str,
    dim: usize,
    domain: &'a [Interval],
    offset: f64,
    normalized: bool,
    global_min: Option<&'a ThetaVector>,
    known_bad_minima: Vec<BadMinimumInfo<'a>>,
}

#[derive(Serialize)]
struct BadMinimumInfo<'a> {
    theta: &'a ThetaVector,
    value: f64,
}

fn cmd_fields() -> CliResult<u8> {
    let infos: Vec<FieldInfo> = registry()
        .iter()
        .map(|f| FieldInfo {
            name: f.name(),
            dim: f.dim(),
            domain: f.domain(),
            offset: f.offset(),
            normalized: f.is_normalized(),
            global_min: f.global_min(),
            known_bad_minima: f
                .known_bad_minima()
                .iter()
                .map(|m| BadMinimumInfo { theta: &m.theta, value: m.value })
                .collect(),
        })
        .collect();
    print_json(&infos)?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct EvalConfig<'a> {
    field: &'a str,
    theta: &'a [f64],
    a: f64,
    b: f64,
    lambda: f64,
    b_clamp: f64,
    saturation: SaturationPolicy,
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    config: EvalConfig<'a>,
    #[serde(rename = "L")]
    base: f64,
    #[serde(rename = "L_tilde")]
    value: f64,
    u: f64,
    d_theta: Vec<f64>,
    d_a: f64,
    d_b: f64,
}

fn cmd_eval(args: &EvalArgs) -> CliResult<u8> {
    let field = field_by_name(&args.field).map_err(CliError::usage)?;
    field.check_dim(&args.theta).map_err(CliError::usage)?;
    let cfg = AugConfig::new(args.lambda, DEFAULT_B_CLAMP, SaturationPolicy::Error).map_err(CliError::usage)?;
    if !(args.a.is_finite() && args.b.is_finite()) || args.theta.iter().any(|t| !t.is_finite()) {
        return Err(CliError::usage("theta, a and b must be finite"));
    }
    field.check_domain(&args.theta).map_err(CliError::numerical)?;
    let (e, g) = value_and_gradient(field, &args.theta, args.a, args.b, &cfg).map_err(CliError::numerical)?;
    print_json(&EvalOutput {
        config: EvalConfig {
            field: field.name(),
            theta: &args.theta,
            a: args.a,
            b: args.b,
            lambda: cfg.lambda,
            b_clamp: cfg.b_clamp,
            saturation: cfg.saturation,
        },
        base: e.base,
        value: e.value,
        u: e.u,
        d_theta: g.d_theta,
        d_a: g.d_a,
        d_b: g.d_b,
    })?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct ContourConfig {
    l_slice: f64,
    lambda: f64,
    a: Axis,
    b: Axis,
    svg: bool,
}

#[derive(Serialize)]
struct ContourOutput {
    config: ContourConfig,
    a_axis: Vec<f64>,
    b_axis: Vec<f64>,
    minimum: GridCell,
    /// Whether the grid minimum sits on the largest-`b` edge.
    minimum_on_max_b_edge: bool,
    interior_minima: Vec<GridCell>,
    /// `a` index of a column that makes up the whole minimizing set, if any.
    minimizing_column: Option<usize>,
    minimizing_set_size: usize,
    saturated_cells: Vec<(usize, usize)>,
    levels: Vec<f64>,
    csv_layout: &'static str,
}

fn minimizing_column(grid: &ContourGrid) -> Option<usize> {
    let set = grid.minimizing_set();
    let i = set.first()?.0;
    (set.len() == grid.b_axis.len() && set.iter().all(|&(p, _)| p == i)).then_some(i)
}

fn cmd_contour(args: &ContourArgs) -> CliResult<u8> {
    let (ra, rb) = match args.resolution[..] {
        [n] => (n, n),
        [na, nb] => (na, nb),
        _ => return Err(CliError::usage("--resolution takes one or two values")),
    };
    let range = |name: &str, r: &[f64]| match r {
        &[lo, hi] => Ok((lo, hi)),
        _ => Err(CliError::usage(format!("--{name} takes exactly two values, lo,hi"))),
    };
    let (a_range, b_range) = (range("a-range", &args.a_range)?, range("b-range", &args.b_range)?);
    let grid = sample_contour(
        args.l_slice,
        args.lambda,
        a_range,
        b_range,
        (ra, rb),
    )
    .map_err(CliError::usage)?;
    let levels = default_levels(&grid);
    let minimum = grid.minimum();
    let out = ContourOutput {
        config: ContourConfig {
            l_slice: grid.l_slice,
            lambda: grid.lambda,
            a: grid.a_spec,
            b: grid.b_spec,
            svg: args.svg,
        },
        a_axis: grid.a_axis.clone(),
        b_axis: grid.b_axis.clone(),
        minimum_on_max_b_edge: minimum.j + 1 == grid.b_axis.len(),
        minimum,
        interior_minima: stationarity_scan(&grid).into_iter().map(|(i, j)| grid.cell(i, j)).collect(),
        minimizing_column: minimizing_column(&grid),
        minimizing_set_size: grid.minimizing_set().len(),
        saturated_cells: grid.saturated_cells.clone(),
        levels: levels.clone(),
        csv_layout: "row i = a_axis[i], column j = b_axis[j]",
    };
    create_dir(&args.out)?;
    write_file(&args.out.join("contour.csv"), |w| grid.write_csv(w))?;
    write_json(&args.out.join("contour.json"), &out)?;
    if args.svg {
        let svg = render_svg(&grid, &levels);
        write_file(&args.out.join("contour.svg"), |w| w.write_all(svg.as_bytes()))?;
    }
    emit(args.out.join("contour.json").display())?;
    Ok(exit::OK)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<u8> {
    let mut cfg = VerifyConfig::new(args.suite, resolve_seed(args.seed, None)?);
    cfg.lambda = args.lambda;
    if let Some(n) = args.grad_points {
        cfg.grad_points = n;
    }
    if let Some(n) = args.finder_seeds {
        cfg.finder_seeds = n;
    }
    if let Some(n) = args.infimum_points {
        cfg.infimum_points = n;
    }
    let fields: Vec<_> = match &args.field {
        Some(name) => vec![field_by_name(name).map_err(CliError::usage)?],
        None => registry().iter().collect(),
    };
    let report = run_suites(&fields, &cfg).map_err(CliError::usage)?;
    if let Some(path) = &args.out {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            create_dir(dir)?;
        }
        write_json(path, &report)?;
    }
    print_json(&report)?;
    Ok(if report.passed() { exit::OK } else { exit::VIOLATION })
}

#[derive(Serialize)]
struct OutcomeOutput<'a> {
    config: &'a RunConfig,
    start: &'a crate::augment::AugPoint,
    #[serde(flatten)]
    summary: crate::optimize::TrajectorySummary<'a>,
}

fn cmd_optimize(args: &RunArgs) -> CliResult<u8> {
    let cfg = resolve_run_config(args)?;
    let seed = cfg.seed.expect("resolved");
    let field = field_by_name(&cfg.field).map_err(CliError::usage)?;
    let aug = cfg.aug_config()?;
    let start = resolve_start(field, &cfg.start, seed).map_err(CliError::usage)?;
    let traj = run_with(field, cfg.objective, &start, &cfg.optimizer, &aug, &cfg.thresholds(), seed)
        .map_err(CliError::usage)?;
    create_dir(&cfg.out)?;
    if cfg.wants(OutputFormat::Csv) {
        write_file(&cfg.out.join("trajectory.csv"), |w| traj.write_csv(w))?;
    }
    if cfg.wants(OutputFormat::Json) {
        write_json(
            &cfg.out.join("outcome.json"),
            &OutcomeOutput { config: &cfg, start: &start, summary: traj.summary() },
        )?;
    }
    emit(traj.outcome.outcome.as_str())?;
    Ok(match traj.outcome.outcome {
        Outcome::NumericalFailure => exit::NUMERICAL,
        _ => exit::OK,
    })
}

#[derive(Serialize)]
struct ComparisonOutput<'a> {
    config: &'a RunConfig,
    start: &'a crate::augment::AugPoint,
    report: crate::optimize::BaselineReport,
    plain: crate::optimize::TrajectorySummary<'a>,
    augmented: crate::optimize::TrajectorySummary<'a>,
}

fn cmd_compare(args: &RunArgs) -> CliResult<u8> {
    if args.objective.is_some() {
        return Err(CliError::usage("compare always runs both objectives; drop --objective"));
    }
    let cfg = resolve_run_config(args)?;
    let seed = cfg.seed.expect("resolved");
    let field = field_by_name(&cfg.field).map_err(CliError::usage)?;
    let aug = cfg.aug_config()?;
    let start = resolve_start(field, &cfg.start, seed).map_err(CliError::usage)?;
    let cmp = compare_baseline(field, &start.theta, (start.a, start.b), &cfg.optimizer, &aug, seed)
        .map_err(CliError::usage)?;
    create_dir(&cfg.out)?;
    if cfg.wants(OutputFormat::Csv) {
        write_file(&cfg.out.join("plain.csv"), |w| cmp.plain.write_csv(w))?;
        write_file(&cfg.out.join("augmented.csv"), |w| cmp.augmented.write_csv(w))?;
    }
    let report = cmp.report();
    if cfg.wants(OutputFormat::Json) {
        write_json(
            &cfg.out.join("comparison.json"),
            &ComparisonOutput {
                config: &cfg,
                start: &start,
                report: report.clone(),
                plain: cmp.plain.summary(),
                augmented: cmp.augmented.summary(),
            },
        )?;
    }
    emit(format_args!("plain: {}", report.plain_outcome.as_str()))?;
    emit(format_args!("augmented: {}", report.augmented_outcome.as_str()))?;
    let failed = [&cmp.plain, &cmp.augmented]
        .iter()
        .any(|t| t.outcome.outcome == Outcome::NumericalFailure);
    Ok(if failed { exit::NUMERICAL } else { exit::OK })
}

pub fn dispatch(cli: &Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Fields => cmd_fields(),
        Command::Eval(a) => cmd_eval(a),
        Command::Contour(a) => cmd_contour(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Compare(a) => cmd_compare(a),
    }
}

/// Parses `std::env::args` and runs the command.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
