//! Command-line front end: `spectrum`, `wavefunction`, `verify`, `export-table`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or validation
//! error, 3 no bound state, 4 solver failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::models::{
    bound_state, closed_form_epsilon, family_for, support_grid, BoundState, CoulombStrength,
    ModelKind, ModelSpec, OscillatorStrength,
};
use crate::nu_engine::{decompose, QuantumNumbers};
use crate::oracle::{
    default_grid, gram_matrix, recover_lower_component, schrodinger_residual,
    self_consistent_epsilon, GridSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_BOUND_STATE: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "solvable-dirac",
    version,
    about = "Bound states of the radial Dirac equation for exactly solvable potentials",
    long_about = "Bound states of the radial Dirac equation for exactly solvable scalar/vector \
                  potentials, cross-checked by a finite-difference eigensolver.\n\n\
                  Natural units (hbar = c = 1). Exit codes: 0 ok, 1 verification failure, \
                  2 usage/validation, 3 no bound state, 4 solver failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relativistic levels (n, l, eps, E, E_f, E_F), l-major then n.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Sampled upper component G and recovered lower component F of one state.
    #[command(allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
    /// Analytic-versus-numerical checks; exits 1 if any check fails.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Polynomial family, coordinate map and levels for every model.
    #[command(allow_negative_numbers = true)]
    ExportTable(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Oscillator,
    Coulomb,
    Morse,
    RosenMorse,
    Eckart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Potential model.
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    /// Mass m [default: 1].
    #[arg(long = "m")]
    pub m: Option<f64>,
    /// Oscillator strength a in V = a r², or Morse/Rosen-Morse/Eckart range a
    /// [range defaults: morse 0.4, rosen-morse 0.5, eckart 0.25].
    #[arg(long = "a")]
    pub a: Option<f64>,
    /// Coulomb strength b in V = -b/r [default: 0.5].
    #[arg(long = "b")]
    pub b: Option<f64>,
    /// Oscillator frequency omega, instead of a [default: 1].
    #[arg(long)]
    pub omega: Option<f64>,
    /// Coulomb e² = 2b(m+eps), instead of b.
    #[arg(long)]
    pub e2: Option<f64>,
    /// Morse scalar depth / Rosen-Morse, Eckart amplitude
    /// [defaults: morse 2, rosen-morse 1, eckart 0.5].
    #[arg(long = "A")]
    pub big_a: Option<f64>,
    /// Morse offset / Rosen-Morse, Eckart shift [defaults: morse 0.5, rosen-morse 0.2, eckart 1.2].
    #[arg(long = "B")]
    pub big_b: Option<f64>,
    /// Morse vector depth [default: 1].
    #[arg(long = "C")]
    pub big_c: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output format [default: json].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// JSON file with defaults for any flag (keys as flag names, `-` as `_`);
    /// flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RangeArgs {
    /// Highest radial quantum number [default: 1].
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Highest orbital quantum number [default: 0].
    #[arg(long)]
    pub l_max: Option<u32>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Left grid end [default: from the state's support].
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Right grid end [default: from the state's support].
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Grid points including both ends [default: 2000; verify 16000].
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Radial quantum number [default: 0].
    #[arg(long)]
    pub n: Option<u32>,
    /// Orbital quantum number [default: 0].
    #[arg(long)]
    pub l: Option<u32>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ToleranceArgs {
    /// Relative spectral-relation residual [default: 1e-10].
    #[arg(long)]
    pub spectral_tol: Option<f64>,
    /// Relative analytic/FD agreement of eps
    /// [default: 1e-5 oscillator, coulomb; 1e-4 otherwise].
    #[arg(long)]
    pub oracle_tol: Option<f64>,
    /// Radial-equation residual max|G'' - (V-E)G| / max|G| [default: 1e-5].
    #[arg(long)]
    pub residual_tol: Option<f64>,
    /// First-order closure residual [default: 1e-4].
    #[arg(long)]
    pub closure_tol: Option<f64>,
    /// Largest off-diagonal overlap [default: 1e-8].
    #[arg(long)]
    pub gram_tol: Option<f64>,
    /// Grid points for the FD oracle [default: 8000].
    #[arg(long)]
    pub oracle_points: Option<usize>,
    /// Grid points for the overlap check [default: 8000].
    #[arg(long)]
    pub gram_points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Mass m [default: 1].
    #[arg(long = "m")]
    pub m: Option<f64>,
    /// Highest radial quantum number (l = 0) [default: 1].
    #[arg(long)]
    pub n_max: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Flag defaults read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<ModelName>,
    m: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    omega: Option<f64>,
    e2: Option<f64>,
    #[serde(rename = "A")]
    big_a: Option<f64>,
    #[serde(rename = "B")]
    big_b: Option<f64>,
    #[serde(rename = "C")]
    big_c: Option<f64>,
    n_max: Option<u32>,
    l_max: Option<u32>,
    n: Option<u32>,
    l: Option<u32>,
    format: Option<Format>,
    output: Option<PathBuf>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    points: Option<usize>,
    spectral_tol: Option<f64>,
    oracle_tol: Option<f64>,
    residual_tol: Option<f64>,
    closure_tol: Option<f64>,
    gram_tol: Option<f64>,
    oracle_points: Option<usize>,
    gram_points: Option<usize>,
}

/// An error with its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self { code: exit_code(&e), message: e.to_string() }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidModel(_)
        | Error::InvalidQuantumNumbers(_)
        | Error::InvalidEnergy(_)
        | Error::InvalidGrid(_)
        | Error::Precondition(_)
        | Error::GridMismatch(_)
        | Error::UnsupportedFamily(_)
        | Error::Domain(_) => EXIT_USAGE,
        Error::NoBoundState(_) => EXIT_NO_BOUND_STATE,
        Error::NonConvergence(_) | Error::Overflow(_) | Error::Singularity(_) => EXIT_SOLVER,
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let mut text = e.render().to_string();
            return if e.use_stderr() {
                if !text.contains("Usage:") {
                    use clap::CommandFactory;
                    text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
                }
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli.command) {
        Ok((code, text, output)) => match emit(&text, output.as_ref(), stdout) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(stderr, "error: {}", e.message);
                e.code
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn emit(text: &str, output: Option<&PathBuf>, stdout: &mut dyn Write) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError {
            code: EXIT_USAGE,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError {
            code: EXIT_USAGE,
            message: format!("cannot write output: {e}"),
        }),
    }
}

fn load_config(path: Option<&PathBuf>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
}

fn merged_model(flags: &ModelArgs, file: &FileConfig) -> ModelArgs {
    ModelArgs {
        model: flags.model.or(file.model),
        m: flags.m.or(file.m),
        a: flags.a.or(file.a),
        b: flags.b.or(file.b),
        omega: flags.omega.or(file.omega),
        e2: flags.e2.or(file.e2),
        big_a: flags.big_a.or(file.big_a),
        big_b: flags.big_b.or(file.big_b),
        big_c: flags.big_c.or(file.big_c),
    }
}

fn reject_unused(args: &ModelArgs, name: &str, allowed: &[&str]) -> CliResult<()> {
    let given = [
        ("a", args.a.is_some()),
        ("b", args.b.is_some()),
        ("omega", args.omega.is_some()),
        ("e2", args.e2.is_some()),
        ("A", args.big_a.is_some()),
        ("B", args.big_b.is_some()),
        ("C", args.big_c.is_some()),
    ];
    for (flag, present) in given {
        if present && !allowed.contains(&flag) {
            return Err(CliError::usage(format!("--{flag} does not apply to the {name} model")));
        }
    }
    Ok(())
}

/// Builds and validates the model; unspecified parameters take their defaults.
pub fn build_model(args: &ModelArgs) -> CliResult<ModelSpec> {
    let name = args.model.ok_or_else(|| CliError::usage("--model is required"))?;
    let mass = args.m.unwrap_or(1.0);
    let kind = match name {
        ModelName::Oscillator => {
            reject_unused(args, "oscillator", &["a", "omega"])?;
            ModelKind::Oscillator(match (args.a, args.omega) {
                (Some(_), Some(_)) => {
                    return Err(CliError::usage("give either --a or --omega, not both"))
                }
                (Some(a), None) => OscillatorStrength::Physical { a },
                (None, omega) => OscillatorStrength::Frequency { omega: omega.unwrap_or(1.0) },
            })
        }
        ModelName::Coulomb => {
            reject_unused(args, "coulomb", &["b", "e2"])?;
            ModelKind::Coulomb(match (args.b, args.e2) {
                (Some(_), Some(_)) => return Err(CliError::usage("give either --b or --e2, not both")),
                (None, Some(e2)) => CoulombStrength::Mapped { e2 },
                (b, None) => CoulombStrength::Physical { b: b.unwrap_or(0.5) },
            })
        }
        ModelName::Morse => {
            reject_unused(args, "morse", &["a", "A", "B", "C"])?;
            ModelKind::Morse {
                scalar_depth: args.big_a.unwrap_or(2.0),
                vector_depth: args.big_c.unwrap_or(1.0),
                offset: args.big_b.unwrap_or(0.5),
                range: args.a.unwrap_or(0.4),
            }
        }
        ModelName::RosenMorse => {
            reject_unused(args, "rosen-morse", &["a", "A", "B"])?;
            ModelKind::RosenMorse {
                amplitude: args.big_a.unwrap_or(1.0),
                shift: args.big_b.unwrap_or(0.2),
                range: args.a.unwrap_or(0.5),
            }
        }
        ModelName::Eckart => {
            reject_unused(args, "eckart", &["a", "A", "B"])?;
            ModelKind::Eckart {
                amplitude: args.big_a.unwrap_or(0.5),
                shift: args.big_b.unwrap_or(1.2),
                range: args.a.unwrap_or(0.25),
            }
        }
    };
    Ok(ModelSpec::new(kind, mass)?)
}

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        String::new()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => n.as_f64().filter(|_| !n.is_i64() && !n.is_u64()).map_or_else(
            || n.to_string(),
            fmt_f64,
        ),
        Value::String(s) => csv_field(s),
        other => csv_field(&other.to_string()),
    }
}

fn meta_lines(meta: &Map<String, Value>, prefix: &str, out: &mut String) {
    for (key, value) in meta {
        match value {
            Value::Object(inner) => meta_lines(inner, &format!("{prefix}{key}."), out),
            Value::String(s) => out.push_str(&format!("# {prefix}{key}={s}\n")),
            other => out.push_str(&format!("# {prefix}{key}={}\n", csv_cell(other))),
        }
    }
}

/// Renders `{meta, rows}` as JSON, or as CSV with `# key=value` metadata lines.
fn render(format: Format, meta: Value, columns: &[&str], rows: Vec<Map<String, Value>>) -> String {
    match format {
        Format::Json => {
            let doc = json!({ "meta": meta, "rows": rows });
            let mut text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut out = String::new();
            if let Value::Object(meta) = &meta {
                meta_lines(meta, "", &mut out);
            }
            out.push_str(&columns.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
            for row in rows {
                let cells: Vec<String> =
                    columns.iter().map(|c| row.get(*c).map_or_else(String::new, csv_cell)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
    }
}

fn row(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn model_meta(spec: &ModelSpec) -> Value {
    serde_json::to_value(spec).expect("model serializes")
}

fn check_range(spec: &ModelSpec, l_max: u32) -> CliResult<()> {
    if spec.s_wave_only() && l_max > 0 {
        return Err(CliError::usage(format!("{} supports l = 0 only", spec.name())));
    }
    Ok(())
}

type Outcome = (i32, String, Option<PathBuf>);

fn execute(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Wavefunction(args) => cmd_wavefunction(args),
        Command::Verify(args) => cmd_verify(args),
        Command::ExportTable(args) => cmd_export(args),
    }
}

fn cmd_spectrum(args: &SpectrumArgs) -> CliResult<Outcome> {
    let file = load_config(args.output.config.as_ref())?;
    let spec = build_model(&merged_model(&args.model, &file))?;
    let n_max = args.range.n_max.or(file.n_max).unwrap_or(1);
    let l_max = args.range.l_max.or(file.l_max).unwrap_or(0);
    let format = args.output.format.or(file.format).unwrap_or_default();
    check_range(&spec, l_max)?;

    let mut rows = Vec::new();
    for l in 0..=l_max {
        for n in 0..=n_max {
            let qn = QuantumNumbers::aligned(n, l);
            let level = closed_form_epsilon(&spec, &qn)?;
            let d = decompose(&spec, &qn, level.eps)?;
            rows.push(row(vec![
                ("n", json!(n)),
                ("l", json!(l)),
                ("k", json!(qn.k())),
                ("eps", json!(level.eps)),
                ("E", json!(level.energy)),
                ("E_f", json!(d.prefactor_energy)),
                ("E_F", json!(d.polynomial_energy)),
                ("alpha", json!(level.params.alpha())),
                ("beta", json!(level.params.beta())),
            ]));
        }
    }
    let meta = json!({
        "command": "spectrum",
        "model": model_meta(&spec),
        "n_max": n_max,
        "l_max": l_max,
        "units": "natural (hbar = c = 1)",
    });
    let columns = ["n", "l", "k", "eps", "E", "E_f", "E_F", "alpha", "beta"];
    let text = render(format, meta, &columns, rows);
    Ok((EXIT_OK, text, args.output.output.clone().or(file.output)))
}

fn grid_for(
    spec: &ModelSpec,
    qn: &QuantumNumbers,
    flags: &GridArgs,
    file: &FileConfig,
    default_points: usize,
) -> CliResult<GridSpec> {
    let points = flags.points.or(file.points).unwrap_or(default_points);
    let r_min = flags.r_min.or(file.r_min);
    let r_max = flags.r_max.or(file.r_max);
    let grid = match (r_min, r_max) {
        (Some(lo), Some(hi)) => GridSpec::new(lo, hi, points)?,
        _ => {
            let auto = support_grid(spec, qn, points, 1e-6)?;
            GridSpec::new(r_min.unwrap_or(auto.r_min), r_max.unwrap_or(auto.r_max), points)?
        }
    };
    Ok(grid)
}

fn cmd_wavefunction(args: &WavefunctionArgs) -> CliResult<Outcome> {
    let file = load_config(args.output.config.as_ref())?;
    let spec = build_model(&merged_model(&args.model, &file))?;
    let n = args.n.or(file.n).unwrap_or(0);
    let l = args.l.or(file.l).unwrap_or(0);
    let format = args.output.format.or(file.format).unwrap_or_default();
    let qn = QuantumNumbers::aligned(n, l);
    check_range(&spec, l)?;
    // solve first so a missing level reports as such, not as a grid problem
    closed_form_epsilon(&spec, &qn)?;
    let grid = grid_for(&spec, &qn, &args.grid, &file, 2000)?;
    let state = bound_state(&spec, &qn, &grid)?;
    let lower = recover_lower_component(&state, &spec, &grid);

    let mut f_col = vec![Value::Null; grid.points];
    let f_status = match &lower {
        Ok(lc) => {
            for (i, &(_, f)) in lc.samples.iter().enumerate() {
                f_col[i + 2] = json!(f);
            }
            json!({ "status": "ok", "closure_residual": lc.residual })
        }
        Err(e) => json!({ "status": "unavailable", "reason": e.to_string() }),
    };
    let rows = state
        .samples
        .iter()
        .zip(f_col)
        .map(|(&(r, g), f)| row(vec![("r", json!(r)), ("G", json!(g)), ("F", f)]))
        .collect();
    let meta = json!({
        "command": "wavefunction",
        "model": model_meta(&spec),
        "n": n,
        "l": l,
        "k": qn.k(),
        "eps": state.eps,
        "E": state.energy,
        "alpha": state.alpha,
        "beta": state.beta,
        "grid": { "r_min": grid.r_min, "r_max": grid.r_max, "points": grid.points },
        "normalization": "trapezoid integral of G^2 equals 1",
        "F": f_status,
    });
    let text = render(format, meta, &["r", "G", "F"], rows);
    Ok((EXIT_OK, text, args.output.output.clone().or(file.output)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skipped,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Error => "error",
        }
    }
}

struct CheckRow {
    check: &'static str,
    n: Option<u32>,
    l: u32,
    value: Option<f64>,
    threshold: Option<f64>,
    status: Status,
    detail: String,
}

impl CheckRow {
    fn measured(check: &'static str, n: Option<u32>, l: u32, value: f64, threshold: f64) -> Self {
        let status = if value <= threshold { Status::Pass } else { Status::Fail };
        Self { check, n, l, value: Some(value), threshold: Some(threshold), status, detail: String::new() }
    }

    fn error(check: &'static str, n: Option<u32>, l: u32, e: &Error) -> Self {
        Self {
            check,
            n,
            l,
            value: None,
            threshold: None,
            status: Status::Error,
            detail: e.to_string(),
        }
    }

    fn to_row(&self) -> Map<String, Value> {
        row(vec![
            ("check", json!(self.check)),
            ("n", json!(self.n)),
            ("l", json!(self.l)),
            ("value", json!(self.value)),
            ("threshold", json!(self.threshold)),
            ("status", json!(self.status.as_str())),
            ("detail", json!(self.detail)),
        ])
    }
}

struct Thresholds {
    spectral: f64,
    oracle: f64,
    residual: f64,
    closure: f64,
    gram: f64,
}

/// Whether all states of one `l` are eigenfunctions of the same operator.
fn fixed_operator(spec: &ModelSpec) -> bool {
    matches!(
        spec.kind,
        ModelKind::Oscillator(OscillatorStrength::Frequency { .. })
            | ModelKind::Coulomb(CoulombStrength::Mapped { .. })
    )
}

fn mapping_relations(spec: &ModelSpec) -> Option<Vec<&'static str>> {
    match spec.kind {
        ModelKind::Morse { .. } => Some(vec![
            "D = sqrt(A^2 - C^2)",
            "alpha = 2(A sqrt(B^2+m^2) + eps C)/(a D) - 1 - 2n",
            "eps^2 = m^2 + B^2 - a^2 alpha^2/4",
        ]),
        ModelKind::RosenMorse { .. } => Some(vec![
            "gamma(gamma+1) a^2 = 2(m+eps) A^2",
            "lambda = 2(m+eps) A B / a^2",
            "eta = 2(m+eps)(A^2 + B^2)",
            "alpha, beta = gamma - n +/- lambda/(gamma - n)",
            "eps^2 - m^2 = eta - a^2 (alpha^2 + beta^2)/2",
        ]),
        ModelKind::Eckart { .. } => Some(vec![
            "gamma(gamma-1) a^2 = 2(m+eps) A^2",
            "lambda = 2(m+eps) A B / a^2",
            "zeta = 2(m+eps)(A^2 + B^2)",
            "alpha, beta = -(gamma + n) +/- lambda/(gamma + n)",
            "eps^2 - m^2 = zeta - a^2 (alpha^2 + beta^2)/2",
        ]),
        _ => None,
    }
}

fn verify_state(
    spec: &ModelSpec,
    qn: &QuantumNumbers,
    tol: &Thresholds,
    points: usize,
    oracle_points: usize,
    checks: &mut Vec<CheckRow>,
) -> Option<f64> {
    let (n, l) = (Some(qn.n()), qn.l());
    let level = match closed_form_epsilon(spec, qn) {
        Ok(level) => level,
        Err(e) => {
            checks.push(CheckRow::error("closed-form", n, l, &e));
            return None;
        }
    };
    match spec.spectral_residual(qn, level.eps) {
        Ok(v) => checks.push(CheckRow::measured("spectral-residual", n, l, v, tol.spectral)),
        Err(e) => checks.push(CheckRow::error("spectral-residual", n, l, &e)),
    }

    let mut deviation = None;
    let oracle = default_grid(spec, qn, oracle_points)
        .and_then(|g| self_consistent_epsilon(spec, qn, &g, 1e-12, 200));
    match oracle {
        Ok(res) => {
            let rel = (res.eps - level.eps).abs() / level.eps.abs();
            deviation = Some(rel);
            let mut row = CheckRow::measured("oracle-agreement", n, l, rel, tol.oracle);
            row.detail = format!("fd eps = {}", fmt_f64(res.eps));
            checks.push(row);
        }
        Err(e) => checks.push(CheckRow::error("oracle-agreement", n, l, &e)),
    }

    let state = support_grid(spec, qn, points, 1e-6).and_then(|g| bound_state(spec, qn, &g));
    let state = match state {
        Ok(s) => s,
        Err(e) => {
            checks.push(CheckRow::error("radial-residual", n, l, &e));
            return deviation;
        }
    };
    match schrodinger_residual(&state, spec, &state.grid) {
        Ok(r) => {
            let mut row = CheckRow::measured("radial-residual", n, l, r.max_residual, tol.residual);
            row.detail = format!("h = {}", fmt_f64(r.spacing));
            checks.push(row);
        }
        Err(e) => checks.push(CheckRow::error("radial-residual", n, l, &e)),
    }
    let nodes = state.node_count();
    checks.push(CheckRow {
        check: "node-count",
        n,
        l,
        value: Some(nodes as f64),
        threshold: Some(f64::from(qn.n())),
        status: if nodes == qn.n() as usize { Status::Pass } else { Status::Fail },
        detail: "must equal n".into(),
    });
    if spec.equal_potentials() {
        match recover_lower_component(&state, spec, &state.grid) {
            Ok(lc) => checks.push(CheckRow::measured("spinor-closure", n, l, lc.residual, tol.closure)),
            Err(e) => checks.push(CheckRow::error("spinor-closure", n, l, &e)),
        }
    } else {
        checks.push(CheckRow {
            check: "spinor-closure",
            n,
            l,
            value: None,
            threshold: Some(tol.closure),
            status: Status::Skipped,
            detail: "unequal scalar and vector potentials".into(),
        });
    }
    deviation
}

fn verify_gram(
    spec: &ModelSpec,
    l: u32,
    n_max: u32,
    tol: f64,
    points: usize,
    checks: &mut Vec<CheckRow>,
) {
    if n_max == 0 {
        return;
    }
    if !fixed_operator(spec) {
        checks.push(CheckRow {
            check: "orthogonality",
            n: None,
            l,
            value: None,
            threshold: Some(tol),
            status: Status::Skipped,
            detail: "the effective potential depends on eps, so levels belong to different operators"
                .into(),
        });
        return;
    }
    let states: Result<Vec<BoundState>, Error> = support_grid(
        spec,
        &QuantumNumbers::aligned(n_max, l),
        points,
        1e-10,
    )
    .and_then(|grid| {
        (0..=n_max).map(|n| bound_state(spec, &QuantumNumbers::aligned(n, l), &grid)).collect()
    });
    match states.and_then(|s| gram_matrix(&s)) {
        Ok(gm) => {
            let mut worst = 0.0f64;
            for (i, rowv) in gm.iter().enumerate() {
                for (j, v) in rowv.iter().enumerate() {
                    if i != j {
                        worst = worst.max(v.abs());
                    }
                }
            }
            checks.push(CheckRow::measured("orthogonality", None, l, worst, tol));
        }
        Err(e) => checks.push(CheckRow::error("orthogonality", None, l, &e)),
    }
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<Outcome> {
    let file = load_config(args.output.config.as_ref())?;
    let spec = build_model(&merged_model(&args.model, &file))?;
    let n_max = args.range.n_max.or(file.n_max).unwrap_or(1);
    let l_max = args.range.l_max.or(file.l_max).unwrap_or(0);
    let format = args.output.format.or(file.format).unwrap_or_default();
    check_range(&spec, l_max)?;
    if args.grid.r_min.or(file.r_min).is_some() || args.grid.r_max.or(file.r_max).is_some() {
        return Err(CliError::usage("verify chooses grid ends per state; only --points applies"));
    }
    let points = args.grid.points.or(file.points).unwrap_or(16_000);
    let oracle_points = args.tol.oracle_points.or(file.oracle_points).unwrap_or(8000);
    let gram_points = args.tol.gram_points.or(file.gram_points).unwrap_or(8000);
    let default_oracle = if spec.s_wave_only() { 1e-4 } else { 1e-5 };
    let tol = Thresholds {
        spectral: args.tol.spectral_tol.or(file.spectral_tol).unwrap_or(1e-10),
        oracle: args.tol.oracle_tol.or(file.oracle_tol).unwrap_or(default_oracle),
        residual: args.tol.residual_tol.or(file.residual_tol).unwrap_or(1e-5),
        closure: args.tol.closure_tol.or(file.closure_tol).unwrap_or(1e-4),
        gram: args.tol.gram_tol.or(file.gram_tol).unwrap_or(1e-8),
    };
    for (name, v) in [
        ("spectral-tol", tol.spectral),
        ("oracle-tol", tol.oracle),
        ("residual-tol", tol.residual),
        ("closure-tol", tol.closure),
        ("gram-tol", tol.gram),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::usage(format!("--{name} must be positive, got {v}")));
        }
    }

    let mut checks = Vec::new();
    let mut deviations = Vec::new();
    for l in 0..=l_max {
        for n in 0..=n_max {
            let qn = QuantumNumbers::aligned(n, l);
            if let Some(d) = verify_state(&spec, &qn, &tol, points, oracle_points, &mut checks) {
                deviations.push(d);
            }
        }
        verify_gram(&spec, l, n_max, tol.gram, gram_points, &mut checks);
    }

    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    let failed = count(Status::Fail) + count(Status::Error);
    let summary = json!({
        "passed": count(Status::Pass),
        "failed": failed,
        "skipped": count(Status::Skipped),
        "ok": failed == 0,
        "failing_checks": checks
            .iter()
            .filter(|c| matches!(c.status, Status::Fail | Status::Error))
            .map(|c| match c.n {
                Some(n) => format!("{} (n={}, l={})", c.check, n, c.l),
                None => format!("{} (l={})", c.check, c.l),
            })
            .collect::<Vec<_>>(),
    });
    let mut meta = json!({
        "command": "verify",
        "model": model_meta(&spec),
        "n_max": n_max,
        "l_max": l_max,
        "thresholds": {
            "spectral_residual": tol.spectral,
            "oracle_agreement": tol.oracle,
            "radial_residual": tol.residual,
            "spinor_closure": tol.closure,
            "orthogonality": tol.gram,
        },
        "grids": {
            "points": points,
            "oracle_points": oracle_points,
            "gram_points": gram_points,
            "support_cutoff": 1e-6,
        },
        "summary": summary,
    });
    if let Some(relations) = mapping_relations(&spec) {
        let worst = deviations.iter().cloned().fold(0.0f64, f64::max);
        let complete = deviations.len() == ((n_max + 1) * (l_max + 1)) as usize;
        let validated = complete && worst <= tol.oracle;
        meta["mapping_validation"] = json!({
            "relations": relations,
            "max_relative_deviation": if deviations.is_empty() { Value::Null } else { json!(worst) },
            "threshold": tol.oracle,
            "status": if validated { "validated" } else { "mismatch" },
        });
    }
    let columns = ["check", "n", "l", "value", "threshold", "status", "detail"];
    let rows = checks.iter().map(CheckRow::to_row).collect();
    let text = render(format, meta, &columns, rows);
    let code = if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok((code, text, args.output.output.clone().or(file.output)))
}

fn cmd_export(args: &ExportArgs) -> CliResult<Outcome> {
    let file = load_config(args.output.config.as_ref())?;
    let m = args.m.or(file.m).unwrap_or(1.0);
    let n_max = args.n_max.or(file.n_max).unwrap_or(1);
    let format = args.output.format.or(file.format).unwrap_or_default();
    let table = [
        (ModelName::Oscillator, "a r^2", "a r^2"),
        (ModelName::Coulomb, "-b/r", "-b/r"),
        (ModelName::Morse, "-A exp(-a r) + sqrt(B^2+m^2) - m", "-C exp(-a r)"),
        (ModelName::RosenMorse, "(A tanh(a r) + B)^2", "(A tanh(a r) + B)^2"),
        (ModelName::Eckart, "(-A coth(a r) + B)^2", "(-A coth(a r) + B)^2"),
    ];
    let mut rows = Vec::new();
    let mut models = Map::new();
    for (name, vs, vv) in table {
        let spec = build_model(&ModelArgs { model: Some(name), m: Some(m), ..Default::default() })?;
        models.insert(spec.name().to_string(), model_meta(&spec));
        for n in 0..=n_max {
            let qn = QuantumNumbers::aligned(n, 0);
            let level = closed_form_epsilon(&spec, &qn)?;
            let fam = family_for(&level.params, &qn);
            let poly = match level.params.beta() {
                Some(_) => "jacobi",
                None => "laguerre",
            };
            rows.push(row(vec![
                ("model", json!(spec.name())),
                ("V_S", json!(vs)),
                ("V_V", json!(vv)),
                ("polynomial", json!(poly)),
                ("sigma", json!(poly_text(&fam.sigma))),
                ("tau", json!(poly_text(&fam.tau))),
                ("sigma_tilde", json!(fam.sigma_tilde.identifier())),
                ("s_map", json!(fam.map.identifier())),
                ("n", json!(n)),
                ("l", json!(0)),
                ("eps", json!(level.eps)),
                ("E", json!(level.energy)),
                ("alpha", json!(level.params.alpha())),
                ("beta", json!(level.params.beta())),
            ]));
        }
    }
    let meta = json!({
        "command": "export-table",
        "m": m,
        "n_max": n_max,
        "parameters": models,
        "units": "natural (hbar = c = 1)",
    });
    let columns = [
        "model", "V_S", "V_V", "polynomial", "sigma", "tau", "sigma_tilde", "s_map", "n", "l",
        "eps", "E", "alpha", "beta",
    ];
    let text = render(format, meta, &columns, rows);
    Ok((EXIT_OK, text, args.output.output.clone().or(file.output)))
}

/// `c0 + c1 s + c2 s²` written out, dropping zero terms.
fn poly_text(coeffs: &[f64]) -> String {
    let mut terms = Vec::new();
    for (p, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let mono = match p {
            0 => String::new(),
            1 => "s".to_string(),
            _ => format!("s^{p}"),
        };
        let text = match (c, p) {
            (c, 0) => fmt_f64(c),
            (c, _) if c == 1.0 => mono,
            (c, _) if c == -1.0 => format!("-{mono}"),
            (c, _) => format!("{}*{mono}", fmt_f64(c)),
        };
        terms.push(text);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.6, 1.0 / 3.0, 1e-7, 2.0, -0.25, 1e300] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.6), "0.6");
        assert_eq!(fmt_f64(f64::NAN), "");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn polynomial_text() {
        assert_eq!(poly_text(&[0.0, 1.0, 0.0]), "s");
        assert_eq!(poly_text(&[1.5, -1.0]), "1.5 - s");
        assert_eq!(poly_text(&[1.0, 0.0, 0.0]), "1.0");
        assert_eq!(poly_text(&[0.0, 0.0]), "0");
    }

    #[test]
    fn model_defaults_and_conflicts() {
        let args = ModelArgs { model: Some(ModelName::Coulomb), ..Default::default() };
        let spec = build_model(&args).unwrap();
        assert_eq!(spec.kind, ModelKind::Coulomb(CoulombStrength::Physical { b: 0.5 }));
        let both = ModelArgs { a: Some(1.0), omega: Some(1.0), model: Some(ModelName::Oscillator), ..Default::default() };
        assert_eq!(build_model(&both).unwrap_err().code, EXIT_USAGE);
        let stray = ModelArgs { omega: Some(1.0), model: Some(ModelName::Morse), ..Default::default() };
        assert_eq!(build_model(&stray).unwrap_err().code, EXIT_USAGE);
        assert_eq!(build_model(&ModelArgs::default()).unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::NoBoundState(String::new())), EXIT_NO_BOUND_STATE);
        assert_eq!(exit_code(&Error::NonConvergence(String::new())), EXIT_SOLVER);
        assert_eq!(exit_code(&Error::InvalidModel(String::new())), EXIT_USAGE);
    }
}
