//! The `nlcs` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlcs_core::metrics::{photon_distribution, series_crosscheck, Metric};
use nlcs_core::state::Component;
use nlcs_core::wigner::GridRanges;
use nlcs_core::{superposed_nonlinearity, Complex64, Phase, StateVector, SuperpositionSpec};

use crate::error::CliError;
use crate::figures::{emit_figure_bundle, lookup, FIGURES, WIGNER_STEP};
use crate::format;
use crate::parallel;
use crate::values::{hard_cap_from_env, parse_complex, truncation, ModelKind, ModelSpec, Range};

#[derive(Debug, Parser)]
#[command(name = "nlcs", version, about = "Nonlinear coherent states and their superpositions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump the Fock coefficients of a state.
    State(StateArgs),
    /// Photon-number distribution P(n).
    Pn(PnArgs),
    /// Tabulate a metric against real alpha.
    Scan(ScanArgs),
    /// Wigner function on a phase-space grid.
    Wigner(WignerArgs),
    /// Superposed nonlinearity f_s(n).
    Fs(FsArgs),
    /// Closed series against the matrix oracle.
    Crosscheck(CrosscheckArgs),
    /// Write the data behind one figure (fig1..fig12).
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Identity,
    Hs,
    Gp,
    Ion,
    Expr,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Identity => ModelKind::Identity,
            ModelArg::Hs => ModelKind::Hs,
            ModelArg::Gp => ModelKind::Gp,
            ModelArg::Ion => ModelKind::Ion,
            ModelArg::Expr => ModelKind::Expr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComponentArg {
    Superposition,
    Plus,
    Rotated,
}

impl From<ComponentArg> for Component {
    fn from(c: ComponentArg) -> Self {
        match c {
            ComponentArg::Superposition => Component::Superposition,
            ComponentArg::Plus => Component::Plus,
            ComponentArg::Rotated => Component::Rotated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    G2,
    I1,
    I2,
    I3,
    I4,
    N,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::G2 => Metric::G2,
            MetricArg::I1 => Metric::I1,
            MetricArg::I2 => Metric::I2,
            MetricArg::I3 => Metric::I3,
            MetricArg::I4 => Metric::I4,
            MetricArg::N => Metric::MeanN,
        }
    }
}

fn parse_phase(s: &str) -> Result<Phase, String> {
    s.parse::<Phase>().map_err(|e| format!("{e}"))
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Nonlinearity: identity, hs (1/sqrt(n)), gp (SU(1,1)), ion (trapped ion) or expr.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Bargmann index of the gp model, a positive half-integer.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Lamb-Dicke parameter of the ion model, in (0, 1].
    #[arg(long)]
    pub eta: Option<f64>,
    /// Expression for f(n), e.g. "1/sqrt(n+2)".
    #[arg(long = "f-expr", allow_hyphen_values = true)]
    pub f_expr: Option<String>,
    /// Override the convergence radius of the model.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Complex amplitude, e.g. 0.5 or 0.3+0.2i.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<Complex64>,
    /// Relative phase: a real number of radians or a pi fraction such as pi/3 or 3pi/2.
    #[arg(long, value_parser = parse_phase, allow_hyphen_values = true, default_value = "0")]
    pub phi: Phase,
    /// Fixed truncation instead of the model default.
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
}

impl ModelArgs {
    fn model_spec(&self) -> Result<ModelSpec, CliError> {
        let kind = self.model.ok_or_else(|| CliError::Usage("--model is required".into()))?;
        Ok(ModelSpec {
            kind: kind.into(),
            kappa: self.kappa,
            eta: self.eta,
            f_expr: self.f_expr.clone(),
            radius: self.radius,
        })
    }

    /// Superposition spec; `alpha` falls back to 0 when `need_alpha` is false.
    fn spec(&self, hard_cap: usize, need_alpha: bool) -> Result<SuperpositionSpec, CliError> {
        let f = self.model_spec()?.build(hard_cap).map_err(CliError::Usage)?;
        let alpha = match (self.alpha, need_alpha) {
            (Some(a), _) => a,
            (None, false) => Complex64::new(0.0, 0.0),
            (None, true) => return Err(CliError::Usage("--alpha is required".into())),
        };
        if self.n_max == Some(0) {
            return Err(CliError::Usage("--n-max must be positive".into()));
        }
        let trunc = truncation(&f, self.n_max, hard_cap);
        Ok(SuperpositionSpec::new(alpha, self.phi, f).with_truncation(trunc))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "superposition")]
    pub component: ComponentArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PnArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "superposition")]
    pub component: ComponentArg,
    /// Read the state from a JSON dump instead of building it.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    /// Real alpha grid as min:max:step.
    #[arg(long = "alpha-range")]
    pub alpha_range: Range,
    /// Components to tabulate; repeatable.
    #[arg(long, value_enum, default_values = ["superposition"])]
    pub component: Vec<ComponentArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "superposition")]
    pub component: ComponentArg,
    /// Read the state from a JSON dump instead of building it.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// x grid as min:max:step.
    #[arg(long = "x-range", allow_hyphen_values = true)]
    pub x_range: Option<Range>,
    /// p grid as min:max:step.
    #[arg(long = "p-range", allow_hyphen_values = true)]
    pub p_range: Option<Range>,
    /// Grid step for both axes; overrides the steps of the ranges.
    #[arg(long)]
    pub step: Option<f64>,
    /// Also write the JSON summary to this path.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Largest n tabulated.
    #[arg(long = "n-terms", default_value_t = 20)]
    pub n_terms: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CrosscheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    /// Figure id, fig1 to fig12.
    pub id: String,
    /// Output directory; defaults to ./<id>.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, out: Option<&Path>, contents: &str) -> Result<(), CliError> {
        match out {
            Some(path) => fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => self.stdout.write_all(contents.as_bytes()).map_err(CliError::from),
        }
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.stderr, "{msg}");
    }
}

fn load_state(path: &Path) -> Result<StateVector, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("--state {}: {e}", path.display())))?;
    format::state_from_json(&text).map_err(|e| CliError::Usage(format!("--state {}: {e}", path.display())))
}

fn build(spec: &SuperpositionSpec, component: ComponentArg) -> Result<StateVector, CliError> {
    spec.build(component.into()).map_err(|e| CliError::from_core("--alpha/--phi/--model", e))
}

fn state_for(
    model: &ModelArgs,
    state: Option<&Path>,
    component: ComponentArg,
    hard_cap: usize,
) -> Result<(StateVector, Option<ModelKind>), CliError> {
    match state {
        Some(path) => Ok((load_state(path)?, None)),
        None => {
            let spec = model.spec(hard_cap, true)?;
            Ok((build(&spec, component)?, model.model.map(Into::into)))
        }
    }
}

fn default_window(kind: Option<ModelKind>, state: &StateVector) -> f64 {
    let reach = state.provenance().alpha.norm();
    if kind == Some(ModelKind::Ion) || reach > 1.0 {
        5.0
    } else {
        4.0
    }
}

fn wigner_ranges(args: &WignerArgs, half: f64) -> Result<(GridRanges, f64), CliError> {
    let x = args.x_range.unwrap_or(Range { min: -half, max: half, step: WIGNER_STEP });
    let p = args.p_range.unwrap_or(Range { min: -half, max: half, step: x.step });
    let step = match args.step {
        Some(s) => s,
        None if x.step == p.step => x.step,
        None => {
            return Err(CliError::Usage("--x-range and --p-range steps differ; pass --step".into()));
        }
    };
    let ranges = GridRanges { x_min: x.min, x_max: x.max, p_min: p.min, p_max: p.max };
    ranges.validate(step).map_err(|e| CliError::from_core("--step", e))?;
    Ok((ranges, step))
}

fn execute(cli: Cli, io: &mut Io<'_>) -> Result<(), CliError> {
    let hard_cap = hard_cap_from_env().map_err(CliError::Usage)?;
    match cli.command {
        Command::State(a) => {
            let spec = a.model.spec(hard_cap, true)?;
            let state = build(&spec, a.component)?;
            let text = match a.output.format.unwrap_or(Format::Json) {
                Format::Json => format::state_to_json(&state),
                Format::Csv => format::state_csv(&state),
            };
            io.emit(a.output.out.as_deref(), &text)
        }
        Command::Pn(a) => {
            let (state, _) = state_for(&a.model, a.state.as_deref(), a.component, hard_cap)?;
            let pn = photon_distribution(&state);
            let text = match a.output.format.unwrap_or(Format::Csv) {
                Format::Csv => format::pn_csv(&pn),
                Format::Json => format::pn_json(&pn),
            };
            io.emit(a.output.out.as_deref(), &text)
        }
        Command::Scan(a) => {
            let spec = a.model.spec(hard_cap, false)?;
            let components: Vec<Component> = a.component.iter().map(|&c| c.into()).collect();
            let rows = parallel::scan_grid(&spec, &a.alpha_range.points(), a.metric.into(), &components);
            let failed = rows.iter().filter(|r| r.value.is_err()).count();
            if failed > 0 {
                let first = rows.iter().find_map(|r| r.value.as_ref().err()).expect("counted");
                io.note(&format!("warning: {failed} of {} rows failed, first: {first}", rows.len()));
            }
            let text = match a.output.format.unwrap_or(Format::Csv) {
                Format::Csv => format::scan_csv(&rows),
                Format::Json => format::scan_json(&rows),
            };
            io.emit(a.output.out.as_deref(), &text)
        }
        Command::Wigner(a) => {
            let (state, kind) = state_for(&a.model, a.state.as_deref(), a.component, hard_cap)?;
            let (ranges, step) = wigner_ranges(&a, default_window(kind, &state))?;
            let grid = parallel::wigner_grid(&state, ranges, step).map_err(|e| CliError::from_core("--step", e))?;
            if grid.coarse {
                io.note(&format!("warning: grid step {step} is coarser than 0.25"));
            }
            let summary = format::WignerSummary::of(&grid);
            if let Some(path) = &a.summary {
                io.emit(Some(path), &summary.to_json())?;
            }
            let text = match a.output.format.unwrap_or(Format::Csv) {
                Format::Csv => format::wigner_csv(&grid),
                Format::Json => summary.to_json(),
            };
            io.emit(a.output.out.as_deref(), &text)
        }
        Command::Fs(a) => {
            let spec = a.model.spec(hard_cap, false)?;
            let mut values = Vec::with_capacity(a.n_terms);
            for n in 1..=a.n_terms {
                match superposed_nonlinearity(&spec.f, spec.phi, n) {
                    Ok(v) => values.push((n, v)),
                    Err(e @ nlcs_core::Error::DegenerateCoefficient { .. }) => {
                        io.note(&format!("warning: --phi {}: {e}", spec.phi));
                        values.push((n, Complex64::new(f64::NAN, f64::NAN)));
                    }
                    Err(e) => return Err(CliError::from_core("--model", e)),
                }
            }
            let text = match a.output.format.unwrap_or(Format::Csv) {
                Format::Csv => format::fs_csv(&values),
                Format::Json => format::fs_json(&values),
            };
            io.emit(a.output.out.as_deref(), &text)
        }
        Command::Crosscheck(a) => {
            let spec = a.model.spec(hard_cap, true)?;
            let report = series_crosscheck(&spec).map_err(|e| CliError::from_core("--alpha/--phi/--model", e))?;
            let text = match a.output.format.unwrap_or(Format::Csv) {
                Format::Csv => format::crosscheck_csv(&report),
                Format::Json => format::crosscheck_json(&report),
            };
            io.emit(a.output.out.as_deref(), &text)
        }
        Command::Figures(a) => {
            let figure = lookup(&a.id).ok_or_else(|| {
                let known: Vec<&str> = FIGURES.iter().map(|f| f.id).collect();
                CliError::Usage(format!("unknown figure {:?}, expected one of {}", a.id, known.join(", ")))
            })?;
            let dir = a.out.unwrap_or_else(|| PathBuf::from(figure.id));
            let written = emit_figure_bundle(figure, &dir, hard_cap)?;
            io.note(&format!("{}: wrote {} files to {}", figure.id, written.len(), dir.display()));
            Ok(())
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut io = Io { stdout, stderr };
    match execute(cli, &mut io) {
        Ok(()) => 0,
        Err(e) => {
            io.note(&e.to_string());
            e.exit_code()
        }
    }
}
