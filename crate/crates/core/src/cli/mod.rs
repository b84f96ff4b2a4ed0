//! Command-line front end: `report`, `compare` and `check`.
//!
//! Exit codes: 0 success, 1 input error, 2 convergence warning, 3 invariant
//! failure.

pub mod check;
pub mod output;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::densities::{Kernels, SimulatedBug};
use crate::error::Error;
use crate::observables::{Observables, CONVERGENCE_TOLERANCE};
use crate::quadrature::{default_grid_spec, GridSpec, Integrator, SphericalGrid};
use crate::states::SpinorState;

pub use output::{Format, ReportDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONVERGENCE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "spinobs",
    version,
    about = "Angular momentum and magnetic moment of spinor fields from local densities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full observable report for one state
    Report(ReportArgs),
    /// One row per state: J under both prescriptions, their difference, mu and g
    Compare(CompareArgs),
    /// Run the seeded invariant suite
    Check(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BugArg {
    /// Momentum-density spin coefficient ħ/2 instead of ħ/4
    SpinCoeff,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn positive_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Nuclear charge for compact state specs
    #[arg(long = "Z", value_parser = positive_f64, default_value = "1")]
    pub z: f64,
    #[arg(long, value_parser = positive_f64)]
    pub rmax: Option<f64>,
    #[arg(long, value_parser = positive_count)]
    pub nr: Option<usize>,
    #[arg(long, value_parser = positive_count)]
    pub ntheta: Option<usize>,
    #[arg(long, value_parser = positive_count)]
    pub nphi: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, hide = true)]
    pub simulate_bug: Option<BugArg>,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Compact (`1 0 0 up`, `2 1 1/2 1/2`) or JSON state spec
    #[arg(long, required_unless_present = "state_file", conflicts_with = "state_file")]
    pub state: Option<String>,
    #[arg(long)]
    pub state_file: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub state: Vec<String>,
    #[arg(long)]
    pub state_file: Vec<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Everything a command needs besides its state list.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub z: f64,
    pub grid_overrides: GridOverrides,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub bug: Option<SimulatedBug>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GridOverrides {
    pub r_max: Option<f64>,
    pub n_r: Option<usize>,
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
}

impl GridOverrides {
    pub fn apply(&self, mut spec: GridSpec) -> GridSpec {
        spec.r_max = self.r_max.unwrap_or(spec.r_max);
        spec.n_r = self.n_r.unwrap_or(spec.n_r);
        spec.n_theta = self.n_theta.unwrap_or(spec.n_theta);
        spec.n_phi = self.n_phi.unwrap_or(spec.n_phi);
        spec
    }
}

impl From<&CommonArgs> for RunConfig {
    fn from(a: &CommonArgs) -> Self {
        Self {
            z: a.z,
            grid_overrides: GridOverrides {
                r_max: a.rmax,
                n_r: a.nr,
                n_theta: a.ntheta,
                n_phi: a.nphi,
            },
            format: a.format,
            out: a.out.clone(),
            seed: a.seed,
            bug: a.simulate_bug.map(|BugArg::SpinCoeff| SimulatedBug::SpinCoeff),
        }
    }
}

/// A parsed state with the text it came from.
#[derive(Debug, Clone)]
pub struct StateInput {
    pub text: String,
    pub state: SpinorState,
}

/// Console streams, swappable in tests.
pub struct Io<'a> {
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn read_spec(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map(|s| s.trim().to_owned())
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn load_state(text: String, z: f64) -> Result<StateInput, Failure> {
    let state = spec::parse_state(&text, z)?;
    Ok(StateInput { text, state })
}

fn engine(cfg: &RunConfig) -> Result<Observables, Failure> {
    Ok(Observables::new(Kernels::with_bug(cfg.bug), Integrator::from_env()?))
}

fn grid_for(cfg: &RunConfig, state: &SpinorState) -> Result<SphericalGrid, Failure> {
    Ok(SphericalGrid::new(cfg.grid_overrides.apply(default_grid_spec(state)))?)
}

fn emit(cfg: &RunConfig, io: &mut Io<'_>, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
        }
        None => io
            .stdout
            .write_all(text.as_bytes())
            .map_err(|e| input_error(format!("cannot write output: {e}"))),
    }
}

fn warn_unconverged(io: &mut Io<'_>, label: &str, estimate: f64) {
    let _ = writeln!(
        io.stderr,
        "warning: {label}: convergence estimate {} exceeds {}; refine the grid",
        output::sci(estimate),
        output::sci(CONVERGENCE_TOLERANCE)
    );
}

pub fn cmd_report(cfg: &RunConfig, input: &StateInput, io: &mut Io<'_>) -> i32 {
    let r = run_report(cfg, input, io);
    finish(io, r)
}

fn run_report(cfg: &RunConfig, input: &StateInput, io: &mut Io<'_>) -> Result<i32, Failure> {
    let grid = grid_for(cfg, &input.state)?;
    let report = engine(cfg)?.full_report(&input.state, &grid)?;
    let doc = ReportDocument::new(input.text.clone(), &report);
    let text = match cfg.format {
        Format::Table => output::report_table(&doc, &grid.spec()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => output::to_csv(output::report_csv_header(), [output::report_csv_row(&doc)]),
    };
    emit(cfg, io, &text)?;
    if report.converged() {
        Ok(EXIT_OK)
    } else {
        warn_unconverged(io, &input.text, report.convergence_estimate);
        Ok(EXIT_CONVERGENCE)
    }
}

pub fn cmd_compare(cfg: &RunConfig, inputs: &[StateInput], io: &mut Io<'_>) -> i32 {
    let r = run_compare(cfg, inputs, io);
    finish(io, r)
}

fn run_compare(cfg: &RunConfig, inputs: &[StateInput], io: &mut Io<'_>) -> Result<i32, Failure> {
    if inputs.is_empty() {
        return Err(input_error(
            "compare needs at least one state\n\nUsage: spinobs compare --state <SPEC> [--state <SPEC> ...] [--state-file <PATH> ...]",
        ));
    }
    let engine = engine(cfg)?;
    let mut rows = Vec::with_capacity(inputs.len());
    let mut unconverged = Vec::new();
    for input in inputs {
        let grid = grid_for(cfg, &input.state)?;
        let report = engine.full_report(&input.state, &grid)?;
        if !report.converged() {
            unconverged.push((input.text.clone(), report.convergence_estimate));
        }
        rows.push(output::CompareRow::new(input.text.clone(), &report));
    }
    let text = match cfg.format {
        Format::Table => output::compare_table(&rows),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Csv => output::to_csv(output::compare_csv_header(), rows.iter().map(output::compare_csv_row)),
    };
    emit(cfg, io, &text)?;
    for (label, estimate) in &unconverged {
        warn_unconverged(io, label, *estimate);
    }
    Ok(if unconverged.is_empty() {
        EXIT_OK
    } else {
        EXIT_CONVERGENCE
    })
}

pub fn cmd_check(cfg: &RunConfig, io: &mut Io<'_>) -> i32 {
    let r = run_check(cfg, io);
    finish(io, r)
}

fn run_check(cfg: &RunConfig, io: &mut Io<'_>) -> Result<i32, Failure> {
    let check_cfg = check::CheckConfig::new(cfg.seed, Kernels::with_bug(cfg.bug), Integrator::from_env()?);
    let results = check::run_checks(&check_cfg)?;
    emit(cfg, io, &check::render(cfg.seed, &results))?;
    Ok(if results.iter().all(check::CheckResult::passed) {
        EXIT_OK
    } else {
        EXIT_INVARIANT
    })
}

fn finish(io: &mut Io<'_>, r: Result<i32, Failure>) -> i32 {
    match r {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Parses arguments and dispatches; returns the process exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = io.stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = io.stderr.write_all(text.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    match cli.command {
        Command::Report(a) => {
            let cfg = RunConfig::from(&a.common);
            let text = match (a.state, &a.state_file) {
                (Some(s), _) => Ok(s),
                (None, Some(path)) => read_spec(path),
                (None, None) => Err(input_error("report needs --state or --state-file")),
            };
            match text.and_then(|t| load_state(t, cfg.z)) {
                Ok(input) => cmd_report(&cfg, &input, io),
                Err(f) => finish(io, Err(f)),
            }
        }
        Command::Compare(a) => {
            let cfg = RunConfig::from(&a.common);
            let mut inputs = Vec::new();
            let texts = a.state.into_iter().map(Ok).chain(a.state_file.iter().map(read_spec));
            for t in texts {
                match t.and_then(|t| load_state(t, cfg.z)) {
                    Ok(i) => inputs.push(i),
                    Err(f) => return finish(io, Err(f)),
                }
            }
            cmd_compare(&cfg, &inputs, io)
        }
        Command::Check(a) => cmd_check(&RunConfig::from(&a), io),
    }
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run(
        args,
        &mut Io {
            stdout: &mut out,
            stderr: &mut err,
        },
    );
    let _ = out.flush();
    code
}
