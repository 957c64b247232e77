//! `modefir`: decompose signals with IF/FIF/dFIF/htFIF and compare the results.

mod bench;
mod compare;
mod decompose;
mod error;
mod io;
mod run;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modefir::{GapStatistic, Method};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "modefir",
    version,
    about = "Iterative filtering signal decomposition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose one signal into IMFs plus a remainder.
    Decompose(DecomposeArgs),
    /// Compare two decomposition runs IMF by IMF.
    Compare(CompareArgs),
    /// Score dFIF/htFIF first IMFs against FIF over a parameter grid.
    Sweep(SweepArgs),
    /// Time the methods on a synthetic signal.
    Bench(BenchArgs),
}

/// Input signal location.
#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Text file with one sample per line, or a delimited table.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Zero-based column to read from a multi-column table.
    #[arg(long)]
    column: Option<usize>,
}

/// Decomposition parameters; unset values take the library defaults.
#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    /// Extrema spacing statistic: ave, almost_min or pN.
    #[arg(long)]
    alpha: Option<GapStatistic>,
    #[arg(long)]
    max_imfs: Option<usize>,
    /// Iteration cap for IF and FIF.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Times the thresholded operator is applied by htFIF.
    #[arg(long)]
    htfif_power: Option<usize>,
}

#[derive(Args, Debug)]
pub(crate) struct DecomposeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
    #[command(flatten)]
    config: ConfigArgs,
    /// Replay the input and configuration recorded in a run manifest.
    #[arg(long, conflicts_with_all = ["input", "column", "method"])]
    manifest: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub(crate) struct CompareArgs {
    /// Reference run directory.
    #[arg(long)]
    a: PathBuf,
    /// Candidate run directory.
    #[arg(long)]
    b: PathBuf,
    /// Re-run the candidate's method on the reference's remainders.
    #[arg(long)]
    shared_remainder: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub(crate) struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Threshold grid `start:stop:step`, stop included.
    #[arg(long)]
    tau_grid: String,
    /// Kappa grid for dFIF; defaults to the single configured kappa.
    #[arg(long)]
    kappa_grid: Option<String>,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub(crate) struct BenchArgs {
    /// Synthetic spec JSON file, or a stored fixture name.
    #[arg(long)]
    spec: String,
    /// Resample the spec at this length.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "if,fif,dfif,htfif")]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    out: PathBuf,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: modefir::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(args) => decompose::run(args),
        Command::Compare(args) => compare::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Bench(args) => bench::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl ConfigArgs {
    /// Overrides the fields of `cfg` that were given on the command line.
    fn apply(&self, cfg: &mut modefir::DecompositionConfig) {
        cfg.tau = self.tau.unwrap_or(cfg.tau);
        cfg.kappa = self.kappa.unwrap_or(cfg.kappa);
        cfg.delta = self.delta.unwrap_or(cfg.delta);
        cfg.xi = self.xi.unwrap_or(cfg.xi);
        cfg.alpha = self.alpha.unwrap_or(cfg.alpha);
        cfg.max_imfs = self.max_imfs.unwrap_or(cfg.max_imfs);
        cfg.max_inner_iterations = self.max_iter.unwrap_or(cfg.max_inner_iterations);
        cfg.htfif_power = self.htfif_power.unwrap_or(cfg.htfif_power);
    }

    fn build(&self, method: Method) -> Result<modefir::DecompositionConfig, CliError> {
        let mut cfg = modefir::DecompositionConfig::with_method(method);
        self.apply(&mut cfg);
        cfg.validate().map_err(CliError::from_core)?;
        Ok(cfg)
    }
}

impl InputArgs {
    fn path(&self) -> Result<PathBuf, CliError> {
        self.input
            .clone()
            .ok_or_else(|| CliError::Input("--input is required".into()))
    }
}
