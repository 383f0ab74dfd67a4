mod commands;
mod meta;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "frankmin", version, about = "Oseen-Frank cholesteric minimizers, 3D relaxation and stability checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the one-dimensional problem and write the profile as CSV.
    Solve1d(Solve1dArgs),
    /// Embed the one-dimensional minimizer into a 3D grid.
    Embed(EmbedArgs),
    /// Relax a perturbed 3D director field by projected gradient descent.
    Relax(RelaxArgs),
    /// Tabulate the stability constants over a range of t.
    Scan(ScanArgs),
    /// Stability tools.
    #[command(subcommand)]
    Stability(StabilityCommand),
    /// Run a fixed-seed verification suite.
    Verify(VerifyArgs),
    /// Rerun the command recorded in a metadata file.
    Replay(ReplayArgs),
}

#[derive(Debug, Subcommand)]
pub enum StabilityCommand {
    /// Same as `frankmin scan`.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConstantsArgs {
    /// Elastic constants `k1,k2,k3,k4`.
    #[arg(long, value_name = "K1,K2,K3,K4", conflicts_with = "one_constant")]
    pub k: Option<String>,
    /// K1 = K2 = K3 = 1, K4 = 0 (the default).
    #[arg(long)]
    pub one_constant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FirstIntegral,
    BruteForce,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Solve1dArgs {
    /// Chirality (twist per unit cell height).
    #[arg(long, allow_negative_numbers = true, required_unless_present = "fig1")]
    pub t: Option<f64>,
    #[command(flatten)]
    pub constants: ConstantsArgs,
    #[arg(long, default_value_t = 1001)]
    pub n_nodes: usize,
    /// Solve t = 2.5, 5, 10, 20 (one file each).
    #[arg(long, conflicts_with = "t")]
    pub fig1: bool,
    #[arg(long, value_enum, default_value_t = Method::FirstIntegral)]
    pub method: Method,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 16)]
    pub nx: usize,
    #[arg(long, default_value_t = 16)]
    pub ny: usize,
    #[arg(long, default_value_t = 33)]
    pub nz: usize,
    #[arg(long, default_value_t = 0.25)]
    pub l1: f64,
    #[arg(long, default_value_t = 0.25)]
    pub l2: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EmbedArgs {
    /// Chirality (twist per unit cell height).
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[command(flatten)]
    pub constants: ConstantsArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Nodes of the one-dimensional profile before interpolation.
    #[arg(long, default_value_t = 4097)]
    pub n_nodes: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RelaxArgs {
    /// Anchoring on the plates: `frustrated` or `homeotropic`.
    #[arg(long, value_parser = clap::value_parser!(frankmin::field3d::BoundaryCondition))]
    pub bc: frankmin::field3d::BoundaryCondition,
    /// Chirality (twist per unit cell height).
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[command(flatten)]
    pub constants: ConstantsArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Amplitude of the random perturbation of the start field.
    #[arg(long, default_value_t = 0.3)]
    pub perturb: f64,
    /// Start from an OFGRID file instead of the reference state.
    #[arg(long)]
    pub start: Option<PathBuf>,
    #[arg(long, default_value_t = 20_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub grad_tol: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub step_init: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1.5)]
    pub t_max: f64,
    #[arg(long, default_value_t = 150)]
    pub steps: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReplayArgs {
    /// Metadata JSON written by an earlier run.
    pub metadata: PathBuf,
    /// Write outputs here instead of the recorded directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<frankmin::Error> for Failure {
    fn from(e: frankmin::Error) -> Self {
        use frankmin::Error as E;
        let code = match e {
            E::NotConverged { .. } | E::Io(_) | E::Json(_) => EXIT_SOLVER,
            E::NonFinite { .. } | E::InvalidConstants(_) | E::Domain(_) | E::InvalidGrid(_) | E::Parse { .. } => {
                EXIT_USAGE
            }
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_SOLVER, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self { code: EXIT_SOLVER, message: e.to_string() }
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run_args(args: Vec<OsString>) -> Result<u8, Failure> {
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("frankmin")).chain(args)) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return Ok(code);
        }
    };
    commands::dispatch(cli.command, argv)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("FRANKMIN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::usage(format!("FRANKMIN_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn main() -> ExitCode {
    let result = configure_threads().and_then(|()| run_args(std::env::args_os().skip(1).collect()));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
