// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod config;
mod error;
mod eval;
mod output;
mod reconstruct;
mod sampling;
mod verify;

use error::CliResult;

/// Helmholtz-equation numerics in arbitrary dimension.
///
/// Exit codes: 0 success, 1 numeric failure or tolerance breach,
/// 2 usage or configuration error.
#[derive(Debug, Parser)]
#[command(name = "hyperhelm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a special function as CSV on stdout.
    Eval(EvalArgs),
    /// Run an identity-verification suite; CSV report on stdout.
    Verify(VerifyArgs),
    /// Run a reconstruction experiment described by a TOML file.
    Reconstruct {
        /// Experiment configuration.
        config: PathBuf,
        /// Directory receiving the CSV artifacts (created if missing).
        out_dir: PathBuf,
    },
    /// Dimensions of the harmonic spaces of order 0..=n-max.
    Dims {
        #[arg(long)]
        d: usize,
        #[arg(long = "n-max")]
        n_max: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Function {
    #[value(name = "hyper_j")]
    HyperJ,
    #[value(name = "hyper_n")]
    HyperN,
    #[value(name = "hyper_h1")]
    HyperH1,
    #[value(name = "hyper_h2")]
    HyperH2,
    #[value(name = "gegenbauer")]
    Gegenbauer,
    #[value(name = "harmonic_dim")]
    HarmonicDim,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    pub function: Function,
    /// Spatial dimension (radial functions, harmonic_dim).
    #[arg(long)]
    pub d: Option<usize>,
    /// Order n (radial functions) or degree (gegenbauer).
    #[arg(long)]
    pub n: Option<usize>,
    /// Gegenbauer parameter λ.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Largest order for harmonic_dim.
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Addition,
    FunkHecke,
    Gegenbauer,
    PlaneWave,
    Orthonormality,
    Radiation,
    Helmholtz,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    pub suite: Suite,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Wavenumber.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Truncation order; defaults to ⌈e·k·R/2⌉ + 10.
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    /// Largest harmonic order exercised by per-order suites.
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Radius of the ball random points are drawn from.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random cases for randomized suites.
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    /// Pass threshold; each suite has its own default.
    #[arg(long)]
    pub tol: Option<f64>,
}

fn run(cli: Cli) -> CliResult<()> {
    let stdout = std::io::stdout().lock();
    match cli.command {
        Command::Eval(args) => eval::run(&args, stdout),
        Command::Verify(args) => verify::run(&args, stdout),
        Command::Reconstruct { config, out_dir } => reconstruct::run(&config, &out_dir),
        Command::Dims { d, n_max } => eval::dims(d, n_max, stdout),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hyperhelm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
