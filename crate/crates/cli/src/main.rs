//! `srgcert`: SRG stability certification of converter–grid interconnections.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use srgcert::lti::Spacing;

#[derive(Parser, Debug)]
#[command(name = "srgcert", version, about = "Scaled relative graph stability certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify a converter against a grid admittance.
    Certify(CertifyArgs),
    /// Certify a converter against a linear load plus a constant power load.
    CertifyCpl(CertifyCplArgs),
    /// Critical short-circuit ratio of a converter.
    Cscr(CscrArgs),
    /// SRG test next to GNC, small gain, small phase and passivity.
    Compare(CertifyArgs),
    /// Kron-reduce a network case to its boundary buses.
    Kron(KronArgs),
    /// Export SRG boundaries per frequency for plotting.
    SrgExport(ExportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FreqArgs {
    /// Lower band edge in Hz.
    #[arg(long)]
    pub fmin: Option<f64>,
    /// Upper band edge in Hz.
    #[arg(long)]
    pub fmax: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub npoints: Option<usize>,
    /// Point distribution: log or linear.
    #[arg(long)]
    pub spacing: Option<Spacing>,
    /// Fundamental in Hz, added to the default grid.
    #[arg(long, default_value_t = 50.0)]
    pub f0: f64,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Seed for sampled outputs; recorded in the report.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of τ grid points echoed into the report.
    #[arg(long, default_value_t = 64)]
    pub tau_points: usize,
    #[command(flatten)]
    pub freq: FreqArgs,
}

/// Exactly one grid source.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct GridSource {
    /// Grid admittance model (JSON or frequency-data CSV).
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Network case (JSON), reduced to its boundary buses.
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Grid modelled as `SCR·I`.
    #[arg(long)]
    pub scr: Option<f64>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Converter admittance model (JSON or frequency-data CSV).
    #[arg(long)]
    pub converter: PathBuf,
    #[command(flatten)]
    pub source: GridSource,
    /// Boundary buses overriding the network case, e.g. `0,2`.
    #[arg(long, value_delimiter = ',', requires = "network")]
    pub boundary: Option<Vec<usize>>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct CertifyCplArgs {
    #[arg(long)]
    pub converter: PathBuf,
    /// Linear part of the load, `y_l` (2×2).
    #[arg(long)]
    pub grid: PathBuf,
    /// Constant power load `p,q,vmin`.
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    pub cpl: Vec<f64>,
    /// Ripple ratio at which to report the harmonic gain bound.
    #[arg(long)]
    pub rho: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct CscrArgs {
    #[arg(long)]
    pub converter: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct KronArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub boundary: Option<Vec<usize>>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long)]
    pub converter: PathBuf,
    #[arg(long, conflicts_with_all = ["network", "scr"])]
    pub grid: Option<PathBuf>,
    #[arg(long, conflicts_with = "scr")]
    pub network: Option<PathBuf>,
    #[arg(long)]
    pub scr: Option<f64>,
    #[arg(long, value_delimiter = ',', requires = "network")]
    pub boundary: Option<Vec<usize>>,
    /// Oracle samples of the converter SRG per frequency (0 disables).
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn main() -> ExitCode {
    // Usage errors exit with 1 like every other input error; 2 means not certified.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Certify(a) => commands::certify(&a, false),
        Command::Compare(a) => commands::certify(&a, true),
        Command::CertifyCpl(a) => commands::certify_cpl(&a),
        Command::Cscr(a) => commands::cscr(&a),
        Command::Kron(a) => commands::kron(&a),
        Command::SrgExport(a) => commands::srg_export(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
