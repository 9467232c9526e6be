//! Command-line front end: evaluate tail bounds, run tail-probability
//! simulations against measure files, and run the invariant suites.
//!
//! Exit codes: 0 when every requested check passes, 1 when a mathematical
//! check fails (a bound violated, a suite check failing), 2 for usage or
//! input errors.

mod bound;
mod grid;
mod manifest;
mod simulate;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// An error with the exit code it should produce.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<catzero::Error> for CliError {
    fn from(e: catzero::Error) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(name = "catzero", version, about = "Geodesic means and Gaussian tail bounds on CAT(0) spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print tail-bound values over a radius grid
    Bound(BoundArgs),
    /// Estimate the tail of d(s_n, E Y) for a measure file and check the bound
    Simulate(SimulateArgs),
    /// Run randomized invariant suites
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundSpace {
    /// Inductive means in an R-tree
    Rtree,
    /// Inductive means in an m-dimensional Hadamard manifold
    Hadamard,
}

#[derive(Args)]
pub struct BoundArgs {
    /// Bound family
    #[arg(long, value_enum)]
    space: BoundSpace,
    /// Samples per trial
    #[arg(long)]
    n: u64,
    /// Support diameter D
    #[arg(long)]
    diam: f64,
    /// Manifold dimension (hadamard only)
    #[arg(long)]
    m: Option<usize>,
    /// Single radius
    #[arg(long, conflicts_with = "r_grid")]
    r: Option<f64>,
    /// Radius grid start:step:stop
    #[arg(long)]
    r_grid: Option<String>,
    /// Emit machine-readable JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Measure file (JSON)
    #[arg(long)]
    measure: std::path::PathBuf,
    /// Samples per trial
    #[arg(long)]
    n: usize,
    /// Number of trials
    #[arg(long)]
    trials: u64,
    /// Radius grid start:step:stop
    #[arg(long)]
    r_grid: String,
    /// Experiment seed
    #[arg(long, env = "CATZERO_SEED", default_value_t = 42)]
    seed: u64,
    /// Output directory for report.csv, report.json and manifest.json
    #[arg(long, default_value = ".")]
    out: std::path::PathBuf,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    workers: Option<usize>,
    /// Confidence level of the reported intervals
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite name (cat0, convexity, lipschitz, variance, sturm, invariants,
    /// crad, drift) or "all"
    #[arg(long, default_value = "all")]
    suite: String,
    /// Suite seed
    #[arg(long, env = "CATZERO_SEED", default_value_t = 42)]
    seed: u64,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    workers: Option<usize>,
}

fn install_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(w) if w >= 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound(args) => bound::run(&args),
        Command::Simulate(args) => simulate::run(&args),
        Command::Verify(args) => verify::run(&args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
