//! `manifold-agg`: simulate the intrinsic aggregation equation and certify
//! its well-posedness estimates from the command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 configuration
//! error, 3 a geometric guard was violated.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Core(manifold_agg::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use manifold_agg::Error as E;
        match self {
            CliError::Core(e) if e.is_guard_violation() => 3,
            CliError::Core(
                E::InvalidConfig(_)
                | E::InvalidProfile(_)
                | E::InvalidMeasure(_)
                | E::DimensionMismatch { .. }
                | E::OffManifold(_)
                | E::MissingGlobalConstant(_)
                | E::NotAttractive(_)
                | E::GridMismatch(_),
            ) => 2,
            CliError::Core(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "configuration error: {s}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
            CliError::Core(e) if e.is_guard_violation() => write!(f, "guard violation: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<manifold_agg::Error> for CliError {
    fn from(e: manifold_agg::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "manifold-agg", version, about = "Aggregation dynamics on Riemannian manifolds")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the seed of the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, env = "MANIFOLD_AGG_THREADS")]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Print the default configuration and exit.
    #[arg(long)]
    print_defaults: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the particle simulation and export the trajectory.
    Simulate,
    /// Run the configured checks; exit 1 if any fails.
    Verify {
        /// Replace a constant, e.g. `L=1`, to exercise failure paths.
        #[arg(long = "override-constant", value_name = "NAME=VALUE")]
        overrides: Vec<String>,
    },
    /// Exact W1 distance between two measures stored as JSON.
    W1 {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Manifold; taken from the configuration when absent.
        #[arg(long)]
        manifold: Option<String>,
        /// Also print the permutation brute-force value.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the well-posedness constants.
    Constants {
        #[arg(long)]
        manifold: Option<String>,
        #[arg(long)]
        potential: Option<String>,
        /// Diameter Δ of the region.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        epsilon: f64,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = cli.threads {
        cfg.threads = threads;
    }
    if let Some(out) = &cli.output {
        cfg.output = out.clone();
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if cli.print_defaults {
        print!("{}", RunConfig::default().to_toml());
        return Ok(0);
    }
    let Some(command) = &cli.command else {
        return Err(CliError::Config("no subcommand given (see --help)".into()));
    };
    let cfg = load_config(&cli)?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match command {
        Command::Simulate => commands::simulate(&cfg),
        Command::Verify { overrides } => commands::verify(&cfg, overrides),
        Command::W1 {
            file_a,
            file_b,
            manifold,
            oracle,
        } => commands::w1(&cfg, file_a, file_b, manifold.as_deref(), *oracle, cli.output.is_some()),
        Command::Constants {
            manifold,
            potential,
            delta,
            epsilon,
        } => commands::constants(&cfg, manifold.as_deref(), potential.as_deref(), *delta, *epsilon, cli.output.is_some()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
