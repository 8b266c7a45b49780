//! `qgv`: generate ensembles, run axiom checks, reconstruct and continue.
//!
//! Exit codes: 0 when everything passes, 1 when an axiom check fails, 2 on
//! usage, configuration or runtime errors.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Context, Format};
use config::RunConfig;
use error::{CliError, ERROR_EXIT};

#[derive(Parser)]
#[command(name = "qgv", version, about = "Axiom checks, reconstruction and continuation for gauge-theory correlators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `seed` from the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides `out` from the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated axiom names for `check`, or `all`.
    #[arg(long, global = true, value_delimiter = ',')]
    axioms: Option<Vec<String>>,
    /// Machine-readable standard output.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a lattice ensemble and write it with its provenance.
    Simulate,
    /// Jackknife averages of the standard lattice observables.
    Measure,
    /// Run axiom checkers on the configured family.
    Check,
    /// Build the physical Hilbert space over the configured basis.
    Reconstruct,
    /// Fit a spectral model and continue it to real time.
    Continue,
    /// Print the last `check` results from the output directory.
    Report,
}

fn init_threads() {
    if let Some(n) = std::env::var("QGV_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("QGV_THREADS ignored: {e}");
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let path = cli.config.ok_or_else(|| CliError::Usage("--config PATH is required".into()))?;
    let mut config = RunConfig::load(&path)?;
    if cli.seed.is_some() {
        config.seed = cli.seed;
    }
    let out = config.out_dir(cli.out.as_deref());
    let ctx = Context { config, out, format: cli.format };
    match cli.command {
        Command::Simulate => commands::simulate(&ctx),
        Command::Measure => commands::measure(&ctx),
        Command::Check => commands::check(&ctx, cli.axioms.as_deref()),
        Command::Reconstruct => commands::reconstruct(&ctx),
        Command::Continue => commands::continue_(&ctx),
        Command::Report => commands::report(&ctx),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qgv: {e}");
            ExitCode::from(ERROR_EXIT as u8)
        }
    }
}
