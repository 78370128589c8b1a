//! `fqp`: command-line driver for the fermionic-processor emulator.
//!
//! Every subcommand reads an optional TOML config, runs its
//! experiment, writes CSV files into the output directory, prints a
//! short summary, and encodes the outcome in its exit code:
//! 0 when all acceptance checks pass, 1 when a scientific check
//! fails, 2 for configuration or input errors. Runs are deterministic
//! in (config, seed): repeating one produces byte-identical CSVs.

mod commands;
mod config;
mod util;

use clap::{Parser, Subcommand};
use config::Config;
use std::path::PathBuf;
use std::process::ExitCode;
use util::UsageError;

#[derive(Parser)]
#[command(name = "fqp", about = "Desk-scale emulator of a fermionic tweezer-array processor")]
struct Cli {
    /// TOML configuration file (defaults apply per subcommand).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base random seed for all stochastic steps.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output directory for CSV files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads for independent parameter points.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Depth-5 gate decompositions over an angle grid, with the
    /// single-gate falsification probe.
    VerifyDecomp,
    /// First-order Trotter convergence study against the dense
    /// exponential.
    Trotter,
    /// Variational ground-state optimization with an optional
    /// Monte-Carlo noise sweep.
    Vqe,
    /// Single-plaquette gauge-theory evolution with Gauss-law drift
    /// report.
    Lgt,
    /// Iterative phase estimation on reference unitaries.
    Qpe,
    /// Motional-echo experiment: useful-time comparison of
    /// permutation strategies.
    Echo,
    /// Heating / dephasing / movement budget report.
    NoiseBudget,
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let cfg = Config::load(cli.config.as_deref()).map_err(UsageError)?;
    if cli.workers == 0 {
        return Err(UsageError("--workers must be at least 1".into()).into());
    }
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| UsageError(format!("cannot create {}: {e}", cli.out.display())))?;
    match cli.command {
        Command::VerifyDecomp => commands::verify_decomp(&cfg.verify_decomp, cli.seed, &cli.out),
        Command::Trotter => commands::trotter(&cfg.trotter, cli.seed, &cli.out),
        Command::Vqe => commands::vqe_run(&cfg.vqe, cli.seed, &cli.out),
        Command::Lgt => commands::lgt_run(&cfg.lgt, cli.seed, &cli.out),
        Command::Qpe => commands::qpe_run(&cfg.qpe, &cli.out),
        Command::Echo => commands::echo_run(&cfg.echo, cli.seed, &cli.out, cli.workers),
        Command::NoiseBudget => commands::noise_budget(&cfg.noise_budget, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("fqp: acceptance checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("fqp: error: {e:#}");
            ExitCode::from(2)
        }
    }
}
