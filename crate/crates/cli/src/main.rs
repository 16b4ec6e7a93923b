//! `weylcdma`: sequence dumps, correlation profiles, the phase-assignment
//! solver, analytic SNR tables and BER sweeps, all as CSV or key=value text.

mod commands;
mod output;
mod params;
mod sweep;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "weylcdma", version, about)]
struct Cli {
    /// Worker threads for the Monte-Carlo engine (default: all cores).
    #[arg(long, global = true, env = "WEYLCDMA_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dump one spreading sequence (or a Van der Corput slot list) as CSV.
    Generate(commands::GenerateArgs),
    /// Per-lag |C|, |theta|, |theta_hat| and the Weyl bound for a pair of sequences.
    Correlate(commands::CorrelateArgs),
    /// Closed-form optimal phases with KKT and sampling checks.
    Solve(commands::SolveArgs),
    /// Analytic per-slot SNR of the K_max = N Weyl family.
    Snr(commands::SnrArgs),
    /// Monte-Carlo BER sweep over users or E/N0.
    BerSweep(sweep::SweepArgs),
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        anyhow::ensure!(t > 0, "thread count must be positive");
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Correlate(a) => commands::correlate(a),
        Command::Solve(a) => commands::solve(a),
        Command::Snr(a) => commands::snr(a),
        Command::BerSweep(a) => sweep::ber_sweep(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
