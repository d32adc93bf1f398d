//! `depref`: simulate de-preferential random graphs, solve for the
//! Malthusian parameter, run the continuous-time embeddings and check the
//! simulations against the limit theory.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage error,
//! 3 I/O error.

// `!(x > 0.0)` is used deliberately so NaN lands on the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{resolve_opt, ConfigFile};
use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "depref", version, about = "De-preferential random graph experiments")]
struct Cli {
    /// Worker threads for replica-level parallelism (defaults to all cores).
    #[arg(long, global = true, env = "DEPREF_THREADS")]
    threads: Option<usize>,
    /// Configuration file: a flat JSON object or `key = value` lines.
    /// Command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow replicated graphs and write degree, fixed-vertex, normalizer and attachment CSVs.
    Simulate(commands::simulate::SimulateArgs),
    /// Solve for the Malthusian parameter over an (alpha, delta) grid.
    Lambda(commands::lambda::LambdaArgs),
    /// Write the limiting degree law of the inverse model.
    Pmf(commands::pmf::PmfArgs),
    /// Run the birth-process embeddings and write the time-scale and ratio series.
    Embed(commands::embed::EmbedArgs),
    /// Run acceptance checks and report pass/fail per criterion.
    Verify(commands::verify::VerifyArgs),
}

/// Settings shared by every subcommand.
pub struct Context {
    pub file: ConfigFile,
    pub threads: Option<usize>,
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let threads = resolve_opt(cli.threads, &file, "threads")?;
    let ctx = Context { file, threads };
    match cli.command {
        Command::Simulate(args) => commands::simulate::run(&ctx, args),
        Command::Lambda(args) => commands::lambda::run(&ctx, args),
        Command::Pmf(args) => commands::pmf::run(&ctx, args),
        Command::Embed(args) => commands::embed::run(&ctx, args),
        Command::Verify(args) => commands::verify::run(&ctx, args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("depref: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
