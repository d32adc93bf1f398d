use std::path::PathBuf;

use clap::Args;
use depref::verify::{run_suite, Budget, Suite, VerifyConfig};

use crate::config::{resolve, resolve_opt, Sizes};
use crate::error::{CliError, CliResult};
use crate::output::write_json;
use crate::Context;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `malthusian`, `linear`, `inverse`, `embedding` or `all`.
    pub suite: Suite,
    /// `quick` shrinks replica counts and graph sizes; `full` uses the calibrated sizes.
    #[arg(long)]
    pub budget: Option<Budget>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Graph sizes for the embedding-equivalence check, comma-separated.
    #[arg(long)]
    pub n: Option<Sizes>,
    /// Monte Carlo CMJ runs per embedding-equivalence cell.
    #[arg(long)]
    pub draws: Option<usize>,
    /// Write the full report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Print every measurement, not just one line per criterion.
    #[arg(long, short)]
    pub verbose: bool,
}

pub fn run(ctx: &Context, args: VerifyArgs) -> CliResult<()> {
    let file = &ctx.file;
    let mut config = VerifyConfig {
        budget: resolve(args.budget, file, "budget", Budget::Full)?,
        threads: ctx.threads,
        ..VerifyConfig::default()
    };
    config.master_seed = resolve(args.seed, file, "seed", config.master_seed)?;
    if let Some(sizes) = resolve_opt(args.n, file, "n")? {
        if sizes.0.is_empty() {
            return Err(CliError::Usage("--n needs at least one size".into()));
        }
        config.equivalence_sizes = sizes.0;
    }
    config.equivalence_draws = resolve_opt(args.draws, file, "draws")?;
    let reports = run_suite(args.suite, &config)?;
    for report in &reports {
        if args.verbose {
            print!("{report}");
        } else {
            println!("{}", report.summary_line());
        }
    }
    if let Some(path) = resolve_opt(args.json, file, "json")? {
        let value = serde_json::json!({ "suite": args.suite, "config": config, "criteria": reports });
        write_json(&path, &value)?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::VerificationFailed(failed));
    }
    Ok(())
}
