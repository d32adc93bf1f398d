use std::path::PathBuf;

use clap::Args;
use depref::malthusian::{limit_degree_pmf, pmf_stats};
use serde_json::json;

use crate::config::resolve;
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, float, write_csv, write_json};
use crate::Context;

#[derive(Debug, Args)]
pub struct PmfArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Truncate once the remaining mass falls below this value.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(ctx: &Context, args: PmfArgs) -> CliResult<()> {
    let file = &ctx.file;
    let alpha = resolve(args.alpha, file, "alpha", 1.0)?;
    let delta = resolve(args.delta, file, "delta", 0.0)?;
    let eps = resolve(args.eps, file, "eps", 1e-12)?;
    let out = resolve(args.out, file, "out", PathBuf::from("depref-out"))?;
    let pmf = limit_degree_pmf(alpha, delta, eps)?;
    let stats = pmf_stats(&pmf);
    ensure_dir(&out)?;
    let rows = pmf.probabilities.iter().enumerate().map(|(i, &p)| {
        let k = i as u32 + 1;
        vec![k.to_string(), float(p), float(pmf.tail_product(k))]
    });
    write_csv(&out.join("pmf.csv"), &["k", "p_k", "tail_ge_k"], rows)?;
    let summary = json!({
        "alpha": alpha,
        "delta": delta,
        "lambda_star": pmf.lambda_star,
        "truncation": pmf.truncation(),
        "tail_mass": pmf.tail_mass,
        "mean": stats.mean,
        "mean_error_bound": stats.mean_error_bound,
        "mode": stats.mode,
    });
    write_json(&out.join("pmf.json"), &summary)?;
    let text = serde_json::to_string_pretty(&summary).map_err(|e| CliError::io(&out, e.into()))?;
    println!("{text}");
    Ok(())
}
