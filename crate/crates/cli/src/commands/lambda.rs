use std::path::PathBuf;

use clap::Args;
use depref::malthusian::{lambda_star_sweep, DEFAULT_TOL};

use crate::config::{resolve, Grid};
use crate::error::CliResult;
use crate::output::{ensure_dir, float, write_csv};
use crate::Context;

#[derive(Debug, Args)]
pub struct LambdaArgs {
    /// Alpha values: `a,b,c` or `start:stop:step`.
    #[arg(long)]
    pub alpha: Option<Grid>,
    /// Delta values: `a,b,c` or `start:stop:step`.
    #[arg(long)]
    pub delta: Option<Grid>,
    /// Residual tolerance `|rho_hat(lambda*) - 1|`.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(ctx: &Context, args: LambdaArgs) -> CliResult<()> {
    let file = &ctx.file;
    let alpha = resolve(args.alpha, file, "alpha", Grid(vec![0.25, 0.5, 0.75, 1.0]))?;
    let delta = resolve(args.delta, file, "delta", Grid(vec![0.0, 0.5, 1.0, 5.0]))?;
    let tol = resolve(args.tol, file, "tol", DEFAULT_TOL)?;
    let out = resolve(args.out, file, "out", PathBuf::from("depref-out"))?;
    let rows = lambda_star_sweep(&alpha.0, &delta.0, tol)?;
    let mut failures = 0;
    let formatted: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let (lambda, residual) = match &row.result {
                Ok(r) => (r.lambda_star, r.residual),
                Err(e) => {
                    failures += 1;
                    eprintln!("alpha = {}, delta = {}: {e}", row.alpha, row.delta);
                    (f64::NAN, f64::NAN)
                }
            };
            vec![float(row.alpha), float(row.delta), float(lambda), float(residual)]
        })
        .collect();
    ensure_dir(&out)?;
    let path = out.join("lambda_sweep.csv");
    write_csv(&path, &["alpha", "delta", "lambda_star", "residual"], formatted)?;
    for row in &rows {
        if let Ok(r) = &row.result {
            println!("alpha = {:<6} delta = {:<6} lambda* = {:.15}", row.alpha, row.delta, r.lambda_star);
        }
    }
    println!("wrote {} rows ({failures} failed) to {}", rows.len(), path.display());
    Ok(())
}
