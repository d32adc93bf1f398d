use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use depref::analytics::stats::chi_square_gof;
use depref::embedding::{
    athreya_karlin_grow, birth_asymptotic_ratio, cmj_grow, simulate_birth_process, tau_normalization,
    BirthStop,
};
use depref::enumerate::{cmj_degree_law, discrete_degree_law, law_distance, MAX_ENUMERATION_N};
use depref::rng::replica_rng;
use depref::Model;
use serde_json::json;

use super::ModelArgs;
use crate::config::resolve;
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, float, write_csv, write_json};
use crate::Context;

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of birth processes started in the embedding.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Births in the single-process trajectory.
    #[arg(long)]
    pub jumps: Option<usize>,
    /// Graph size for the exact degree-law comparison.
    #[arg(long)]
    pub law_n: Option<usize>,
    /// Monte Carlo runs for the degree-law comparison.
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(ctx: &Context, args: EmbedArgs) -> CliResult<()> {
    let file = &ctx.file;
    let params = args.model.resolve(file)?;
    let Model::InversePower { alpha, delta } = params.model else {
        return Err(CliError::Usage("embed needs --model inverse".into()));
    };
    let n = resolve(args.n, file, "n", 10_000)?;
    let seed = resolve(args.seed, file, "seed", 42)?;
    let jumps = resolve(args.jumps, file, "jumps", 100_000)?;
    let law_n = resolve(args.law_n, file, "law_n", 5)?;
    let draws = resolve(args.draws, file, "draws", 100_000)?;
    let out = resolve(args.out, file, "out", PathBuf::from("depref-out"))?;
    if n < 2 {
        return Err(CliError::Usage(format!("--n {n} must be at least 2")));
    }
    if !(2..=MAX_ENUMERATION_N).contains(&law_n) {
        return Err(CliError::Usage(format!("--law-n must lie in [2, {MAX_ENUMERATION_N}]")));
    }
    ensure_dir(&out)?;

    let ensemble = athreya_karlin_grow(&params, n, &mut replica_rng(seed, 0))?;
    let norm = tau_normalization(&ensemble, 1)?;
    let rows = norm.points.iter().map(|p| {
        vec![
            p.n.to_string(),
            float(ensemble.tau(p.n)),
            float(p.elapsed),
            float(p.c_n),
            float(p.ratio),
            float(p.c_over_log_n),
            float(p.c_over_m2_log_n),
            float(p.c_over_scale_log_n),
        ]
    });
    write_csv(
        &out.join("tau.csv"),
        &["n", "tau_n", "tau_n_minus_tau_1", "c_n", "ratio", "c_over_log_n", "c_over_m2_log_n", "c_over_scale_log_n"],
        rows,
    )?;

    let trajectory = simulate_birth_process(alpha, delta, params.m, BirthStop::MaxJumps(jumps), &mut replica_rng(seed, 1))?;
    let series = birth_asymptotic_ratio(&trajectory)?;
    let rows = series.count_ratio.iter().map(|&(t, r)| {
        vec![float(t), trajectory.count_at(t).to_string(), float(r), float(series.count_limit)]
    });
    write_csv(&out.join("birth_ratio.csv"), &["t", "count", "count_ratio", "count_limit"], rows)?;
    let rows = series.time_ratio.iter().map(|&(j, r)| {
        vec![j.to_string(), float(trajectory.jump_times[j - 1]), float(r), float(series.time_limit)]
    });
    write_csv(&out.join("birth_time_ratio.csv"), &["j", "T_j", "time_ratio", "time_limit"], rows)?;

    let law = discrete_degree_law(&params, law_n)?;
    let mut observed: BTreeMap<Vec<u32>, u64> = law.keys().map(|k| (k.clone(), 0)).collect();
    let mut outside = 0u64;
    let mut rng = replica_rng(seed, 2);
    let (construction, exact) = if params.m == 1 {
        ("cmj", Some(cmj_degree_law(alpha, delta, law_n)?))
    } else {
        ("birth_processes", None)
    };
    for _ in 0..draws {
        let degrees = if params.m == 1 {
            cmj_grow(alpha, delta, law_n, &mut rng)?.degrees()
        } else {
            athreya_karlin_grow(&params, law_n, &mut rng)?.counts().to_vec()
        };
        match observed.get_mut(&degrees) {
            Some(c) => *c += 1,
            None => outside += 1,
        }
    }
    let counts: Vec<u64> = observed.values().copied().collect();
    let probs: Vec<f64> = law.values().copied().collect();
    let chi = if draws > 0 { chi_square_gof(&counts, &probs).ok() } else { None };
    let outcomes: Vec<_> = law
        .iter()
        .map(|(degrees, &p)| {
            json!({
                "degrees": degrees,
                "discrete": p,
                "embedding_exact": exact.as_ref().map(|e| e.get(degrees).copied().unwrap_or(0.0)),
                "monte_carlo": if draws > 0 { observed[degrees] as f64 / draws as f64 } else { f64::NAN },
            })
        })
        .collect();
    let report = json!({
        "params": params,
        "n": law_n,
        "construction": construction,
        "draws": draws,
        "max_abs_difference": exact.as_ref().map(|e| law_distance(&law, e)),
        "outside_support": outside,
        "chi_square": chi.map(|c| json!({ "statistic": c.statistic, "dof": c.dof, "p_value": c.p_value })),
        "outcomes": outcomes,
    });
    write_json(&out.join("degree_law.json"), &report)?;

    if let Some(last) = norm.last() {
        println!("n = {}: c_n / log n = {:.6}, (tau_n - tau_1) / c_n = {:.6}", last.n, last.c_over_log_n, last.ratio);
    }
    println!(
        "birth process after {} jumps: Z(t) / t^(1/(1+alpha)) = {:.6} (limit {:.6})",
        trajectory.jumps(),
        series.final_count_ratio(),
        series.count_limit
    );
    println!("wrote tau.csv, birth_ratio.csv, birth_time_ratio.csv and degree_law.json to {}", out.display());
    Ok(())
}
