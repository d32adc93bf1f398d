use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use depref::analytics::{
    fixed_vertex_ratio, frequencies_from_counts, inverse_attachment_limit, linear_attachment_limit,
};
use depref::experiment::{run_replicas, ReplicaSummary, RunSpec};
use depref::malthusian::{limit_pmf_at, solve_lambda_star, DEFAULT_TOL};
use depref::{Model, ModelParams, SamplerKind};

use super::ModelArgs;
use crate::config::{resolve, resolve_opt, Sizes};
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, float, write_csv, write_json};
use crate::Context;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Final number of vertices.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub replicas: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `bucketed`, `exact` or `rejection`.
    #[arg(long)]
    pub sampler: Option<SamplerKind>,
    /// 1-based label of the traced vertex.
    #[arg(long)]
    pub fixed_vertex: Option<usize>,
    /// Fraction of the run, at the end, over which attachment frequencies are counted.
    #[arg(long)]
    pub late_fraction: Option<f64>,
    /// Comma-separated sizes at which full degree histograms are stored in the replica JSON.
    #[arg(long)]
    pub snapshots: Option<Sizes>,
    /// Start `i` of the accumulated embedding time scale (inverse model only).
    #[arg(long)]
    pub tau_start: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(ctx: &Context, args: SimulateArgs) -> CliResult<()> {
    let file = &ctx.file;
    let params = args.model.resolve(file)?;
    let n = resolve(args.n, file, "n", 10_000)?;
    let replicas = resolve(args.replicas, file, "replicas", 10)?;
    let seed = resolve(args.seed, file, "seed", 42)?;
    let out = resolve(args.out, file, "out", PathBuf::from("depref-out"))?;
    if n < 3 {
        return Err(CliError::Usage(format!("--n {n} must be at least 3")));
    }
    if replicas < 1 {
        return Err(CliError::Usage("--replicas must be at least 1".into()));
    }
    let mut spec = RunSpec::new(params, n);
    spec.sampler = resolve(args.sampler, file, "sampler", SamplerKind::Bucketed)?;
    spec.fixed_vertex = resolve(args.fixed_vertex, file, "fixed_vertex", spec.fixed_vertex)?;
    spec.late_fraction = resolve(args.late_fraction, file, "late_fraction", spec.late_fraction)?;
    spec.histogram_at = resolve(args.snapshots, file, "snapshots", Sizes(Vec::new()))?.0;
    spec.tau_start = resolve_opt(args.tau_start, file, "tau_start")?;
    spec.validate()?;

    let runs = run_replicas(&spec, seed, replicas, ctx.threads)?;
    let lambda_star = match params.model {
        Model::InversePower { alpha, delta } => Some(solve_lambda_star(alpha, delta, DEFAULT_TOL)?.lambda_star),
        Model::Linear { .. } => None,
    };

    ensure_dir(&out)?;
    let replica_dir = out.join("replicas");
    ensure_dir(&replica_dir)?;
    for s in &runs {
        let value = serde_json::to_value(s).map_err(|e| CliError::io(&replica_dir, e.into()))?;
        write_json(&replica_dir.join(format!("replica_{:05}.json", s.replica)), &value)?;
    }
    write_degree_dist(&out, &runs, &params, lambda_star)?;
    write_fixed_vertex(&out, &runs, &params, lambda_star)?;
    write_normalizer(&out, &runs)?;
    write_attach_freq(&out, &runs, &params, lambda_star)?;
    println!(
        "simulated {replicas} replicas to n = {n}; wrote degree_dist.csv, fixed_vertex.csv, normalizer.csv, attach_freq.csv and replicas/ to {}",
        out.display()
    );
    Ok(())
}

fn degree_limit(params: &ModelParams, lambda_star: Option<f64>) -> impl Fn(u32) -> f64 {
    let pmf = match (params.model, lambda_star) {
        (Model::InversePower { alpha, delta }, Some(l)) if params.m == 1 => Some(limit_pmf_at(alpha, delta, l, 1e-16)),
        _ => None,
    };
    let linear_unit = params.is_linear() && params.m == 1;
    move |k| match &pmf {
        Some(p) => p.pk(k),
        None if linear_unit => linear_attachment_limit(k),
        None => f64::NAN,
    }
}

fn write_degree_dist(
    out: &std::path::Path,
    runs: &[ReplicaSummary],
    params: &ModelParams,
    lambda_star: Option<f64>,
) -> CliResult<()> {
    let mut totals: BTreeMap<u32, u64> = BTreeMap::new();
    for s in runs {
        for (&k, &c) in &s.final_histogram.counts {
            *totals.entry(k).or_insert(0) += c;
        }
    }
    let r = runs.len() as f64;
    let n = runs[0].n as f64;
    let limit = degree_limit(params, lambda_star);
    let (lo, hi) = (params.m, totals.keys().next_back().copied().unwrap_or(params.m));
    let rows = (lo..=hi).map(|k| {
        let mean_count = totals.get(&k).copied().unwrap_or(0) as f64 / r;
        vec![k.to_string(), float(mean_count), float(mean_count / n), float(limit(k))]
    });
    write_csv(&out.join("degree_dist.csv"), &["k", "N_k", "P_k", "limit_pk"], rows)
}

fn write_fixed_vertex(
    out: &std::path::Path,
    runs: &[ReplicaSummary],
    params: &ModelParams,
    lambda_star: Option<f64>,
) -> CliResult<()> {
    let per_replica = runs
        .iter()
        .map(|s| fixed_vertex_ratio(&s.fixed_vertex_trace, params, lambda_star))
        .collect::<Result<Vec<_>, _>>()?;
    let r = runs.len() as f64;
    let points = per_replica[0].len();
    let rows = (0..points).map(|i| {
        let n = per_replica[0][i].n;
        let d = per_replica.iter().map(|t| f64::from(t[i].degree)).sum::<f64>() / r;
        let ratio = per_replica.iter().map(|t| t[i].ratio).sum::<f64>() / r;
        vec![n.to_string(), float(d), float(ratio)]
    });
    write_csv(&out.join("fixed_vertex.csv"), &["n", "d_i", "ratio"], rows)
}

fn write_normalizer(out: &std::path::Path, runs: &[ReplicaSummary]) -> CliResult<()> {
    let r = runs.len() as f64;
    let rows = (0..runs[0].normalizer_trace.len()).map(|i| {
        let n = runs[0].normalizer_trace[i].0;
        let mean = runs.iter().map(|s| s.normalizer_trace[i].1).sum::<f64>() / r;
        vec![n.to_string(), float(mean)]
    });
    write_csv(&out.join("normalizer.csv"), &["n", "D_n_over_n"], rows)
}

fn write_attach_freq(
    out: &std::path::Path,
    runs: &[ReplicaSummary],
    params: &ModelParams,
    lambda_star: Option<f64>,
) -> CliResult<()> {
    let mut counts = BTreeMap::new();
    for s in runs {
        for (&k, &c) in &s.attach_counts {
            *counts.entry(k).or_insert(0u64) += c;
        }
    }
    let freq = frequencies_from_counts(&counts)?;
    let limit = |k: u32| match (params.model, lambda_star) {
        _ if params.m != 1 => f64::NAN,
        (Model::InversePower { alpha, delta }, Some(l)) => inverse_attachment_limit(k, alpha, delta, l),
        _ => linear_attachment_limit(k),
    };
    let rows = freq.iter().map(|(&k, &f)| vec![k.to_string(), float(f), float(limit(k))]);
    write_csv(&out.join("attach_freq.csv"), &["k", "frequency", "limit"], rows)
}
