//! Goodness-of-fit tests and summary statistics.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Minimum expected count per pooled chi-square bin.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Pearson goodness-of-fit of `observed` counts against `probs`. Adjacent
/// bins are pooled left to right until each has expected count at least 5;
/// a short remainder is merged into the last pooled bin.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<ChiSquareResult> {
    if observed.len() != probs.len() {
        return Err(Error::Test("observed and reference lengths differ".into()));
    }
    let total: u64 = observed.iter().sum();
    let mass: f64 = probs.iter().sum();
    if total == 0 || !(mass > 0.0) || probs.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::Test("degenerate sample or reference distribution".into()));
    }
    let total = total as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs_acc, mut exp_acc) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        obs_acc += o as f64;
        exp_acc += total * p / mass;
        if exp_acc >= MIN_EXPECTED {
            bins.push((obs_acc, exp_acc));
            obs_acc = 0.0;
            exp_acc = 0.0;
        }
    }
    if exp_acc > 0.0 || obs_acc > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += obs_acc;
                last.1 += exp_acc;
            }
            None => bins.push((obs_acc, exp_acc)),
        }
    }
    if bins.len() < 2 {
        return Err(Error::Test("fewer than two bins after pooling".into()));
    }
    let statistic: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Test(e.to_string()))?;
    Ok(ChiSquareResult { statistic, dof, p_value: dist.sf(statistic) })
}

/// One-sample Kolmogorov-Smirnov test against the standard normal.
pub fn ks_normal(samples: &[f64]) -> Result<KsResult> {
    if samples.len() < 2 || samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Test("KS test needs at least two finite samples".into()));
    }
    let normal = Normal::standard();
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal.cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let sqrt_n = n.sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * statistic;
    Ok(KsResult { statistic, p_value: kolmogorov_sf(lambda) })
}

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-theta form converges fast for small lambda
        let y = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let cdf: f64 = (1..=8)
            .map(|j| ((2 * j - 1) as f64).powi(2) * y)
            .map(f64::exp)
            .sum::<f64>()
            * (2.0 * std::f64::consts::PI).sqrt()
            / lambda;
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let sf: f64 = (1..=100)
            .map(|j| {
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * (j * j) as f64 * lambda * lambda).exp()
            })
            .sum::<f64>()
            * 2.0;
        sf.clamp(0.0, 1.0)
    }
}

/// Total-variation distance between two finite PMFs; the shorter is padded with zeros.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    0.5 * (0..len)
        .map(|i| (p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let mu = mean(xs);
    xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&[0.2, 0.8], &[0.2, 0.8]), 0.0);
        assert_eq!(tv_distance(&[0.5, 0.5], &[0.25, 0.75]), 0.25);
        assert_eq!(tv_distance(&[1.0], &[0.5, 0.5]), 0.5);
    }

    #[test]
    fn chi_square_matches_reference_value() {
        // Four equiprobable cells, counts (28, 31, 40, 35): X2 = 2.4179104..., p = 0.4903093...
        let r = chi_square_gof(&[28, 31, 40, 35], &[0.25; 4]).unwrap();
        assert!((r.statistic - 2.417_910_447_761_194).abs() < 1e-12);
        assert_eq!(r.dof, 3);
        assert!((r.p_value - 0.490_309_306_965_388_3).abs() < 1e-9);
    }

    #[test]
    fn chi_square_pools_sparse_bins() {
        // expected (50, 46, 2, 2): the last two cells fold into the second
        let r = chi_square_gof(&[50, 45, 3, 2], &[0.5, 0.46, 0.02, 0.02]).unwrap();
        assert_eq!(r.dof, 1);
        assert!(r.statistic.abs() < 1e-12);
        assert!(chi_square_gof(&[0, 0], &[0.5, 0.5]).is_err());
        assert!(chi_square_gof(&[10], &[1.0]).is_err());
    }

    #[test]
    fn kolmogorov_tail_reference_points() {
        // Q(1.36) ~ 0.049, Q(1.63) ~ 0.0098, continuity at the branch switch
        assert!((kolmogorov_sf(1.36) - 0.0494).abs() < 5e-4);
        assert!((kolmogorov_sf(1.63) - 0.0098).abs() < 2e-4);
        let below = kolmogorov_sf(1.18 - 1e-9);
        let above = kolmogorov_sf(1.18 + 1e-9);
        assert!((below - above).abs() < 1e-7);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn summary_statistics() {
        let xs = [1.0, 2.0, 3.0, 10.0];
        assert_eq!(mean(&xs), 4.0);
        assert_eq!(median(&xs), 2.5);
        // squared deviations 9 + 4 + 1 + 36
        assert!((variance(&xs) - 50.0 / 3.0).abs() < 1e-12);
    }
}
