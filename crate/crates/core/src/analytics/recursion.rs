use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::malthusian::CompensatedSum;
use crate::model::{Model, ModelParams};

/// Exact `E[d_i(n)]` for the linear model, `n = i..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedDegreeSeries {
    pub vertex: usize,
    pub m: u32,
    values: Vec<f64>,
}

impl ExpectedDegreeSeries {
    pub fn at(&self, n: usize) -> Option<f64> {
        n.checked_sub(self.vertex).and_then(|j| self.values.get(j)).copied()
    }

    /// `E[d_i(n)] / (m log n)`.
    pub fn normalized(&self, n: usize) -> Option<f64> {
        self.at(n).map(|a| a / (f64::from(self.m) * (n as f64).ln()))
    }

    pub fn n_max(&self) -> usize {
        self.vertex + self.values.len() - 1
    }
}

/// Expected degree of vertex `i >= 2` (1-based) under the linear model.
///
/// Between `G_n` and `G_{n+1}` each of the `m` draws maps the conditional mean
/// affinely, `x -> f_k x + theta / (n theta - alpha)` with
/// `f_k = 1 - alpha / ((n theta - alpha)(k + (2n - 1) m))`. Writing the
/// composed slope as `s_n` and `g_n = prod_{j<n} s_j`, the ratio
/// `a_n / g_n` is a plain sum of positive terms; both the log-product and the
/// sum are accumulated with compensation.
pub fn expected_fixed_degree_linear(
    params: &ModelParams,
    i: usize,
    n_max: usize,
) -> Result<ExpectedDegreeSeries> {
    let Model::Linear { theta, alpha } = params.model else {
        return Err(Error::Parameter("the expected-degree recursion is for the linear model".into()));
    };
    if i < 2 {
        return Err(Error::Parameter(format!("vertex {i} is part of the seed; need i >= 2")));
    }
    if n_max < i {
        return Err(Error::Parameter(format!("n_max {n_max} is below vertex {i}")));
    }
    let m = params.m;
    let mut values = Vec::with_capacity(n_max - i + 1);
    let mut log_g = CompensatedSum::default();
    let mut ratio = CompensatedSum::default();
    ratio.add(f64::from(m));
    values.push(f64::from(m));
    let mut factors = vec![0.0; m as usize];
    for n in i..n_max {
        let nf = n as f64;
        let norm = nf * theta - alpha;
        for (k, f) in factors.iter_mut().enumerate() {
            let total = k as f64 + (2.0 * nf - 1.0) * f64::from(m);
            *f = -alpha / (norm * total);
        }
        // slope s_n = prod_k f_k; offset multiplier = 1 + sum_{s=1}^{m-1} prod_{j=m-s}^{m-1} f_j
        let mut log_slope = 0.0;
        for f in &factors {
            log_slope += f.ln_1p();
        }
        let mut offset = 1.0;
        let mut partial = 1.0;
        for f in factors.iter().rev().take(m as usize - 1) {
            partial *= 1.0 + f;
            offset += partial;
        }
        log_g.add(log_slope);
        let g_next = log_g.value().exp();
        ratio.add(theta * offset / (norm * g_next));
        values.push(g_next * ratio.value());
    }
    Ok(ExpectedDegreeSeries { vertex: i, m, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct forward iteration of the per-draw affine map.
    fn forward(theta: f64, alpha: f64, m: u32, i: usize, n_max: usize) -> f64 {
        let mut a = f64::from(m);
        for n in i..n_max {
            let nf = n as f64;
            for k in 0..m {
                let total = f64::from(k) + (2.0 * nf - 1.0) * f64::from(m);
                let f = 1.0 - alpha / ((nf * theta - alpha) * total);
                a = f * a + theta / (nf * theta - alpha);
            }
        }
        a
    }

    #[test]
    fn first_step_is_five_thirds() {
        let p = ModelParams::linear(1.0, 1.0, 1).unwrap();
        let s = expected_fixed_degree_linear(&p, 2, 3).unwrap();
        assert_eq!(s.at(2), Some(1.0));
        assert!((s.at(3).unwrap() - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn starts_at_m() {
        let p = ModelParams::linear(2.0, 0.5, 4).unwrap();
        let s = expected_fixed_degree_linear(&p, 7, 7).unwrap();
        assert_eq!(s.at(7), Some(4.0));
        assert_eq!(s.at(6), None);
    }

    #[test]
    fn matches_forward_iteration() {
        for (theta, alpha, m, i) in [(1.0, 1.0, 1, 2), (2.0, 0.5, 1, 3), (1.0, 1.0, 3, 3), (1.5, 0.3, 2, 10)] {
            let p = ModelParams::linear(theta, alpha, m).unwrap();
            let s = expected_fixed_degree_linear(&p, i, 20_000).unwrap();
            let direct = forward(theta, alpha, m, i, 20_000);
            assert!((s.at(20_000).unwrap() - direct).abs() / direct < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = ModelParams::linear(1.0, 1.0, 1).unwrap();
        assert!(expected_fixed_degree_linear(&p, 1, 10).is_err());
        assert!(expected_fixed_degree_linear(&p, 5, 4).is_err());
        let q = ModelParams::inverse_power(1.0, 0.0, 1).unwrap();
        assert!(expected_fixed_degree_linear(&q, 2, 10).is_err());
    }
}
