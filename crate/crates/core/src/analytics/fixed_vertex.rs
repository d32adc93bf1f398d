use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Model, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedVertexRatio {
    pub n: usize,
    pub degree: u32,
    /// Degree over its almost-sure (or in-probability) growth scale.
    pub ratio: f64,
    /// For the inverse model with `m > 1`: `d / (m sqrt(log n))`, which is
    /// the scale printed for that case and only matches the proven one at `alpha = 1`.
    pub sqrt_log_ratio: Option<f64>,
}

/// `((1 + alpha) / lambda*)^(1 / (1 + alpha))`, the limit of `d_i(n) / (log n)^(1 / (1 + alpha))`
/// for the inverse model with `m = 1`.
pub fn inverse_fixed_vertex_constant(alpha: f64, lambda_star: f64) -> f64 {
    ((1.0 + alpha) / lambda_star).powf(1.0 / (1.0 + alpha))
}

/// Normalizes a fixed-vertex degree trace:
/// - linear: `d / (m log n)`;
/// - inverse, `m = 1`: `d / (C (log n)^(1/(1+alpha)))` with `C` from
///   [`inverse_fixed_vertex_constant`] (requires `lambda_star`);
/// - inverse, `m > 1`: `d / (m log n)^(1/(1+alpha))`, plus the `sqrt(log n)` form.
///   Use [`tau_scaled_ratio`] when the embedding scale `c_n` is known.
pub fn fixed_vertex_ratio(
    trace: &[(usize, u32)],
    params: &ModelParams,
    lambda_star: Option<f64>,
) -> Result<Vec<FixedVertexRatio>> {
    let m = f64::from(params.m);
    trace
        .iter()
        .map(|&(n, d)| {
            if n < 2 {
                return Err(Error::Domain(format!("log n vanishes at n = {n}")));
            }
            let log_n = (n as f64).ln();
            let degree = f64::from(d);
            let (ratio, sqrt_log_ratio) = match params.model {
                Model::Linear { .. } => (degree / (m * log_n), None),
                Model::InversePower { alpha, .. } if params.m == 1 => {
                    let lambda = lambda_star.ok_or_else(|| {
                        Error::Parameter("the inverse model needs lambda* for this ratio".into())
                    })?;
                    let scale = inverse_fixed_vertex_constant(alpha, lambda)
                        * log_n.powf(1.0 / (1.0 + alpha));
                    (degree / scale, None)
                }
                Model::InversePower { alpha, .. } => (
                    degree / (m * log_n).powf(1.0 / (1.0 + alpha)),
                    Some(degree / (m * log_n.sqrt())),
                ),
            };
            Ok(FixedVertexRatio { n, degree: d, ratio, sqrt_log_ratio })
        })
        .collect()
}

/// `d / ((1 + alpha) c_n)^(1 / (1 + alpha))`, where `c_n` is the accumulated
/// conditional mean of `tau_n - tau_i`.
pub fn tau_scaled_ratio(degree: u32, c_n: f64, alpha: f64) -> f64 {
    f64::from(degree) / ((1.0 + alpha) * c_n).powf(1.0 / (1.0 + alpha))
}

/// `(d - m log n) / sqrt(m log n)`.
pub fn clt_standardize(d: f64, n: f64, m: u32) -> f64 {
    let scale = f64::from(m) * n.ln();
    (d - scale) / scale.sqrt()
}
