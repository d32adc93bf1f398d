use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Attachment rule of the growth process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    /// Weight `theta - alpha * d / (k + (2n - 1) m)`.
    Linear { theta: f64, alpha: f64 },
    /// Weight `(delta + d)^(-alpha)`.
    InversePower { alpha: f64, delta: f64 },
}

/// A validated model together with the number of half-edges per arriving vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub model: Model,
    pub m: u32,
}

impl ModelParams {
    pub fn linear(theta: f64, alpha: f64, m: u32) -> Result<Self> {
        Self::new(Model::Linear { theta, alpha }, m)
    }

    pub fn inverse_power(alpha: f64, delta: f64, m: u32) -> Result<Self> {
        Self::new(Model::InversePower { alpha, delta }, m)
    }

    pub fn new(model: Model, m: u32) -> Result<Self> {
        let params = ModelParams { model, m };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Parameter("m must be at least 1".into()));
        }
        match self.model {
            Model::Linear { theta, alpha } => {
                if !(theta.is_finite() && theta >= 1.0) {
                    return Err(Error::Parameter(format!("theta = {theta} must satisfy theta >= 1")));
                }
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(Error::Parameter(format!("alpha = {alpha} must lie in (0, 1]")));
                }
                if alpha > theta {
                    return Err(Error::Parameter(format!(
                        "alpha = {alpha} exceeds theta = {theta}; weights could turn negative"
                    )));
                }
            }
            Model::InversePower { alpha, delta } => {
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(Error::Parameter(format!("alpha = {alpha} must lie in (0, 1]")));
                }
                if !(delta.is_finite() && delta > -1.0) {
                    return Err(Error::Parameter(format!("delta = {delta} must satisfy delta > -1")));
                }
            }
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        match self.model {
            Model::Linear { alpha, .. } | Model::InversePower { alpha, .. } => alpha,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.model, Model::Linear { .. })
    }

    /// Unnormalized weight of an existing vertex of degree `d` when the
    /// `k`-th half-edge of vertex `n + 1` is being placed among `n` vertices.
    pub fn attachment_weight(&self, d: u32, n: usize, k: u32) -> f64 {
        match self.model {
            Model::Linear { theta, alpha } => {
                let total = f64::from(k) + (2.0 * n as f64 - 1.0) * f64::from(self.m);
                theta - alpha * f64::from(d) / total
            }
            Model::InversePower { alpha, delta } => (delta + f64::from(d)).powf(-alpha),
        }
    }

    /// Largest weight any existing vertex can carry; every settled degree is at least `m`.
    pub fn max_weight(&self) -> f64 {
        match self.model {
            Model::Linear { theta, .. } => theta,
            Model::InversePower { alpha, delta } => (delta + f64::from(self.m)).powf(-alpha),
        }
    }

    /// Band `[lo, hi]` containing the inverse-power normalizer over `n` vertices,
    /// from the AM-HM and Jensen bounds. `None` for the linear model.
    pub fn normalizer_band(&self, n: usize) -> Option<(f64, f64)> {
        match self.model {
            Model::Linear { .. } => None,
            Model::InversePower { alpha, delta } => {
                let m = f64::from(self.m);
                let n = n as f64;
                Some((n / (2.0 * m + delta).powf(alpha), n / (m + delta).powf(alpha)))
            }
        }
    }
}
