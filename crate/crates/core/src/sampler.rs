//! Drawing the attachment target from the conditional law of the next half-edge.
//!
//! Three samplers with identical target laws:
//! - [`SamplerKind::ExactScan`]: inverse CDF over every vertex, O(n). Reference oracle.
//! - [`SamplerKind::Bucketed`]: picks a degree class with probability
//!   proportional to `N_d * w(d)`, then a uniform member. O(#classes).
//! - [`SamplerKind::Rejection`]: uniform proposals thinned by `w(d) / w_max`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GraphState, Model};

/// Proposal cap for the rejection sampler.
pub const REJECTION_CAP: u32 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    ExactScan,
    #[default]
    Bucketed,
    Rejection,
}

impl SamplerKind {
    pub fn sample<R: Rng + ?Sized>(self, state: &GraphState, rng: &mut R) -> Result<usize> {
        match self {
            SamplerKind::ExactScan => sample_target_scan(state, rng),
            SamplerKind::Bucketed => sample_target_bucketed(state, rng),
            SamplerKind::Rejection => sample_target_rejection(state, rng),
        }
    }
}

impl std::str::FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact_scan" | "scan" => Ok(SamplerKind::ExactScan),
            "bucketed" => Ok(SamplerKind::Bucketed),
            "rejection" => Ok(SamplerKind::Rejection),
            other => Err(Error::Parameter(format!("unknown sampler '{other}'"))),
        }
    }
}

pub fn sample_target_scan<R: Rng + ?Sized>(state: &GraphState, rng: &mut R) -> Result<usize> {
    let n = state.n();
    let total: f64 = (0..n).map(|v| state.weight(v)).sum();
    if !(total > 0.0) {
        return Err(Error::Internal(format!("total attachment weight {total} is not positive")));
    }
    let mut u = rng.random::<f64>() * total;
    let mut last_positive = None;
    for v in 0..n {
        let w = state.weight(v);
        if w > 0.0 {
            last_positive = Some(v);
        }
        if u < w {
            return Ok(v);
        }
        u -= w;
    }
    // u landed past the end through rounding
    last_positive.ok_or_else(|| Error::Internal("no vertex with positive weight".into()))
}

pub fn sample_target_bucketed<R: Rng + ?Sized>(state: &GraphState, rng: &mut R) -> Result<usize> {
    let classes = state.classes();
    let total: f64 = classes.iter().map(|(d, c)| c as f64 * state.degree_weight(d)).sum();
    if !(total > 0.0) {
        return Err(Error::Internal(format!("total class weight {total} is not positive")));
    }
    let mut u = rng.random::<f64>() * total;
    let mut chosen = None;
    for (d, c) in classes.iter() {
        let mass = c as f64 * state.degree_weight(d);
        if mass > 0.0 {
            chosen = Some(d);
        }
        if u < mass {
            break;
        }
        u -= mass;
    }
    let d = chosen.ok_or_else(|| Error::Internal("degree histogram is empty".into()))?;
    classes
        .pick_uniform(d, rng)
        .map(|v| v as usize)
        .ok_or_else(|| Error::Internal(format!("degree class {d} has no members")))
}

pub fn sample_target_rejection<R: Rng + ?Sized>(state: &GraphState, rng: &mut R) -> Result<usize> {
    let n = state.n();
    let w_max = state.params().max_weight();
    for _ in 0..REJECTION_CAP {
        let v = rng.random_range(0..n);
        if rng.random::<f64>() * w_max < state.weight(v) {
            return Ok(v);
        }
    }
    Err(Error::Internal(format!(
        "rejection sampler exceeded {REJECTION_CAP} proposals; state is likely corrupted"
    )))
}

/// Probability of each degree class, proportional to `count * weight(d)`.
pub fn class_law<I>(classes: I, weight: impl Fn(u32) -> f64) -> Vec<(u32, f64)>
where
    I: IntoIterator<Item = (u32, usize)>,
{
    let masses: Vec<(u32, f64)> =
        classes.into_iter().map(|(d, c)| (d, c as f64 * weight(d))).collect();
    let total: f64 = masses.iter().map(|(_, w)| w).sum();
    masses.into_iter().map(|(d, w)| (d, w / total)).collect()
}

/// Exact conditional law of the next target, normalized with the closed-form
/// `n theta - alpha` (linear) or the recomputed `D` (inverse power).
pub fn step_distribution(state: &GraphState) -> Vec<f64> {
    let params = state.params();
    let n = state.n();
    let norm = match params.model {
        Model::Linear { theta, alpha } => n as f64 * theta - alpha,
        Model::InversePower { .. } => state.exact_normalizer(),
    };
    state
        .degrees()
        .iter()
        .map(|&d| params.attachment_weight(d, n, state.k()) / norm)
        .collect()
}

/// The per-vertex law realized by each sampler, computed from its own
/// selection mechanism rather than by drawing.
pub fn exact_law(kind: SamplerKind, state: &GraphState) -> Result<Vec<f64>> {
    let n = state.n();
    match kind {
        SamplerKind::ExactScan => {
            let weights: Vec<f64> = (0..n).map(|v| state.weight(v)).collect();
            let total: f64 = weights.iter().sum();
            Ok(weights.into_iter().map(|w| w / total).collect())
        }
        SamplerKind::Bucketed => {
            let classes = state.classes();
            let mut law = vec![0.0; n];
            for (d, class_prob) in class_law(classes.iter(), |d| state.degree_weight(d)) {
                let members = classes.members(d);
                for &v in members {
                    law[v as usize] = class_prob / members.len() as f64;
                }
            }
            if law.iter().sum::<f64>() == 0.0 {
                return Err(Error::Internal("degree histogram is empty".into()));
            }
            Ok(law)
        }
        SamplerKind::Rejection => {
            // P(v) = P(propose v, accept) / P(accept)
            let w_max = state.params().max_weight();
            let accept: Vec<f64> = (0..n).map(|v| state.weight(v) / w_max / n as f64).collect();
            let p_accept: f64 = accept.iter().sum();
            if !(p_accept > 0.0) {
                return Err(Error::Internal("rejection acceptance probability is zero".into()));
            }
            Ok(accept.into_iter().map(|a| a / p_accept).collect())
        }
    }
}
