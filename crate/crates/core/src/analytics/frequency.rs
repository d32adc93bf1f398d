use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::AttachmentEvent;

/// Fraction of events whose target had degree `k` just before the attachment.
pub fn attachment_degree_frequency(events: &[AttachmentEvent]) -> Result<BTreeMap<u32, f64>> {
    let mut counts = BTreeMap::new();
    for e in events {
        *counts.entry(e.target_degree_before).or_insert(0u64) += 1;
    }
    frequencies_from_counts(&counts)
}

pub fn frequencies_from_counts(counts: &BTreeMap<u32, u64>) -> Result<BTreeMap<u32, f64>> {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(Error::Diagnostic("no attachment events in the window".into()));
    }
    Ok(counts.iter().map(|(&k, &c)| (k, c as f64 / total as f64)).collect())
}

/// Limiting probability that a new edge lands on some degree-`k` vertex, linear model.
pub fn linear_attachment_limit(k: u32) -> f64 {
    0.5f64.powi(k as i32)
}

/// Limiting probability that a new edge lands on some degree-`k` vertex,
/// inverse model with `m = 1`: `prod_{i=1}^{k} 1 / (1 + (i + delta)^alpha lambda*)`.
pub fn inverse_attachment_limit(k: u32, alpha: f64, delta: f64, lambda_star: f64) -> f64 {
    (1..=k)
        .map(|i| 1.0 / (1.0 + (f64::from(i) + delta).powf(alpha) * lambda_star))
        .product()
}
