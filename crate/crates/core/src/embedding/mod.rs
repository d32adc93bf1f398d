//! Continuous-time constructions of the inverse-power model.
//!
//! Every vertex of current degree `d` carries an exponential clock of rate
//! `(d + delta)^(-alpha)`. By memorylessness the next event can be sampled as
//! a race: advance the clock by `Exp(sum of rates)` and pick the vertex with
//! probability proportional to its rate. The races use the same degree-class
//! buckets as the discrete sampler, so one event costs O(#degree classes).

mod birth;
mod cmj;
mod yule;

pub use birth::{
    birth_asymptotic_ratio, simulate_birth_process, BirthRatioSeries, BirthStop, BirthTrajectory,
    MIN_RATIO_JUMPS,
};
pub use cmj::{cmj_grow, cmj_jump_law, CmjTree, CmjVertex};
pub use yule::{athreya_karlin_grow, tau_normalization, TauNormalization, TauPoint, YuleEnsemble};

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::model::DegreeClasses;

pub(crate) fn check_rate_law(alpha: f64, delta: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Parameter(format!("alpha = {alpha} must be nonnegative")));
    }
    if !(delta.is_finite() && delta > -1.0) {
        return Err(Error::Parameter(format!("delta = {delta} must exceed -1")));
    }
    Ok(())
}

/// Rates `(d + delta)^(-alpha)` cached by degree.
#[derive(Debug, Clone)]
pub(crate) struct RateTable {
    alpha: f64,
    delta: f64,
    rates: Vec<f64>,
}

impl RateTable {
    pub(crate) fn new(alpha: f64, delta: f64) -> Self {
        RateTable { alpha, delta, rates: Vec::new() }
    }

    pub(crate) fn rate(&mut self, d: u32) -> f64 {
        while self.rates.len() <= d as usize {
            let x = self.rates.len() as f64;
            self.rates.push((self.delta + x).powf(-self.alpha));
        }
        self.rates[d as usize]
    }
}

/// One race step over the bucketed population: returns the waiting time, the
/// winning vertex and its degree, plus the total rate that governed the wait.
pub(crate) fn race<R: Rng + ?Sized>(
    classes: &DegreeClasses,
    rates: &mut RateTable,
    rng: &mut R,
) -> Result<(f64, u32, u32, f64)> {
    let masses: Vec<(u32, f64)> =
        classes.iter().map(|(d, c)| (d, c as f64 * rates.rate(d))).collect();
    let total: f64 = masses.iter().map(|(_, w)| w).sum();
    if !(total > 0.0) {
        return Err(Error::Internal("no live clock in the race".into()));
    }
    let e: f64 = rng.sample(Exp1);
    let wait = e / total;
    let mut u = rng.random::<f64>() * total;
    let mut chosen = masses.last().map(|(d, _)| *d).unwrap_or(0);
    for &(d, w) in &masses {
        if u < w {
            chosen = d;
            break;
        }
        u -= w;
    }
    let v = classes
        .pick_uniform(chosen, rng)
        .ok_or_else(|| Error::Internal(format!("empty degree class {chosen}")))?;
    Ok((wait, v, chosen, total))
}
