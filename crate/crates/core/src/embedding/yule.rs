use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{race, RateTable};
use crate::error::{Error, Result};
use crate::malthusian::CompensatedSum;
use crate::model::{snapshot_grid, DegreeClasses, Model, ModelParams};

/// Independent pure birth processes `Z_1, Z_2, ...` started with `m`
/// individuals; `Z_{n+1}` starts at `tau_{n+1}`, the time of the `m`-th
/// birth across `Z_1..Z_n` after `tau_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YuleEnsemble {
    pub params: ModelParams,
    /// Current size of each process, `counts[j - 1] = Z_j`.
    counts: Vec<u32>,
    /// `tau[j - 1] = tau_j`, with `tau_1 = 0`.
    tau: Vec<f64>,
    /// `gaps[(j - 1) m + k]` is the wait for birth `k + 1` between `tau_j` and `tau_{j+1}`.
    gaps: Vec<f64>,
    /// Total rate `D~_{j+1,k}` governing each of those waits.
    normalizers: Vec<f64>,
}

impl YuleEnsemble {
    /// Number of started processes.
    pub fn n(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// `Z_j` at the last stopping time (1-based `j`).
    pub fn count(&self, j: usize) -> u32 {
        self.counts[j - 1]
    }

    pub fn tau(&self, j: usize) -> f64 {
        self.tau[j - 1]
    }

    pub fn taus(&self) -> &[f64] {
        &self.tau
    }

    /// Waiting times of the `m` births that take `tau_j` to `tau_{j+1}`.
    pub fn step_gaps(&self, j: usize) -> &[f64] {
        let m = self.params.m as usize;
        &self.gaps[(j - 1) * m..j * m]
    }

    /// Total rates `D~_{j+1,k}`, `k = 0..m`, during that step.
    pub fn step_normalizers(&self, j: usize) -> &[f64] {
        let m = self.params.m as usize;
        &self.normalizers[(j - 1) * m..j * m]
    }

    /// Processes already started at global time `t`.
    pub fn live_at(&self, t: f64) -> usize {
        self.tau.partition_point(|&s| s <= t)
    }
}

/// Grows the ensemble until `n_target` processes have started. For
/// `alpha <= 1` every total rate is checked against the band
/// `[n / (2m + delta)^alpha, n / (m + delta)^alpha]`.
pub fn athreya_karlin_grow<R: Rng + ?Sized>(
    params: &ModelParams,
    n_target: usize,
    rng: &mut R,
) -> Result<YuleEnsemble> {
    params.validate()?;
    let Model::InversePower { alpha, delta } = params.model else {
        return Err(Error::Parameter("the birth-process embedding needs the inverse model".into()));
    };
    if n_target < 1 {
        return Err(Error::Parameter("n_target must be at least 1".into()));
    }
    let m = params.m;
    let mut rates = RateTable::new(alpha, delta);
    let mut classes = DegreeClasses::new();
    let mut counts = vec![m];
    classes.push(0, m);
    let mut tau = vec![0.0];
    let mut gaps = Vec::with_capacity((n_target - 1) * m as usize);
    let mut normalizers = Vec::with_capacity(gaps.capacity());
    let mut now = 0.0;
    while counts.len() < n_target {
        let n = counts.len();
        let (lo, hi) = params.normalizer_band(n).expect("inverse model has a band");
        for _ in 0..m {
            let (wait, v, d, total) = race(&classes, &mut rates, rng)?;
            let slack = 1e-9 * hi;
            if total < lo - slack || total > hi + slack {
                return Err(Error::Internal(format!(
                    "embedding rate {total} outside band [{lo}, {hi}] with {n} processes"
                )));
            }
            now += wait;
            gaps.push(wait);
            normalizers.push(total);
            counts[v as usize] += 1;
            classes.increment(v, d);
        }
        tau.push(now);
        classes.push(n as u32, m);
        counts.push(m);
    }
    Ok(YuleEnsemble { params: *params, counts, tau, gaps, normalizers })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauPoint {
    pub n: usize,
    /// `tau_n - tau_i`, accumulated from the waits.
    pub elapsed: f64,
    /// `c_n = b_i + ... + b_{n-1}`, `b_j = sum_k 1 / D~_{j+1,k}`.
    pub c_n: f64,
    /// `(tau_n - tau_i) / c_n`
    pub ratio: f64,
    pub c_over_log_n: f64,
    /// `c_n / (m^2 log n)`
    pub c_over_m2_log_n: f64,
    /// `c_n / (m (m + delta)^alpha log n)`
    pub c_over_scale_log_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauNormalization {
    pub start: usize,
    pub points: Vec<TauPoint>,
    /// Steps with `b_j` outside `[m (m + delta)^alpha / j, m (2m + delta)^alpha / j]`.
    pub b_violations: usize,
}

impl TauNormalization {
    pub fn last(&self) -> Option<&TauPoint> {
        self.points.last()
    }
}

/// `(tau_n - tau_i) / c_n` on the snapshot grid for `n > i`.
pub fn tau_normalization(ensemble: &YuleEnsemble, i: usize) -> Result<TauNormalization> {
    let n_max = ensemble.n();
    if i < 1 || i >= n_max {
        return Err(Error::Parameter(format!("start {i} must lie in [1, {})", n_max)));
    }
    let Model::InversePower { alpha, delta } = ensemble.params.model else {
        return Err(Error::Parameter("the birth-process embedding needs the inverse model".into()));
    };
    let m = f64::from(ensemble.params.m);
    let scale = m * (m + delta).powf(alpha);
    let grid = snapshot_grid(i + 1, n_max);
    let mut next = 0;
    let mut elapsed = CompensatedSum::default();
    let mut c = CompensatedSum::default();
    let mut points = Vec::with_capacity(grid.len());
    let mut b_violations = 0;
    for j in i..n_max {
        let b: f64 = ensemble.step_normalizers(j).iter().map(|d| 1.0 / d).sum();
        let (lo, hi) = (scale / j as f64, m * (2.0 * m + delta).powf(alpha) / j as f64);
        if b < lo * (1.0 - 1e-9) || b > hi * (1.0 + 1e-9) {
            b_violations += 1;
        }
        c.add(b);
        for &g in ensemble.step_gaps(j) {
            elapsed.add(g);
        }
        let n = j + 1;
        if next < grid.len() && grid[next] == n {
            next += 1;
            let log_n = (n as f64).ln();
            let c_n = c.value();
            points.push(TauPoint {
                n,
                elapsed: elapsed.value(),
                c_n,
                ratio: elapsed.value() / c_n,
                c_over_log_n: c_n / log_n,
                c_over_m2_log_n: c_n / (m * m * log_n),
                c_over_scale_log_n: c_n / (scale * log_n),
            });
        }
    }
    Ok(TauNormalization { start: i, points, b_violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ensemble_bookkeeping() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for m in [1u32, 3] {
            let p = ModelParams::inverse_power(0.8, 0.5, m).unwrap();
            let e = athreya_karlin_grow(&p, 300, &mut rng).unwrap();
            assert_eq!(e.n(), 300);
            let total: u64 = e.counts().iter().map(|&c| u64::from(c)).sum();
            assert_eq!(total, (2 * 300 - 1) * u64::from(m));
            assert!(e.taus().windows(2).all(|w| w[0] < w[1]));
            for j in 1..300 {
                let gap_sum: f64 = e.step_gaps(j).iter().sum();
                assert!((e.tau(j + 1) - e.tau(j) - gap_sum).abs() < 1e-9 * e.tau(j + 1));
                assert_eq!(e.live_at(e.tau(j)), j);
                let mid = 0.5 * (e.tau(j) + e.tau(j + 1));
                assert_eq!(e.live_at(mid), j);
            }
            assert!(e.counts().iter().all(|&c| c >= m));
        }
    }

    #[test]
    fn first_gap_sum_defines_tau_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = ModelParams::inverse_power(1.0, 0.0, 4).unwrap();
        let e = athreya_karlin_grow(&p, 2, &mut rng).unwrap();
        assert_eq!(e.counts(), &[8, 4]);
        let sum: f64 = e.step_gaps(1).iter().sum();
        assert!((e.tau(2) - e.tau(1) - sum).abs() < 1e-15);
        // the lone first process has rate (m + k)^(-1) before its k-th birth
        for (k, d) in e.step_normalizers(1).iter().enumerate() {
            assert!((d - 1.0 / (4.0 + k as f64)).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_params_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = ModelParams::linear(1.0, 1.0, 1).unwrap();
        assert!(athreya_karlin_grow(&p, 10, &mut rng).is_err());
    }

    #[test]
    fn normalization_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = ModelParams::inverse_power(1.0, 0.0, 2).unwrap();
        let e = athreya_karlin_grow(&p, 2000, &mut rng).unwrap();
        let t = tau_normalization(&e, 3).unwrap();
        assert_eq!(t.b_violations, 0);
        assert_eq!(t.points.last().unwrap().n, 2000);
        let last = t.last().unwrap();
        assert!((last.elapsed - (e.tau(2000) - e.tau(3))).abs() < 1e-9 * e.tau(2000));
        assert!(tau_normalization(&e, 2000).is_err());
    }
}
