use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::check_rate_law;
use crate::error::{Error, Result};
use crate::model::snapshot_grid;

/// Jumps required before asymptotic ratios are reported.
pub const MIN_RATIO_JUMPS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BirthStop {
    /// Stop after this many births.
    MaxJumps(usize),
    /// Stop at the last birth not after this time.
    MaxTime(f64),
}

/// Pure birth process started at `start_count`, leaving count `i` at rate `(i + delta)^(-alpha)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthTrajectory {
    pub start_count: u32,
    pub alpha: f64,
    pub delta: f64,
    /// `jump_times[j - 1]` is the time the count reaches `start_count + j`.
    pub jump_times: Vec<f64>,
}

impl BirthTrajectory {
    pub fn count_at(&self, t: f64) -> u64 {
        u64::from(self.start_count) + self.jump_times.partition_point(|&s| s <= t) as u64
    }

    pub fn jumps(&self) -> usize {
        self.jump_times.len()
    }
}

pub fn simulate_birth_process<R: Rng + ?Sized>(
    alpha: f64,
    delta: f64,
    start_count: u32,
    stop: BirthStop,
    rng: &mut R,
) -> Result<BirthTrajectory> {
    check_rate_law(alpha, delta)?;
    if start_count == 0 {
        return Err(Error::Parameter("a birth process must start with at least one individual".into()));
    }
    let mut jump_times = Vec::new();
    let mut t = 0.0;
    let mut count = f64::from(start_count);
    loop {
        if let BirthStop::MaxJumps(n) = stop {
            if jump_times.len() >= n {
                break;
            }
        }
        // holding time at count i has mean (i + delta)^alpha
        let e: f64 = rng.sample(Exp1);
        let next = t + e * (count + delta).powf(alpha);
        if let BirthStop::MaxTime(limit) = stop {
            if next > limit {
                break;
            }
        }
        t = next;
        jump_times.push(t);
        count += 1.0;
    }
    Ok(BirthTrajectory { start_count, alpha, delta, jump_times })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthRatioSeries {
    /// `(t, Z(t) / t^(1/(1+alpha)))` on a log-time grid ending at the last jump.
    pub count_ratio: Vec<(f64, f64)>,
    /// `(j, T_j / j^(1+alpha))` on a log grid of jump indices.
    pub time_ratio: Vec<(usize, f64)>,
    /// `(1 + alpha)^(1/(1+alpha))`
    pub count_limit: f64,
    /// `1 / (1 + alpha)`
    pub time_limit: f64,
}

impl BirthRatioSeries {
    pub fn final_count_ratio(&self) -> f64 {
        self.count_ratio.last().map_or(f64::NAN, |p| p.1)
    }

    pub fn final_time_ratio(&self) -> f64 {
        self.time_ratio.last().map_or(f64::NAN, |p| p.1)
    }
}

pub fn birth_asymptotic_ratio(trajectory: &BirthTrajectory) -> Result<BirthRatioSeries> {
    let jumps = trajectory.jumps();
    if jumps < MIN_RATIO_JUMPS {
        return Err(Error::Diagnostic(format!(
            "trajectory has {jumps} jumps; at least {MIN_RATIO_JUMPS} are needed"
        )));
    }
    let alpha = trajectory.alpha;
    let t_end = trajectory.jump_times[jumps - 1];
    let t_start = trajectory.jump_times[0];
    let mut times = Vec::new();
    let mut t = t_end;
    while t >= t_start {
        times.push(t);
        t /= 2f64.sqrt();
    }
    times.reverse();
    let count_ratio = times
        .into_iter()
        .map(|t| (t, trajectory.count_at(t) as f64 / t.powf(1.0 / (1.0 + alpha))))
        .collect();
    let time_ratio = snapshot_grid(1, jumps)
        .into_iter()
        .map(|j| (j, trajectory.jump_times[j - 1] / (j as f64).powf(1.0 + alpha)))
        .collect();
    Ok(BirthRatioSeries {
        count_ratio,
        time_ratio,
        count_limit: (1.0 + alpha).powf(1.0 / (1.0 + alpha)),
        time_limit: 1.0 / (1.0 + alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stops_and_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let traj = simulate_birth_process(1.0, 0.0, 3, BirthStop::MaxJumps(50), &mut rng).unwrap();
        assert_eq!(traj.jumps(), 50);
        assert!(traj.jump_times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(traj.count_at(0.0), 3);
        assert_eq!(traj.count_at(traj.jump_times[9]), 13);
        let by_time = simulate_birth_process(0.5, 1.0, 1, BirthStop::MaxTime(100.0), &mut rng).unwrap();
        assert!(*by_time.jump_times.last().unwrap() <= 100.0);
        assert!(simulate_birth_process(1.0, -1.0, 1, BirthStop::MaxJumps(1), &mut rng).is_err());
        assert!(simulate_birth_process(1.0, 0.0, 0, BirthStop::MaxJumps(1), &mut rng).is_err());
    }

    #[test]
    fn short_trajectories_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let traj = simulate_birth_process(1.0, 0.0, 1, BirthStop::MaxJumps(999), &mut rng).unwrap();
        assert!(matches!(birth_asymptotic_ratio(&traj), Err(Error::Diagnostic(_))));
    }

    #[test]
    fn unit_rates_have_unit_mean_increments() {
        // alpha = 0: increments are Exp(1), so E[T_n] = n - 1 (here: time of jump 20 has mean 20).
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let runs = 20_000;
        let mean: f64 = (0..runs)
            .map(|_| {
                simulate_birth_process(0.0, 0.0, 1, BirthStop::MaxJumps(20), &mut rng)
                    .unwrap()
                    .jump_times[19]
            })
            .sum::<f64>()
            / f64::from(runs);
        // sd of the mean: sqrt(20 / 20000) ~ 0.032
        assert!((mean - 20.0).abs() < 0.15, "mean {mean}");
    }
}
