//! Continuous-time constructions checked against exact discrete laws and
//! closed-form moments.

use std::collections::BTreeMap;

use depref::analytics::stats::chi_square_gof;
use depref::embedding::{athreya_karlin_grow, simulate_birth_process, tau_normalization, BirthStop};
use depref::enumerate::discrete_degree_law;
use depref::rng::replica_rng;
use depref::ModelParams;

#[test]
fn birth_time_mean_for_unit_exponent() {
    // alpha = 1, delta = 0 from one individual: holding times have means 1, 2, ..., so
    // the time to reach 10 individuals has mean 1 + ... + 9 = 45.
    let runs = 100_000;
    let mut rng = replica_rng(4, 0);
    let mut total = 0.0;
    for _ in 0..runs {
        let traj = simulate_birth_process(1.0, 0.0, 1, BirthStop::MaxJumps(9), &mut rng).unwrap();
        total += traj.jump_times[8];
    }
    let mean = total / f64::from(runs);
    assert!((mean - 45.0).abs() / 45.0 < 0.01, "mean {mean}");
}

#[test]
fn max_time_stop_keeps_jumps_before_the_horizon() {
    let mut rng = replica_rng(4, 1);
    let traj = simulate_birth_process(0.5, 1.0, 2, BirthStop::MaxTime(50.0), &mut rng).unwrap();
    assert!(traj.jump_times.iter().all(|&t| t <= 50.0));
    assert_eq!(traj.count_at(50.0), 2 + traj.jumps() as u64);
    assert_eq!(traj.count_at(0.0), 2);
}

#[test]
fn birth_process_embedding_reproduces_the_discrete_law() {
    // The counts at tau_n are the degrees of G_n; compare with the enumerated law for m = 2.
    let params = ModelParams::inverse_power(0.7, 0.5, 2).unwrap();
    let n = 4;
    let law = discrete_degree_law(&params, n).unwrap();
    let mut observed: BTreeMap<Vec<u32>, u64> = law.keys().map(|k| (k.clone(), 0)).collect();
    let mut rng = replica_rng(17, 0);
    for _ in 0..100_000 {
        let e = athreya_karlin_grow(&params, n, &mut rng).unwrap();
        *observed.get_mut(e.counts()).expect("outcome outside the discrete support") += 1;
    }
    let counts: Vec<u64> = observed.values().copied().collect();
    let probs: Vec<f64> = law.values().copied().collect();
    let test = chi_square_gof(&counts, &probs).unwrap();
    assert!(test.p_value >= 1e-3, "p = {}", test.p_value);
}

#[test]
fn step_rates_respect_the_b_bounds() {
    for (alpha, delta, m) in [(1.0, 0.0, 1), (0.5, 2.0, 3), (0.9, -0.5, 2)] {
        let params = ModelParams::inverse_power(alpha, delta, m).unwrap();
        let mut rng = replica_rng(23, m as u64);
        let e = athreya_karlin_grow(&params, 5000, &mut rng).unwrap();
        let norm = tau_normalization(&e, 1).unwrap();
        assert_eq!(norm.b_violations, 0);
        assert!(norm.points.iter().all(|p| p.c_n > 0.0 && p.elapsed > 0.0));
        assert!(norm.points.windows(2).all(|w| w[0].c_n < w[1].c_n));
    }
}
