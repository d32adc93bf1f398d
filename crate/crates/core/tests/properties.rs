//! Property-based checks of model invariants.

use proptest::prelude::*;

use depref::analytics::DegreeHistogram;
use depref::malthusian::{limit_pmf_at, rho_hat, solve_lambda_star, DEFAULT_TOL};
use depref::model::{snapshot_grid, DegreeClasses};
use depref::rng::replica_rng;
use depref::{init_graph, ModelParams, SamplerKind};

fn any_params() -> impl Strategy<Value = ModelParams> {
    prop_oneof![
        (1.0f64..3.0, 0.05f64..1.0, 1u32..4).prop_map(|(theta, alpha, m)| {
            ModelParams::linear(theta, alpha.min(theta), m).unwrap()
        }),
        (0.05f64..1.0, -0.95f64..6.0, 1u32..4)
            .prop_map(|(alpha, delta, m)| ModelParams::inverse_power(alpha, delta, m).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn growth_preserves_degree_identities(params in any_params(), n in 2usize..400, seed in any::<u64>()) {
        let mut state = init_graph(params).unwrap();
        let mut rng = replica_rng(seed, 0);
        state.grow_to(n, &mut rng, SamplerKind::Bucketed, &mut []).unwrap();
        prop_assert_eq!(state.n(), n);
        prop_assert_eq!(state.total_degree(), (2 * n as u64 - 1) * u64::from(params.m));
        prop_assert!(state.degrees().iter().all(|&d| d >= params.m));
        state.check_consistency().unwrap();
        let hist = DegreeHistogram::from_state(&state);
        hist.check_identities().unwrap();
        if let Some((lo, hi)) = params.normalizer_band(n) {
            let d = state.exact_normalizer();
            prop_assert!(d >= lo * (1.0 - 1e-12) && d <= hi * (1.0 + 1e-12));
            prop_assert!((state.normalizer() - d).abs() <= 1e-9 * d);
        } else {
            prop_assert!((state.normalizer() - state.exact_normalizer()).abs() < 1e-9 * state.normalizer());
        }
    }

    #[test]
    fn rho_hat_decreases_in_lambda(alpha in 0.05f64..1.0, delta in -0.9f64..5.0, a in 0.05f64..5.0, b in 0.05f64..5.0) {
        prop_assume!((a - b).abs() > 1e-6);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let f_lo = rho_hat(lo, alpha, delta, 1e-13).unwrap().value;
        let f_hi = rho_hat(hi, alpha, delta, 1e-13).unwrap().value;
        prop_assert!(f_lo > f_hi);
    }

    #[test]
    fn limit_law_has_unit_mass_and_mean_two(alpha in 0.1f64..1.0, delta in -0.5f64..5.0) {
        let lambda = solve_lambda_star(alpha, delta, DEFAULT_TOL).unwrap().lambda_star;
        let pmf = limit_pmf_at(alpha, delta, lambda, 1e-16);
        let mass: f64 = pmf.probabilities.iter().sum();
        prop_assert!((mass - 1.0).abs() < 1e-10);
        let mean: f64 = pmf.probabilities.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum();
        prop_assert!((mean - 2.0).abs() < 1e-8);
        prop_assert!(pmf.probabilities.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn degree_classes_track_random_increments(start in prop::collection::vec(1u32..6, 1..40), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..200)) {
        let mut classes = DegreeClasses::new();
        let mut degrees = start.clone();
        for (v, &d) in degrees.iter().enumerate() {
            classes.push(v as u32, d);
        }
        for idx in picks {
            let v = idx.index(degrees.len());
            classes.increment(v as u32, degrees[v]);
            degrees[v] += 1;
        }
        prop_assert!(classes.consistent_with(&degrees));
        let listed: usize = classes.iter().map(|(_, c)| c).sum();
        prop_assert_eq!(listed, degrees.len());
    }

    #[test]
    fn snapshot_grid_is_sorted_and_capped(start in 1usize..50, n in 1usize..100_000) {
        let grid = snapshot_grid(start, n);
        prop_assert!(grid.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(grid.iter().all(|&g| g >= start && g <= n));
        if n >= start {
            prop_assert_eq!(grid.last().copied(), Some(n));
        }
    }
}
