//! Samplers against the exact one-step law: exact equality of the laws each
//! mechanism realizes on every small reachable state, and chi-square tests
//! of 10^6 draws on a grown state.

use depref::analytics::stats::chi_square_gof;
use depref::enumerate::reachable_states;
use depref::rng::replica_rng;
use depref::sampler::{exact_law, step_distribution, SamplerKind};
use depref::{init_graph, ModelParams};

const KINDS: [SamplerKind; 3] = [SamplerKind::ExactScan, SamplerKind::Bucketed, SamplerKind::Rejection];

fn parameter_cases() -> Vec<ModelParams> {
    vec![
        ModelParams::linear(1.0, 1.0, 1).unwrap(),
        ModelParams::linear(2.0, 0.5, 2).unwrap(),
        ModelParams::inverse_power(1.0, 0.0, 1).unwrap(),
        ModelParams::inverse_power(0.5, 1.0, 2).unwrap(),
        ModelParams::inverse_power(0.3, -0.5, 1).unwrap(),
    ]
}

#[test]
fn realized_laws_equal_the_model_law_on_reachable_states() {
    for params in parameter_cases() {
        let n_max = if params.m == 1 { 6 } else { 5 };
        for state in reachable_states(&params, n_max).unwrap() {
            if state.is_settled() && state.n() == n_max {
                continue;
            }
            let law = step_distribution(&state);
            assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for kind in KINDS {
                let realized = exact_law(kind, &state).unwrap();
                for (a, b) in realized.iter().zip(&law) {
                    assert!((a - b).abs() < 1e-12, "{kind:?} {:?}: {realized:?} vs {law:?}", state.degrees());
                }
            }
        }
    }
}

#[test]
fn draws_follow_the_model_law() {
    let draws = 1_000_000;
    for (case, params) in parameter_cases().into_iter().enumerate() {
        let mut rng = replica_rng(99, case as u64);
        let mut state = init_graph(params).unwrap();
        state.grow_to(40, &mut rng, SamplerKind::ExactScan, &mut []).unwrap();
        let law = step_distribution(&state);
        for kind in KINDS {
            let mut counts = vec![0u64; state.n()];
            for _ in 0..draws {
                counts[kind.sample(&state, &mut rng).unwrap()] += 1;
            }
            let test = chi_square_gof(&counts, &law).unwrap();
            assert!(test.p_value >= 1e-3, "{kind:?} on {params:?}: p = {}", test.p_value);
        }
    }
}
