//! Discrete growth: exact expected-degree recursion against path enumeration,
//! seed-level invariants and reproducibility of replicated runs.

use depref::analytics::expected_fixed_degree_linear;
use depref::enumerate::discrete_degree_law;
use depref::experiment::{run_replicas, RunSpec};
use depref::model::{init_graph, snapshot_grid, TauScale};
use depref::rng::replica_rng;
use depref::{ModelParams, SamplerKind};

#[test]
fn recursion_matches_enumerated_expectation() {
    for params in [
        ModelParams::linear(1.0, 1.0, 1).unwrap(),
        ModelParams::linear(2.0, 0.5, 1).unwrap(),
        ModelParams::linear(1.5, 1.0, 2).unwrap(),
    ] {
        let n_max = if params.m == 1 { 7 } else { 5 };
        let series = expected_fixed_degree_linear(&params, 3, n_max).unwrap();
        for n in 3..=n_max {
            let law = discrete_degree_law(&params, n).unwrap();
            let exact: f64 = law.iter().map(|(d, p)| f64::from(d[2]) * p).sum();
            let got = series.at(n).unwrap();
            assert!((got - exact).abs() < 1e-12, "{params:?} n={n}: {got} vs {exact}");
        }
    }
}

#[test]
fn all_samplers_grow_consistent_graphs() {
    for kind in [SamplerKind::ExactScan, SamplerKind::Bucketed, SamplerKind::Rejection] {
        for params in [ModelParams::linear(2.0, 1.0, 3).unwrap(), ModelParams::inverse_power(1.0, 0.0, 2).unwrap()] {
            let mut state = init_graph(params).unwrap();
            let mut rng = replica_rng(3, 0);
            state.grow_to(2000, &mut rng, kind, &mut []).unwrap();
            state.check_consistency().unwrap();
            assert_eq!(state.total_degree(), (2 * 2000 - 1) * u64::from(params.m));
        }
    }
}

#[test]
fn grow_step_reports_every_half_edge() {
    let params = ModelParams::inverse_power(0.5, 0.0, 3).unwrap();
    let mut state = init_graph(params).unwrap();
    let mut rng = replica_rng(8, 0);
    let events = state.grow_step(&mut rng, SamplerKind::Bucketed).unwrap();
    assert_eq!(events.len(), 3);
    assert!(events.iter().enumerate().all(|(i, e)| e.half_edge_index as usize == i && e.arriving_vertex == 2));
    assert_eq!(state.n(), 3);
    assert!(state.grow_to(2, &mut rng, SamplerKind::Bucketed, &mut []).is_err());
}

#[test]
fn replicated_runs_do_not_depend_on_thread_count() {
    let mut spec = RunSpec::new(ModelParams::linear(1.0, 0.5, 2).unwrap(), 3000);
    spec.histogram_at = vec![1000, 2000];
    let one = run_replicas(&spec, 5, 6, Some(1)).unwrap();
    let four = run_replicas(&spec, 5, 6, Some(4)).unwrap();
    assert_eq!(one, four);
    let json = serde_json::to_string(&one[0]).unwrap();
    assert!(json.contains("\"schema_version\":1"));
}

#[test]
fn time_scale_from_the_discrete_chain_matches_the_embedding_scale() {
    // c_n accumulated along the discrete chain grows like log n / lambda* for m = 1.
    let params = ModelParams::inverse_power(1.0, 0.0, 1).unwrap();
    let mut state = init_graph(params).unwrap();
    let n = 100_000;
    let mut tau = TauScale::new(&state, 1, snapshot_grid(2, n));
    let mut rng = replica_rng(12, 0);
    state.grow_to(n, &mut rng, SamplerKind::Bucketed, &mut [&mut tau]).unwrap();
    let scaled = tau.c_n() * 0.641_923_987_771_781 / (n as f64).ln();
    assert!((scaled - 1.0).abs() < 0.05, "{scaled}");
}
