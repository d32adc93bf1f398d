//! Exact laws of small graphs by exhaustive enumeration of attachment paths.

use std::collections::BTreeMap;

use crate::embedding::cmj_jump_law;
use crate::error::{Error, Result};
use crate::malthusian::CompensatedSum;
use crate::model::{init_graph, GraphState, ModelParams};
use crate::sampler::step_distribution;

/// Upper limit on graph size for enumeration; the number of paths grows factorially.
pub const MAX_ENUMERATION_N: usize = 9;

/// Law of an outcome indexed by its degree sequence in vertex order.
pub type DegreeLaw = BTreeMap<Vec<u32>, f64>;

fn check_size(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_ENUMERATION_N {
        return Err(Error::Parameter(format!(
            "enumeration needs {min} <= n <= {MAX_ENUMERATION_N}, got {n}"
        )));
    }
    Ok(())
}

/// Law of the degree sequence of `G_n`, from the discrete model's one-step
/// conditional laws.
pub fn discrete_degree_law(params: &ModelParams, n: usize) -> Result<DegreeLaw> {
    check_size(n, 2)?;
    let mut sums: BTreeMap<Vec<u32>, CompensatedSum> = BTreeMap::new();
    let mut stack = vec![(init_graph(*params)?, 1.0)];
    while let Some((state, p)) = stack.pop() {
        if state.is_settled() && state.n() == n {
            sums.entry(state.degrees().to_vec()).or_default().add(p);
            continue;
        }
        for (v, q) in step_distribution(&state).into_iter().enumerate() {
            if q > 0.0 {
                let mut next = state.clone();
                next.attach_to(v)?;
                stack.push((next, p * q));
            }
        }
    }
    Ok(sums.into_iter().map(|(k, s)| (k, s.value())).collect())
}

/// Law of the CMJ tree's degree sequence (birth order) at the time it first
/// has `n` vertices, from the jump chain of competing exponential clocks.
pub fn cmj_degree_law(alpha: f64, delta: f64, n: usize) -> Result<DegreeLaw> {
    check_size(n, 1)?;
    let mut sums: BTreeMap<Vec<u32>, CompensatedSum> = BTreeMap::new();
    let mut stack = vec![(vec![1u32], 1.0)];
    while let Some((degrees, p)) = stack.pop() {
        if degrees.len() == n {
            sums.entry(degrees).or_default().add(p);
            continue;
        }
        for (v, q) in cmj_jump_law(&degrees, alpha, delta).into_iter().enumerate() {
            let mut next = degrees.clone();
            next[v] += 1;
            next.push(1);
            stack.push((next, p * q));
        }
    }
    Ok(sums.into_iter().map(|(k, s)| (k, s.value())).collect())
}

/// Largest absolute difference between two laws over the union of their supports.
pub fn law_distance(a: &DegreeLaw, b: &DegreeLaw) -> f64 {
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Every distinct state (settled or mid-step) reachable from `G_2` before
/// the graph exceeds `n_max` vertices.
pub fn reachable_states(params: &ModelParams, n_max: usize) -> Result<Vec<GraphState>> {
    check_size(n_max, 2)?;
    let mut seen: BTreeMap<(Vec<u32>, u32), GraphState> = BTreeMap::new();
    let mut stack = vec![init_graph(*params)?];
    while let Some(state) = stack.pop() {
        let key = (state.degrees().to_vec(), state.k());
        if seen.contains_key(&key) {
            continue;
        }
        if !(state.is_settled() && state.n() == n_max) {
            for v in 0..state.n() {
                let mut next = state.clone();
                next.attach_to(v)?;
                if next.n() <= n_max {
                    stack.push(next);
                }
            }
        }
        seen.insert(key, state);
    }
    Ok(seen.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_vertex_laws() {
        let p = ModelParams::inverse_power(1.0, 0.0, 1).unwrap();
        let law = discrete_degree_law(&p, 3).unwrap();
        assert_eq!(law.len(), 2);
        assert!((law[&vec![3, 1, 1]] - 1.0 / 3.0).abs() < 1e-15);
        assert!((law[&vec![2, 2, 1]] - 2.0 / 3.0).abs() < 1e-15);
        let tree = cmj_degree_law(1.0, 0.0, 3).unwrap();
        assert!(law_distance(&law, &tree) < 1e-15);
    }

    #[test]
    fn laws_are_normalized() {
        let p = ModelParams::linear(2.0, 0.5, 2).unwrap();
        let law = discrete_degree_law(&p, 4).unwrap();
        assert!((law.values().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(law.keys().all(|d| d.iter().sum::<u32>() == 2 * (2 * 4 - 1)));
    }

    #[test]
    fn reachable_states_cover_mid_step() {
        let p = ModelParams::inverse_power(0.5, 1.0, 2).unwrap();
        let states = reachable_states(&p, 3).unwrap();
        // G_2 = (4,2); one half-edge: (5,2) or (4,3); both: (6,2,2), (5,3,2), (4,4,2)
        assert_eq!(states.len(), 6);
        assert!(discrete_degree_law(&p, 1).is_err());
    }
}
