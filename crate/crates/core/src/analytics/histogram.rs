use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::GraphState;

/// Degree counts `N_k(n)` of a settled graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub n: usize,
    pub m: u32,
    pub counts: BTreeMap<u32, u64>,
}

impl DegreeHistogram {
    pub fn from_state(state: &GraphState) -> Self {
        DegreeHistogram {
            n: state.n(),
            m: state.params().m,
            counts: state.classes().iter().map(|(d, c)| (d, c as u64)).collect(),
        }
    }

    pub fn count(&self, k: u32) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// `P_k(n) = N_k(n) / n`.
    pub fn proportion(&self, k: u32) -> f64 {
        self.count(k) as f64 / self.n as f64
    }

    pub fn max_degree(&self) -> u32 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Checks `sum N_k = n` and `sum k N_k = (2n - 1) m`.
    pub fn check_identities(&self) -> Result<()> {
        let total: u64 = self.counts.values().sum();
        let degree_sum: u64 = self.counts.iter().map(|(&k, &c)| u64::from(k) * c).sum();
        let expected = (2 * self.n as u64 - 1) * u64::from(self.m);
        if total != self.n as u64 || degree_sum != expected {
            return Err(Error::Internal(format!(
                "histogram totals ({total}, {degree_sum}) != (n, (2n-1)m) = ({}, {expected})",
                self.n
            )));
        }
        Ok(())
    }
}

pub fn empirical_pk(state: &GraphState) -> Result<DegreeHistogram> {
    if !state.is_settled() {
        return Err(Error::Diagnostic("degree histogram requested mid-step".into()));
    }
    Ok(DegreeHistogram::from_state(state))
}

/// Limiting degree law `2^(-k)` of the linear model.
pub fn linear_limit_pmf(k: u32) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain(format!("degree {k} is below 1")));
    }
    Ok(0.5f64.powi(k as i32))
}

/// `max_k |P_k(n) - p_k|` over degrees carrying empirical mass or limit mass above 1e-12.
pub fn max_abs_deviation(hist: &DegreeHistogram, limit: impl Fn(u32) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    let mut k = 1u32;
    loop {
        let p = limit(k);
        let observed = hist.proportion(k);
        if k > hist.max_degree() && p <= 1e-12 {
            break;
        }
        worst = worst.max((observed - p).abs());
        k += 1;
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{init_graph, ModelParams};

    #[test]
    fn seed_and_first_step() {
        let mut s = init_graph(ModelParams::linear(1.0, 1.0, 1).unwrap()).unwrap();
        let h = empirical_pk(&s).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(h.proportion(1), 0.5);
        assert_eq!(h.proportion(2), 0.5);
        h.check_identities().unwrap();
        let dev = max_abs_deviation(&h, |k| linear_limit_pmf(k).unwrap());
        assert_eq!(dev, 0.25);

        s.attach_to(1).unwrap();
        let h = empirical_pk(&s).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(1, 1), (2, 2)]));
        h.check_identities().unwrap();
    }

    #[test]
    fn limit_pmf_values() {
        assert_eq!(linear_limit_pmf(1).unwrap(), 0.5);
        assert_eq!(linear_limit_pmf(3).unwrap(), 0.125);
        assert!(linear_limit_pmf(0).is_err());
        let total: f64 = (1..60).map(|k| linear_limit_pmf(k).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deviation_of_exact_match_is_zero() {
        let h = DegreeHistogram { n: 4, m: 1, counts: BTreeMap::from([(1, 2), (2, 1), (3, 1)]) };
        let pmf = |k: u32| match k {
            1 => 0.5,
            2 | 3 => 0.25,
            _ => 0.0,
        };
        assert_eq!(max_abs_deviation(&h, pmf), 0.0);
    }
}
