//! Acceptance checks comparing simulations and numerics with the limit theory.
//!
//! Each criterion returns a [`CriterionReport`] with the measured values and
//! a pass flag evaluated at fixed tolerances. [`Budget::Full`] uses the
//! replica counts and graph sizes the tolerances were set for;
//! [`Budget::Quick`] shrinks them for smoke runs, where failures are expected.

mod checks;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use checks::run_criterion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Malthusian,
    Linear,
    Inverse,
    Embedding,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Malthusian => &[1, 2],
            Suite::Linear => &[3, 4, 5, 12],
            Suite::Inverse => &[6, 7, 10, 12],
            Suite::Embedding => &[8, 9, 11],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "malthusian" => Ok(Suite::Malthusian),
            "linear" => Ok(Suite::Linear),
            "inverse" => Ok(Suite::Inverse),
            "embedding" => Ok(Suite::Embedding),
            "all" => Ok(Suite::All),
            other => Err(Error::Parameter(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Quick,
    #[default]
    Full,
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Budget::Quick),
            "full" => Ok(Budget::Full),
            other => Err(Error::Parameter(format!("unknown budget '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub budget: Budget,
    pub master_seed: u64,
    pub threads: Option<usize>,
    /// Graph sizes for the embedding-equivalence check.
    pub equivalence_sizes: Vec<usize>,
    /// Monte Carlo CMJ draws per cell of the embedding-equivalence check;
    /// `None` uses the budget default.
    pub equivalence_draws: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            budget: Budget::Full,
            master_seed: 20_240_601,
            threads: None,
            equivalence_sizes: vec![4, 5],
            equivalence_draws: None,
        }
    }
}

impl VerifyConfig {
    pub fn quick() -> Self {
        VerifyConfig { budget: Budget::Quick, ..Self::default() }
    }

    /// `full` under the full budget, `quick` otherwise.
    pub(crate) fn pick(&self, full: usize, quick: usize) -> usize {
        match self.budget {
            Budget::Full => full,
            Budget::Quick => quick,
        }
    }

    /// Deterministic master seed for one experiment cell.
    pub(crate) fn seed(&self, criterion: u8, cell: u64) -> u64 {
        self.master_seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(u64::from(criterion) << 32)
            .wrapping_add(cell)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance condition, empty for reported-only values.
    pub bound: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
}

impl CriterionReport {
    pub(crate) fn new(id: u8, name: &str) -> Self {
        CriterionReport { id, name: name.to_string(), passed: true, measurements: Vec::new() }
    }

    /// Records a gated value.
    pub(crate) fn gate(&mut self, name: impl Into<String>, value: f64, bound: impl Into<String>, ok: bool) {
        self.passed &= ok;
        self.measurements.push(Measurement { name: name.into(), value, bound: bound.into(), passed: ok });
    }

    /// Records a value that is reported but not gated.
    pub(crate) fn report(&mut self, name: impl Into<String>, value: f64) {
        self.measurements.push(Measurement { name: name.into(), value, bound: String::new(), passed: true });
    }

    /// Failures of the gated measurements.
    pub fn failures(&self) -> impl Iterator<Item = &Measurement> {
        self.measurements.iter().filter(|m| !m.passed)
    }

    /// One-line summary: status, id, name and the first failing measurement if any.
    pub fn summary_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let gated = self.measurements.iter().filter(|m| !m.bound.is_empty()).count();
        match self.failures().next() {
            None => format!("[{status}] criterion {:>2}: {} ({gated} checks)", self.id, self.name),
            Some(f) => format!(
                "[{status}] criterion {:>2}: {}; {} = {:.6} violates {}",
                self.id, self.name, f.name, f.value, f.bound
            ),
        }
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for m in &self.measurements {
            let mark = if m.bound.is_empty() {
                "    "
            } else if m.passed {
                "ok  "
            } else {
                "FAIL"
            };
            write!(f, "    {mark} {} = {:.8}", m.name, m.value)?;
            if !m.bound.is_empty() {
                write!(f, "  [{}]", m.bound)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Runs every criterion of `suite` in order. Runs shared between criteria
/// are simulated once.
pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<Vec<CriterionReport>> {
    let mut cache = checks::RunCache::default();
    suite.criteria().iter().map(|&id| checks::run_cached(id, config, &mut cache)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_lines() {
        let mut r = CriterionReport::new(4, "demo");
        r.gate("x", 1.0, "x <= 2", true);
        r.report("y", 3.0);
        assert_eq!(r.summary_line(), "[PASS] criterion  4: demo (1 checks)");
        r.gate("z", 5.0, "z <= 2", false);
        assert!(!r.passed);
        assert!(r.summary_line().starts_with("[FAIL] criterion  4: demo; z = 5.000000"));
    }

    #[test]
    fn parse_names() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert_eq!("quick".parse::<Budget>().unwrap(), Budget::Quick);
        assert!("none".parse::<Suite>().is_err());
    }
}
