use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_rate_law, race, RateTable};
use crate::error::{Error, Result};
use crate::model::DegreeClasses;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmjVertex {
    pub parent: Option<u32>,
    pub birth_time: f64,
    pub children: u32,
}

/// Crump-Mode-Jagers tree in which every individual reproduces by a pure
/// birth process leaving `k` children at rate `(k + 1 + delta)^(-alpha)`.
/// The root carries one dangling half-edge, so every vertex has graph degree
/// `children + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmjTree {
    pub alpha: f64,
    pub delta: f64,
    /// Ordered by birth time; index 0 is the root, born at time 0.
    pub vertices: Vec<CmjVertex>,
    /// `tau[j]` is the first time the tree has `j + 2` vertices.
    pub tau: Vec<f64>,
}

impl CmjTree {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Graph degrees by birth order.
    pub fn degrees(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.children + 1).collect()
    }

    /// `tau_n`, the first time `|tree| = n`, for `n >= 2`.
    pub fn tau_at(&self, n: usize) -> Option<f64> {
        n.checked_sub(2).and_then(|j| self.tau.get(j)).copied()
    }
}

pub fn cmj_grow<R: Rng + ?Sized>(
    alpha: f64,
    delta: f64,
    n_target: usize,
    rng: &mut R,
) -> Result<CmjTree> {
    check_rate_law(alpha, delta)?;
    if n_target < 2 {
        return Err(Error::Parameter(format!("n_target = {n_target} must be at least 2")));
    }
    let mut rates = RateTable::new(alpha, delta);
    let mut classes = DegreeClasses::new();
    let mut vertices = Vec::with_capacity(n_target);
    let mut tau = Vec::with_capacity(n_target - 1);
    vertices.push(CmjVertex { parent: None, birth_time: 0.0, children: 0 });
    classes.push(0, 1);
    let mut now = 0.0;
    while vertices.len() < n_target {
        let (wait, parent, degree, _) = race(&classes, &mut rates, rng)?;
        now += wait;
        vertices[parent as usize].children += 1;
        classes.increment(parent, degree);
        let child = vertices.len() as u32;
        vertices.push(CmjVertex { parent: Some(parent), birth_time: now, children: 0 });
        classes.push(child, 1);
        tau.push(now);
    }
    Ok(CmjTree { alpha, delta, vertices, tau })
}

/// One-step law of the jump chain: the next reproducing vertex is the winner
/// of independent exponential clocks, `P(j) = rate_j / sum rates`.
pub fn cmj_jump_law(degrees: &[u32], alpha: f64, delta: f64) -> Vec<f64> {
    let rates: Vec<f64> = degrees.iter().map(|&d| (f64::from(d) + delta).powf(-alpha)).collect();
    let total: f64 = rates.iter().sum();
    rates.into_iter().map(|r| r / total).collect()
}
