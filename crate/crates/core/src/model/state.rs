use rand::Rng;
use serde::{Deserialize, Serialize};

use super::classes::DegreeClasses;
use super::observe::GrowthObserver;
use super::params::{Model, ModelParams};
use crate::error::{Error, Result};
use crate::sampler::SamplerKind;

/// Half-edge draws between exact recomputations of the inverse-power normalizer.
pub const RECOMPUTE_INTERVAL: u64 = 1 << 16;
/// Relative tolerance between the incremental and recomputed normalizer.
pub const NORMALIZER_RTOL: f64 = 1e-9;

/// One half-edge placement of the arriving vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachmentEvent {
    /// 0-based index of the arriving vertex (equals the number of existing vertices).
    pub arriving_vertex: u32,
    pub half_edge_index: u32,
    pub target: u32,
    pub target_degree_before: u32,
}

/// Degree-level state of the graph sequence.
///
/// Vertex `v_i` of the growth process is stored at index `i - 1`. While the
/// arriving vertex is placing its half-edges it is not yet part of `degrees`;
/// `k` counts the half-edges already attached.
#[derive(Debug, Clone)]
pub struct GraphState {
    params: ModelParams,
    degrees: Vec<u32>,
    classes: DegreeClasses,
    k: u32,
    total_degree: u64,
    inv_norm: f64,
    /// `(delta + d)^(-alpha)` by degree; empty for the linear model.
    inv_weights: Vec<f64>,
    draws: u64,
}

/// Returns the seed graph `G_2` with degrees `(2m, m)`.
pub fn init_graph(params: ModelParams) -> Result<GraphState> {
    GraphState::new(params)
}

impl GraphState {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let m = params.m;
        let mut state = GraphState {
            params,
            degrees: Vec::new(),
            classes: DegreeClasses::new(),
            k: 0,
            total_degree: 0,
            inv_norm: 0.0,
            inv_weights: Vec::new(),
            draws: 0,
        };
        state.ensure_weight(2 * m);
        state.push_vertex(2 * m);
        state.push_vertex(m);
        state.check_invariants()?;
        Ok(state)
    }

    fn push_vertex(&mut self, d: u32) {
        let v = self.degrees.len() as u32;
        self.degrees.push(d);
        self.classes.push(v, d);
        self.total_degree += u64::from(d);
        if !self.params.is_linear() {
            self.inv_norm += self.degree_weight_cached(d);
        }
    }

    fn ensure_weight(&mut self, d: u32) {
        if let Model::InversePower { alpha, delta } = self.params.model {
            while self.inv_weights.len() <= d as usize {
                let x = self.inv_weights.len() as f64;
                self.inv_weights.push((delta + x).powf(-alpha));
            }
        }
    }

    fn degree_weight_cached(&self, d: u32) -> f64 {
        self.inv_weights[d as usize]
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Number of settled vertices.
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degrees[v]
    }

    /// Half-edges of the arriving vertex already attached.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_settled(&self) -> bool {
        self.k == 0
    }

    pub fn total_degree(&self) -> u64 {
        self.total_degree
    }

    pub fn classes(&self) -> &DegreeClasses {
        &self.classes
    }

    /// Weight of any vertex currently of degree `d` for the next draw.
    pub fn degree_weight(&self, d: u32) -> f64 {
        match self.params.model {
            Model::Linear { .. } => self.params.attachment_weight(d, self.n(), self.k),
            Model::InversePower { .. } => match self.inv_weights.get(d as usize) {
                Some(&w) => w,
                None => self.params.attachment_weight(d, self.n(), self.k),
            },
        }
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.degree_weight(self.degrees[v])
    }

    /// Normalizer of the current conditional law: `n theta - alpha` for the
    /// linear model, the incrementally maintained `D` for the inverse model.
    pub fn normalizer(&self) -> f64 {
        match self.params.model {
            Model::Linear { theta, alpha } => self.n() as f64 * theta - alpha,
            Model::InversePower { .. } => self.inv_norm,
        }
    }

    /// Sum of per-vertex weights recomputed from scratch.
    pub fn exact_normalizer(&self) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for &d in &self.degrees {
            let w = self.params.attachment_weight(d, self.n(), self.k);
            // Neumaier
            let t = sum + w;
            if f64::abs(sum) >= w.abs() {
                comp += (sum - t) + w;
            } else {
                comp += (w - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    /// Places the next half-edge of the arriving vertex on `target`. After the
    /// `m`-th half-edge the arriving vertex settles with degree `m`.
    pub fn attach_to(&mut self, target: usize) -> Result<AttachmentEvent> {
        if target >= self.n() {
            return Err(Error::Internal(format!(
                "target {target} is not an existing vertex (n = {})",
                self.n()
            )));
        }
        let before = self.degrees[target];
        let event = AttachmentEvent {
            arriving_vertex: self.n() as u32,
            half_edge_index: self.k,
            target: target as u32,
            target_degree_before: before,
        };
        self.ensure_weight(before + 1);
        self.degrees[target] = before + 1;
        self.classes.increment(target as u32, before);
        self.total_degree += 1;
        if !self.params.is_linear() {
            self.inv_norm += self.degree_weight_cached(before + 1) - self.degree_weight_cached(before);
        }
        self.k += 1;
        if self.k == self.params.m {
            self.k = 0;
            self.push_vertex(self.params.m);
        }
        self.draws += 1;
        if self.draws.is_multiple_of(RECOMPUTE_INTERVAL) {
            self.recompute_normalizer()?;
            self.check_consistency()?;
        }
        self.check_invariants()?;
        Ok(event)
    }

    /// O(1) checks run after every half-edge: the degree-sum identity and,
    /// for the inverse model, the normalizer band.
    fn check_invariants(&self) -> Result<()> {
        let n = self.n() as u64;
        let expected = u64::from(self.k) + (2 * n - 1) * u64::from(self.params.m);
        if self.total_degree != expected {
            return Err(Error::Internal(format!(
                "degree sum {} != k + (2n-1)m = {expected}",
                self.total_degree
            )));
        }
        if let Some((lo, hi)) = self.params.normalizer_band(self.n()) {
            let d = self.inv_norm;
            let slack = NORMALIZER_RTOL * hi;
            if d < lo - slack || d > hi + slack {
                return Err(Error::Internal(format!(
                    "normalizer {d} outside band [{lo}, {hi}] at n = {}, k = {}",
                    self.n(),
                    self.k
                )));
            }
        }
        Ok(())
    }

    fn recompute_normalizer(&mut self) -> Result<()> {
        if self.params.is_linear() {
            return Ok(());
        }
        let exact = self.exact_normalizer();
        let rel = (exact - self.inv_norm).abs() / exact;
        if rel > NORMALIZER_RTOL {
            return Err(Error::Internal(format!(
                "incremental normalizer {} drifted from exact {exact} (relative {rel:e})",
                self.inv_norm
            )));
        }
        self.inv_norm = exact;
        Ok(())
    }

    /// Full O(n) audit of degrees, histogram and totals.
    pub fn check_consistency(&self) -> Result<()> {
        let sum: u64 = self.degrees.iter().map(|&d| u64::from(d)).sum();
        if sum != self.total_degree {
            return Err(Error::Internal(format!(
                "recounted degree sum {sum} != tracked {}",
                self.total_degree
            )));
        }
        if !self.classes.consistent_with(&self.degrees) {
            return Err(Error::Internal("degree classes disagree with degrees".into()));
        }
        if self.degrees.iter().any(|&d| d < self.params.m) {
            return Err(Error::Internal("a settled vertex has degree below m".into()));
        }
        self.check_invariants()
    }

    /// Attaches all `m` half-edges of the next vertex. The state must be settled.
    pub fn grow_step<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        sampler: SamplerKind,
    ) -> Result<Vec<AttachmentEvent>> {
        let mut events = Vec::with_capacity(self.params.m as usize);
        self.step_observed(rng, sampler, &mut [], Some(&mut events))?;
        Ok(events)
    }

    fn step_observed<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        sampler: SamplerKind,
        observers: &mut [&mut dyn GrowthObserver],
        mut log: Option<&mut Vec<AttachmentEvent>>,
    ) -> Result<()> {
        if !self.is_settled() {
            return Err(Error::Internal("grow_step called on an unsettled state".into()));
        }
        for _ in 0..self.params.m {
            for obs in observers.iter_mut() {
                obs.before_draw(self);
            }
            let target = sampler.sample(self, rng)?;
            let event = self.attach_to(target)?;
            for obs in observers.iter_mut() {
                obs.on_event(self, &event);
            }
            if let Some(log) = log.as_deref_mut() {
                log.push(event);
            }
        }
        for obs in observers.iter_mut() {
            obs.on_settled(self);
        }
        Ok(())
    }

    /// Grows to `n_target` settled vertices, notifying observers of every draw,
    /// event and settled state.
    pub fn grow_to<R: Rng + ?Sized>(
        &mut self,
        n_target: usize,
        rng: &mut R,
        sampler: SamplerKind,
        observers: &mut [&mut dyn GrowthObserver],
    ) -> Result<()> {
        if n_target < self.n() {
            return Err(Error::Parameter(format!(
                "n_target {n_target} is below the current size {}",
                self.n()
            )));
        }
        for obs in observers.iter_mut() {
            obs.on_settled(self);
        }
        while self.n() < n_target {
            self.step_observed(rng, sampler, observers, None)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seed_graph_satisfies_sum_identity() {
        let s = init_graph(ModelParams::linear(1.0, 1.0, 1).unwrap()).unwrap();
        assert_eq!(s.degrees(), &[2, 1]);
        assert_eq!(s.total_degree(), 3);
        let s = init_graph(ModelParams::inverse_power(1.0, 0.0, 3).unwrap()).unwrap();
        assert_eq!(s.degrees(), &[6, 3]);
        assert_eq!(s.total_degree(), 9);
    }

    #[test]
    fn zero_m_is_rejected() {
        let bad = ModelParams { model: Model::Linear { theta: 1.0, alpha: 1.0 }, m: 0 };
        assert!(matches!(init_graph(bad), Err(Error::Parameter(_))));
    }

    #[test]
    fn normalizer_examples() {
        let mut s = init_graph(ModelParams::linear(2.0, 0.5, 1).unwrap()).unwrap();
        s.attach_to(0).unwrap();
        assert_eq!(s.degrees(), &[3, 1, 1]);
        assert_eq!(s.normalizer(), 5.5);
        let mut s = init_graph(ModelParams::linear(2.0, 0.5, 1).unwrap()).unwrap();
        s.attach_to(1).unwrap();
        assert_eq!(s.degrees(), &[2, 2, 1]);
        assert!((s.exact_normalizer() - 5.5).abs() < 1e-14);

        let s = init_graph(ModelParams::inverse_power(1.0, 0.0, 1).unwrap()).unwrap();
        assert!((s.normalizer() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn grow_step_adds_two_m_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for params in [
            ModelParams::linear(1.0, 1.0, 1).unwrap(),
            ModelParams::linear(2.0, 0.5, 3).unwrap(),
            ModelParams::inverse_power(0.5, 1.0, 2).unwrap(),
        ] {
            let mut s = init_graph(params).unwrap();
            for _ in 0..50 {
                let before = s.total_degree();
                let events = s.grow_step(&mut rng, SamplerKind::Bucketed).unwrap();
                assert_eq!(events.len() as u32, params.m);
                assert_eq!(s.total_degree(), before + 2 * u64::from(params.m));
                assert_eq!(*s.degrees().last().unwrap(), params.m);
                for e in &events {
                    assert!(e.target < e.arriving_vertex);
                    assert!(e.target_degree_before >= params.m);
                }
            }
            s.check_consistency().unwrap();
        }
    }

    #[test]
    fn grow_to_hits_degree_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = init_graph(ModelParams::linear(1.0, 1.0, 1).unwrap()).unwrap();
        s.grow_to(2, &mut rng, SamplerKind::Bucketed, &mut []).unwrap();
        assert_eq!(s.degrees(), &[2, 1]);
        s.grow_to(10, &mut rng, SamplerKind::Bucketed, &mut []).unwrap();
        assert_eq!(s.total_degree(), 19);

        let mut s = init_graph(ModelParams::inverse_power(1.0, 0.0, 2).unwrap()).unwrap();
        s.grow_to(1000, &mut rng, SamplerKind::Bucketed, &mut []).unwrap();
        assert_eq!(s.degrees().iter().map(|&d| u64::from(d)).sum::<u64>(), 3998);
        assert!(s.grow_to(10, &mut rng, SamplerKind::Bucketed, &mut []).is_err());
    }

    #[test]
    fn incremental_normalizer_survives_recompute() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = init_graph(ModelParams::inverse_power(0.7, -0.5, 1).unwrap()).unwrap();
        s.grow_to(70_000, &mut rng, SamplerKind::Bucketed, &mut []).unwrap();
        let rel = (s.normalizer() - s.exact_normalizer()).abs() / s.exact_normalizer();
        assert!(rel < 1e-12, "relative drift {rel}");
    }

    #[test]
    fn linear_normalizer_identity_at_intermediate_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut s = init_graph(ModelParams::linear(2.0, 1.0, 3).unwrap()).unwrap();
        s.grow_to(40, &mut rng, SamplerKind::Bucketed, &mut []).unwrap();
        for target in [0, 5, 5] {
            s.attach_to(target).unwrap();
            let rel = (s.exact_normalizer() - s.normalizer()).abs() / s.normalizer();
            assert!(rel < 1e-14);
            let min_w = (0..s.n()).map(|v| s.weight(v)).fold(f64::INFINITY, f64::min);
            assert!(min_w >= 2.0 - 1.0);
        }
    }
}
