//! Observers collecting traces while a graph grows.

use std::collections::BTreeMap;

use super::params::Model;
use super::state::{AttachmentEvent, GraphState};
use crate::analytics::DegreeHistogram;

/// Callbacks invoked by [`GraphState::grow_to`]. Every method defaults to a no-op.
pub trait GrowthObserver {
    /// Called before each half-edge draw, with the state defining the draw's law.
    fn before_draw(&mut self, _state: &GraphState) {}
    fn on_event(&mut self, _state: &GraphState, _event: &AttachmentEvent) {}
    /// Called for every settled state, including the starting state of `grow_to`.
    fn on_settled(&mut self, _state: &GraphState) {}
}

/// Sizes `ceil(2^(j/2))` between `start` and `n_target`, with `n_target` always included.
pub fn snapshot_grid(start: usize, n_target: usize) -> Vec<usize> {
    let mut grid = Vec::new();
    let mut j = 0i32;
    loop {
        let v = 2f64.powf(f64::from(j) / 2.0).ceil() as usize;
        if v > n_target {
            break;
        }
        if v >= start && grid.last() != Some(&v) {
            grid.push(v);
        }
        j += 1;
    }
    if grid.last() != Some(&n_target) && n_target >= start {
        grid.push(n_target);
    }
    grid
}

/// Advances through a sorted grid of sizes; `hit(n)` is true once per grid point.
#[derive(Debug, Clone)]
struct GridCursor {
    grid: Vec<usize>,
    next: usize,
}

impl GridCursor {
    fn new(grid: Vec<usize>) -> Self {
        GridCursor { grid, next: 0 }
    }

    fn hit(&mut self, n: usize) -> bool {
        while self.next < self.grid.len() && self.grid[self.next] < n {
            self.next += 1;
        }
        if self.next < self.grid.len() && self.grid[self.next] == n {
            self.next += 1;
            true
        } else {
            false
        }
    }
}

/// Degree of one vertex on the snapshot grid.
#[derive(Debug, Clone)]
pub struct FixedVertexTrace {
    vertex: usize,
    cursor: GridCursor,
    pub points: Vec<(usize, u32)>,
}

impl FixedVertexTrace {
    /// `vertex` is the 0-based index of the tracked vertex.
    pub fn new(vertex: usize, grid: Vec<usize>) -> Self {
        FixedVertexTrace { vertex, cursor: GridCursor::new(grid), points: Vec::new() }
    }
}

impl GrowthObserver for FixedVertexTrace {
    fn on_settled(&mut self, state: &GraphState) {
        if state.n() > self.vertex && self.cursor.hit(state.n()) {
            self.points.push((state.n(), state.degree(self.vertex)));
        }
    }
}

/// `D_n / n` on the snapshot grid.
#[derive(Debug, Clone)]
pub struct NormalizerTrace {
    cursor: GridCursor,
    pub points: Vec<(usize, f64)>,
}

impl NormalizerTrace {
    pub fn new(grid: Vec<usize>) -> Self {
        NormalizerTrace { cursor: GridCursor::new(grid), points: Vec::new() }
    }
}

impl GrowthObserver for NormalizerTrace {
    fn on_settled(&mut self, state: &GraphState) {
        if self.cursor.hit(state.n()) {
            self.points.push((state.n(), state.normalizer() / state.n() as f64));
        }
    }
}

/// Degree histograms at selected sizes.
#[derive(Debug, Clone)]
pub struct HistogramSnapshots {
    cursor: GridCursor,
    pub snapshots: Vec<DegreeHistogram>,
}

impl HistogramSnapshots {
    pub fn new(mut at: Vec<usize>) -> Self {
        at.sort_unstable();
        at.dedup();
        HistogramSnapshots { cursor: GridCursor::new(at), snapshots: Vec::new() }
    }
}

impl GrowthObserver for HistogramSnapshots {
    fn on_settled(&mut self, state: &GraphState) {
        if self.cursor.hit(state.n()) {
            self.snapshots.push(DegreeHistogram::from_state(state));
        }
    }
}

/// Counts of target degrees over events whose arriving vertex has index at
/// least `window_start` (i.e. at least `window_start` vertices already exist).
#[derive(Debug, Clone, Default)]
pub struct AttachmentCounter {
    window_start: usize,
    pub counts: BTreeMap<u32, u64>,
}

impl AttachmentCounter {
    pub fn new(window_start: usize) -> Self {
        AttachmentCounter { window_start, counts: BTreeMap::new() }
    }

    /// Window covering the last `fraction` of a run to `n_target`.
    pub fn late_window(n_target: usize, fraction: f64) -> Self {
        let len = (fraction * n_target as f64).round() as usize;
        let start = n_target.saturating_sub(len);
        Self::new(start)
    }
}

impl GrowthObserver for AttachmentCounter {
    fn on_event(&mut self, _state: &GraphState, event: &AttachmentEvent) {
        if event.arriving_vertex as usize >= self.window_start {
            *self.counts.entry(event.target_degree_before).or_insert(0) += 1;
        }
    }
}

/// Accumulates `c_n = b_i + ... + b_{n-1}` where `b_j` sums `1 / D` over the
/// `m` draws that grow `G_j` into `G_{j+1}`. This is the conditional mean of
/// the embedding's inter-arrival time, computed from the discrete chain.
#[derive(Debug, Clone)]
pub struct TauScale {
    start_vertex: usize,
    cursor: GridCursor,
    c: f64,
    pending: Option<(usize, f64)>,
    /// Steps whose `b_j` fell outside `[m (m+delta)^alpha / j, m (2m+delta)^alpha / j]`.
    pub b_violations: usize,
    pub points: Vec<(usize, f64)>,
}

impl TauScale {
    /// `start_vertex` is the 1-based label `i`. For `i = 1` the deterministic
    /// first transition out of the one-vertex graph is included analytically.
    pub fn new(state: &GraphState, start_vertex: usize, grid: Vec<usize>) -> Self {
        let mut c = 0.0;
        if start_vertex <= 1 {
            if let Model::InversePower { alpha, delta } = state.params().model {
                let m = state.params().m;
                c = (0..m).map(|k| (f64::from(m + k) + delta).powf(alpha)).sum();
            }
        }
        TauScale {
            start_vertex: start_vertex.max(1),
            cursor: GridCursor::new(grid),
            c,
            pending: None,
            b_violations: 0,
            points: Vec::new(),
        }
    }

    pub fn c_n(&self) -> f64 {
        self.c
    }
}

impl GrowthObserver for TauScale {
    fn before_draw(&mut self, state: &GraphState) {
        let j = state.n();
        if j >= self.start_vertex {
            let entry = self.pending.get_or_insert((j, 0.0));
            entry.1 += 1.0 / state.normalizer();
        }
    }

    fn on_settled(&mut self, state: &GraphState) {
        if let Some((j, b)) = self.pending.take() {
            if let Model::InversePower { alpha, delta } = state.params().model {
                let m = f64::from(state.params().m);
                let lo = m * (m + delta).powf(alpha) / j as f64;
                let hi = m * (2.0 * m + delta).powf(alpha) / j as f64;
                let slack = 1e-9 * hi;
                if b < lo - slack || b > hi + slack {
                    self.b_violations += 1;
                }
            }
            self.c += b;
        }
        if state.n() > self.start_vertex && self.cursor.hit(state.n()) {
            self.points.push((state.n(), self.c));
        }
    }
}
