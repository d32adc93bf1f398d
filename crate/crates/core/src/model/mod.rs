//! Discrete-time growth of the graph sequence.

mod classes;
pub mod observe;
mod params;
mod state;

pub use classes::DegreeClasses;
pub use observe::{
    snapshot_grid, AttachmentCounter, FixedVertexTrace, GrowthObserver, HistogramSnapshots,
    NormalizerTrace, TauScale,
};
pub use params::{Model, ModelParams};
pub use state::{init_graph, AttachmentEvent, GraphState, NORMALIZER_RTOL, RECOMPUTE_INTERVAL};
