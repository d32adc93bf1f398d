//! Growth, embedding and limit theory for de-preferential random graphs.
//!
//! A graph sequence starts from `G_2` (two vertices with degrees `2m` and
//! `m`) and gains one vertex per step; each of its `m` half-edges attaches to
//! an existing vertex with probability decreasing in that vertex's degree.
//! Two weight families are supported:
//!
//! - linear: `theta - alpha d / (k + (2n - 1) m)`, normalizer `n theta - alpha`;
//! - inverse power: `(delta + d)^(-alpha)`, normalizer `D = sum (delta + d)^(-alpha)`.
//!
//! Besides the discrete simulator the crate provides the continuous-time
//! embeddings of the inverse model, the Malthusian parameter and limiting
//! degree law, statistics for comparing simulations with the limits, and the
//! acceptance checks in [`verify`].

// `!(x > 0.0)` is used deliberately so NaN lands on the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod embedding;
pub mod enumerate;
mod error;
pub mod experiment;
pub mod malthusian;
pub mod model;
pub mod rng;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
pub use model::{init_graph, GraphState, Model, ModelParams};
pub use sampler::SamplerKind;
