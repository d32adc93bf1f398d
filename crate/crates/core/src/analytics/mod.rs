//! Statistics computed from simulation output and their theoretical limits.

mod frequency;
mod histogram;
mod fixed_vertex;
mod recursion;
pub mod stats;

pub use fixed_vertex::{
    clt_standardize, fixed_vertex_ratio, inverse_fixed_vertex_constant, tau_scaled_ratio,
    FixedVertexRatio,
};
pub use frequency::{
    attachment_degree_frequency, frequencies_from_counts, inverse_attachment_limit,
    linear_attachment_limit,
};
pub use histogram::{empirical_pk, linear_limit_pmf, max_abs_deviation, DegreeHistogram};
pub use recursion::{expected_fixed_degree_linear, ExpectedDegreeSeries};
