//! Finite Laurent series: evaluation, norms and coefficient extraction.

mod laurent;
mod norms;
mod sampling;

pub use laurent::LaurentSeries;
pub use norms::{inner_product, l1_weighted_norm, l2_norm, lp_integral, lp_norm};
pub use sampling::{
    default_angle_count, extract_coefficients, sample_circles, sample_series, CircleSamples, Extraction,
    CONSISTENCY_TOL,
};
