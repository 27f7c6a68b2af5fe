//! Special functions and one-dimensional integrals.

mod gamma;
mod itilde;
pub mod quadrature;
mod weight;

pub use gamma::log_gamma;
pub use itilde::{
    itilde, itilde_comparator_minus, itilde_comparator_plus, itilde_direct, itilde_substituted, ln_exp_moment,
    ln_itilde, ln_itilde_comparator_minus, LogQuadrature, SUBSTITUTION_THRESHOLD,
};
pub use quadrature::{
    adaptive_interval, adaptive_quad_01, dyadic_integrate, gauss_legendre, DyadicOutcome, QuadratureResult,
    DEFAULT_NODE_BUDGET, DEFAULT_TOL,
};
pub use weight::{ln_moment, moment, moment_with_budget, CustomWeight, Moment, RadialWeight, Smoothness};
