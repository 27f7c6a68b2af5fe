//! Two-variable Hartogs-type domains: `L^p` quadrature, the brute-force
//! Bergman oracle and the truncation probe for the boundary counterexample.

mod brute;
mod counterexample;
mod domain;
mod lpnorm;

pub use brute::{brute_force_friedrichs, BruteForceGrid, BruteForceResult, MAX_Z1_POWER};
pub use counterexample::{
    counterexample_probe, default_cutoffs, richardson_limit, CounterexampleReport, CounterexampleRow, SequenceVerdict,
    CAUCHY_TOL,
};
pub use domain::{DomainDescriptor2D, DomainKind};
pub use lpnorm::{lp_norm_2d, FiberResolution};
