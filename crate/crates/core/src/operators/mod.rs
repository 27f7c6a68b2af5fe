//! The Bergman projection, the Friedrichs operator and its square.

mod friedrichs;
mod probe;
mod projection;
mod sums;

pub use friedrichs::{gain_chain_constant, FriedrichsMap, RankEstimate, SpectrumEntry, SpectrumReport, RANK_TOL};
pub use probe::{norm_probe, norm_probe_with, ProbeReport, ProbeSettings};
pub use projection::{bergman_project, project_samples, PolarGrid, Projection};
pub use sums::{f_squared_hinfty_series, hinfty_bound_series, PartialSumReport, SeriesTerm};
