//! Weighted Bergman model spaces on the punctured disk and exponent thresholds.

pub mod exact;
mod space;
mod thresholds;

pub use space::{IndexSet, ModelSpace};
pub use thresholds::{exponent_thresholds, ThresholdReport};
