//! Bergman projection and the Friedrichs operator on radially weighted model
//! spaces of the punctured disk, with two-variable quadrature oracles for the
//! Hartogs triangle and its exponential variant.
//!
//! Everything numeric is generic over [`Real`]; the `*64` and `*32` aliases
//! below fix the scalar. Exact rational values for the power-weight family live
//! in [`spaces::exact`].
//!
//! ```
//! use friedrichs_lab::{FriedrichsMap64, LaurentSeries64, ModelSpace64};
//! use num_complex::Complex;
//! use std::sync::Arc;
//!
//! let map = FriedrichsMap64::new(Arc::new(ModelSpace64::hartogs()), 4).unwrap();
//! let z = LaurentSeries64::monomial(1, Complex::new(1.0, 0.0));
//! let f2 = map.apply_squared(&z).unwrap();
//! assert!((f2.coefficient(1).re - 0.75).abs() < 1e-12);
//! ```

// Argument guards are written `!(x >= lo)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod operators;
pub mod quad2d;
pub mod scalar;
pub mod series;
pub mod spaces;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use operators::{FriedrichsMap, ProbeReport, SpectrumReport};
pub use quad2d::{DomainDescriptor2D, DomainKind};
pub use scalar::Real;
pub use series::LaurentSeries;
pub use spaces::{IndexSet, ModelSpace};
pub use specfun::{Moment, RadialWeight};

pub type LaurentSeries64 = LaurentSeries<f64>;
pub type LaurentSeries32 = LaurentSeries<f32>;
pub type ModelSpace64 = ModelSpace<f64>;
pub type ModelSpace32 = ModelSpace<f32>;
pub type FriedrichsMap64 = FriedrichsMap<f64>;
pub type FriedrichsMap32 = FriedrichsMap<f32>;
pub type RadialWeight64 = RadialWeight<f64>;
pub type RadialWeight32 = RadialWeight<f32>;
