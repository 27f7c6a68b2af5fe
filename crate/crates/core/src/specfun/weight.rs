use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::itilde::{itilde, ln_itilde, LogQuadrature};
use super::quadrature::{dyadic_integrate, QuadratureResult, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Regularity tag attached to a user supplied weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    Smooth,
    SingularAtOrigin,
}

/// A user supplied radial density on `(0, 1]`.
#[derive(Clone)]
pub struct CustomWeight<T> {
    pub label: String,
    pub smoothness: Smoothness,
    eval: Arc<dyn Fn(T) -> T + Send + Sync>,
}

impl<T> fmt::Debug for CustomWeight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomWeight")
            .field("label", &self.label)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

/// Positive radial density `w(r)` on `(0, 1]` defining `A²(𝔻*, w)`.
#[derive(Debug, Clone)]
pub enum RadialWeight<T> {
    /// `w(r) = r^ρ`; `ρ = 2` is the Hartogs triangle model.
    Power(T),
    /// `w(r) = e^{-2/r}`, the exponential Hartogs triangle model.
    ExpHartogs,
    Custom(CustomWeight<T>),
}

impl<T: Real> RadialWeight<T> {
    pub fn power(rho: T) -> Result<Self> {
        if rho >= T::zero() && rho.is_finite() {
            Ok(RadialWeight::Power(rho))
        } else {
            Err(Error::domain(
                "RadialWeight::power",
                format!("exponent must be >= 0, got {rho}"),
            ))
        }
    }

    /// The `|z|²` weight of the Hartogs triangle model.
    pub fn hartogs() -> Self {
        RadialWeight::Power(T::lit(2.0))
    }

    pub fn exp_hartogs() -> Self {
        RadialWeight::ExpHartogs
    }

    /// Wraps an arbitrary density. Positivity on `(0, 1]` is the caller's contract.
    pub fn custom<F>(label: impl Into<String>, smoothness: Smoothness, eval: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        RadialWeight::Custom(CustomWeight {
            label: label.into(),
            smoothness,
            eval: Arc::new(eval),
        })
    }

    pub fn eval(&self, r: T) -> T {
        match self {
            RadialWeight::Power(rho) => r.powf(*rho),
            RadialWeight::ExpHartogs => (T::lit(-2.0) / r).exp(),
            RadialWeight::Custom(c) => (c.eval)(r),
        }
    }

    /// `ln w(r)`, finite where `w` underflows.
    pub fn ln_eval(&self, r: T) -> T {
        match self {
            RadialWeight::Power(rho) => *rho * r.ln(),
            RadialWeight::ExpHartogs => T::lit(-2.0) / r,
            RadialWeight::Custom(c) => (c.eval)(r).ln(),
        }
    }

    /// Short identifier used in reports.
    pub fn describe(&self) -> String {
        match self {
            RadialWeight::Power(rho) => format!("power({rho})"),
            RadialWeight::ExpHartogs => "exp_hartogs".to_string(),
            RadialWeight::Custom(c) => format!("custom({})", c.label),
        }
    }
}

/// Either a finite value or the distinguished divergent outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Moment<Q> {
    Finite(Q),
    Infinite,
}

impl<Q> Moment<Q> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Moment::Infinite)
    }

    pub fn finite(self) -> Option<Q> {
        match self {
            Moment::Finite(q) => Some(q),
            Moment::Infinite => None,
        }
    }
}

/// `μ_w(t) = 2π ∫₀¹ r^{t+1} w(r) dr`.
///
/// Power weights use the closed form `2π/(t+ρ+2)` (flagged exact), the
/// exponential weight reduces to `2π Ĩ(t+1)`, custom weights are integrated
/// adaptively with a divergence verdict.
pub fn moment<T: Real>(w: &RadialWeight<T>, t: T, tol: T) -> Result<Moment<QuadratureResult<T>>> {
    match w {
        RadialWeight::Power(rho) => {
            let d = t + *rho + T::lit(2.0);
            if d > T::zero() {
                Ok(Moment::Finite(QuadratureResult::exact(T::TAU() / d)))
            } else {
                Ok(Moment::Infinite)
            }
        }
        RadialWeight::ExpHartogs => Ok(Moment::Finite(itilde(t + T::one(), tol)?.scaled(T::TAU()))),
        RadialWeight::Custom(c) => custom_moment(c, t, tol, DEFAULT_NODE_BUDGET),
    }
}

/// [`moment`] with an explicit node budget for the adaptive (custom weight) case.
pub fn moment_with_budget<T: Real>(
    w: &RadialWeight<T>,
    t: T,
    tol: T,
    node_budget: usize,
) -> Result<Moment<QuadratureResult<T>>> {
    match w {
        RadialWeight::Custom(c) => custom_moment(c, t, tol, node_budget),
        _ => moment(w, t, tol),
    }
}

fn custom_moment<T: Real>(
    c: &CustomWeight<T>,
    t: T,
    tol: T,
    node_budget: usize,
) -> Result<Moment<QuadratureResult<T>>> {
    if !(tol > T::zero()) {
        return Err(Error::domain("moment", format!("tol must be positive, got {tol}")));
    }
    let eval = c.eval.clone();
    let out = dyadic_integrate(move |r: T| r.powf(t + T::one()) * eval(r), tol, node_budget);
    if out.divergent {
        Ok(Moment::Infinite)
    } else {
        Ok(Moment::Finite(out.result.scaled(T::TAU())))
    }
}

/// `ln μ_w(t)`; the log form the operator tables are assembled from.
pub fn ln_moment<T: Real>(w: &RadialWeight<T>, t: T, tol: T) -> Result<Moment<LogQuadrature<T>>> {
    match w {
        RadialWeight::Power(rho) => {
            let d = t + *rho + T::lit(2.0);
            if d > T::zero() {
                Ok(Moment::Finite(LogQuadrature::exact_ln(T::TAU().ln() - d.ln())))
            } else {
                Ok(Moment::Infinite)
            }
        }
        RadialWeight::ExpHartogs => {
            let mut l = ln_itilde(t + T::one(), tol)?;
            l.ln_value = l.ln_value + T::TAU().ln();
            Ok(Moment::Finite(l))
        }
        RadialWeight::Custom(c) => Ok(match custom_moment(c, t, tol, DEFAULT_NODE_BUDGET)? {
            Moment::Infinite => Moment::Infinite,
            Moment::Finite(q) => Moment::Finite(LogQuadrature {
                ln_value: q.value.ln(),
                rel_error_estimate: q.rel_error(),
                nodes_used: q.nodes_used,
                converged: q.converged,
            }),
        }),
    }
}
