//! The moment function `Ĩ(x) = ∫₀¹ r^x e^{-2/r} dr` and its comparators.
//!
//! Two independent evaluation routes are provided:
//!
//! * the substituted route, `t = b/r`, which turns the integral into the
//!   gamma-type tail `b^{x+1} ∫_b^∞ t^{-x-2} e^{-t} dt` and is evaluated in
//!   log space (this is the only route used for `x <= -5`), and
//! * the direct route, dyadic adaptive quadrature on `(0, 1]`.

use serde::{Deserialize, Serialize};

use super::gamma::log_gamma;
use super::quadrature::{adaptive_interval, adaptive_quad_01, QuadratureResult, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Below this argument only the substituted route is used.
pub const SUBSTITUTION_THRESHOLD: f64 = -5.0;

/// A positive integral reported through its logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogQuadrature<T> {
    pub ln_value: T,
    /// Relative error of the underlying integral, i.e. absolute error of `ln_value`.
    pub rel_error_estimate: T,
    pub nodes_used: usize,
    pub converged: bool,
}

impl<T: Real> LogQuadrature<T> {
    /// Converts to a linear-scale result; overflow yields `converged = false`.
    pub fn to_linear(self) -> QuadratureResult<T> {
        let value = self.ln_value.exp();
        QuadratureResult {
            value,
            abs_error_estimate: value * self.rel_error_estimate,
            nodes_used: self.nodes_used,
            converged: self.converged && value.is_finite() && value > T::zero(),
        }
    }

    pub fn exact_ln(ln_value: T) -> Self {
        Self {
            ln_value,
            rel_error_estimate: T::zero(),
            nodes_used: 1,
            converged: true,
        }
    }
}

fn check_tol<T: Real>(op: &'static str, tol: T) -> Result<()> {
    if tol > T::zero() && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("tol must be positive, got {tol}")))
    }
}

/// `ln ∫₀¹ r^x e^{-b/r} dr` for any real `x` and `b > 0`, via `t = b/r`.
pub fn ln_exp_moment<T: Real>(x: T, b: T, tol: T) -> Result<LogQuadrature<T>> {
    check_tol("ln_exp_moment", tol)?;
    if !x.is_finite() {
        return Err(Error::domain("ln_exp_moment", format!("x must be finite, got {x}")));
    }
    if !(b > T::zero()) {
        return Err(Error::domain("ln_exp_moment", format!("b must be positive, got {b}")));
    }
    // Integrand t^k e^{-t} on [b, inf), k = -x - 2, scaled by its maximum.
    let k = -x - T::lit(2.0);
    let log_integrand = move |t: T| k * t.ln() - t;
    let peak = if k > b { k } else { b };
    let log_peak = log_integrand(peak);

    let mut step = k.abs().sqrt().max(T::one());
    let mut hi = peak + step;
    while log_integrand(hi) - log_peak > T::lit(-60.0) {
        step = step + step;
        hi = peak + step;
    }
    let scaled = move |t: T| (log_integrand(t) - log_peak).exp();

    let run = |tol: T| {
        let left = if peak > b {
            adaptive_interval(scaled, b, peak, tol, DEFAULT_NODE_BUDGET / 2)
        } else {
            QuadratureResult::exact(T::zero())
        };
        let right = adaptive_interval(scaled, peak, hi, tol, DEFAULT_NODE_BUDGET / 2);
        (
            left.value + right.value,
            left.abs_error_estimate + right.abs_error_estimate,
            left.nodes_used + right.nodes_used,
            left.converged && right.converged,
        )
    };
    let (mut j, mut err, mut nodes, mut ok) = run(tol);
    if j < T::one() && j > T::zero() {
        // The mixed tolerance is absolute below one; tighten it to stay relative.
        let again = run(tol * j);
        j = again.0;
        err = again.1;
        nodes += again.2;
        ok = again.3;
    }
    // Tail beyond `hi` is below e^{-60} of the peak; fold it into the error.
    err = err + T::lit(1e-26) * j;
    let rel = err / j;
    Ok(LogQuadrature {
        ln_value: (x + T::one()) * b.ln() + log_peak + j.ln(),
        rel_error_estimate: rel,
        nodes_used: nodes,
        converged: ok && rel <= tol,
    })
}

/// `ln Ĩ(x)` via the substituted route; finite for every real `x`.
pub fn ln_itilde<T: Real>(x: T, tol: T) -> Result<LogQuadrature<T>> {
    ln_exp_moment(x, T::lit(2.0), tol)
}

/// `Ĩ(x)` via the substituted route.
pub fn itilde_substituted<T: Real>(x: T, tol: T) -> Result<QuadratureResult<T>> {
    Ok(ln_itilde(x, tol)?.to_linear())
}

/// `Ĩ(x)` by dyadic adaptive quadrature directly on `(0, 1]`.
pub fn itilde_direct<T: Real>(x: T, tol: T) -> Result<QuadratureResult<T>> {
    check_tol("itilde_direct", tol)?;
    let two = T::lit(2.0);
    Ok(adaptive_quad_01(
        move |r: T| (x * r.ln() - two / r).exp(),
        tol,
        DEFAULT_NODE_BUDGET,
    ))
}

/// `Ĩ(x) = ∫₀¹ r^x e^{-2/r} dr`.
///
/// Uses the substituted route for `x <= -5` and the direct route otherwise.
/// Values too large for `T` come back with `converged = false`.
pub fn itilde<T: Real>(x: T, tol: T) -> Result<QuadratureResult<T>> {
    if x <= T::lit(SUBSTITUTION_THRESHOLD) {
        itilde_substituted(x, tol)
    } else {
        itilde_direct(x, tol)
    }
}

/// Comparator `1/(x+1)` for `Ĩ(x)` as `x → +∞`.
pub fn itilde_comparator_plus<T: Real>(x: T) -> Result<T> {
    if !(x > -T::one()) {
        return Err(Error::domain(
            "itilde_comparator_plus",
            format!("x must exceed -1, got {x}"),
        ));
    }
    Ok((x + T::one()).recip())
}

/// `ln[(1/2)^{x-1} Γ(x-1)]`, the log of the comparator for `Ĩ(-x)`.
pub fn ln_itilde_comparator_minus<T: Real>(x: T) -> Result<T> {
    if !(x > T::one()) {
        return Err(Error::domain(
            "itilde_comparator_minus",
            format!("x must exceed 1, got {x}"),
        ));
    }
    let shifted = x - T::one();
    Ok(-shifted * T::LN_2() + log_gamma(shifted)?)
}

/// Comparator `(1/2)^{x-1} Γ(x-1)` for `Ĩ(-x)` as `x → +∞`, assembled in log space.
pub fn itilde_comparator_minus<T: Real>(x: T) -> Result<T> {
    Ok(ln_itilde_comparator_minus(x)?.exp())
}
