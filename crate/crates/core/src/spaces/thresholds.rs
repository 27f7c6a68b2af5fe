//! Exponent thresholds for smoothly bounded pseudoconvex domains.
//!
//! Everything here is direct substitution: the complex dimension `n`, the
//! Diederich-Fornaess exponent `η` and optionally a source exponent `r` go in,
//! the admissible `L^p` and Sobolev ranges come out.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport<T> {
    pub n: u32,
    pub eta: T,
    pub r: Option<T>,
    pub p: Option<T>,
    /// `B: L^r → A^p` for `p ∈ [2, 4n/(2n-η))` once `r >= 2/(1-η)`.
    pub p_upper_case1: T,
    /// `2/(1-η)`: source exponents at or above this fall under case 1.
    pub r_case1_min: T,
    /// `4nr/((2n-1)r+2)`, present when `2 < r < 2/(1-η)`.
    pub p_upper_case2: Option<T>,
    /// `ε = 2η/(2n-η)`: `F: A² → A^p` for `p ∈ [2, 2+ε)`.
    pub epsilon_main: T,
    /// `η/(4n)`: `F: A² → W^s` for `s` below this.
    pub sobolev_upper: T,
    /// `(p-2)/(2p)` at the supplied `p`.
    pub ap_to_ws_upper: Option<T>,
}

impl<T: Real> ThresholdReport<T> {
    /// Sobolev exponent bound `(p-2)/(2p)` gained from `F: A² → A^p`.
    pub fn ap_to_ws_upper_at(p: T) -> T {
        (p - T::lit(2.0)) / (T::lit(2.0) * p)
    }
}

/// Computes every threshold for the given dimension and exponent.
pub fn exponent_thresholds<T: Real>(n: u32, eta: T, r: Option<T>, p: Option<T>) -> Result<ThresholdReport<T>> {
    const OP: &str = "exponent_thresholds";
    if n < 1 {
        return Err(Error::domain(OP, "n >= 1 violated"));
    }
    if !(eta > T::zero() && eta < T::one()) {
        return Err(Error::domain(OP, format!("0 < eta < 1 violated (eta = {eta})")));
    }
    if let Some(r) = r {
        if !(r > T::lit(2.0)) {
            return Err(Error::domain(OP, format!("r > 2 violated (r = {r})")));
        }
    }
    if let Some(p) = p {
        if !(p >= T::lit(2.0)) || !p.is_finite() {
            return Err(Error::domain(OP, format!("p >= 2 violated (p = {p})")));
        }
    }
    let nn = T::int(n as i64);
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let denom = two * nn - eta;
    let r_case1_min = two / (T::one() - eta);
    let p_upper_case2 = r.and_then(|r| (r < r_case1_min).then(|| four * nn * r / ((two * nn - T::one()) * r + two)));
    Ok(ThresholdReport {
        n,
        eta,
        r,
        p,
        p_upper_case1: four * nn / denom,
        r_case1_min,
        p_upper_case2,
        epsilon_main: two * eta / denom,
        sobolev_upper: eta / (four * nn),
        ap_to_ws_upper: p.map(ThresholdReport::ap_to_ws_upper_at),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_half_exponent() {
        let t = exponent_thresholds(1, 0.5_f64, None, None).unwrap();
        assert!((t.epsilon_main - 2.0 / 3.0).abs() < 1e-15);
        assert!((t.p_upper_case1 - 8.0 / 3.0).abs() < 1e-15);
        assert!((t.sobolev_upper - 0.125).abs() < 1e-15);
        assert!(t.p_upper_case2.is_none());
    }

    #[test]
    fn case_two_requires_small_source_exponent() {
        let t = exponent_thresholds(2, 0.5_f64, Some(2.5), None).unwrap();
        assert!((t.r_case1_min - 4.0).abs() < 1e-15);
        assert!((t.p_upper_case2.unwrap() - 40.0 / 19.0).abs() < 1e-14);
        let t = exponent_thresholds(2, 0.5_f64, Some(4.0), None).unwrap();
        assert!(t.p_upper_case2.is_none());
    }

    #[test]
    fn sobolev_gain_from_lp() {
        let t = exponent_thresholds(1, 0.5_f64, None, Some(2.5)).unwrap();
        assert!((t.ap_to_ws_upper.unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(ThresholdReport::ap_to_ws_upper_at(2.0_f64), 0.0);
    }

    #[test]
    fn out_of_range_inputs_name_the_constraint() {
        let e = exponent_thresholds(0, 0.5_f64, None, None).unwrap_err();
        assert!(e.to_string().contains("n >= 1"));
        let e = exponent_thresholds(1, 1.0_f64, None, None).unwrap_err();
        assert!(e.to_string().contains("0 < eta < 1"));
        let e = exponent_thresholds(1, 0.3_f64, Some(2.0), None).unwrap_err();
        assert!(e.to_string().contains("r > 2"));
        let e = exponent_thresholds(1, 0.3_f64, None, Some(1.5)).unwrap_err();
        assert!(e.to_string().contains("p >= 2"));
    }
}
