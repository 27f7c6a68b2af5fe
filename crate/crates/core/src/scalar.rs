//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar the quadrature, series and operator code is generic over.
///
/// Implemented for `f32` and `f64`. All tolerances quoted in tests assume `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FftNum
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self;

    /// Converts an integer into this scalar type.
    fn int(n: i64) -> Self {
        Self::lit(n as f64)
    }

    /// Lossy view as `f64` (used for cache keys and reporting).
    fn as_f64(self) -> f64;

    /// Significant decimal digits needed for an exact text round trip.
    const ROUND_TRIP_DIGITS: usize;
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
    const ROUND_TRIP_DIGITS: usize = 17;
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
    const ROUND_TRIP_DIGITS: usize = 9;
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn log_add_exp<T: Real>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_matches_direct_sum() {
        let v: f64 = log_add_exp(2.0_f64.ln(), 3.0_f64.ln());
        assert!((v - 5.0_f64.ln()).abs() < 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 1.5), 1.5);
        let big = log_add_exp(800.0_f64, 800.0);
        assert!((big - (800.0 + 2.0_f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn literal_conversion_is_exact_for_f64() {
        assert_eq!(<f64 as Real>::lit(0.1), 0.1);
        assert_eq!(<f32 as Real>::int(-3), -3.0f32);
    }
}
