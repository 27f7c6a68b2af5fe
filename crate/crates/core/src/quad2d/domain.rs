use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Real;
use crate::spaces::ModelSpace;
use crate::specfun::{ln_exp_moment, RadialWeight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    /// `{|z₁| < |z₂| < 1}`.
    Hartogs,
    /// `{|z₁| < e^{-1/|z₂|}, 0 < |z₂| < 1}`.
    ExpHartogs,
}

/// A Hartogs-type domain `{|z₁| < R(|z₂|), z₂ ∈ 𝔻*}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainDescriptor2D {
    pub kind: DomainKind,
}

impl DomainDescriptor2D {
    pub fn hartogs() -> Self {
        Self {
            kind: DomainKind::Hartogs,
        }
    }

    pub fn exp_hartogs() -> Self {
        Self {
            kind: DomainKind::ExpHartogs,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DomainKind::Hartogs => "hartogs",
            DomainKind::ExpHartogs => "exp_hartogs",
        }
    }

    /// `R(r₂)`.
    pub fn fiber_radius<T: Real>(&self, r2: T) -> T {
        self.ln_fiber_radius(r2).exp()
    }

    pub fn ln_fiber_radius<T: Real>(&self, r2: T) -> T {
        match self.kind {
            DomainKind::Hartogs => r2.ln(),
            DomainKind::ExpHartogs => -r2.recip(),
        }
    }

    /// `π R(r₂)²`.
    pub fn fiber_area<T: Real>(&self, r2: T) -> T {
        T::PI() * (T::lit(2.0) * self.ln_fiber_radius(r2)).exp()
    }

    /// The one-variable weight `R(r)²` that `z₂`-only functions see after fiber integration.
    pub fn reduced_weight<T: Real>(&self) -> RadialWeight<T> {
        match self.kind {
            DomainKind::Hartogs => RadialWeight::hartogs(),
            DomainKind::ExpHartogs => RadialWeight::exp_hartogs(),
        }
    }

    pub fn reduced_space<T: Real>(&self) -> ModelSpace<T> {
        ModelSpace::new(self.reduced_weight())
    }

    /// Whether `z₁^a z₂^b` is square integrable on the domain.
    pub fn is_admissible(&self, a: u32, b: i32) -> bool {
        match self.kind {
            DomainKind::Hartogs => 2 * a as i64 + 2 * b as i64 + 4 > 0,
            DomainKind::ExpHartogs => true,
        }
    }

    /// `ln ‖z₁^a z₂^b‖²_{L²}`.
    ///
    /// Fiber integration gives `2π²/(a+1) ∫₀¹ r^{2b+1} R(r)^{2a+2} dr`.
    pub fn ln_monomial_norm_sq<T: Real>(&self, a: u32, b: i32, tol: T) -> Result<T> {
        let aa = T::int(a as i64);
        let bb = T::int(b as i64);
        let two = T::lit(2.0);
        let head = (two * T::PI() * T::PI() / (aa + T::one())).ln();
        Ok(match self.kind {
            DomainKind::Hartogs => head - (two * aa + two * bb + T::lit(4.0)).ln(),
            DomainKind::ExpHartogs => head + ln_exp_moment(two * bb + T::one(), two * aa + two, tol)?.ln_value,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::itilde;
    use std::f64::consts::PI;

    #[test]
    fn fiber_geometry() {
        let h = DomainDescriptor2D::hartogs();
        let e = DomainDescriptor2D::exp_hartogs();
        assert!((h.fiber_radius(0.3_f64) - 0.3).abs() < 1e-16);
        assert!((e.fiber_radius(0.5_f64) - (-2.0_f64).exp()).abs() < 1e-16);
        let mut prev = 0.0;
        for k in 1..100 {
            let r = k as f64 / 100.0;
            let v = e.fiber_radius(r);
            assert!(v > prev && v < 1.0);
            prev = v;
            assert!((e.fiber_area(r) - PI * v * v).abs() < 1e-15);
        }
    }

    #[test]
    fn monomial_norms() {
        let h = DomainDescriptor2D::hartogs();
        // ‖1‖² = Vol(ℍ) = π²/2.
        assert!((h.ln_monomial_norm_sq(0, 0, 1e-12_f64).unwrap().exp() - PI * PI / 2.0).abs() < 1e-14);
        assert!(h.is_admissible(0, -1) && !h.is_admissible(0, -2) && h.is_admissible(1, -2));
        let e = DomainDescriptor2D::exp_hartogs();
        let v = e.ln_monomial_norm_sq(0, 0, 1e-12_f64).unwrap().exp();
        assert!((v / (2.0 * PI * PI * itilde(1.0, 1e-13).unwrap().value) - 1.0).abs() < 1e-10);
    }
}
