use num_complex::Complex;

use super::DomainDescriptor2D;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::quadrature::{adaptive_interval, composite_gauss_rule, tolerance_met};
use crate::specfun::{QuadratureResult, DEFAULT_NODE_BUDGET};

/// Resolution of the inner `(r₁, θ₁, θ₂)` tensor rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiberResolution {
    pub r1_panels: usize,
    pub r1_nodes: usize,
    pub theta1: usize,
    pub theta2: usize,
}

impl FiberResolution {
    pub const COARSE: Self = Self {
        r1_panels: 2,
        r1_nodes: 8,
        theta1: 16,
        theta2: 32,
    };

    pub fn refined(self) -> Self {
        Self {
            r1_panels: 2 * self.r1_panels,
            r1_nodes: self.r1_nodes,
            theta1: 2 * self.theta1,
            theta2: 2 * self.theta2,
        }
    }

    fn nodes(&self) -> usize {
        self.r1_panels * self.r1_nodes * self.theta1 * self.theta2
    }
}

/// `∫ |f|^p` over the fiber and the circle `|z₂| = r₂`, times `r₂`.
fn shell_integral<T, F>(domain: &DomainDescriptor2D, f: &F, p: T, r2: T, res: FiberResolution) -> T
where
    T: Real,
    F: Fn(Complex<T>, Complex<T>) -> Complex<T>,
{
    let big_r = domain.fiber_radius(r2);
    if big_r == T::zero() {
        return T::zero();
    }
    let (r1s, w1s) = composite_gauss_rule(T::zero(), big_r, res.r1_panels, res.r1_nodes);
    let h1 = T::TAU() / T::int(res.theta1 as i64);
    let h2 = T::TAU() / T::int(res.theta2 as i64);
    let mut total = T::zero();
    for k in 0..res.theta2 {
        let z2 = Complex::from_polar(r2, h2 * T::int(k as i64));
        let mut ring = T::zero();
        for (&r1, &w1) in r1s.iter().zip(&w1s) {
            let mut circle = T::zero();
            for j in 0..res.theta1 {
                let z1 = Complex::from_polar(r1, h1 * T::int(j as i64));
                circle = circle + f(z1, z2).norm().powf(p);
            }
            ring = ring + w1 * r1 * circle;
        }
        total = total + ring;
    }
    total * h1 * h2 * r2
}

/// `∫_{Ω_c} |f|^p dV` on the truncated domain `Ω_c = Ω ∩ {c <= |z₂| <= 1-c}`.
///
/// Radial `r₂` integration is adaptive; the fiber and both angles use a tensor
/// rule evaluated at two resolutions, whose difference enters the error
/// estimate. `cutoff = 0` integrates the whole domain (the integrand must then
/// be integrable near `|z₂| ∈ {0, 1}`).
pub fn lp_norm_2d<T, F>(domain: &DomainDescriptor2D, f: F, p: T, cutoff: T, tol: T) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(Complex<T>, Complex<T>) -> Complex<T>,
{
    if !(p >= T::one()) || !p.is_finite() {
        return Err(Error::domain("lp_norm_2d", format!("p >= 1 violated (p = {p})")));
    }
    if !(cutoff >= T::zero() && cutoff < T::lit(0.5)) {
        return Err(Error::domain(
            "lp_norm_2d",
            format!("cutoff in [0, 1/2) violated (cutoff = {cutoff})"),
        ));
    }
    if !(tol > T::zero()) {
        return Err(Error::domain("lp_norm_2d", format!("tol must be positive, got {tol}")));
    }
    let (a, b) = (cutoff, T::one() - cutoff);
    let run = |res: FiberResolution| {
        let q = adaptive_interval(
            |r2| shell_integral(domain, &f, p, r2, res),
            a,
            b,
            tol,
            DEFAULT_NODE_BUDGET,
        );
        QuadratureResult {
            nodes_used: q.nodes_used * res.nodes(),
            ..q
        }
    };
    let coarse = run(FiberResolution::COARSE);
    let fine = run(FiberResolution::COARSE.refined());
    let err = fine.abs_error_estimate + (fine.value - coarse.value).abs();
    Ok(QuadratureResult {
        value: fine.value,
        abs_error_estimate: err,
        nodes_used: coarse.nodes_used + fine.nodes_used,
        converged: fine.converged && fine.value.is_finite() && tolerance_met(err, fine.value, tol),
    })
}
