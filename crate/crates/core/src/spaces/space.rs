use std::collections::HashMap;
use std::sync::RwLock;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{
    ln_moment, moment_with_budget, LogQuadrature, Moment, QuadratureResult, RadialWeight, DEFAULT_TOL,
};

/// Which Laurent degrees `n` have `z^n` square integrable against the weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexSet {
    /// All `n >= min`.
    AtLeast(i32),
    /// Every integer.
    All,
    /// Decided per degree by a divergence test on the moment.
    Probed,
}

// Node budgets tried in turn when probing a custom weight for admissibility.
const PROBE_BUDGETS: [usize; 3] = [1 << 16, 1 << 18, 1 << 20];

/// The weighted Bergman space `A²(𝔻*, w)` with its monomial basis.
///
/// Radial moments are memoized; the cache is safe to fill from several threads.
#[derive(Debug)]
pub struct ModelSpace<T: Real> {
    weight: RadialWeight<T>,
    tol: T,
    index_set: IndexSet,
    moments: RwLock<HashMap<u64, Moment<LogQuadrature<T>>>>,
}

impl<T: Real> Clone for ModelSpace<T> {
    fn clone(&self) -> Self {
        let cache = self.moments.read().map(|m| m.clone()).unwrap_or_default();
        Self {
            weight: self.weight.clone(),
            tol: self.tol,
            index_set: self.index_set,
            moments: RwLock::new(cache),
        }
    }
}

impl<T: Real> ModelSpace<T> {
    /// Builds the space for `weight` with the default quadrature tolerance.
    pub fn new(weight: RadialWeight<T>) -> Self {
        Self::with_tolerance(weight, T::lit(DEFAULT_TOL))
    }

    pub fn with_tolerance(weight: RadialWeight<T>, tol: T) -> Self {
        let index_set = match &weight {
            RadialWeight::Power(rho) => {
                // μ(2n) < ∞  ⇔  2n + ρ + 2 > 0
                let bound = -(*rho + T::lit(2.0)) / T::lit(2.0);
                let floor = bound.floor().to_i32().unwrap_or(i32::MIN / 2);
                IndexSet::AtLeast(floor + 1)
            }
            RadialWeight::ExpHartogs => IndexSet::All,
            RadialWeight::Custom(_) => IndexSet::Probed,
        };
        Self {
            weight,
            tol,
            index_set,
            moments: RwLock::new(HashMap::new()),
        }
    }

    /// `A²(𝔻*, |z|²)`, the reduction of the Hartogs triangle.
    pub fn hartogs() -> Self {
        Self::new(RadialWeight::hartogs())
    }

    /// `A²(𝔻*, e^{-2/|z|})`, the reduction of the exponential Hartogs triangle.
    pub fn exp_hartogs() -> Self {
        Self::new(RadialWeight::exp_hartogs())
    }

    pub fn weight(&self) -> &RadialWeight<T> {
        &self.weight
    }

    pub fn tolerance(&self) -> T {
        self.tol
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    /// Lowest admissible degree, if the index set is bounded below.
    pub fn min_degree(&self) -> Option<i32> {
        match self.index_set {
            IndexSet::AtLeast(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_admissible(&self, n: i32) -> bool {
        match self.index_set {
            IndexSet::AtLeast(m) => n >= m,
            IndexSet::All => true,
            IndexSet::Probed => matches!(self.ln_moment(T::int(2 * n as i64)), Ok(Moment::Finite(_))),
        }
    }

    /// Admissible degrees in `lo..=hi`.
    pub fn admissible_in(&self, lo: i32, hi: i32) -> Vec<i32> {
        (lo..=hi).filter(|&n| self.is_admissible(n)).collect()
    }

    /// Cached `ln μ(t)`.
    pub fn ln_moment(&self, t: T) -> Result<Moment<LogQuadrature<T>>> {
        let key = t.as_f64().to_bits();
        if let Some(hit) = self.moments.read().ok().and_then(|m| m.get(&key).copied()) {
            return Ok(hit);
        }
        let value = match &self.weight {
            RadialWeight::Custom(_) => self.probe_custom(t)?,
            w => ln_moment(w, t, self.tol)?,
        };
        if let Ok(mut cache) = self.moments.write() {
            cache.entry(key).or_insert(value);
        }
        Ok(value)
    }

    fn probe_custom(&self, t: T) -> Result<Moment<LogQuadrature<T>>> {
        let mut last = None;
        for budget in PROBE_BUDGETS {
            match moment_with_budget(&self.weight, t, self.tol, budget)? {
                Moment::Infinite => return Ok(Moment::Infinite),
                Moment::Finite(q) if q.converged => {
                    return Ok(Moment::Finite(LogQuadrature {
                        ln_value: q.value.ln(),
                        rel_error_estimate: q.rel_error(),
                        nodes_used: q.nodes_used,
                        converged: true,
                    }))
                }
                Moment::Finite(q) => last = Some(q),
            }
        }
        Err(Error::NotConverged {
            context: format!(
                "moment {t} of {} undecided after escalating budgets (last estimate {:?})",
                self.weight.describe(),
                last.map(|q| q.value)
            ),
        })
    }

    /// `μ(t) = 2π ∫₀¹ r^{t+1} w(r) dr`, served from the cache.
    pub fn moment(&self, t: T) -> Result<Moment<QuadratureResult<T>>> {
        Ok(match self.ln_moment(t)? {
            Moment::Infinite => Moment::Infinite,
            Moment::Finite(l) => Moment::Finite(l.to_linear()),
        })
    }

    fn finite_ln_moment(&self, t: T) -> Result<T> {
        match self.ln_moment(t)? {
            Moment::Finite(l) => Ok(l.ln_value),
            Moment::Infinite => Err(Error::InfiniteMoment { t: t.as_f64() }),
        }
    }

    /// `ln c_n² = -ln μ(2n)`.
    pub fn ln_norming_constant_sq(&self, n: i32) -> Result<T> {
        match self.ln_moment(T::int(2 * n as i64))? {
            Moment::Finite(l) => Ok(-l.ln_value),
            Moment::Infinite => Err(Error::Inadmissible { degree: n }),
        }
    }

    /// `c_n²`, so that `c_n z^n` is a unit vector.
    pub fn norming_constant_sq(&self, n: i32) -> Result<T> {
        Ok(self.ln_norming_constant_sq(n)?.exp())
    }

    /// `c_n = μ(2n)^{-1/2}`.
    pub fn norming_constant(&self, n: i32) -> Result<T> {
        Ok((self.ln_norming_constant_sq(n)? * T::lit(0.5)).exp())
    }

    /// Truncated kernel `Σ_{|n| <= truncation} c_n² (z w̄)^n` over admissible `n`.
    pub fn bergman_kernel(&self, z: Complex<T>, wbar: Complex<T>, truncation: u32) -> Result<Complex<T>> {
        let u = kernel_argument(z, wbar)?;
        let ln_abs = u.norm().ln();
        let arg = u.arg();
        let t = truncation as i32;
        let mut sum = Complex::new(T::zero(), T::zero());
        // Ascending degree order keeps the summation deterministic.
        for n in -t..=t {
            if !self.is_admissible(n) {
                continue;
            }
            let ln_c2 = self.ln_norming_constant_sq(n)?;
            let nn = T::int(n as i64);
            sum = sum + Complex::from_polar((ln_c2 + nn * ln_abs).exp(), nn * arg);
        }
        Ok(sum)
    }

    /// Closed form `(1/π) (z w̄)^{-1} (1 - z w̄)^{-2}`, available for the `|z|²` weight only.
    pub fn bergman_kernel_closed_form(&self, z: Complex<T>, wbar: Complex<T>) -> Result<Complex<T>> {
        match self.weight {
            RadialWeight::Power(rho) if rho == T::lit(2.0) => {
                let u = kernel_argument(z, wbar)?;
                let one = Complex::new(T::one(), T::zero());
                let d = one - u;
                Ok((u * d * d).inv() * T::FRAC_1_PI())
            }
            _ => Err(Error::domain(
                "bergman_kernel_closed_form",
                format!("closed form only for power(2), not {}", self.weight.describe()),
            )),
        }
    }

    /// `‖z^n‖_{L^p(w)} = μ(np)^{1/p}`, `+∞` when the moment diverges.
    pub fn monomial_lp_norm(&self, n: i32, p: T) -> Result<T> {
        if !(p >= T::one()) {
            return Err(Error::domain("monomial_lp_norm", format!("p must be >= 1, got {p}")));
        }
        Ok(match self.ln_moment(T::int(n as i64) * p)? {
            Moment::Infinite => T::infinity(),
            Moment::Finite(l) => (l.ln_value / p).exp(),
        })
    }

    /// Sharp `K_n` in `|a_n| <= K_n ‖f‖_{L¹(w)}`, namely `1/μ(n)`.
    ///
    /// Integrating the circle bound `|a_n| r^n <= (2π)^{-1} ∮ |f|` against
    /// `r w(r) dr` gives `|a_n| · ∫₀¹ r^{n+1} w(r) dr <= (2π)^{-1} ‖f‖_{L¹(w)}`.
    pub fn coefficient_bound_constant(&self, n: i32) -> Result<T> {
        Ok((-self.finite_ln_moment(T::int(n as i64))?).exp())
    }
}

fn kernel_argument<T: Real>(z: Complex<T>, wbar: Complex<T>) -> Result<Complex<T>> {
    let zero = T::zero();
    if z.norm() == zero || wbar.norm() == zero {
        return Err(Error::domain("bergman_kernel", "points must lie in the punctured disk"));
    }
    if !(z.norm() < T::one() && wbar.norm() < T::one()) {
        return Err(Error::domain("bergman_kernel", "points must satisfy |z|, |w| < 1"));
    }
    let u = z * wbar;
    if u.norm() >= T::one() {
        return Err(Error::domain("bergman_kernel", "|z w̄| must be < 1"));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{itilde, Smoothness};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn index_sets_of_builtin_weights() {
        assert_eq!(ModelSpace::<f64>::hartogs().index_set(), IndexSet::AtLeast(-1));
        assert_eq!(ModelSpace::<f64>::exp_hartogs().index_set(), IndexSet::All);
        let disk = ModelSpace::new(RadialWeight::<f64>::power(0.0).unwrap());
        assert_eq!(disk.index_set(), IndexSet::AtLeast(0));
        assert!(!disk.is_admissible(-1));
        let odd = ModelSpace::new(RadialWeight::<f64>::power(1.0).unwrap());
        // 2n + 3 > 0  ⇔  n >= -1
        assert_eq!(odd.min_degree(), Some(-1));
    }

    #[test]
    fn hartogs_norming_constants() {
        let s = ModelSpace::<f64>::hartogs();
        assert!((s.norming_constant_sq(0).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!((s.norming_constant_sq(-1).unwrap() - 1.0 / PI).abs() < 1e-15);
        for k in -1..=20 {
            let c2 = s.norming_constant_sq(k).unwrap();
            assert!((c2 - (k as f64 + 2.0) / PI).abs() < 1e-13 * c2, "k = {k}");
            let mu = s.moment(2.0 * k as f64).unwrap().finite().unwrap().value;
            assert!((c2 * mu - 1.0).abs() < 1e-12);
        }
        assert_eq!(s.norming_constant_sq(-2), Err(Error::Inadmissible { degree: -2 }));
    }

    #[test]
    fn exp_norming_constant_matches_itilde() {
        let s = ModelSpace::<f64>::exp_hartogs();
        let expected = 1.0 / (2.0 * PI * itilde(7.0_f64, 1e-12).unwrap().value);
        let c2 = s.norming_constant_sq(3).unwrap();
        assert!((c2 / expected - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hartogs_kernel_converges_to_closed_form() {
        let s = ModelSpace::<f64>::hartogs();
        let closed = s.bergman_kernel_closed_form(c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        let expected = 1.0 / PI / 0.25 / (0.75 * 0.75);
        assert!((closed.re - expected).abs() < 1e-13 && closed.im == 0.0);
        let partial = s.bergman_kernel(c(0.5, 0.0), c(0.5, 0.0), 60).unwrap();
        assert!((partial - closed).norm() < 1e-10);
    }

    #[test]
    fn diagonal_kernel_is_real_positive() {
        for s in [ModelSpace::<f64>::hartogs(), ModelSpace::exp_hartogs()] {
            let z = c(0.3, -0.4);
            let k = s.bergman_kernel(z, z.conj(), 40).unwrap();
            assert!(k.re > 0.0 && k.im.abs() < 1e-12 * k.re);
        }
    }

    #[test]
    fn exp_kernel_stabilizes_on_the_diagonal() {
        let s = ModelSpace::<f64>::exp_hartogs();
        let mut prev = s.bergman_kernel(c(0.6, 0.0), c(0.6, 0.0), 10).unwrap().re;
        let mut settled = None;
        for k in 11..=80 {
            let v = s.bergman_kernel(c(0.6, 0.0), c(0.6, 0.0), k).unwrap().re;
            if ((v - prev) / v).abs() < 1e-10 {
                settled = Some(k);
                break;
            }
            prev = v;
        }
        assert!(settled.is_some());
    }

    #[test]
    fn kernel_domain_errors() {
        let s = ModelSpace::<f64>::hartogs();
        assert!(s.bergman_kernel(c(0.0, 0.0), c(0.5, 0.0), 5).is_err());
        assert!(s.bergman_kernel(c(1.0, 0.0), c(0.5, 0.0), 5).is_err());
        assert!(ModelSpace::<f64>::exp_hartogs()
            .bergman_kernel_closed_form(c(0.5, 0.0), c(0.5, 0.0))
            .is_err());
    }

    #[test]
    fn monomial_norms_on_hartogs_model() {
        let s = ModelSpace::<f64>::hartogs();
        let n3 = s.monomial_lp_norm(-1, 3.0).unwrap();
        assert!((n3 - (2.0 * PI).powf(1.0 / 3.0)).abs() < 1e-14);
        assert_eq!(s.monomial_lp_norm(-1, 4.0).unwrap(), f64::INFINITY);
        let n2 = s.monomial_lp_norm(1, 2.0).unwrap();
        assert!((n2 - (PI / 3.0).sqrt()).abs() < 1e-14);
        for n in -1..6 {
            let l2 = s.monomial_lp_norm(n, 2.0).unwrap();
            assert!((l2 * s.norming_constant(n).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(s.monomial_lp_norm(0, 0.5).is_err());
    }

    #[test]
    fn coefficient_bounds_on_hartogs_model() {
        let s = ModelSpace::<f64>::hartogs();
        assert!((s.coefficient_bound_constant(-1).unwrap() - 3.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((s.coefficient_bound_constant(0).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!((s.coefficient_bound_constant(1).unwrap() - 5.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(matches!(
            s.coefficient_bound_constant(-4),
            Err(Error::InfiniteMoment { .. })
        ));
    }

    #[test]
    fn custom_weight_probing_and_scaling() {
        let base = ModelSpace::new(RadialWeight::custom("r^2", Smoothness::Smooth, |r: f64| r * r));
        assert!(base.is_admissible(-1));
        assert!(!base.is_admissible(-2));
        let lambda = 4.5;
        let scaled = ModelSpace::new(RadialWeight::custom("4.5 r^2", Smoothness::Smooth, move |r: f64| {
            lambda * r * r
        }));
        for n in -1..4 {
            let mu_a = base.moment(2.0 * n as f64).unwrap().finite().unwrap().value;
            let mu_b = scaled.moment(2.0 * n as f64).unwrap().finite().unwrap().value;
            assert!((mu_b / mu_a - lambda).abs() < 1e-9);
            let ca = base.norming_constant_sq(n).unwrap();
            let cb = scaled.norming_constant_sq(n).unwrap();
            assert!((ca / cb - lambda).abs() < 1e-9);
            let mu0_a = base.moment(0.0).unwrap().finite().unwrap().value;
            let mu0_b = scaled.moment(0.0).unwrap().finite().unwrap().value;
            assert!((mu0_a * ca - mu0_b * cb).abs() < 1e-9);
        }
    }

    #[test]
    fn cache_is_shared_across_threads() {
        let s = ModelSpace::<f64>::exp_hartogs();
        std::thread::scope(|scope| {
            for _ in 0..4 {
                scope.spawn(|| {
                    for n in -5..=5 {
                        s.norming_constant_sq(n).unwrap();
                    }
                });
            }
        });
        let a = s.norming_constant_sq(4).unwrap();
        let fresh = ModelSpace::<f64>::exp_hartogs().norming_constant_sq(4).unwrap();
        assert_eq!(a, fresh);
    }
}
