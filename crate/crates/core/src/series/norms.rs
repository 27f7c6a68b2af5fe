use std::cell::{Cell, RefCell};

use num_complex::Complex;
use rustfft::FftPlanner;

use super::LaurentSeries;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spaces::ModelSpace;
use crate::specfun::{dyadic_integrate, QuadratureResult, DEFAULT_NODE_BUDGET};

// Angular trapezoid sizes are capped here; beyond it the result is flagged.
const MAX_ANGLES: usize = 1 << 15;

fn check_admissible<T: Real>(space: &ModelSpace<T>, s: &LaurentSeries<T>) -> Result<()> {
    match s.terms().map(|(n, _)| n).find(|&n| !space.is_admissible(n)) {
        Some(degree) => Err(Error::Inadmissible { degree }),
        None => Ok(()),
    }
}

/// `‖s‖_{A²} = (Σ |a_n|² μ(2n))^{1/2}` by Parseval.
pub fn l2_norm<T: Real>(space: &ModelSpace<T>, s: &LaurentSeries<T>) -> Result<T> {
    check_admissible(space, s)?;
    let mut sum = T::zero();
    for (n, a) in s.terms() {
        sum = sum + a.norm_sqr() * (-space.ln_norming_constant_sq(n)?).exp();
    }
    Ok(sum.sqrt())
}

/// `⟨u, v⟩ = Σ u_n conj(v_n) μ(2n)`, linear in `u`.
pub fn inner_product<T: Real>(space: &ModelSpace<T>, u: &LaurentSeries<T>, v: &LaurentSeries<T>) -> Result<Complex<T>> {
    check_admissible(space, u)?;
    check_admissible(space, v)?;
    let mut sum = Complex::default();
    for (n, a) in u.terms() {
        let b = v.coefficient(n);
        if b != Complex::default() {
            sum = sum + a * b.conj() * (-space.ln_norming_constant_sq(n)?).exp();
        }
    }
    Ok(sum)
}

/// `∫_{𝔻*} |s|^p w dA` by adaptive radial quadrature of FFT-sampled circle means.
///
/// A divergent integral is reported as `value = +∞` with `converged = true`.
pub fn lp_integral<T: Real>(space: &ModelSpace<T>, s: &LaurentSeries<T>, p: T, tol: T) -> Result<QuadratureResult<T>> {
    if !(p >= T::one()) || !p.is_finite() {
        return Err(Error::domain(
            "lp_integral",
            format!("p must be a finite value >= 1, got {p}"),
        ));
    }
    if !(tol > T::zero()) {
        return Err(Error::domain("lp_integral", format!("tol must be positive, got {tol}")));
    }
    let (lo, hi) = match (s.min_degree(), s.max_degree()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Ok(QuadratureResult::exact(T::zero())),
    };
    let span = (hi - lo) as usize;
    let n0 = (4 * span + 16).next_power_of_two();
    let shifted: Vec<(usize, Complex<T>)> = s.terms().map(|(n, c)| ((n - lo) as usize, c)).collect();
    let planner = RefCell::new(FftPlanner::<T>::new());
    let angular_nodes = Cell::new(0usize);
    let angular_rel_err = Cell::new(T::zero());
    let angular_capped = Cell::new(false);
    let ang_tol = tol * T::lit(0.1);
    let weight = space.weight();
    let plo = p * T::int(lo as i64);

    // Mean of |g(r e^{iθ})|^p, g = z^{-lo} s, by trapezoid with doubling.
    let circle_mean = |r: T| -> T {
        let ln_r = r.ln();
        let trapezoid = |n: usize| -> T {
            let mut buf = vec![Complex::default(); n];
            for &(j, c) in &shifted {
                buf[j] = c * (T::int(j as i64) * ln_r).exp();
            }
            planner.borrow_mut().plan_fft_inverse(n).process(&mut buf);
            let sum: T = buf.iter().map(|v| v.norm().powf(p)).sum();
            sum / T::int(n as i64)
        };
        let mut n = n0;
        let mut m = trapezoid(n);
        let mut used = n;
        loop {
            if n >= MAX_ANGLES {
                angular_capped.set(true);
                break;
            }
            n *= 2;
            let next = trapezoid(n);
            used += n;
            let change = (next - m).abs();
            m = next;
            if change <= ang_tol * m.abs() || m == T::zero() {
                if m > T::zero() {
                    angular_rel_err.set(angular_rel_err.get().max(change / m));
                }
                break;
            }
        }
        angular_nodes.set(angular_nodes.get() + used);
        m
    };

    let integrand = |r: T| -> T {
        let m = circle_mean(r);
        if m == T::zero() {
            return T::zero();
        }
        T::TAU() * (r.ln() + weight.ln_eval(r) + plo * r.ln()).exp() * m
    };
    let out = dyadic_integrate(integrand, tol, DEFAULT_NODE_BUDGET);
    if out.divergent {
        return Ok(QuadratureResult {
            value: T::infinity(),
            abs_error_estimate: T::zero(),
            nodes_used: out.result.nodes_used + angular_nodes.get(),
            converged: true,
        });
    }
    let r = out.result;
    Ok(QuadratureResult {
        value: r.value,
        abs_error_estimate: r.abs_error_estimate + r.value.abs() * angular_rel_err.get(),
        nodes_used: r.nodes_used + angular_nodes.get(),
        converged: r.converged && !angular_capped.get(),
    })
}

/// `‖s‖_{L^p(w)}`, `+∞` when the integral diverges.
pub fn lp_norm<T: Real>(space: &ModelSpace<T>, s: &LaurentSeries<T>, p: T, tol: T) -> Result<QuadratureResult<T>> {
    let q = lp_integral(space, s, p, tol)?;
    if !q.value.is_finite() || q.value == T::zero() {
        return Ok(q);
    }
    let v = q.value.powf(T::one() / p);
    Ok(QuadratureResult {
        value: v,
        abs_error_estimate: q.abs_error_estimate * v / (p * q.value),
        ..q
    })
}

/// `‖s‖_{L¹(w)} = ∫_{𝔻*} |s| w dA`.
pub fn l1_weighted_norm<T: Real>(space: &ModelSpace<T>, s: &LaurentSeries<T>, tol: T) -> Result<QuadratureResult<T>> {
    check_admissible(space, s)?;
    lp_integral(space, s, T::one(), tol)
}
