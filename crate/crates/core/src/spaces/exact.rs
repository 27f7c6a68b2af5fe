//! Exact rational arithmetic for integer power weights `w(r) = r^ρ`.
//!
//! With `μ(t) = 2π/(t+ρ+2)` every ratio of moments is rational, so the
//! Friedrichs factors, the eigenvalues of `F²` and `π`-scaled norming and
//! coefficient constants can be produced without rounding.

use num_rational::Ratio;

pub type Rational = Ratio<i64>;

fn moment_denominator(rho: u32, t: i64) -> Option<i64> {
    let d = t + rho as i64 + 2;
    (d > 0).then_some(d)
}

/// `φ_m = μ(0)/μ(2m) = (2m+ρ+2)/(ρ+2)`; `None` unless `±m` are both admissible.
pub fn friedrichs_factor(rho: u32, m: i64) -> Option<Rational> {
    let num = moment_denominator(rho, 2 * m)?;
    moment_denominator(rho, -2 * m)?;
    Some(Rational::new(num, rho as i64 + 2))
}

/// `λ_m = φ_m φ_{-m}`, the eigenvalue of `F²` on `z^m`.
pub fn f_squared_eigenvalue(rho: u32, m: i64) -> Option<Rational> {
    Some(friedrichs_factor(rho, m)? * friedrichs_factor(rho, -m)?)
}

/// `π c_n² = π/μ(2n) = (2n+ρ+2)/2`.
pub fn norming_constant_sq_times_pi(rho: u32, n: i64) -> Option<Rational> {
    Some(Rational::new(moment_denominator(rho, 2 * n)?, 2))
}

/// `π K_n = π/μ(n) = (n+ρ+2)/2`.
pub fn coefficient_bound_times_pi(rho: u32, n: i64) -> Option<Rational> {
    Some(Rational::new(moment_denominator(rho, n)?, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hartogs_factor_table() {
        assert_eq!(friedrichs_factor(2, -1), Some(Rational::new(1, 2)));
        assert_eq!(friedrichs_factor(2, 0), Some(Rational::from_integer(1)));
        assert_eq!(friedrichs_factor(2, 1), Some(Rational::new(3, 2)));
        for m in [-4, -2, 2, 3, 7] {
            assert_eq!(friedrichs_factor(2, m), None);
        }
    }

    #[test]
    fn hartogs_eigenvalues() {
        assert_eq!(f_squared_eigenvalue(2, 1), Some(Rational::new(3, 4)));
        assert_eq!(f_squared_eigenvalue(2, -1), Some(Rational::new(3, 4)));
        assert_eq!(f_squared_eigenvalue(2, 0), Some(Rational::from_integer(1)));
        // s_m² = (4 - m²)/4 for the |z|² weight
        for m in -1..=1_i64 {
            assert_eq!(f_squared_eigenvalue(2, m), Some(Rational::new(4 - m * m, 4)));
        }
    }

    #[test]
    fn hartogs_constants_times_pi() {
        assert_eq!(norming_constant_sq_times_pi(2, 0), Some(Rational::from_integer(2)));
        assert_eq!(norming_constant_sq_times_pi(2, -1), Some(Rational::from_integer(1)));
        assert_eq!(coefficient_bound_times_pi(2, -1), Some(Rational::new(3, 2)));
        assert_eq!(coefficient_bound_times_pi(2, 0), Some(Rational::from_integer(2)));
        assert_eq!(coefficient_bound_times_pi(2, 1), Some(Rational::new(5, 2)));
        assert_eq!(norming_constant_sq_times_pi(2, -2), None);
    }

    #[test]
    fn larger_power_weights_have_wider_factor_support() {
        // ρ = 6: admissible n >= -3, so φ_m exists for |m| <= 3.
        assert_eq!(friedrichs_factor(6, 3), Some(Rational::new(14, 8)));
        assert_eq!(friedrichs_factor(6, -3), Some(Rational::new(2, 8)));
        assert_eq!(friedrichs_factor(6, 4), None);
    }
}
