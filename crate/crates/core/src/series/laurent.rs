use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A finite Laurent series `Σ a_n z^n`; absent degrees are zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LaurentSeries<T> {
    coefficients: BTreeMap<i32, Complex<T>>,
}

impl<T: Real> LaurentSeries<T> {
    pub fn zero() -> Self {
        Self {
            coefficients: BTreeMap::new(),
        }
    }

    /// `c · z^n`.
    pub fn monomial(n: i32, c: Complex<T>) -> Self {
        Self::from_terms([(n, c)])
    }

    /// Later duplicates of a degree are summed into earlier ones.
    pub fn from_terms<I: IntoIterator<Item = (i32, Complex<T>)>>(terms: I) -> Self {
        let mut s = Self::zero();
        for (n, c) in terms {
            s.add_term(n, c);
        }
        s
    }

    pub fn add_term(&mut self, n: i32, c: Complex<T>) {
        let slot = self.coefficients.entry(n).or_default();
        *slot = *slot + c;
    }

    pub fn set(&mut self, n: i32, c: Complex<T>) {
        self.coefficients.insert(n, c);
    }

    /// Coefficient of `z^n` (zero when absent).
    pub fn coefficient(&self, n: i32) -> Complex<T> {
        self.coefficients.get(&n).copied().unwrap_or_default()
    }

    /// Stored terms in ascending degree order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex<T>)> + '_ {
        self.coefficients.iter().map(|(&n, &c)| (n, c))
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coefficients.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coefficients.keys().next_back().copied()
    }

    pub fn max_abs_degree(&self) -> i32 {
        self.coefficients.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    /// Degrees with a coefficient of modulus above `tol`.
    pub fn support(&self, tol: T) -> Vec<i32> {
        self.terms().filter(|(_, c)| c.norm() > tol).map(|(n, _)| n).collect()
    }

    /// Drops terms with modulus at or below `tol`.
    pub fn pruned(&self, tol: T) -> Self {
        Self {
            coefficients: self
                .coefficients
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(&n, &c)| (n, c))
                .collect(),
        }
    }

    pub fn scale(&self, lambda: Complex<T>) -> Self {
        self.map_coefficients(|_, c| c * lambda)
    }

    pub fn map_coefficients<F: Fn(i32, Complex<T>) -> Complex<T>>(&self, f: F) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|(&n, &c)| (n, f(n, c))).collect(),
        }
    }

    /// Largest coefficient modulus difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.coefficients
            .keys()
            .chain(other.coefficients.keys())
            .map(|&n| (self.coefficient(n) - other.coefficient(n)).norm())
            .fold(T::zero(), T::max)
    }

    /// `Σ a_n z^n`, evaluated as two Horner chains in `z` and `1/z`.
    pub fn evaluate(&self, z: Complex<T>) -> Result<Complex<T>> {
        let zero = Complex::default();
        let (lo, hi) = match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Ok(zero),
        };
        if lo < 0 && z == zero {
            return Err(Error::domain("evaluate", "z = 0 with negative degrees present"));
        }
        let mut pos = zero;
        for n in (0.max(lo)..=hi).rev() {
            pos = pos * z + self.coefficient(n);
        }
        if lo > 0 {
            pos = pos * z.powi(lo);
        }
        let mut neg = zero;
        if lo < 0 {
            let w = z.inv();
            for n in lo..=(-1).min(hi) {
                neg = (neg + self.coefficient(n)) * w;
            }
            if hi < -1 {
                neg = neg * w.powi(-hi - 1);
            }
        }
        Ok(pos + neg)
    }

    /// `a_n z^n ↦ conj(a_n) z^{-n}`: what `f̄` looks like to a pairing against `z^m`.
    pub fn conjugate_reflect(&self) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|(&n, &c)| (-n, c.conj())).collect(),
        }
    }

    /// Serializes as `degree real imag` lines in ascending degree.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, c) in self.terms() {
            out.push_str(&format_term(n, c));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`to_text`](Self::to_text). Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut coefficients = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(format!(
                    "expected `degree real imag`, got {} fields",
                    fields.len()
                )));
            }
            let n: i32 = fields[0]
                .parse()
                .map_err(|_| parse_err(format!("bad degree `{}`", fields[0])))?;
            let re = T::from_str(fields[1]).map_err(|_| parse_err(format!("bad real part `{}`", fields[1])))?;
            let im = T::from_str(fields[2]).map_err(|_| parse_err(format!("bad imaginary part `{}`", fields[2])))?;
            if coefficients.insert(n, Complex::new(re, im)).is_some() {
                return Err(parse_err(format!("degree {n} repeated")));
            }
        }
        Ok(Self { coefficients })
    }
}

fn format_term<T: Real>(n: i32, c: Complex<T>) -> String {
    let d = T::ROUND_TRIP_DIGITS - 1;
    format!("{n} {:.*e} {:.*e}", d, c.re, d, c.im)
}

impl<T: Real> fmt::Display for LaurentSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<T: Real> Add for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn add(self, rhs: Self) -> LaurentSeries<T> {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(n, c);
        }
        out
    }
}

impl<T: Real> Neg for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn neg(self) -> LaurentSeries<T> {
        self.map_coefficients(|_, c| -c)
    }
}

impl<T: Real> Sub for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn sub(self, rhs: Self) -> LaurentSeries<T> {
        self + &(-rhs)
    }
}

impl<T: Real> FromIterator<(i32, Complex<T>)> for LaurentSeries<T> {
    fn from_iter<I: IntoIterator<Item = (i32, Complex<T>)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn evaluation_examples() {
        let one = LaurentSeries::monomial(0, c(1.0, 0.0));
        assert_eq!(one.evaluate(c(0.3, -0.7)).unwrap(), c(1.0, 0.0));
        let inv = LaurentSeries::monomial(-1, c(1.0, 0.0));
        let v = inv.evaluate(c(0.0, 2.0)).unwrap();
        assert!((v - c(0.0, -0.5)).norm() < 1e-16);
        let s = LaurentSeries::from_terms([(-1, c(1.0, 0.0)), (1, c(3.0, 0.0))]);
        assert!((s.evaluate(c(0.5, 0.0)).unwrap() - c(3.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluation_with_support_away_from_zero() {
        let s = LaurentSeries::from_terms([
            (-4, c(2.0, 1.0)),
            (-3, c(0.0, 1.0)),
            (3, c(1.0, 0.0)),
            (5, c(-1.0, 0.5)),
        ]);
        let z = c(0.4, 0.3);
        let direct = c(2.0, 1.0) * z.powi(-4) + c(0.0, 1.0) * z.powi(-3) + z.powi(3) + c(-1.0, 0.5) * z.powi(5);
        assert!((s.evaluate(z).unwrap() - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn evaluation_at_origin() {
        assert!(LaurentSeries::monomial(-1, c(1.0, 0.0)).evaluate(c(0.0, 0.0)).is_err());
        let s = LaurentSeries::from_terms([(0, c(2.0, 0.0)), (2, c(1.0, 0.0))]);
        assert_eq!(s.evaluate(c(0.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert_eq!(LaurentSeries::<f64>::zero().evaluate(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn conjugate_reflection() {
        let s = LaurentSeries::monomial(1, c(0.0, 1.0));
        assert_eq!(s.conjugate_reflect(), LaurentSeries::monomial(-1, c(0.0, -1.0)));
        let s = LaurentSeries::monomial(0, c(2.0, 1.0));
        assert_eq!(s.conjugate_reflect(), LaurentSeries::monomial(0, c(2.0, -1.0)));
        let s = LaurentSeries::from_terms([(-2, c(1.5, -0.25)), (3, c(0.0, 7.0))]);
        assert_eq!(s.conjugate_reflect().conjugate_reflect(), s);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let s = LaurentSeries::from_terms([
            (-1, c(1.0 / 3.0, -2.0e-300)),
            (0, c(std::f64::consts::PI, 0.0)),
            (7, c(-1e300, 5e-324)),
        ]);
        let back = LaurentSeries::<f64>::from_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
        assert!(s.to_text().starts_with("-1 3.3333333333333331e-1 "));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = LaurentSeries::<f64>::from_text("# header\n0 1 0\n1 x 0\n").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 3,
                message: "bad real part `x`".into()
            }
        );
        assert!(matches!(
            LaurentSeries::<f64>::from_text("0 1 0\n0 2 0"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            LaurentSeries::<f64>::from_text("0 1"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn arithmetic() {
        let a = LaurentSeries::from_terms([(0, c(1.0, 0.0)), (1, c(2.0, 0.0))]);
        let b = LaurentSeries::from_terms([(1, c(-2.0, 0.0)), (2, c(0.0, 1.0))]);
        let s = &a + &b;
        assert_eq!(s.coefficient(1), c(0.0, 0.0));
        assert_eq!(s.support(0.0), vec![0, 2]);
        assert_eq!((&s - &s).max_abs_diff(&LaurentSeries::zero()), 0.0);
    }
}
