use std::ops::RangeInclusive;

use num_complex::Complex;
use rustfft::FftPlanner;

use super::LaurentSeries;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative cross-circle spread above which the input is flagged non-holomorphic.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Function values on concentric circles at the angles `2πj/N`, `j = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSamples<T> {
    pub radii: Vec<T>,
    /// `values[c][j] = f(radii[c] e^{2πij/N})`.
    pub values: Vec<Vec<Complex<T>>>,
}

impl<T: Real> CircleSamples<T> {
    pub fn angles(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }
}

/// `N = 4·max|n| + 16`.
pub fn default_angle_count(max_abs_degree: i32) -> usize {
    4 * max_abs_degree.unsigned_abs() as usize + 16
}

fn check_radii<T: Real>(op: &'static str, radii: &[T]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::domain(op, "at least one radius required"));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > T::zero() && **r < T::one())) {
        return Err(Error::domain(op, format!("radii must lie in (0, 1), got {r}")));
    }
    Ok(())
}

/// Samples `f` on each circle `|z| = r` at `angles` equispaced points.
pub fn sample_circles<T, F>(f: F, radii: &[T], angles: usize) -> Result<CircleSamples<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    check_radii("sample_circles", radii)?;
    if angles == 0 {
        return Err(Error::domain("sample_circles", "angles must be positive"));
    }
    let step = T::TAU() / T::int(angles as i64);
    let values = radii
        .iter()
        .map(|&r| {
            (0..angles)
                .map(|j| f(Complex::from_polar(r, step * T::int(j as i64))))
                .collect()
        })
        .collect();
    Ok(CircleSamples {
        radii: radii.to_vec(),
        values,
    })
}

/// Samples a series on circles through an inverse FFT of its coefficients.
pub fn sample_series<T: Real>(s: &LaurentSeries<T>, radii: &[T], angles: usize) -> Result<CircleSamples<T>> {
    check_radii("sample_series", radii)?;
    let span = match (s.min_degree(), s.max_degree()) {
        (Some(lo), Some(hi)) => (hi - lo) as usize,
        _ => 0,
    };
    if angles <= span {
        return Err(Error::Aliasing {
            angles,
            max_degree: s.max_abs_degree(),
        });
    }
    let values = radii.iter().map(|&r| circle_values(s, r, angles)).collect();
    Ok(CircleSamples {
        radii: radii.to_vec(),
        values,
    })
}

/// `f(r e^{2πij/N})` for `j = 0..N`; requires `N > max - min` degree.
pub(crate) fn circle_values<T: Real>(s: &LaurentSeries<T>, r: T, n: usize) -> Vec<Complex<T>> {
    let mut buf = vec![Complex::default(); n];
    let ln_r = r.ln();
    for (deg, c) in s.terms() {
        let k = deg.rem_euclid(n as i32) as usize;
        buf[k] = buf[k] + c * (T::int(deg as i64) * ln_r).exp();
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

/// Outcome of [`extract_coefficients`].
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction<T> {
    pub series: LaurentSeries<T>,
    /// Extracted coefficients agree across circles (within [`CONSISTENCY_TOL`]).
    pub consistent: bool,
    /// Largest spread of a coefficient across circles, relative to `max(1, |a_n|)`.
    pub max_cross_circle_deviation: T,
}

/// Laurent coefficients from circle samples by the discrete angular transform
/// `a_n = (1/N) Σ_j f(r e^{iθ_j}) r^{-n} e^{-inθ_j}`, averaged over circles.
pub fn extract_coefficients<T: Real>(
    samples: &CircleSamples<T>,
    degrees: RangeInclusive<i32>,
) -> Result<Extraction<T>> {
    check_radii("extract_coefficients", &samples.radii)?;
    let n = samples.angles();
    if samples.values.len() != samples.radii.len() || samples.values.iter().any(|v| v.len() != n) {
        return Err(Error::domain(
            "extract_coefficients",
            "every circle needs the same number of samples",
        ));
    }
    let max_abs = degrees.start().abs().max(degrees.end().abs());
    if n <= 2 * max_abs.unsigned_abs() as usize {
        return Err(Error::Aliasing {
            angles: n,
            max_degree: max_abs,
        });
    }
    let fft = FftPlanner::new().plan_fft_forward(n);
    let scale = T::one() / T::int(n as i64);
    let per_circle: Vec<Vec<Complex<T>>> = samples
        .radii
        .iter()
        .zip(&samples.values)
        .map(|(&r, vals)| {
            let mut buf = vals.clone();
            fft.process(&mut buf);
            let ln_r = r.ln();
            degrees
                .clone()
                .map(|d| buf[d.rem_euclid(n as i32) as usize] * (scale * (-T::int(d as i64) * ln_r).exp()))
                .collect()
        })
        .collect();
    let circles = T::int(per_circle.len() as i64);
    let mut series = LaurentSeries::zero();
    let mut deviation = T::zero();
    for (i, d) in degrees.enumerate() {
        let mean = per_circle.iter().fold(Complex::default(), |acc, v| acc + v[i]) / circles;
        for v in &per_circle {
            deviation = deviation.max((v[i] - mean).norm() / mean.norm().max(T::one()));
        }
        series.set(d, mean);
    }
    Ok(Extraction {
        series,
        consistent: deviation <= T::lit(CONSISTENCY_TOL),
        max_cross_circle_deviation: deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn pure_power() {
        let s = sample_circles(|z: Complex<f64>| z * z, &[0.5], 16).unwrap();
        let e = extract_coefficients(&s, -7..=7).unwrap();
        for (n, a) in e.series.terms() {
            let want = if n == 2 { c(1.0, 0.0) } else { c(0.0, 0.0) };
            assert!((a - want).norm() < 1e-12, "n = {n}: {a}");
        }
    }

    #[test]
    fn pole_plus_constant() {
        let s = sample_circles(|z: Complex<f64>| z.inv() + 3.0, &[0.3, 0.7], 32).unwrap();
        let e = extract_coefficients(&s, -3..=3).unwrap();
        assert!((e.series.coefficient(-1) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((e.series.coefficient(0) - c(3.0, 0.0)).norm() < 1e-12);
        assert!(e.consistent);
    }

    #[test]
    fn geometric_series() {
        let s = sample_circles(|z: Complex<f64>| (c(1.0, 0.0) - z * 0.5).inv(), &[0.5], 64).unwrap();
        let e = extract_coefficients(&s, 0..=10).unwrap();
        for n in 0..=10 {
            assert!((e.series.coefficient(n) - c(0.5_f64.powi(n), 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn aliasing_window_enforced() {
        let s = sample_circles(|z: Complex<f64>| z, &[0.5], 16).unwrap();
        assert!(matches!(
            extract_coefficients(&s, -8..=8),
            Err(Error::Aliasing {
                angles: 16,
                max_degree: 8
            })
        ));
        assert!(extract_coefficients(&s, -7..=7).is_ok());
    }

    #[test]
    fn non_holomorphic_input_is_flagged() {
        let s = sample_circles(|z: Complex<f64>| z.conj(), &[0.3, 0.8], 32).unwrap();
        let e = extract_coefficients(&s, -4..=4).unwrap();
        assert!(!e.consistent);
    }

    #[test]
    fn fft_sampling_matches_pointwise_evaluation() {
        let s = LaurentSeries::from_terms([(-3, c(0.5, 1.0)), (0, c(-2.0, 0.0)), (4, c(0.0, 3.0))]);
        let a = sample_series(&s, &[0.6], 16).unwrap();
        let b = sample_circles(|z| s.evaluate(z).unwrap(), &[0.6], 16).unwrap();
        for (x, y) in a.values[0].iter().zip(&b.values[0]) {
            assert!((x - y).norm() < 1e-12 * y.norm().max(1.0));
        }
        assert!(matches!(sample_series(&s, &[0.6], 7), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn radius_validation() {
        assert!(sample_circles(|z: Complex<f64>| z, &[1.0], 8).is_err());
        assert!(sample_circles(|z: Complex<f64>| z, &[], 8).is_err());
        assert_eq!(default_angle_count(-3), 28);
    }
}
