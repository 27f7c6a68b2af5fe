use std::sync::Arc;

use friedrichs_lab::series::{extract_coefficients, l2_norm, sample_series};
use friedrichs_lab::{FriedrichsMap32, LaurentSeries32, ModelSpace32};
use num_complex::Complex;

#[test]
fn hartogs_factors_in_f32() {
    let map = FriedrichsMap32::new(Arc::new(ModelSpace32::hartogs()), 3).unwrap();
    for (m, want) in [(-2, 0.0), (-1, 0.5), (0, 1.0), (1, 1.5), (2, 0.0)] {
        assert!((map.factor(m).unwrap() - want).abs() < 1e-5, "m = {m}");
    }
    let z = LaurentSeries32::monomial(1, Complex::new(1.0, 0.0));
    assert!((map.apply_squared(&z).unwrap().coefficient(1).re - 0.75).abs() < 1e-5);
}

#[test]
fn exponential_model_in_f32_tracks_f64() {
    let m32 = FriedrichsMap32::new(Arc::new(ModelSpace32::exp_hartogs()), 4).unwrap();
    let m64 = friedrichs_lab::FriedrichsMap64::new(Arc::new(friedrichs_lab::ModelSpace64::exp_hartogs()), 4).unwrap();
    for m in -4..=4 {
        let (a, b) = (m32.factor(m).unwrap() as f64, m64.factor(m).unwrap());
        assert!((a / b - 1.0).abs() < 1e-4, "m = {m}: {a} vs {b}");
    }
}

#[test]
fn sampling_and_norms_in_f32() {
    let s: LaurentSeries32 = [(-1, Complex::new(1.0, 0.5)), (2, Complex::new(-0.25, 0.0))]
        .into_iter()
        .collect();
    let samples = sample_series(&s, &[0.5, 0.8], 16).unwrap();
    let e = extract_coefficients(&samples, -4..=4).unwrap();
    assert!(e.series.max_abs_diff(&s) < 1e-5);
    // ‖z^n‖² = 2π/(2n+4) on the Hartogs model.
    let space = ModelSpace32::hartogs();
    let want = (1.25 * std::f32::consts::PI + 0.0625 * std::f32::consts::PI / 4.0).sqrt();
    assert!((l2_norm(&space, &s).unwrap() - want).abs() < 1e-5);
}
