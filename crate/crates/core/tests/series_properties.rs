use friedrichs_lab::series::{extract_coefficients, sample_series};
use friedrichs_lab::LaurentSeries64;
use num_complex::Complex;
use proptest::prelude::*;

fn series(lo: i32, hi: i32) -> impl Strategy<Value = LaurentSeries64> {
    prop::collection::btree_map(lo..=hi, (-1e3..1e3_f64, -1e3..1e3_f64), 0..12)
        .prop_map(|m| m.into_iter().map(|(n, (re, im))| (n, Complex::new(re, im))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_format_round_trips_exactly(s in series(-40, 40)) {
        let back = LaurentSeries64::from_text(&s.to_text()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn sampling_then_extraction_recovers_coefficients(s in series(-8, 8)) {
        let samples = sample_series(&s, &[0.55, 0.9], 64).unwrap();
        let e = extract_coefficients(&samples, -8..=8).unwrap();
        let scale = s.terms().map(|(_, a)| a.norm()).fold(1.0, f64::max);
        prop_assert!(e.series.max_abs_diff(&s) <= 1e-10 * scale);
        prop_assert!(e.consistent);
    }

    #[test]
    fn evaluation_is_additive(a in series(-5, 5), b in series(-5, 5), re in 0.2..0.95_f64, arg in 0.0..std::f64::consts::TAU) {
        let z = Complex::from_polar(re, arg);
        let lhs = (&a + &b).evaluate(z).unwrap();
        let rhs = a.evaluate(z).unwrap() + b.evaluate(z).unwrap();
        let scale = 1.0 + lhs.norm() + rhs.norm();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale * 1e3);
    }
}

#[test]
fn extraction_refuses_aliased_degrees() {
    let s = LaurentSeries64::monomial(9, Complex::new(1.0, 0.0));
    let samples = sample_series(&s, &[0.7], 32).unwrap();
    assert!(extract_coefficients(&samples, -16..=16).is_err());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = LaurentSeries64::from_text("# header\n1 1.0 0.0\n2 nope 0.0\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
}
