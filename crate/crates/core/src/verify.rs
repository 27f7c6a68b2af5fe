//! The acceptance suite: twelve numbered criteria, each a list of pinned checks.
//!
//! Shared by the `acceptance` test target and the `verify` CLI command.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::operators::{
    bergman_project, f_squared_hinfty_series, gain_chain_constant, hinfty_bound_series, norm_probe, FriedrichsMap,
    RankEstimate,
};
use crate::quad2d::{
    brute_force_friedrichs, counterexample_probe, default_cutoffs, BruteForceGrid, DomainDescriptor2D,
};
use crate::series::{
    extract_coefficients, inner_product, l1_weighted_norm, l2_norm, lp_integral, lp_norm, sample_series, LaurentSeries,
};
use crate::spaces::{exact, exponent_thresholds, ModelSpace};
use crate::specfun::{
    itilde, itilde_comparator_minus, itilde_comparator_plus, itilde_direct, itilde_substituted, RadialWeight,
    Smoothness,
};

type C64 = Complex<f64>;

/// One pinned comparison inside a criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Wall-clock time; kept out of serialized reports so they stay reproducible.
    #[serde(skip)]
    pub elapsed_secs: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "[{verdict}] criterion {:>2}: {} ({:.1}s)",
            self.id, self.title, self.elapsed_secs
        )?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "    {mark} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// `|got - want| <= tol`.
    fn close(&mut self, name: impl Into<String>, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs();
        self.check(
            name,
            err <= tol,
            format!("{got:.15e} vs {want:.15e}, |diff| {err:.2e} <= {tol:.0e}"),
        );
    }

    fn at_most(&mut self, name: impl Into<String>, got: f64, bound: f64) {
        self.check(name, got <= bound, format!("{got:.3e} <= {bound:.0e}"));
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "Friedrichs factors on the Hartogs model"),
    (2, "F squared on z and 1/z"),
    (3, "rank and singular values on the Hartogs model"),
    (4, "coefficient bounds against the weighted L1 norm"),
    (5, "monomial L^p norm identity"),
    (6, "L1 to L^p gain chain and blow-up at p = 4"),
    (7, "the moment function I~ and its comparators"),
    (8, "exponential Hartogs convergence sums"),
    (9, "boundary counterexample probe at p = 3"),
    (10, "slice reduction against the two-variable oracle"),
    (11, "exponent threshold calculator"),
    (12, "structural property suite"),
];

pub fn title(id: u8) -> Option<&'static str> {
    CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, t)| *t)
}

/// Runs one criterion; unknown ids yield `None`.
pub fn run_criterion(id: u8) -> Option<CriterionOutcome> {
    let title = title(id)?;
    let start = Instant::now();
    let mut checks = Checks::default();
    let run: fn(&mut Checks) -> Result<()> = match id {
        1 => c1_factors,
        2 => c2_f_squared,
        3 => c3_rank,
        4 => c4_coefficient_bounds,
        5 => c5_monomial_norms,
        6 => c6_gain_chain,
        7 => c7_itilde,
        8 => c8_sums,
        9 => c9_counterexample,
        10 => c10_slice_reduction,
        11 => c11_thresholds,
        12 => c12_structure,
        _ => return None,
    };
    if let Err(e) = run(&mut checks) {
        checks.check("evaluation", false, format!("error: {e}"));
    }
    let elapsed_secs = start.elapsed().as_secs_f64();
    let limit = match id {
        1 | 7 => Some(60.0),
        12 => Some(600.0),
        _ => None,
    };
    if let Some(limit) = limit {
        checks.check("runtime", elapsed_secs < limit, format!("under {limit:.0}s"));
    }
    let passed = !checks.0.is_empty() && checks.0.iter().all(|c| c.passed);
    Some(CriterionOutcome {
        id,
        title,
        passed,
        checks: checks.0,
        elapsed_secs,
    })
}

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|(id, _)| run_criterion(*id)).collect()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_series(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> LaurentSeries<f64> {
    (lo..=hi)
        .map(|n| (n, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .collect()
}

fn hartogs_map() -> Result<FriedrichsMap<f64>> {
    FriedrichsMap::new(Arc::new(ModelSpace::hartogs()), 16)
}

fn exp_map() -> Result<FriedrichsMap<f64>> {
    FriedrichsMap::new(Arc::new(ModelSpace::exp_hartogs()), 16)
}

/// `F f = B(f̄)` through the two-variable oracle, as a `z₂` series.
fn brute_f(
    domain: &DomainDescriptor2D,
    s: &LaurentSeries<f64>,
    max_degree: u32,
) -> Result<(LaurentSeries<f64>, f64, bool)> {
    let r = brute_force_friedrichs(
        domain,
        |_: C64, z2: C64| s.evaluate(z2).unwrap_or_default(),
        max_degree,
        BruteForceGrid::for_degree(max_degree),
        1e-8,
    )?;
    Ok((r.series, r.leakage, r.converged))
}

fn c1_factors(k: &mut Checks) -> Result<()> {
    let map = hartogs_map()?;
    for m in -3..=3 {
        let want = match m {
            -1 => 0.5,
            0 => 1.0,
            1 => 1.5,
            _ => 0.0,
        };
        k.close(format!("phi_{m}"), map.factor(m)?, want, 1e-12);
        let rational = exact::friedrichs_factor(2, m as i64).map_or(0.0, |r| *r.numer() as f64 / *r.denom() as f64);
        k.check(
            format!("phi_{m} exact rational"),
            rational == want,
            format!("{rational}"),
        );
    }
    let h = DomainDescriptor2D::hartogs();
    for m in -3..=3 {
        // F(z^{-m}) carries φ_m on z^m; inputs must lie in A²(ℍ), so -m >= -1.
        if -m < -1 {
            continue;
        }
        let (s, leak, conv) = brute_f(&h, &LaurentSeries::monomial(-m, c(1.0, 0.0)), 3)?;
        let want = map.factor(m)?;
        k.close(format!("phi_{m} by 2D quadrature"), s.coefficient(m).re, want, 1e-5);
        let other = s
            .terms()
            .filter(|(n, _)| *n != m)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max);
        k.at_most(format!("off-diagonal output for z^{}", -m), other, 1e-5);
        k.at_most(format!("z1 leakage for z^{}", -m), leak, 1e-6);
        k.check(format!("grid converged for z^{}", -m), conv, "coarse/refined agreement");
    }
    // One-variable projection oracle: B(conj z) = φ_{-1}/z.
    let space = ModelSpace::<f64>::hartogs();
    let p = bergman_project(&space, |z: C64| z.conj(), 4, 1e-10)?;
    k.close(
        "B(conj z) on the punctured disk",
        p.series.coefficient(-1).re,
        0.5,
        1e-8,
    );
    Ok(())
}

fn c2_f_squared(k: &mut Checks) -> Result<()> {
    let map = hartogs_map()?;
    let z = LaurentSeries::monomial(1, c(1.0, 0.0));
    let zi = LaurentSeries::monomial(-1, c(1.0, 0.0));
    let f2z = map.apply_squared(&z)?;
    k.close("F^2(z) coefficient via factors", f2z.coefficient(1).re, 0.75, 1e-12);
    k.check(
        "F^2(z) support via factors",
        f2z.support(0.0) == vec![1],
        format!("{:?}", f2z.support(0.0)),
    );
    let f2zi = map.apply_squared(&zi)?;
    k.close("F^2(1/z) coefficient via factors", f2zi.coefficient(-1).re, 0.75, 1e-12);
    k.close(
        "lambda_1 exact rational",
        exact::f_squared_eigenvalue(2, 1).map_or(f64::NAN, |r| *r.numer() as f64 / *r.denom() as f64),
        0.75,
        0.0,
    );
    let h = DomainDescriptor2D::hartogs();
    for (label, input, deg) in [("z", &z, 1), ("1/z", &zi, -1)] {
        let (once, _, c1) = brute_f(&h, input, 3)?;
        let (twice, leak, c2) = brute_f(&h, &once.pruned(1e-12), 3)?;
        k.close(
            format!("F^2({label}) coefficient via 2D quadrature"),
            twice.coefficient(deg).re,
            0.75,
            1e-5,
        );
        let other = twice
            .terms()
            .filter(|(n, _)| *n != deg)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max);
        k.at_most(format!("F^2({label}) off-support via 2D quadrature"), other, 1e-5);
        k.at_most(format!("F^2({label}) z1 leakage"), leak, 1e-6);
        k.check(
            format!("F^2({label}) grids converged"),
            c1 && c2,
            "coarse/refined agreement",
        );
    }
    Ok(())
}

fn c3_rank(k: &mut Checks) -> Result<()> {
    let report = hartogs_map()?.spectrum(12)?;
    k.check(
        "rank estimate",
        report.rank_estimate == RankEstimate::Finite(3),
        format!("{:?} at tolerance {:.0e}", report.rank_estimate, report.rank_tolerance),
    );
    let s3 = 3.0_f64.sqrt() / 2.0;
    for (m, want) in [(-1, s3), (0, 1.0), (1, s3)] {
        let got = report.entry(m).map_or(f64::NAN, |e| e.singular_value);
        k.close(format!("s_{m}"), got, want, 1e-12);
    }
    let rest = report
        .entries
        .iter()
        .filter(|e| e.degree.abs() > 1)
        .map(|e| e.singular_value)
        .fold(0.0, f64::max);
    k.check("s_m = 0 for |m| >= 2", rest == 0.0, format!("max {rest:e}"));
    for m in -3..=3_i64 {
        // s_m² = (4 - m²)/4 from the closed-form moments 2π/(t+4).
        let want = ((4 - m * m).max(0) as f64 / 4.0).sqrt();
        let got = report.entry(m as i32).map_or(f64::NAN, |e| e.singular_value);
        k.close(format!("s_{m} against sqrt(4 - m^2)/2"), got, want, 1e-12);
    }
    Ok(())
}

fn c4_coefficient_bounds(k: &mut Checks) -> Result<()> {
    let space = ModelSpace::<f64>::hartogs();
    for (n, want) in [(-1, 3.0 / (2.0 * PI)), (0, 2.0 / PI), (1, 5.0 / (2.0 * PI))] {
        k.close(format!("K_{n}"), space.coefficient_bound_constant(n)?, want, 1e-15);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x4b4e);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    let mut all_conv = true;
    for _ in 0..200 {
        let s = random_series(&mut rng, -1, 3);
        let l1 = l1_weighted_norm(&space, &s, 1e-7)?;
        all_conv &= l1.converged;
        for n in -1..=1 {
            let excess = s.coefficient(n).norm() - space.coefficient_bound_constant(n)? * l1.value;
            worst = worst.max(excess);
            if excess > 1e-6 {
                violations += 1;
            }
        }
    }
    k.check(
        "violations beyond 1e-6",
        violations == 0,
        format!("{violations} of 600 (worst excess {worst:.3e})"),
    );
    k.check("L1 quadratures converged", all_conv, "200 series");
    Ok(())
}

fn c5_monomial_norms(k: &mut Checks) -> Result<()> {
    let space = ModelSpace::<f64>::hartogs();
    let zi = LaurentSeries::monomial(-1, c(1.0, 0.0));
    for p in [2.0, 3.0, 3.9] {
        let v = space.monomial_lp_norm(-1, p)?.powf(p) * (4.0 - p) / (2.0 * PI);
        k.close(format!("p = {p} moments"), v, 1.0, 1e-10);
        let q = lp_integral(&space, &zi, p, 1e-12)?;
        k.close(
            format!("p = {p} quadrature"),
            q.value * (4.0 - p) / (2.0 * PI),
            1.0,
            1e-10,
        );
    }
    let inf = space.monomial_lp_norm(-1, 4.0)?;
    k.check("p = 4 moments", inf == f64::INFINITY, format!("{inf}"));
    let q = lp_integral(&space, &zi, 4.0, 1e-12)?;
    k.check(
        "p = 4 quadrature divergence verdict",
        q.value == f64::INFINITY,
        format!("{}", q.value),
    );
    Ok(())
}

fn c6_gain_chain(k: &mut Checks) -> Result<()> {
    let map = hartogs_map()?;
    let space = map.space();
    for p in [2.0, 3.0, 3.9] {
        let g = gain_chain_constant(&map, p, 4)?;
        let want = (0.5 * (2.0 * PI / (4.0 - p)).powf(1.0 / p)
            + (PI / 2.0).powf(1.0 / p)
            + 1.5 * (2.0 * PI / (p + 4.0)).powf(1.0 / p))
            * (5.0 / (2.0 * PI));
        k.close(format!("assembled constant p = {p}"), g, want, 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(0x6a1 + p.to_bits());
        let mut violations = 0;
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let s = random_series(&mut rng, -1, 3);
            let num = lp_norm(space, &map.apply(&s)?, p, 1e-8)?.value;
            let den = l1_weighted_norm(space, &s, 1e-8)?.value;
            let ratio = num / den;
            worst = worst.max(ratio / g);
            if ratio > g * (1.0 + 1e-9) {
                violations += 1;
            }
        }
        k.check(
            format!("violations at p = {p}"),
            violations == 0,
            format!("{violations} of 100 (largest ratio/constant {worst:.4})"),
        );
    }
    let probe = norm_probe(&map, 2.0, 4.0, 4, 4, 7)?;
    let witness_ok = probe
        .unbounded_witness
        .as_ref()
        .is_some_and(|w| w.coefficient(1).norm() > 0.0);
    k.check(
        "unbounded witness at p = 4",
        probe.unbounded && witness_ok,
        format!("{:?}", probe.unbounded_witness.map(|w| w.support(0.0))),
    );
    let z = LaurentSeries::monomial(1, c(1.0, 0.0));
    let fz = map.apply(&z)?;
    let mut scaled = Vec::new();
    for p in [3.9, 3.99, 3.999] {
        let n = lp_norm(space, &fz, p, 1e-10)?;
        scaled.push(n.value * (4.0 - p).powf(1.0 / p));
    }
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().copied().fold(0.0, f64::max);
    k.check(
        "||F z||_p (4-p)^{1/p} flat over p in {3.9, 3.99, 3.999}",
        hi / lo - 1.0 <= 0.05,
        format!("{scaled:.6?}, spread {:.3}% <= 5%", 100.0 * (hi / lo - 1.0)),
    );
    let limit = 0.5 * (2.0 * PI).powf(0.25);
    let dev = scaled.iter().map(|v| (v / limit - 1.0).abs()).fold(0.0, f64::max);
    k.check(
        "rate constant against (1/2)(2 pi)^{1/4}",
        dev <= 0.05,
        format!("max deviation {:.3}% <= 5%", 100.0 * dev),
    );
    Ok(())
}

fn c7_itilde(k: &mut Checks) -> Result<()> {
    for x in [-20.0_f64, -10.0, -5.0, 0.0, 5.0, 10.0, 20.0] {
        let a = itilde_direct(x, 1e-12)?;
        let b = itilde_substituted(x, 1e-12)?;
        let diff = (a.value - b.value).abs();
        // Error estimates plus the rounding of two sums of O(100) terms.
        let bound = a.abs_error_estimate + b.abs_error_estimate + 64.0 * f64::EPSILON * a.value.abs();
        k.check(
            format!("dual routes at x = {x}"),
            diff <= bound,
            format!("{:.15e} vs {:.15e}, |diff| {diff:.2e} <= {bound:.2e}", a.value, b.value),
        );
    }
    let e2 = (-2.0_f64).exp();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for x in 1..=200 {
        let v = itilde(x as f64, 1e-12)?.value / itilde_comparator_plus(x as f64)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    // Ĩ(x)(x+1) increases to e^{-2}; Ĩ(1)·2 ≈ 0.06 sets the floor.
    k.check(
        "I~(x)(x+1) band on [1, 200]",
        lo >= 0.4 * e2 && hi <= e2,
        format!("[{lo:.6}, {hi:.6}] within [{:.6}, {e2:.6}]", 0.4 * e2),
    );
    let v100 = itilde(100.0, 1e-12)?.value * 101.0 / e2;
    k.check(
        "I~(100)*101 against e^-2",
        (v100 - 1.0).abs() <= 0.02,
        format!("ratio {v100:.6}, within 2%"),
    );
    let r30 = itilde(-30.0_f64, 1e-12)?.value / itilde_comparator_minus(30.0)?;
    k.check(
        "I~(-30) against (1/2)^29 Gamma(29)",
        (r30 - 1.0).abs() <= 0.01,
        format!("ratio {r30:.6}, within 1%"),
    );
    Ok(())
}

fn c8_sums(k: &mut Checks) -> Result<()> {
    for p in [2.0, 4.0, 10.0] {
        let r = hinfty_bound_series(p, 60, 1e-13)?;
        let s30 = r.partial_sum(30).unwrap_or(f64::NAN);
        let s = r.sum();
        k.check(
            format!("S({p}) stable to 10 digits by K = 30"),
            ((s30 - s) / s).abs() <= 1e-10,
            format!(
                "S_30 {s30:.15e}, S_60 {s:.15e}, rel {:.2e} <= 1e-10",
                ((s30 - s) / s).abs()
            ),
        );
        k.check(format!("S({p}) terms converged"), r.all_converged, "log-space moments");
        let tail = &r.negative_side_ratios[20..];
        let decreasing = tail.windows(2).all(|w| w[1] < w[0]);
        let last = *tail.last().unwrap_or(&f64::NAN);
        // t_{k+1}/t_k ~ τ/k: k times the ratio stays bounded while the ratio itself falls.
        let scaled: Vec<f64> = tail.iter().enumerate().map(|(i, r)| r * (i + 21) as f64).collect();
        let (slo, shi) = scaled
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(a, b), &v| (a.min(v), b.max(v)));
        k.check(
            format!("S({p}) negative-side ratios fall like tau/k"),
            decreasing && last < 0.25 && shi / slo <= 2.0,
            format!("last ratio {last:.4}, k*ratio in [{slo:.3}, {shi:.3}]"),
        );
        let limit = (2.0 - 2.0 / p).exp();
        let (blo, bhi) = r.comparator_band.unwrap_or((f64::NAN, f64::NAN));
        k.check(
            format!("S({p}) positive-side comparator band"),
            blo / limit >= 0.95 && bhi / limit <= 2.0,
            format!("term/comparator in [{blo:.4}, {bhi:.4}], limit e^(2-2/p) = {limit:.4}"),
        );
    }
    let f = f_squared_hinfty_series(50, 1e-13)?;
    let s25 = f.partial_sum(25).unwrap_or(f64::NAN);
    let s = f.sum();
    k.check(
        "F^2 sum stable to 10 digits by K = 25",
        ((s25 - s) / s).abs() <= 1e-10,
        format!("S_25 {s25:.15e}, S_50 {s:.15e}"),
    );
    let limit = 4.0_f64.exp();
    let (blo, bhi) = f.comparator_band.unwrap_or((f64::NAN, f64::NAN));
    k.check(
        "F^2 sum comparator band",
        blo / limit >= 0.95 && bhi / limit <= 2.5,
        format!("term/comparator in [{blo:.3}, {bhi:.3}], limit e^4 = {limit:.3}"),
    );
    let i1 = itilde(1.0_f64, 1e-13)?.value;
    k.close(
        "F^2 sum k = 0 term times I~(1)^3",
        f.term(0).map_or(f64::NAN, |t| t.term) * i1.powi(3),
        1.0,
        1e-10,
    );
    Ok(())
}

/// `2π² Σ_n ((2/3)_n / n!)² / (2n + 4)`: the full `∫_ℍ |1 - z₂|^{-4/3}` from the
/// binomial series of `(1 - z)^{-2/3}`, with the `n^{-5/3}` tail in closed form.
pub fn counterexample_l2_oracle() -> f64 {
    let n_max = 1usize << 22;
    let mut b = 1.0_f64;
    let mut s = 0.0;
    for n in 0..n_max {
        s += b * b / (2 * n + 4) as f64;
        b *= (n as f64 + 2.0 / 3.0) / (n as f64 + 1.0);
    }
    let nf = n_max as f64;
    let c = b * b * nf.powf(2.0 / 3.0);
    s += 0.75 * c * nf.powf(-2.0 / 3.0);
    2.0 * PI * PI * s
}

fn c9_counterexample(k: &mut Checks) -> Result<()> {
    let h = DomainDescriptor2D::hartogs();
    let r = counterexample_probe(&h, 3.0, &default_cutoffs(), 1e-10)?;
    let ext: Vec<f64> = r.rows.iter().filter_map(|row| row.l2_extrapolated).collect();
    k.check(
        "L2 extrapolated values Cauchy over the last three cutoffs",
        r.l2.cauchy && r.l2.last_spread <= 1e-4,
        format!(
            "spread {:.2e} <= 1e-4; last values {:.10?}",
            r.l2.last_spread,
            &ext[ext.len().saturating_sub(3)..]
        ),
    );
    let last = *ext.last().unwrap_or(&f64::NAN);
    let oracle = counterexample_l2_oracle();
    k.close("L2 limit against the binomial-series oracle", last, oracle, 1e-4);
    let inc = &r.lp_increments;
    let increasing = inc.windows(2).all(|w| w[1] > w[0]) && inc.iter().all(|&d| d > 0.0);
    k.check("L^p increments positive and settling", increasing, format!("{inc:.4?}"));
    let slope = *inc.last().unwrap_or(&f64::NAN);
    let want = PI * PI * LN_2;
    k.check(
        "L^p increment per halving against pi^2 ln 2",
        (slope / want - 1.0).abs() <= 0.10,
        format!(
            "{slope:.6} vs {want:.6} ({:.2}% <= 10%)",
            100.0 * (slope / want - 1.0).abs()
        ),
    );
    k.check(
        "L^p divergence verdict",
        r.lp.divergent && !r.l2.divergent,
        format!("lp {:?}", r.lp),
    );
    k.check(
        "all quadratures converged",
        r.rows.iter().all(|row| row.converged),
        "8 cutoffs",
    );
    Ok(())
}

fn c10_slice_reduction(k: &mut Checks) -> Result<()> {
    for (domain, map, lo, hi) in [
        (DomainDescriptor2D::hartogs(), hartogs_map()?, -1, 3),
        (DomainDescriptor2D::exp_hartogs(), exp_map()?, -3, 3),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(0x51ce);
        let mut worst_diff: f64 = 0.0;
        let mut worst_leak: f64 = 0.0;
        let mut all_conv = true;
        for _ in 0..20 {
            let s = random_series(&mut rng, lo, hi);
            let (b, leak, conv) = brute_f(&domain, &s, 3)?;
            worst_diff = worst_diff.max(b.max_abs_diff(&map.apply(&s)?));
            worst_leak = worst_leak.max(leak);
            all_conv &= conv;
        }
        k.at_most(format!("{} z1 leakage", domain.name()), worst_leak, 1e-6);
        k.at_most(format!("{} brute force vs factor map", domain.name()), worst_diff, 1e-5);
        k.check(format!("{} grids converged", domain.name()), all_conv, "20 inputs");
    }
    Ok(())
}

fn c11_thresholds(k: &mut Checks) -> Result<()> {
    let t = exponent_thresholds(1, 0.5_f64, None, None)?;
    k.close("n=1, eta=1/2: epsilon", t.epsilon_main, 2.0 / 3.0, 1e-15);
    k.close("n=1, eta=1/2: p upper", t.p_upper_case1, 8.0 / 3.0, 1e-15);
    k.close("n=1, eta=1/2: Sobolev bound", t.sobolev_upper, 0.125, 1e-15);
    let t = exponent_thresholds(2, 0.5_f64, Some(2.5), None)?;
    let got = t.p_upper_case2.unwrap_or(f64::NAN);
    // 4nr/((2n-1)r+2) at n = 2, r = 5/2 is 20/9.5 = 40/19; the range [2, 40/19) lies inside [2, 40/17).
    k.close("n=2, eta=1/2, r=5/2: 4nr/((2n-1)r+2)", got, 40.0 / 19.0, 1e-15);
    k.check(
        "n=2, eta=1/2, r=5/2: p < 40/17 on the whole range",
        got <= 40.0 / 17.0,
        format!("{got:.6} <= {:.6}", 40.0 / 17.0),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n: u32 = rng.random_range(1..=12);
        let eta: f64 = rng.random_range(0.001..0.999);
        let t = exponent_thresholds(n, eta, None, None)?;
        worst = worst.max((t.epsilon_main + 2.0 - t.p_upper_case1).abs());
    }
    k.at_most("epsilon + 2 = 4n/(2n - eta) over 50 random (n, eta)", worst, 1e-13);
    Ok(())
}

fn c12_structure(k: &mut Checks) -> Result<()> {
    let maps = [hartogs_map()?, exp_map()?];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // Antilinearity and F∘F = F².
    let (mut anti, mut comp) = (0.0_f64, 0.0_f64);
    for i in 0..100 {
        let map = &maps[i % 2];
        let lo = if i % 2 == 0 { -1 } else { -6 };
        let s = random_series(&mut rng, lo, 6);
        let lambda = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let lhs = map.apply(&s.scale(lambda))?;
        let rhs = map.apply(&s)?.scale(lambda.conj());
        let scale = rhs.terms().map(|(_, a)| a.norm()).fold(1.0, f64::max);
        anti = anti.max(lhs.max_abs_diff(&rhs) / scale);
        let ff = map.apply(&map.apply(&s)?)?;
        let f2 = map.apply_squared(&s)?;
        let scale = f2.terms().map(|(_, a)| a.norm()).fold(1.0, f64::max);
        comp = comp.max(ff.max_abs_diff(&f2) / scale);
    }
    k.at_most("antilinearity F(lambda f) = conj(lambda) F(f), relative", anti, 1e-15);
    k.at_most("F o F = F^2 coefficientwise, relative", comp, 1e-14);

    // F(1) = 1 and λ₀ = 1 on every model space.
    let spaces: Vec<ModelSpace<f64>> = vec![
        ModelSpace::hartogs(),
        ModelSpace::exp_hartogs(),
        ModelSpace::new(RadialWeight::power(0.0)?),
        ModelSpace::new(RadialWeight::power(5.5)?),
        ModelSpace::new(RadialWeight::custom("r^2 (1+r)", Smoothness::Smooth, |r: f64| {
            r * r * (1.0 + r)
        })),
    ];
    let one = LaurentSeries::monomial(0, c(1.0, 0.0));
    for space in spaces {
        let name = space.weight().describe();
        let map = FriedrichsMap::new(Arc::new(space), 2)?;
        let f1 = map.apply(&one)?;
        k.check(
            format!("F(1) = 1 on {name}"),
            f1 == one,
            format!("{:?}", f1.coefficient(0)),
        );
        k.check(
            format!("lambda_0 = 1 on {name}"),
            map.eigenvalue(0)? == 1.0,
            format!("{}", map.eigenvalue(0)?),
        );
    }

    // Symmetry and positivity of the F² spectrum.
    let mut sym = 0.0_f64;
    let mut min_lambda = f64::INFINITY;
    for map in &maps {
        for m in 0..=100 {
            let (a, b) = (map.eigenvalue(m)?, map.eigenvalue(-m)?);
            sym = sym.max((a - b).abs() / a.max(f64::MIN_POSITIVE));
            min_lambda = min_lambda.min(a.min(b));
        }
    }
    k.at_most("lambda_m = lambda_-m for |m| <= 100, relative", sym, 1e-15);
    k.check("lambda_m >= 0", min_lambda >= 0.0, format!("min {min_lambda:e}"));

    // Self-adjointness of F² on truncations.
    let mut sa = 0.0_f64;
    for i in 0..100 {
        let map = &maps[i % 2];
        let lo = if i % 2 == 0 { -1 } else { -6 };
        let u = random_series(&mut rng, lo, 6);
        let v = random_series(&mut rng, lo, 6);
        let space = map.space();
        let a = inner_product(space, &map.apply_squared(&u)?, &v)?;
        let b = inner_product(space, &u, &map.apply_squared(&v)?)?;
        let scale = l2_norm(space, &u)? * l2_norm(space, &v)?;
        sa = sa.max((a - b).norm() / scale);
    }
    k.at_most("<F^2 u, v> = <u, F^2 v>, relative to |u||v|", sa, 1e-12);

    // Parseval against quadrature.
    let mut pars = 0.0_f64;
    for i in 0..100 {
        let map = &maps[i % 2];
        let lo = if i % 2 == 0 { -1 } else { -4 };
        let s = random_series(&mut rng, lo, 4);
        let space = map.space();
        let q = lp_integral(space, &s, 2.0, 1e-11)?.value;
        let p = l2_norm(space, &s)?.powi(2);
        pars = pars.max((q - p).abs() / p.max(1.0));
    }
    k.at_most("Parseval vs quadrature of |f|^2 w", pars, 1e-6);

    // Extraction round trip.
    let mut rt = 0.0_f64;
    for _ in 0..100 {
        let s = random_series(&mut rng, -8, 8);
        let samples = sample_series(&s, &[0.6, 0.85], 64)?;
        let e = extract_coefficients(&samples, -8..=8)?;
        rt = rt.max(e.series.max_abs_diff(&s));
    }
    k.at_most("extract(sample(s)) = s, N = 64, support [-8, 8]", rt, 1e-10);
    Ok(())
}
