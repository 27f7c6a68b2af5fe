use serde::Serialize;

use super::DomainDescriptor2D;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::quadrature::adaptive_interval;
use crate::specfun::DEFAULT_NODE_BUDGET;

/// Absolute spread below which three successive values count as Cauchy.
pub const CAUCHY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleRow<T> {
    pub cutoff: T,
    /// `∫ |f|²` over the truncated domain.
    pub l2: T,
    /// `∫ |f|^p` over the truncated domain.
    pub lp: T,
    pub nodes: usize,
    pub converged: bool,
    /// Cutoff-extrapolated `l2` (absent while too few cutoffs or when the
    /// truncation error has no power law).
    pub l2_extrapolated: Option<T>,
}

/// Cauchy and growth verdicts for one of the two sequences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceVerdict<T> {
    /// Power of the cutoff governing the truncation error, `2 - 2s/p`.
    pub error_exponent: T,
    /// Change of the (extrapolated, where possible) value over the last three cutoffs.
    pub last_spread: T,
    /// Least-squares growth per halving of the cutoff over the last three values.
    pub slope_per_halving: T,
    pub cauchy: bool,
    pub divergent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport<T> {
    pub domain: String,
    pub p: T,
    pub rows: Vec<CounterexampleRow<T>>,
    pub l2: SequenceVerdict<T>,
    pub lp: SequenceVerdict<T>,
    /// `lp(c/2) - lp(c)` for successive cutoffs.
    pub lp_increments: Vec<T>,
    /// `π R(1)² · π ln 2`, the per-halving increment of `∫ |1 - z₂|^{-2}` near `z₂ = 1`.
    pub oracle_slope: T,
}

impl<T: Real> CounterexampleReport<T> {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cutoff,l2,lp,nodes,converged,l2_extrapolated\n");
        let d = T::ROUND_TRIP_DIGITS - 1;
        for r in &self.rows {
            let ext = r.l2_extrapolated.map_or_else(String::new, |v| format!("{v:.d$e}"));
            out.push_str(&format!(
                "{:.d$e},{:.d$e},{:.d$e},{},{},{}\n",
                r.cutoff, r.l2, r.lp, r.nodes, r.converged, ext
            ));
        }
        out
    }
}

/// `(1 - r)² + 4r sin²(θ/2) = |1 - r e^{iθ}|²`, accurate near `z = 1`.
fn dist_sq<T: Real>(r: T, theta: T) -> T {
    let s = (theta * T::lit(0.5)).sin();
    let d = T::one() - r;
    d * d + T::lit(4.0) * r * s * s
}

/// `∫₀^{2π} |1 - r e^{iθ}|^{-2e} dθ` on geometric breakpoints toward `θ = 0`.
fn circle_integral<T: Real>(r: T, e: T, tol: T, nodes: &mut usize, ok: &mut bool) -> T {
    let f = |theta: T| dist_sq(r, theta).powf(-e);
    let d = (T::one() - r).abs().max(T::lit(1e-300));
    let mut breaks = vec![T::zero()];
    let mut x = d;
    while x < T::PI() {
        breaks.push(x);
        x = x * T::lit(4.0);
    }
    breaks.push(T::PI());
    let mut total = T::zero();
    for w in breaks.windows(2) {
        let q = adaptive_interval(f, w[0], w[1], tol, DEFAULT_NODE_BUDGET);
        *nodes += q.nodes_used;
        *ok &= q.converged;
        total = total + q.value;
    }
    T::lit(2.0) * total
}

/// `∫_{a}^{b} π R(r)² ∮ |1 - z₂|^{-2e} r dθ dr`.
fn annulus_integral<T: Real>(
    domain: &DomainDescriptor2D,
    e: T,
    a: T,
    b: T,
    tol: T,
    nodes: &mut usize,
    ok: &mut bool,
) -> T {
    let inner_nodes = std::cell::Cell::new(0usize);
    let inner_ok = std::cell::Cell::new(true);
    let inner_tol = tol * T::lit(1e-2);
    let q = adaptive_interval(
        |r: T| {
            let mut n = 0;
            let mut good = true;
            let v = circle_integral(r, e, inner_tol, &mut n, &mut good);
            inner_nodes.set(inner_nodes.get() + n);
            inner_ok.set(inner_ok.get() && good);
            domain.fiber_area(r) * r * v
        },
        a,
        b,
        tol,
        DEFAULT_NODE_BUDGET,
    );
    *nodes += inner_nodes.get();
    *ok &= q.converged && inner_ok.get();
    q.value
}

/// Solves the square system `a x = y` by Gaussian elimination with partial pivoting.
fn solve<T: Real>(mut a: Vec<Vec<T>>, mut y: Vec<T>) -> Option<Vec<T>> {
    let n = y.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col] == T::zero() {
            return None;
        }
        a.swap(col, piv);
        y.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            let pivot_row = a[col].clone();
            for (x, &v) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x = *x - factor * v;
            }
            y[row] = y[row] - factor * y[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = y[row];
        for k in row + 1..n {
            s = s - a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Fits `v(c) = L + Σ_j β_j c^{e_j}` through the last `1 + exponents.len()`
/// points (fewer when fewer are available) and returns `L`.
///
/// An exponent repeated `k` times before contributes `c^e (ln c)^k` instead.
pub fn richardson_limit<T: Real>(cutoffs: &[T], values: &[T], exponents: &[T]) -> Option<T> {
    let m = (exponents.len() + 1).min(values.len());
    if m < 2 {
        return None;
    }
    let start = values.len() - m;
    let rows: Vec<Vec<T>> = cutoffs[start..]
        .iter()
        .map(|&c| {
            let mut row = vec![T::one()];
            let used = &exponents[..m - 1];
            row.extend(used.iter().enumerate().map(|(j, &e)| {
                let repeats = used[..j].iter().filter(|&&f| (f - e).abs() <= T::lit(1e-12)).count();
                c.powf(e) * c.ln().powi(repeats as i32)
            }));
            row
        })
        .collect();
    solve(rows, values[start..].to_vec()).map(|x| x[0])
}

/// Least-squares slope of `values` against `log₂(1/cutoff)`.
fn slope_per_halving<T: Real>(cutoffs: &[T], values: &[T]) -> T {
    let xs: Vec<T> = cutoffs.iter().map(|c| -c.log2()).collect();
    let n = T::int(xs.len() as i64);
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = values.iter().copied().sum::<T>() / n;
    let sxy: T = xs.iter().zip(values).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let sxx: T = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn verdict<T: Real>(cutoffs: &[T], raw: &[T], extrapolated: &[Option<T>], exponent: T) -> SequenceVerdict<T> {
    let k = raw.len();
    let tail = k.saturating_sub(3);
    let seq: Vec<T> = (tail..k).map(|i| extrapolated[i].unwrap_or(raw[i])).collect();
    let lo = seq.iter().copied().fold(T::infinity(), T::min);
    let hi = seq.iter().copied().fold(T::neg_infinity(), T::max);
    let spread = hi - lo;
    let slope = if k - tail >= 2 {
        slope_per_halving(&cutoffs[tail..], &raw[tail..])
    } else {
        T::zero()
    };
    let cauchy = k >= 3 && spread <= T::lit(CAUCHY_TOL);
    SequenceVerdict {
        error_exponent: exponent,
        last_spread: spread,
        slope_per_halving: slope,
        cauchy,
        divergent: k >= 3 && !cauchy && slope > T::zero(),
    }
}

/// Truncated `L²` and `L^p` integrals of `f(z) = (1 - z₂)^{-2/p}` on a decreasing list of cutoffs.
///
/// Domains are nested, so each cutoff adds the two annuli it uncovers to the
/// previous value. `|f|^s = |1 - z₂|^{-2s/p}` does not depend on `z₁`, which
/// reduces every integral to the fiber-area weighted `z₂` plane.
pub fn counterexample_probe<T: Real>(
    domain: &DomainDescriptor2D,
    p: T,
    cutoffs: &[T],
    tol: T,
) -> Result<CounterexampleReport<T>> {
    if !(p >= T::lit(2.0)) || !p.is_finite() {
        return Err(Error::domain(
            "counterexample_probe",
            format!("p >= 2 violated (p = {p})"),
        ));
    }
    if cutoffs.is_empty() {
        return Err(Error::domain("counterexample_probe", "at least one cutoff required"));
    }
    for w in cutoffs.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::domain(
                "counterexample_probe",
                "cutoffs must be strictly decreasing",
            ));
        }
    }
    if !(cutoffs[0] < T::lit(0.5) && cutoffs[cutoffs.len() - 1] > T::zero()) {
        return Err(Error::domain("counterexample_probe", "cutoffs must lie in (0, 1/2)"));
    }
    let two = T::lit(2.0);
    // |f|^s = |1 - z₂|^{-2e} with e = s/p.
    let e2 = two / p;
    let ep = T::one();
    let gamma2 = two - two * e2;
    let mut rows: Vec<CounterexampleRow<T>> = Vec::new();
    let (mut l2, mut lp) = (T::zero(), T::zero());
    let mut prev: Option<T> = None;
    let mut total_nodes = 0;
    let mut all_ok = true;
    for &c in cutoffs {
        let mut nodes = 0;
        let mut ok = true;
        let spans: Vec<(T, T)> = match prev {
            None => vec![(c, T::one() - c)],
            Some(pc) => vec![(c, pc), (T::one() - pc, T::one() - c)],
        };
        for (a, b) in spans {
            l2 = l2 + annulus_integral(domain, e2, a, b, tol, &mut nodes, &mut ok);
            lp = lp + annulus_integral(domain, ep, a, b, tol, &mut nodes, &mut ok);
        }
        total_nodes += nodes;
        all_ok &= ok;
        rows.push(CounterexampleRow {
            cutoff: c,
            l2,
            lp,
            nodes: total_nodes,
            converged: all_ok,
            l2_extrapolated: None,
        });
        prev = Some(c);
    }
    let cs: Vec<T> = rows.iter().map(|r| r.cutoff).collect();
    let l2s: Vec<T> = rows.iter().map(|r| r.l2).collect();
    let lps: Vec<T> = rows.iter().map(|r| r.lp).collect();
    if gamma2 > T::zero() {
        let exps = [gamma2, T::one(), gamma2 + T::one(), two, gamma2 + two, T::lit(3.0)];
        for i in 0..rows.len() {
            if i >= 2 {
                rows[i].l2_extrapolated = richardson_limit(&cs[..=i], &l2s[..=i], &exps);
            }
        }
    }
    let l2_ext: Vec<Option<T>> = rows.iter().map(|r| r.l2_extrapolated).collect();
    let none = vec![None; rows.len()];
    Ok(CounterexampleReport {
        domain: domain.name().to_string(),
        p,
        l2: verdict(&cs, &l2s, &l2_ext, gamma2),
        lp: verdict(&cs, &lps, &none, T::zero()),
        lp_increments: lps.windows(2).map(|w| w[1] - w[0]).collect(),
        oracle_slope: domain.fiber_area(T::one()) * T::PI() * T::LN_2(),
        rows,
    })
}

/// `2^{-3}, …, 2^{-10}`.
pub fn default_cutoffs<T: Real>() -> Vec<T> {
    (3..=10).map(|k| T::lit(0.5).powi(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_recovers_power_law_limit() {
        let cs: Vec<f64> = (3..=9).map(|k| 0.5_f64.powi(k)).collect();
        let g = 2.0 / 3.0;
        let vals: Vec<f64> = cs
            .iter()
            .map(|&c| 5.0 - 2.0 * c.powf(g) + 0.7 * c - 0.1 * c.powf(g + 1.0))
            .collect();
        let l = richardson_limit(&cs, &vals, &[g, 1.0, g + 1.0, 2.0]).unwrap();
        assert!((l - 5.0).abs() < 1e-10);
    }

    #[test]
    fn richardson_handles_coinciding_exponents() {
        let cs: Vec<f64> = (3..=9).map(|k| 0.5_f64.powi(k)).collect();
        let vals: Vec<f64> = cs.iter().map(|&c| 2.0 + 3.0 * c * c.ln() - c + 0.5 * c * c).collect();
        let l = richardson_limit(&cs, &vals, &[1.0, 1.0, 2.0, 2.0]).unwrap();
        assert!((l - 2.0).abs() < 1e-9, "{l}");
    }

    #[test]
    fn slope_of_logarithm() {
        let cs: Vec<f64> = (3..=6).map(|k| 0.5_f64.powi(k)).collect();
        let vals: Vec<f64> = cs.iter().map(|c| -3.0 * c.log2() + 1.0).collect();
        assert!((slope_per_halving(&cs, &vals) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn circle_integral_far_from_singularity() {
        // ∮ |1 - r e^{iθ}|^{-2} dθ = 2π/(1 - r²).
        let (mut n, mut ok) = (0, true);
        let v = circle_integral(0.5_f64, 1.0, 1e-13, &mut n, &mut ok);
        assert!((v - 2.0 * std::f64::consts::PI / 0.75).abs() < 1e-12);
        let v = circle_integral(0.999_f64, 1.0, 1e-13, &mut n, &mut ok);
        assert!((v / (2.0 * std::f64::consts::PI / (1.0 - 0.999 * 0.999)) - 1.0).abs() < 1e-10);
        assert!(ok);
    }

    #[test]
    fn input_validation() {
        let h = DomainDescriptor2D::hartogs();
        assert!(counterexample_probe(&h, 1.5_f64, &[0.25], 1e-10).is_err());
        assert!(counterexample_probe(&h, 3.0_f64, &[0.125, 0.25], 1e-10).is_err());
        assert!(counterexample_probe(&h, 3.0_f64, &[0.6], 1e-10).is_err());
    }
}
