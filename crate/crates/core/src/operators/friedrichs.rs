use std::collections::BTreeMap;
use std::sync::Arc;

use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Real;
use crate::series::LaurentSeries;
use crate::spaces::{IndexSet, ModelSpace};
use crate::specfun::Moment;

/// Singular values at or below this count as zero.
pub const RANK_TOL: f64 = 1e-13;

/// The antilinear Friedrichs operator `F f = B(f̄)` on a radial model space.
///
/// Angular orthogonality collapses `F` to the coefficient flip
/// `(F f)_m = φ_m conj(a_{-m})` with `φ_m = μ(0)/μ(2m)`, nonzero only when
/// both `m` and `-m` are admissible.
#[derive(Debug, Clone)]
pub struct FriedrichsMap<T: Real> {
    space: Arc<ModelSpace<T>>,
    ln_factors: BTreeMap<i32, T>,
    radius: i32,
}

impl<T: Real> FriedrichsMap<T> {
    /// Tabulates `φ_m` for `|m| <= radius`; degrees beyond are computed on demand.
    pub fn new(space: Arc<ModelSpace<T>>, radius: u32) -> Result<Self> {
        let radius = radius as i32;
        let mut ln_factors = BTreeMap::new();
        for m in -radius..=radius {
            if let Some(l) = compute_ln_factor(&space, m)? {
                ln_factors.insert(m, l);
            }
        }
        Ok(Self {
            space,
            ln_factors,
            radius,
        })
    }

    pub fn space(&self) -> &ModelSpace<T> {
        &self.space
    }

    pub fn shared_space(&self) -> Arc<ModelSpace<T>> {
        self.space.clone()
    }

    pub fn table_radius(&self) -> i32 {
        self.radius
    }

    /// `ln φ_m`, or `None` where the factor vanishes structurally.
    pub fn ln_factor(&self, m: i32) -> Result<Option<T>> {
        if m.abs() <= self.radius {
            Ok(self.ln_factors.get(&m).copied())
        } else {
            compute_ln_factor(&self.space, m)
        }
    }

    /// `φ_m` (zero outside the support).
    pub fn factor(&self, m: i32) -> Result<T> {
        Ok(self.ln_factor(m)?.map_or(T::zero(), T::exp))
    }

    /// Stored `(m, φ_m)` pairs, ascending in `m`.
    pub fn factor_table(&self) -> impl Iterator<Item = (i32, T)> + '_ {
        self.ln_factors.iter().map(|(&m, &l)| (m, l.exp()))
    }

    /// `λ_m = φ_m φ_{-m}`, the eigenvalue of `F²` on `z^m`.
    pub fn eigenvalue(&self, m: i32) -> Result<T> {
        Ok(match (self.ln_factor(m)?, self.ln_factor(-m)?) {
            (Some(a), Some(b)) => (a + b).exp(),
            _ => T::zero(),
        })
    }

    /// `s_m = √λ_m`.
    pub fn singular_value(&self, m: i32) -> Result<T> {
        Ok(match (self.ln_factor(m)?, self.ln_factor(-m)?) {
            (Some(a), Some(b)) => ((a + b) * T::lit(0.5)).exp(),
            _ => T::zero(),
        })
    }

    /// `F s`: `a_n z^n ↦ φ_{-n} conj(a_n) z^{-n}`.
    pub fn apply(&self, s: &LaurentSeries<T>) -> Result<LaurentSeries<T>> {
        let mut out = LaurentSeries::zero();
        for (n, a) in s.terms() {
            if let Some(l) = self.ln_factor(-n)? {
                out.add_term(-n, a.conj() * l.exp());
            }
        }
        Ok(out)
    }

    /// `F² s`: `a_m ↦ λ_m a_m`.
    pub fn apply_squared(&self, s: &LaurentSeries<T>) -> Result<LaurentSeries<T>> {
        let mut out = LaurentSeries::zero();
        for (m, a) in s.terms() {
            let lambda = self.eigenvalue(m)?;
            if lambda > T::zero() {
                out.add_term(m, a * lambda);
            }
        }
        Ok(out)
    }

    /// Spectrum of `F` and `F²` on degrees `|m| <= truncation`.
    pub fn spectrum(&self, truncation: u32) -> Result<SpectrumReport<T>> {
        let t = truncation.max(1) as i32;
        let mut entries = Vec::with_capacity(2 * t as usize + 1);
        let mut structural = Vec::new();
        for m in -t..=t {
            let s = self.singular_value(m)?;
            if s > T::zero() {
                structural.push(m);
            }
            entries.push(SpectrumEntry {
                degree: m,
                singular_value: s,
                eigenvalue: self.eigenvalue(m)?,
            });
        }
        let numerical_rank = entries.iter().filter(|e| e.singular_value > T::lit(RANK_TOL)).count();
        let reaches_edge = structural.contains(&t) || structural.contains(&-t);
        let rank_estimate = if reaches_edge {
            RankEstimate::InfiniteWithinTruncation
        } else {
            RankEstimate::Finite(numerical_rank)
        };
        Ok(SpectrumReport {
            space: self.space.weight().describe(),
            truncation,
            entries,
            rank_estimate,
            numerical_rank,
            rank_tolerance: RANK_TOL,
        })
    }
}

fn compute_ln_factor<T: Real>(space: &ModelSpace<T>, m: i32) -> Result<Option<T>> {
    let decided = matches!(space.index_set(), IndexSet::AtLeast(_) | IndexSet::All);
    if decided && !(space.is_admissible(m) && space.is_admissible(-m)) {
        return Ok(None);
    }
    let ln_mu = |t: i64| -> Result<Option<T>> {
        Ok(match space.ln_moment(T::int(t))? {
            Moment::Finite(l) => Some(l.ln_value),
            Moment::Infinite => None,
        })
    };
    match (ln_mu(0)?, ln_mu(2 * m as i64)?, ln_mu(-2 * m as i64)?) {
        (Some(l0), Some(lm), Some(_)) => Ok(Some(l0 - lm)),
        _ => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry<T> {
    pub degree: i32,
    pub singular_value: T,
    pub eigenvalue: T,
}

/// Rank of `F` as seen through a finite window of degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum RankEstimate {
    Finite(usize),
    /// Nonzero singular values reach the edge of the window.
    InfiniteWithinTruncation,
}

impl Serialize for RankEstimate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RankEstimate::Finite(r) => serializer.serialize_u64(*r as u64),
            RankEstimate::InfiniteWithinTruncation => serializer.serialize_str("infinite within truncation"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport<T> {
    pub space: String,
    pub truncation: u32,
    pub entries: Vec<SpectrumEntry<T>>,
    pub rank_estimate: RankEstimate,
    /// Count of singular values above `rank_tolerance`.
    pub numerical_rank: usize,
    pub rank_tolerance: f64,
}

impl<T: Real> SpectrumReport<T> {
    pub fn entry(&self, degree: i32) -> Option<&SpectrumEntry<T>> {
        self.entries.iter().find(|e| e.degree == degree)
    }
}

/// `Σ_m φ_m ‖z^m‖_{L^p} · max_m K_{-m}` over the support of `φ` within `|m| <= radius`.
///
/// Bounds `‖F f‖_{L^p} / ‖f‖_{L¹(w)}` when `F` has finite rank, by
/// `|a_{-m}| <= K_{-m} ‖f‖_{L¹}` and the triangle inequality. `+∞` once some
/// `z^m` in the image leaves `L^p`.
pub fn gain_chain_constant<T: Real>(map: &FriedrichsMap<T>, p: T, radius: u32) -> Result<T> {
    let r = radius as i32;
    let mut sum = T::zero();
    let mut k_max = T::zero();
    for m in -r..=r {
        let phi = map.factor(m)?;
        if phi == T::zero() {
            continue;
        }
        sum = sum + phi * map.space().monomial_lp_norm(m, p)?;
        k_max = k_max.max(map.space().coefficient_bound_constant(-m)?);
    }
    Ok(sum * k_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn hartogs() -> FriedrichsMap<f64> {
        FriedrichsMap::new(Arc::new(ModelSpace::hartogs()), 8).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn hartogs_factor_table() {
        let f = hartogs();
        let table: Vec<(i32, f64)> = f.factor_table().collect();
        assert_eq!(table.len(), 3);
        for ((m, phi), (wm, wphi)) in table.iter().zip([(-1, 0.5), (0, 1.0), (1, 1.5)]) {
            assert_eq!(*m, wm);
            assert!((phi - wphi).abs() < 1e-15);
        }
        assert_eq!(f.factor(40).unwrap(), 0.0);
    }

    #[test]
    fn hartogs_examples() {
        let f = hartogs();
        let out = f.apply(&LaurentSeries::monomial(-1, c(1.0, 0.0))).unwrap();
        assert!((out.coefficient(1) - c(1.5, 0.0)).norm() < 1e-15);
        let out = f.apply(&LaurentSeries::monomial(1, c(0.0, 1.0))).unwrap();
        assert!((out.coefficient(-1) - c(0.0, -0.5)).norm() < 1e-15);
        assert!(f.apply(&LaurentSeries::monomial(5, c(7.0, 0.0))).unwrap().is_empty());
        let sq = f.apply_squared(&LaurentSeries::monomial(1, c(1.0, 0.0))).unwrap();
        assert!((sq.coefficient(1) - c(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hartogs_spectrum() {
        let s = hartogs().spectrum(6).unwrap();
        assert_eq!(s.rank_estimate, RankEstimate::Finite(3));
        assert_eq!(s.entry(0).unwrap().eigenvalue, 1.0);
        for m in -2..=2_i32 {
            let want = ((4 - m * m).max(0) as f64).sqrt() / 2.0;
            assert!((s.entry(m).unwrap().singular_value - want).abs() < 1e-15);
        }
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"rank_estimate\":3"));
    }

    #[test]
    fn exp_hartogs_spectrum_has_full_support() {
        let f = FriedrichsMap::new(Arc::new(ModelSpace::<f64>::exp_hartogs()), 20).unwrap();
        let s = f.spectrum(20).unwrap();
        assert_eq!(s.entries.len(), 41);
        assert!(s.entries.iter().all(|e| e.singular_value > 0.0));
        assert_eq!(s.rank_estimate, RankEstimate::InfiniteWithinTruncation);
        // Super-exponential decay: log-ratios of successive singular values keep falling.
        let ln: Vec<f64> = (0..=20).map(|m| s.entry(m).unwrap().singular_value.ln()).collect();
        let steps: Vec<f64> = ln.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps.windows(2).skip(2).all(|w| w[1] < w[0]));
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"infinite within truncation\""));
    }

    #[test]
    fn gain_chain_on_hartogs() {
        let f = hartogs();
        let pi = std::f64::consts::PI;
        for p in [2.0, 3.0, 3.9] {
            let want = (0.5 * (2.0 * pi / (4.0 - p)).powf(1.0 / p)
                + (pi / 2.0).powf(1.0 / p)
                + 1.5 * (2.0 * pi / (p + 4.0)).powf(1.0 / p))
                * (5.0 / (2.0 * pi));
            assert!((gain_chain_constant(&f, p, 4).unwrap() - want).abs() < 1e-13);
        }
        assert!(gain_chain_constant(&f, 4.0, 4).unwrap().is_infinite());
    }
}
