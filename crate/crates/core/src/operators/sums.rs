use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{ln_itilde, log_gamma};

/// One term of a convergence sum, with its comparator where one applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesTerm<T> {
    pub index: i64,
    pub term: T,
    pub ln_term: T,
    pub comparator: Option<T>,
}

/// Partial sums of a positive series assembled from log-space terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSumReport<T> {
    pub name: String,
    pub p: Option<T>,
    pub k_max: u32,
    pub terms: Vec<SeriesTerm<T>>,
    /// `(K, S_K)` for `K = 0..=k_max`.
    pub partial_sums: Vec<(u32, T)>,
    /// Largest term added at `K = k_max`.
    pub last_term: T,
    /// Successive term ratios `t_{k+1}/t_k` along the slowest side.
    pub ratios: Vec<T>,
    /// Ratios on the negative-index side, where present.
    pub negative_side_ratios: Vec<T>,
    /// `(min, max)` of `term / comparator` over the indices with a comparator.
    pub comparator_band: Option<(T, T)>,
    /// Geometric extrapolation of the omitted tail from the last ratio.
    pub tail_estimate: T,
    pub all_converged: bool,
}

impl<T: Real> PartialSumReport<T> {
    pub fn sum(&self) -> T {
        self.partial_sums.last().map_or(T::zero(), |&(_, s)| s)
    }

    pub fn partial_sum(&self, k: u32) -> Option<T> {
        self.partial_sums.iter().find(|(kk, _)| *kk == k).map(|&(_, s)| s)
    }

    pub fn term(&self, index: i64) -> Option<&SeriesTerm<T>> {
        self.terms.iter().find(|t| t.index == index)
    }
}

struct LnItilde<T> {
    tol: T,
    converged: bool,
}

impl<T: Real> LnItilde<T> {
    fn at(&mut self, x: i64) -> Result<T> {
        let l = ln_itilde(T::int(x), self.tol)?;
        self.converged &= l.converged;
        Ok(l.ln_value)
    }
}

fn band<T: Real>(terms: &[SeriesTerm<T>]) -> Option<(T, T)> {
    let ratios: Vec<T> = terms.iter().filter_map(|t| t.comparator.map(|c| t.term / c)).collect();
    if ratios.is_empty() {
        return None;
    }
    let lo = ratios.iter().copied().fold(T::infinity(), T::min);
    let hi = ratios.iter().copied().fold(T::neg_infinity(), T::max);
    Some((lo, hi))
}

fn successive_ratios<T: Real>(terms: &[T]) -> Vec<T> {
    terms.windows(2).map(|w| w[1] / w[0]).collect()
}

fn tail_from<T: Real>(last: T, ratio: Option<T>) -> T {
    match ratio {
        Some(r) if r < T::one() => last * r / (T::one() - r),
        _ => T::infinity(),
    }
}

/// `S(p) = Σ_{α∈ℤ} Ĩ(2α+1)^{-1} Ĩ(αp+1)^{1/p} Ĩ(-α+1)^{-1}` over `|α| <= k_max`.
///
/// For `α >= 5` each term is paired with the comparator
/// `(2α+2) / ((αp+2)^{1/p} (1/2)^{α-2} Γ(α-2))`.
pub fn hinfty_bound_series<T: Real>(p: T, k_max: u32, tol: T) -> Result<PartialSumReport<T>> {
    if !(p >= T::lit(2.0)) || !p.is_finite() {
        return Err(Error::domain(
            "hinfty_bound_series",
            format!("p >= 2 violated (p = {p})"),
        ));
    }
    let mut it = LnItilde { tol, converged: true };
    let inv_p = T::one() / p;
    let mut ln_term = |a: i64| -> Result<T> {
        // Ĩ(αp+1) needs a real argument.
        let mid = ln_itilde(T::int(a) * p + T::one(), tol)?;
        it.converged &= mid.converged;
        Ok(-it.at(2 * a + 1)? + inv_p * mid.ln_value - it.at(1 - a)?)
    };
    let ln2 = T::LN_2();
    let comparator = |a: i64| -> Result<Option<T>> {
        if a < 5 {
            return Ok(None);
        }
        let aa = T::int(a);
        let l = (T::lit(2.0) * aa + T::lit(2.0)).ln() - inv_p * (aa * p + T::lit(2.0)).ln() + (aa - T::lit(2.0)) * ln2
            - log_gamma(aa - T::lit(2.0))?;
        Ok(Some(l.exp()))
    };
    let mut terms = Vec::new();
    let mut partial_sums = Vec::new();
    let mut s = T::zero();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut last_term = T::zero();
    for k in 0..=k_max as i64 {
        let indices: &[i64] = if k == 0 { &[0] } else { &[-k, k] };
        last_term = T::zero();
        for &a in indices {
            let l = ln_term(a)?;
            let t = l.exp();
            s = s + t;
            last_term = last_term.max(t);
            terms.push(SeriesTerm {
                index: a,
                term: t,
                ln_term: l,
                comparator: comparator(a)?,
            });
            if a >= 0 {
                pos.push(t);
            }
            if a <= 0 {
                neg.push(t);
            }
        }
        partial_sums.push((k as u32, s));
    }
    terms.sort_by_key(|t| t.index);
    let pos_ratios = successive_ratios(&pos);
    let negative_side_ratios = successive_ratios(&neg);
    let (pr, nr) = (pos_ratios.last().copied(), negative_side_ratios.last().copied());
    let ratios = match (pr, nr) {
        (Some(a), Some(b)) if b > a => negative_side_ratios.clone(),
        _ => pos_ratios.clone(),
    };
    let tail =
        tail_from(pos.last().copied().unwrap_or_default(), pr) + tail_from(neg.last().copied().unwrap_or_default(), nr);
    Ok(PartialSumReport {
        name: "S(p)".into(),
        p: Some(p),
        k_max,
        comparator_band: band(&terms),
        terms,
        partial_sums,
        last_term,
        ratios,
        negative_side_ratios,
        tail_estimate: tail,
        all_converged: it.converged,
    })
}

/// `Σ_{k>=0} Ĩ(2k+1)^{-1} Ĩ(-2k+1)^{-1} Ĩ(k+1)^{-1}` up to `k_max`.
///
/// For `k >= 3` each term is paired with `(k+2)(2k+2) / ((1/2)^{2k-2} Γ(2k-2))`.
pub fn f_squared_hinfty_series<T: Real>(k_max: u32, tol: T) -> Result<PartialSumReport<T>> {
    if k_max < 1 {
        return Err(Error::domain("f_squared_hinfty_series", "K >= 1 violated"));
    }
    let mut it = LnItilde { tol, converged: true };
    let ln2 = T::LN_2();
    let mut terms = Vec::new();
    let mut partial_sums = Vec::new();
    let mut values = Vec::new();
    let mut s = T::zero();
    for k in 0..=k_max as i64 {
        let l = -it.at(2 * k + 1)? - it.at(1 - 2 * k)? - it.at(k + 1)?;
        let t = l.exp();
        let comparator = if k >= 3 {
            let kk = T::int(k);
            let two = T::lit(2.0);
            let lc = ((kk + two) * (two * kk + two)).ln() + (two * kk - two) * ln2 - log_gamma(two * kk - two)?;
            Some(lc.exp())
        } else {
            None
        };
        s = s + t;
        values.push(t);
        terms.push(SeriesTerm {
            index: k,
            term: t,
            ln_term: l,
            comparator,
        });
        partial_sums.push((k as u32, s));
    }
    let ratios = successive_ratios(&values);
    let last_term = values.last().copied().unwrap_or_default();
    Ok(PartialSumReport {
        name: "F2-Hinfty".into(),
        p: None,
        k_max,
        comparator_band: band(&terms),
        terms,
        partial_sums,
        last_term,
        tail_estimate: tail_from(last_term, ratios.last().copied()),
        ratios,
        negative_side_ratios: Vec::new(),
        all_converged: it.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::itilde;

    #[test]
    fn f_squared_leading_term() {
        let r = f_squared_hinfty_series(3, 1e-12_f64).unwrap();
        let i1 = itilde(1.0_f64, 1e-13).unwrap().value;
        assert!((r.term(0).unwrap().term * i1.powi(3) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn s_of_p_symmetric_window() {
        let r = hinfty_bound_series(2.0_f64, 4, 1e-12).unwrap();
        assert_eq!(r.terms.len(), 9);
        assert_eq!(r.partial_sums.len(), 5);
        let direct: f64 = r.terms.iter().map(|t| t.term).sum();
        assert!((direct - r.sum()).abs() < 1e-12 * direct);
        assert!(hinfty_bound_series(1.5_f64, 4, 1e-12).is_err());
    }
}
