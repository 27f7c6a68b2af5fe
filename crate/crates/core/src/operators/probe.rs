use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::FriedrichsMap;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::series::{l2_norm, lp_norm, LaurentSeries};

/// Tunables of [`norm_probe_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeSettings<T> {
    /// Quadrature tolerance for `L^p` norms with `p ≠ 2`.
    pub tol: T,
    /// Coordinate ascent touches degrees `|n| <= ascent_radius`.
    pub ascent_radius: i32,
    pub sweeps: usize,
}

impl<T: Real> Default for ProbeSettings<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-7),
            ascent_radius: 3,
            sweeps: 2,
        }
    }
}

/// Lower bound on `‖F‖_{A^q → A^p}` found by [`norm_probe`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct ProbeReport<T> {
    pub space: String,
    pub q: T,
    pub p: T,
    pub truncation: u32,
    pub trials: usize,
    pub seed: u64,
    /// Best finite ratio `‖F s‖_p / ‖s‖_q` found; never a certified norm.
    pub lower_bound: T,
    pub maximizer: LaurentSeries<T>,
    /// `monomial` or `trial <k>`.
    pub maximizer_origin: String,
    /// Some `s` with `‖s‖_q < ∞` has `‖F s‖_p = ∞`.
    pub unbounded: bool,
    pub unbounded_witness: Option<LaurentSeries<T>>,
    pub evaluations: usize,
    pub all_converged: bool,
}

struct Candidate<T> {
    ratio: T,
    series: LaurentSeries<T>,
    evaluations: usize,
    converged: bool,
}

struct Probe<'a, T: Real> {
    map: &'a FriedrichsMap<T>,
    q: T,
    p: T,
    tol: T,
}

impl<T: Real> Probe<'_, T> {
    fn norm(&self, s: &LaurentSeries<T>, exponent: T) -> Result<(T, bool)> {
        if exponent == T::lit(2.0) {
            return Ok((l2_norm(self.map.space(), s)?, true));
        }
        let q = lp_norm(self.map.space(), s, exponent, self.tol)?;
        Ok((q.value, q.converged))
    }

    fn ratio(&self, s: &LaurentSeries<T>) -> Result<(T, bool)> {
        let (den, c1) = self.norm(s, self.q)?;
        if den == T::zero() {
            return Ok((T::zero(), c1));
        }
        let (num, c2) = self.norm(&self.map.apply(s)?, self.p)?;
        Ok((num / den, c1 && c2))
    }

    fn run_trial(&self, degrees: &[i32], seed: u64, trial: u64, settings: &ProbeSettings<T>) -> Result<Candidate<T>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let space = self.map.space();
        let mut s = LaurentSeries::zero();
        for &n in degrees {
            let scale = T::one() / space.monomial_lp_norm(n, self.q)?;
            let re = T::lit(rng.random_range(-1.0..1.0));
            let im = T::lit(rng.random_range(-1.0..1.0));
            s.set(n, Complex::new(re, im) * scale);
        }
        let (mut best, mut converged) = self.ratio(&s)?;
        let mut evaluations = 1;
        let ascent: Vec<i32> = degrees
            .iter()
            .copied()
            .filter(|n| n.abs() <= settings.ascent_radius)
            .collect();
        let mut delta = T::lit(0.5);
        for _ in 0..settings.sweeps {
            for &d in &ascent {
                let a = s.coefficient(d);
                for factor in [T::one() + delta, T::one() - delta] {
                    let mut trial_s = s.clone();
                    trial_s.set(d, a * factor);
                    let (r, c) = self.ratio(&trial_s)?;
                    evaluations += 1;
                    converged &= c;
                    if r > best {
                        best = r;
                        s = trial_s;
                        break;
                    }
                }
            }
            delta = delta * T::lit(0.5);
        }
        Ok(Candidate {
            ratio: best,
            series: s,
            evaluations,
            converged,
        })
    }
}

/// [`norm_probe_with`] under default settings.
pub fn norm_probe<T: Real>(
    map: &FriedrichsMap<T>,
    q: T,
    p: T,
    truncation: u32,
    trials: usize,
    seed: u64,
) -> Result<ProbeReport<T>> {
    norm_probe_with(map, q, p, truncation, trials, seed, &ProbeSettings::default())
}

/// Maximizes `‖F s‖_{L^p} / ‖s‖_{L^q}` over admissible `s` with degrees `|n| <= truncation`.
///
/// Candidates are every monomial (ratios from exact moments), then `trials`
/// random vectors refined by coordinate ascent. Trial `k` draws from the
/// ChaCha8 stream `k` of `seed`, so the report depends only on the arguments.
pub fn norm_probe_with<T: Real>(
    map: &FriedrichsMap<T>,
    q: T,
    p: T,
    truncation: u32,
    trials: usize,
    seed: u64,
    settings: &ProbeSettings<T>,
) -> Result<ProbeReport<T>> {
    if !(q >= T::one() && p >= T::one()) {
        return Err(Error::domain(
            "norm_probe",
            format!("p, q >= 1 violated (q = {q}, p = {p})"),
        ));
    }
    let space = map.space();
    let t = truncation as i32;
    let mut degrees = Vec::new();
    let mut witness = None;
    let mut best = Candidate {
        ratio: T::zero(),
        series: LaurentSeries::zero(),
        evaluations: 0,
        converged: true,
    };
    let mut origin = String::from("none");
    for n in space.admissible_in(-t, t) {
        let phi = map.factor(-n)?;
        let src = space.monomial_lp_norm(n, q)?;
        if phi == T::zero() || !src.is_finite() {
            continue;
        }
        let dst = phi * space.monomial_lp_norm(-n, p)?;
        if !dst.is_finite() {
            witness.get_or_insert_with(|| LaurentSeries::monomial(n, Complex::new(T::one(), T::zero())));
            continue;
        }
        degrees.push(n);
        let ratio = dst / src;
        if ratio > best.ratio {
            best.ratio = ratio;
            best.series = LaurentSeries::monomial(n, Complex::new(T::one(), T::zero()));
            origin = String::from("monomial");
        }
    }
    let probe = Probe {
        map,
        q,
        p,
        tol: settings.tol,
    };
    let mut evaluations = degrees.len();
    let mut all_converged = true;
    if !degrees.is_empty() {
        let outcomes: Vec<Result<Candidate<T>>> = (0..trials as u64)
            .into_par_iter()
            .map(|k| probe.run_trial(&degrees, seed, k, settings))
            .collect();
        // Ties resolve to the lowest trial index, independent of scheduling.
        for (k, outcome) in outcomes.into_iter().enumerate() {
            let c = outcome?;
            evaluations += c.evaluations;
            all_converged &= c.converged;
            if c.ratio > best.ratio {
                origin = format!("trial {k}");
                best = c;
            }
        }
    }
    Ok(ProbeReport {
        space: space.weight().describe(),
        q,
        p,
        truncation,
        trials,
        seed,
        lower_bound: best.ratio,
        maximizer: best.series,
        maximizer_origin: origin,
        unbounded: witness.is_some(),
        unbounded_witness: witness,
        evaluations,
        all_converged,
    })
}
