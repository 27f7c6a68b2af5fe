use num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use super::DomainDescriptor2D;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::series::LaurentSeries;
use crate::specfun::quadrature::{composite_gauss_rule, dyadic_gauss_rule};

/// Highest `z₁` power paired against.
pub const MAX_Z1_POWER: u32 = 2;

/// Tensor grid for the pairing integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BruteForceGrid {
    /// Dyadic panels toward `r₂ = 0`.
    pub r2_panels: usize,
    pub r2_nodes: usize,
    /// Gauss nodes on `[0, R(r₂)]`.
    pub r1_nodes: usize,
    pub theta1: usize,
    pub theta2: usize,
}

impl BruteForceGrid {
    /// A grid able to resolve `z₂` degrees up to `max_degree`.
    pub fn for_degree(max_degree: u32) -> Self {
        Self {
            r2_panels: 56,
            r2_nodes: 12,
            r1_nodes: 8,
            theta1: 8,
            theta2: (4 * max_degree as usize + 16).next_power_of_two(),
        }
    }

    pub fn refined(self) -> Self {
        Self {
            r2_panels: self.r2_panels + 8,
            r2_nodes: 2 * self.r2_nodes,
            r1_nodes: 2 * self.r1_nodes,
            theta1: 2 * self.theta1,
            theta2: 2 * self.theta2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct BruteForceResult<T> {
    /// The `z₁`-free part of `B(f̄)`, as a series in `z₂`.
    pub series: LaurentSeries<T>,
    /// Largest `|c_α² ⟨f̄, e_α⟩|` over `α₁ ∈ 1..=2`.
    pub leakage: T,
    /// Largest coefficient change between the coarse and refined grids.
    pub refinement_change: T,
    pub converged: bool,
    pub grid: BruteForceGrid,
}

/// `B(f̄)` on the full two-variable domain, by quadrature against every monomial
/// `z₁^{α₁} z₂^{α₂}` with `α₁ <= 2`, `|α₂| <= max_degree`.
pub fn brute_force_friedrichs<T, F>(
    domain: &DomainDescriptor2D,
    f: F,
    max_degree: u32,
    grid: BruteForceGrid,
    tol: T,
) -> Result<BruteForceResult<T>>
where
    T: Real,
    F: Fn(Complex<T>, Complex<T>) -> Complex<T>,
{
    if grid.theta2 <= 2 * max_degree as usize || grid.theta1 <= 2 * MAX_Z1_POWER as usize {
        return Err(Error::Aliasing {
            angles: grid.theta2.min(grid.theta1),
            max_degree: max_degree as i32,
        });
    }
    let coarse = pairings(domain, &f, max_degree, grid, tol)?;
    let fine_grid = grid.refined();
    let fine = pairings(domain, &f, max_degree, fine_grid, tol)?;
    let mut change = T::zero();
    let mut leakage = T::zero();
    let mut series = LaurentSeries::zero();
    for (((a, b), vf), (_, vc)) in fine.iter().zip(&coarse) {
        change = change.max((*vf - *vc).norm());
        if *a == 0 {
            series.set(*b, *vf);
        } else {
            leakage = leakage.max(vf.norm());
        }
    }
    Ok(BruteForceResult {
        series,
        leakage,
        refinement_change: change,
        converged: change <= tol,
        grid: fine_grid,
    })
}

type Pairings<T> = Vec<((u32, i32), Complex<T>)>;

/// `c_α² ⟨f̄, e_α⟩` for all admissible `α`, in `(α₁, α₂)` order.
fn pairings<T, F>(
    domain: &DomainDescriptor2D,
    f: &F,
    max_degree: u32,
    grid: BruteForceGrid,
    tol: T,
) -> Result<Pairings<T>>
where
    T: Real,
    F: Fn(Complex<T>, Complex<T>) -> Complex<T>,
{
    let md = max_degree as i32;
    let (r2s, w2s) = dyadic_gauss_rule::<T>(grid.r2_panels, grid.r2_nodes);
    let (x1, w1) = composite_gauss_rule::<T>(T::zero(), T::one(), 1, grid.r1_nodes);
    let n1 = grid.theta1;
    let n2 = grid.theta2;
    let h1 = T::TAU() / T::int(n1 as i64);
    let h2 = T::TAU() / T::int(n2 as i64);
    let fft = FftPlanner::new().plan_fft_forward(n2);
    let powers = (MAX_Z1_POWER + 1) as usize;
    let nb = (2 * md + 1) as usize;
    // acc[a][b + md] accumulates ∫ f̄ conj(z₁^a z₂^b) dV.
    let mut acc = vec![vec![Complex::<T>::default(); nb]; powers];
    let e1: Vec<Vec<Complex<T>>> = (0..powers)
        .map(|a| {
            (0..n1)
                .map(|j| Complex::from_polar(T::one(), -h1 * T::int((a * j) as i64)))
                .collect()
        })
        .collect();
    for (&r2, &w2) in r2s.iter().zip(&w2s) {
        let big_r = domain.fiber_radius(r2);
        if big_r == T::zero() {
            continue;
        }
        let ln_r2 = r2.ln();
        for (&xi, &wi) in x1.iter().zip(&w1) {
            let r1 = big_r * xi;
            let ln_r1 = r1.ln();
            // rows[a][k] = Σ_j f̄(r₁e^{iθ_j}, r₂e^{iφ_k}) e^{-iaθ_j}
            let mut rows = vec![vec![Complex::<T>::default(); n2]; powers];
            for k in 0..n2 {
                let z2 = Complex::from_polar(r2, h2 * T::int(k as i64));
                for j in 0..n1 {
                    let z1 = Complex::from_polar(r1, h1 * T::int(j as i64));
                    let v = f(z1, z2).conj();
                    for (row, e) in rows.iter_mut().zip(&e1) {
                        row[k] = row[k] + v * e[j];
                    }
                }
            }
            let base = (w2 * wi * big_r * h1 * h2).ln() + ln_r2 + ln_r1;
            for (a, row) in rows.iter_mut().enumerate() {
                fft.process(row);
                for b in -md..=md {
                    // radial factor r₁^a r₂^b from conj(z₁^a z₂^b), plus r₁ r₂ from the area elements
                    let s = (base + T::int(a as i64) * ln_r1 + T::int(b as i64) * ln_r2).exp();
                    let idx = b.rem_euclid(n2 as i32) as usize;
                    acc[a][(b + md) as usize] = acc[a][(b + md) as usize] + row[idx] * s;
                }
            }
        }
    }
    let mut out = Vec::new();
    for (a, row) in acc.iter().enumerate() {
        for b in -md..=md {
            if !domain.is_admissible(a as u32, b) {
                continue;
            }
            let c2 = (-domain.ln_monomial_norm_sq(a as u32, b, tol * T::lit(1e-2))?).exp();
            out.push(((a as u32, b), row[(b + md) as usize] * c2));
        }
    }
    Ok(out)
}
