use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::series::{default_angle_count, LaurentSeries};
use crate::spaces::ModelSpace;
use crate::specfun::quadrature::dyadic_gauss_rule;

/// Tensor polar grid on the punctured disk: dyadic Gauss panels in `r`, equispaced angles.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid<T> {
    pub radii: Vec<T>,
    pub radial_weights: Vec<T>,
    pub angles: usize,
}

impl<T: Real> PolarGrid<T> {
    pub fn dyadic(panels: usize, per_panel: usize, angles: usize) -> Self {
        let (radii, radial_weights) = dyadic_gauss_rule(panels, per_panel);
        Self {
            radii,
            radial_weights,
            angles,
        }
    }

    /// `g(r_i e^{2πij/N})`, row-major in radius.
    pub fn sample<F: Fn(Complex<T>) -> Complex<T>>(&self, g: F) -> Vec<Vec<Complex<T>>> {
        let step = T::TAU() / T::int(self.angles as i64);
        self.radii
            .iter()
            .map(|&r| {
                (0..self.angles)
                    .map(|j| g(Complex::from_polar(r, step * T::int(j as i64))))
                    .collect()
            })
            .collect()
    }
}

/// A projected series with its grid-refinement verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T> {
    pub series: LaurentSeries<T>,
    /// Largest coefficient change between the coarse and refined grids.
    pub refinement_change: T,
    pub converged: bool,
}

/// `b_n = c_n² ⟨g, z^n⟩_{L²(w)}` for the samples `g` on `grid`.
pub fn project_samples<T: Real>(
    space: &ModelSpace<T>,
    grid: &PolarGrid<T>,
    samples: &[Vec<Complex<T>>],
    truncation: u32,
) -> Result<LaurentSeries<T>> {
    let t = truncation as i32;
    let n = grid.angles;
    if n <= 2 * truncation as usize {
        return Err(Error::Aliasing {
            angles: n,
            max_degree: t,
        });
    }
    if samples.len() != grid.radii.len() || samples.iter().any(|row| row.len() != n) {
        return Err(Error::domain("bergman_project", "samples do not match the grid"));
    }
    let degrees = space.admissible_in(-t, t);
    let fft = FftPlanner::new().plan_fft_forward(n);
    let weight = space.weight();
    let mut acc = vec![Complex::default(); degrees.len()];
    let ang = T::TAU() / T::int(n as i64);
    for ((&r, &wr), row) in grid.radii.iter().zip(&grid.radial_weights).zip(samples) {
        let mut buf = row.clone();
        fft.process(&mut buf);
        let ln_r = r.ln();
        let base = wr.ln() + ln_r + weight.ln_eval(r);
        for (slot, &d) in acc.iter_mut().zip(&degrees) {
            // ⟨g, z^n⟩ = ∫∫ g r^n e^{-inθ} w(r) r dr dθ
            let k = d.rem_euclid(n as i32) as usize;
            let scale = (base + T::int(d as i64) * ln_r).exp() * ang;
            *slot = *slot + buf[k] * scale;
        }
    }
    let mut out = LaurentSeries::zero();
    for (&d, a) in degrees.iter().zip(acc) {
        out.set(d, a * space.norming_constant_sq(d)?);
    }
    Ok(out)
}

/// Bergman projection of `g` onto degrees `|n| <= truncation`.
///
/// Computed on a coarse and a refined polar grid; `converged` when the two
/// agree within `tol · max(1, |b_n|)` coefficientwise.
pub fn bergman_project<T, F>(space: &ModelSpace<T>, g: F, truncation: u32, tol: T) -> Result<Projection<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    let angles = default_angle_count(truncation as i32).max(32).next_power_of_two();
    let coarse_grid = PolarGrid::dyadic(64, 16, angles);
    let fine_grid = PolarGrid::dyadic(64, 32, 2 * angles);
    let coarse = project_samples(space, &coarse_grid, &coarse_grid.sample(&g), truncation)?;
    let fine = project_samples(space, &fine_grid, &fine_grid.sample(&g), truncation)?;
    let mut change = T::zero();
    let mut converged = true;
    for (d, b) in fine.terms() {
        let diff = (b - coarse.coefficient(d)).norm();
        change = change.max(diff);
        if !(diff <= tol * b.norm().max(T::one())) {
            converged = false;
        }
    }
    Ok(Projection {
        series: fine,
        refinement_change: change,
        converged,
    })
}
