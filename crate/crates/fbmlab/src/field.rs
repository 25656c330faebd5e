//! Spectral fields: Fourier coefficient arrays on a [`Grid`] plus the
//! forward/inverse transforms.
//!
//! Coefficients follow the Fourier-series convention
//!     theta(x) = sum_k theta_hat(k) exp(i xi_k . x),
//! so the forward transform is the DFT divided by N^n and the inverse is the
//! plain unnormalized inverse DFT. Real physical fields correspond to
//! Hermitian coefficient arrays; every operation in the crate preserves that
//! symmetry up to round-off.

use crate::grid::Grid;
use crate::{Complex, Error, Result};
use rustfft::FftPlanner;
use std::cell::RefCell;

#[derive(Clone)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex>,
    /// Solver time the coefficients belong to; carried through snapshots.
    pub time_tag: f64,
}

impl std::fmt::Debug for SpectralField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralField")
            .field("grid", &self.grid)
            .field("modes", &self.coeffs.len())
            .field("time_tag", &self.time_tag)
            .field("max_abs", &self.max_abs())
            .finish()
    }
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex::new(0.0, 0.0); grid.total()],
            time_tag: 0.0,
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex>, time_tag: f64) -> Result<Self> {
        if coeffs.len() != grid.total() {
            return Err(Error::Dimension(format!(
                "coefficient vector has {} entries, grid needs {}",
                coeffs.len(),
                grid.total()
            )));
        }
        Ok(SpectralField {
            grid,
            coeffs,
            time_tag,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex] {
        &mut self.coeffs
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Dimension(format!(
                "grids differ: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Physical L^2 norm via Parseval: (L^n sum |c_k|^2)^(1/2).
    pub fn l2_physical(&self) -> f64 {
        let sum: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        (self.grid.length().powi(self.grid.dim() as i32) * sum).sqrt()
    }

    /// Max over modes of |c(-k) - conj(c(k))|; zero (to round-off) for fields
    /// that came from real samples.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for idx in 0..self.coeffs.len() {
            let c = self.grid.conjugate_index(idx);
            let d = (self.coeffs[c] - self.coeffs[idx].conj()).norm();
            worst = worst.max(d);
        }
        worst
    }

    /// Errors with `Blowup` if any coefficient is non-finite or exceeds the
    /// blowup threshold.
    pub fn check_finite(&self) -> Result<()> {
        for c in &self.coeffs {
            if !c.re.is_finite() || !c.im.is_finite() || c.norm_sqr() > crate::BLOWUP_THRESHOLD * crate::BLOWUP_THRESHOLD {
                return Err(Error::Blowup {
                    time: self.time_tag,
                    last: None,
                });
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SpectralField {
            grid: self.grid,
            coeffs,
            time_tag: self.time_tag,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(SpectralField {
            grid: self.grid,
            coeffs,
            time_tag: self.time_tag,
        })
    }

    pub fn scaled(&self, a: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * a).collect();
        SpectralField {
            grid: self.grid,
            coeffs,
            time_tag: self.time_tag,
        }
    }

    /// self += alpha * other, in place.
    pub fn axpy_mut(&mut self, alpha: f64, other: &Self) -> Result<()> {
        self.check_same_grid(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += alpha * b;
        }
        Ok(())
    }
}

/// Samples -> Fourier coefficients (DFT scaled by 1/N^n).
pub fn forward_transform(grid: &Grid, samples: &[f64]) -> Result<SpectralField> {
    if samples.len() != grid.total() {
        return Err(Error::Dimension(format!(
            "sample vector has {} entries, grid needs {}",
            samples.len(),
            grid.total()
        )));
    }
    let mut data: Vec<Complex> = samples.iter().map(|&s| Complex::new(s, 0.0)).collect();
    fft_all_axes(grid, &mut data, true);
    let scale = 1.0 / grid.total() as f64;
    for c in &mut data {
        *c *= scale;
    }
    SpectralField::from_coeffs(*grid, data, 0.0)
}

/// Complex work-array forward transform (same scaling); used internally for
/// products of already-transformed fields.
pub fn forward_transform_complex(grid: &Grid, data: &mut [Complex]) {
    fft_all_axes(grid, data, true);
    let scale = 1.0 / grid.total() as f64;
    for c in data.iter_mut() {
        *c *= scale;
    }
}

/// Coefficients -> physical samples. Returns the real samples together with
/// the largest imaginary residue, which is a round-off diagnostic when the
/// input is Hermitian and a symmetry-violation report when it is not.
pub fn inverse_transform(field: &SpectralField) -> (Vec<f64>, f64) {
    let mut data = field.coeffs.clone();
    fft_all_axes(&field.grid, &mut data, false);
    let mut residue = 0.0f64;
    let samples = data
        .iter()
        .map(|c| {
            residue = residue.max(c.im.abs());
            c.re
        })
        .collect();
    (samples, residue)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place n-dimensional FFT, one 1-d pass per axis. rustfft leaves both
/// directions unnormalized; callers apply scaling.
fn fft_all_axes(grid: &Grid, data: &mut [Complex], forward: bool) {
    let n = grid.points();
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    });
    let mut line = vec![Complex::new(0.0, 0.0); n];
    for axis in 0..grid.dim() {
        let stride = n.pow((grid.dim() - 1 - axis) as u32);
        let block = stride * n;
        for outer in 0..(data.len() / block) {
            for inner in 0..stride {
                let base = outer * block + inner;
                for j in 0..n {
                    line[j] = data[base + j * stride];
                }
                fft.process(&mut line);
                for j in 0..n {
                    data[base + j * stride] = line[j];
                }
            }
        }
    }
}
