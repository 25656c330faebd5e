//! Periodic lattice bookkeeping.
//!
//! Physical domain [0, L)^n sampled on N points per axis; the frequency
//! lattice is xi = (2*pi/L) * k with integer wavenumbers k in
//! [-N/2, N/2) per axis, stored in FFT layout (k >= 0 first, then negative).

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points: usize,
    length: f64,
}

impl Grid {
    /// dim in 1..=3, points a power of two >= 4, length > 0.
    pub fn new(dim: usize, points: usize, length: f64) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Dimension(format!(
                "grid.n must be 1, 2 or 3 (got {dim})"
            )));
        }
        if points < 4 || !points.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid.points must be a power of two >= 4 (got {points})"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Config(format!(
                "grid.length must be positive and finite (got {length})"
            )));
        }
        Ok(Grid {
            dim,
            points,
            length,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Total number of lattice sites, N^n.
    pub fn total(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    /// Frequency spacing 2*pi/L; also the radius unit of the Morrey search.
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    /// Riemann cell volume (2*pi/L)^n of the frequency lattice.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Largest resolved |xi| along an axis, (2*pi/L) * N/2.
    pub fn max_axis_freq(&self) -> f64 {
        self.spacing() * (self.points as f64) / 2.0
    }

    /// Integer wavenumber for an axis index in FFT layout.
    #[inline]
    pub fn wavenumber(&self, axis_index: usize) -> i64 {
        let n = self.points as i64;
        let i = axis_index as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Axis index in FFT layout for an integer wavenumber; None if out of band.
    #[inline]
    pub fn axis_index(&self, k: i64) -> Option<usize> {
        let n = self.points as i64;
        if k >= -n / 2 && k < n / 2 {
            Some(if k >= 0 { k as usize } else { (k + n) as usize })
        } else {
            None
        }
    }

    /// Decompose a flat row-major index into per-axis indices.
    #[inline]
    pub fn multi_index(&self, mut idx: usize) -> [usize; MAX_DIM] {
        let mut out = [0usize; MAX_DIM];
        for axis in (0..self.dim).rev() {
            out[axis] = idx % self.points;
            idx /= self.points;
        }
        out
    }

    /// Flat row-major index from per-axis indices.
    #[inline]
    pub fn flat_index(&self, multi: &[usize]) -> usize {
        let mut idx = 0usize;
        for axis in 0..self.dim {
            idx = idx * self.points + multi[axis];
        }
        idx
    }

    /// Integer wavenumber vector at a flat index (unused axes are 0).
    #[inline]
    pub fn wavevector(&self, idx: usize) -> [i64; MAX_DIM] {
        let mi = self.multi_index(idx);
        let mut k = [0i64; MAX_DIM];
        for axis in 0..self.dim {
            k[axis] = self.wavenumber(mi[axis]);
        }
        k
    }

    /// Frequency vector xi at a flat index (unused axes are 0).
    #[inline]
    pub fn freq(&self, idx: usize) -> [f64; MAX_DIM] {
        let k = self.wavevector(idx);
        let h = self.spacing();
        [k[0] as f64 * h, k[1] as f64 * h, k[2] as f64 * h]
    }

    /// |xi|^2 at a flat index.
    #[inline]
    pub fn freq_norm_sq(&self, idx: usize) -> f64 {
        let xi = self.freq(idx);
        xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
    }

    /// |xi| at a flat index.
    #[inline]
    pub fn freq_norm(&self, idx: usize) -> f64 {
        self.freq_norm_sq(idx).sqrt()
    }

    /// Flat index of -k for the mode at idx. The Nyquist row k = -N/2 is its
    /// own negative modulo N; Hermitian fields keep it real.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let mi = self.multi_index(idx);
        let mut out = [0usize; MAX_DIM];
        for axis in 0..self.dim {
            out[axis] = if mi[axis] == 0 {
                0
            } else {
                self.points - mi[axis]
            };
        }
        self.flat_index(&out[..self.dim])
    }

    /// Physical sample point x at a flat index.
    #[inline]
    pub fn point(&self, idx: usize) -> [f64; MAX_DIM] {
        let mi = self.multi_index(idx);
        let dx = self.length / self.points as f64;
        let mut x = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            x[axis] = mi[axis] as f64 * dx;
        }
        x
    }
}
