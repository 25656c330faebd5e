//! The dissipative semigroup G_gamma(t) = exp(-t (-Laplace)^gamma), realized
//! as the Fourier multiplier exp(-t |xi|^(2 gamma)).

use crate::field::SpectralField;
use crate::grid::Grid;
use crate::{Error, Result};

/// Per-mode symbol |xi|^(2 gamma) of the fractional Laplacian. gamma > 0.
pub fn fractional_symbol(grid: &Grid, gamma: f64) -> Result<Vec<f64>> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!(
            "fractional symbol needs gamma > 0 (got {gamma})"
        )));
    }
    Ok((0..grid.total())
        .map(|idx| grid.freq_norm_sq(idx).powf(gamma))
        .collect())
}

#[derive(Debug, Clone, Copy)]
pub struct Semigroup {
    gamma: f64,
}

impl Semigroup {
    /// gamma > 1/2 keeps the velocity coupling's derivative loss absorbable;
    /// smaller exponents are rejected here.
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.5) {
            return Err(Error::Domain(format!(
                "semigroup needs gamma > 1/2 (got {gamma})"
            )));
        }
        Ok(Semigroup { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Per-mode decay factors exp(-t |xi|^(2 gamma)); t >= 0.
    pub fn decay_table(&self, grid: &Grid, t: f64) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!(
                "semigroup time must be >= 0 (got {t})"
            )));
        }
        let symbol = fractional_symbol(grid, self.gamma)?;
        Ok(symbol.iter().map(|a| (-t * a).exp()).collect())
    }

    /// Apply G_gamma(t); advances the field's time tag by t.
    pub fn apply(&self, f: &SpectralField, t: f64) -> Result<SpectralField> {
        let table = self.decay_table(f.grid(), t)?;
        let mut out = f.clone();
        for (c, d) in out.coeffs_mut().iter_mut().zip(&table) {
            *c *= *d;
        }
        out.time_tag = f.time_tag + t;
        Ok(out)
    }
}

/// One-shot convenience wrapper around [`Semigroup::apply`].
pub fn apply_semigroup(f: &SpectralField, gamma: f64, t: f64) -> Result<SpectralField> {
    Semigroup::new(gamma)?.apply(f, t)
}
