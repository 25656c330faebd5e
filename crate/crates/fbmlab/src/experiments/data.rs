//! Truncated homogeneous initial data.
//!
//! The profile assigns each nonzero lattice mode the radial power law
//! `delta * |xi|^{-sigma}` with `sigma = n - (2*gamma - beta)`, cut off
//! outside a frequency band. Lowpass keeps `|xi| < r`, highpass keeps
//! `|xi| > r`; the zero mode is always empty. The coefficients are real
//! and radial, so the field is Hermitian by construction.

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Grid, Result, SpectralField};

/// Which side of the cutoff radius survives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruncMode {
    Lowpass,
    Highpass,
}

/// Homogeneity degree of the profile: coefficients decay like `|xi|^{-sigma}`.
pub fn profile_exponent(dim: usize, gamma: f64, beta: f64) -> f64 {
    dim as f64 - (2.0 * gamma - beta)
}

/// Largest lattice frequency magnitude representable on `grid`.
fn band_ceiling(grid: &Grid) -> f64 {
    grid.max_axis_freq() * (grid.dim() as f64).sqrt()
}

/// Power-law data truncated to one side of the radius `r`.
///
/// `r` must leave at least one lattice mode selected, otherwise the call
/// is rejected rather than returning a zero field.
pub fn make_truncated_homogeneous_data(
    delta: f64,
    r: f64,
    mode: TruncMode,
    grid: &Grid,
    gamma: f64,
    beta: f64,
) -> Result<SpectralField> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Config(format!(
            "data amplitude delta must be positive and finite, got {delta}"
        )));
    }
    if !(gamma.is_finite() && beta.is_finite()) {
        return Err(Error::Config(format!(
            "gamma and beta must be finite, got gamma={gamma} beta={beta}"
        )));
    }
    let h = grid.spacing();
    let ceiling = band_ceiling(grid);
    match mode {
        // lowpass with r at or below the smallest nonzero frequency keeps nothing
        TruncMode::Lowpass => {
            if !(r > h && r.is_finite()) {
                return Err(Error::Config(format!(
                    "lowpass radius r={r} selects no modes; need r in ({h}, inf)"
                )));
            }
        }
        TruncMode::Highpass => {
            if !(r >= 0.0 && r < ceiling) {
                return Err(Error::Config(format!(
                    "highpass radius r={r} selects no modes; need r in [0, {ceiling})"
                )));
            }
        }
    }

    let sigma = profile_exponent(grid.dim(), gamma, beta);
    let mut coeffs = vec![Complex::new(0.0, 0.0); grid.total()];
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let rho = grid.freq_norm(idx);
        if rho == 0.0 {
            continue;
        }
        let keep = match mode {
            TruncMode::Lowpass => rho < r,
            TruncMode::Highpass => rho > r,
        };
        if keep {
            *c = Complex::new(delta * rho.powf(-sigma), 0.0);
        }
    }
    SpectralField::from_coeffs(*grid, coeffs, 0.0)
}
