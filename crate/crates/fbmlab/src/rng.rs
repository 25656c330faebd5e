//! Deterministic random and deterministic analytic field constructors used by
//! the estimators, the experiments, and the test suites.

use crate::field::{forward_transform, SpectralField};
use crate::grid::Grid;
use crate::{Complex, Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// The crate-wide RNG. ChaCha keeps streams identical across platforms, so
/// seeded runs are bit-for-bit reproducible.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hermitian Gaussian noise shaped by a radial filter: each conjugate mode
/// pair gets an independent complex Gaussian scaled by filter(|xi|),
/// self-conjugate modes get real draws, the zero mode stays zero. Draw order
/// is the ascending mode index, so a fixed seed fixes the field exactly.
pub fn hermitian_noise(
    grid: &Grid,
    rng: &mut ChaCha8Rng,
    filter: impl Fn(f64) -> f64,
) -> SpectralField {
    let mut f = SpectralField::zeros(*grid);
    for idx in 1..grid.total() {
        let conj = grid.conjugate_index(idx);
        if conj < idx {
            continue;
        }
        let w = filter(grid.freq_norm(idx));
        if w == 0.0 {
            continue;
        }
        if conj == idx {
            let re: f64 = rng.sample(StandardNormal);
            f.coeffs_mut()[idx] = Complex::new(w * re, 0.0);
        } else {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let c = Complex::new(w * re, w * im);
            f.coeffs_mut()[idx] = c;
            f.coeffs_mut()[conj] = c.conj();
        }
    }
    f
}

/// Hermitian noise supported on the annulus r_lo <= |xi| <= r_hi.
pub fn annulus_noise(
    grid: &Grid,
    rng: &mut ChaCha8Rng,
    r_lo: f64,
    r_hi: f64,
    amplitude: f64,
) -> SpectralField {
    hermitian_noise(grid, rng, |r| {
        if r >= r_lo && r <= r_hi {
            amplitude
        } else {
            0.0
        }
    })
}

/// Mean-free periodic Gaussian bump, amplitude * exp(-dist(x, center)^2 /
/// (2 width^2)), returned in spectral form. Smooth and effectively
/// band-limited once width spans a few grid cells.
pub fn gaussian_bump(
    grid: &Grid,
    amplitude: f64,
    width: f64,
    center: &[f64],
) -> Result<SpectralField> {
    if !(width > 0.0) {
        return Err(Error::Config(format!(
            "ic.width must be positive (got {width})"
        )));
    }
    if center.len() < grid.dim() {
        return Err(Error::Config(format!(
            "ic.center needs {} coordinates, got {}",
            grid.dim(),
            center.len()
        )));
    }
    let l = grid.length();
    let samples: Vec<f64> = (0..grid.total())
        .map(|idx| {
            let x = grid.point(idx);
            let mut d2 = 0.0;
            for a in 0..grid.dim() {
                // nearest periodic image
                let mut d = (x[a] - center[a]).abs() % l;
                if d > l / 2.0 {
                    d = l - d;
                }
                d2 += d * d;
            }
            amplitude * (-d2 / (2.0 * width * width)).exp()
        })
        .collect();
    let mut f = forward_transform(grid, &samples)?;
    f.coeffs_mut()[0] = Complex::new(0.0, 0.0);
    Ok(f)
}

/// amplitude * cos(xi_k . x) as a coefficient pair at +/-k.
pub fn single_mode(grid: &Grid, k: &[i64], amplitude: f64) -> Result<SpectralField> {
    if k.len() < grid.dim() {
        return Err(Error::Config(format!(
            "ic.mode needs {} wavenumbers, got {}",
            grid.dim(),
            k.len()
        )));
    }
    let mut mi = [0usize; crate::grid::MAX_DIM];
    for a in 0..grid.dim() {
        mi[a] = grid.axis_index(k[a]).ok_or_else(|| {
            Error::Config(format!(
                "ic.mode component {} = {} is outside the resolved band",
                a + 1,
                k[a]
            ))
        })?;
    }
    let idx = grid.flat_index(&mi[..grid.dim()]);
    if idx == 0 {
        return Err(Error::Config("ic.mode must not be the zero mode".into()));
    }
    let mut f = SpectralField::zeros(*grid);
    let conj = grid.conjugate_index(idx);
    if conj == idx {
        // self-conjugate (Nyquist) cosine collapses to a single real entry
        f.coeffs_mut()[idx] = Complex::new(amplitude, 0.0);
    } else {
        f.coeffs_mut()[idx] = Complex::new(amplitude / 2.0, 0.0);
        f.coeffs_mut()[conj] = Complex::new(amplitude / 2.0, 0.0);
    }
    Ok(f)
}
