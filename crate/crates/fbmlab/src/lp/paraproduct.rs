//! Bony decomposition of a pointwise product:
//!
//!   f g = T_f g + T_g f + R(f, g),
//!   T_f g = sum_k S_{k-1} f . Delta_k g,
//!   R(f,g) = sum_k Delta_k f . (Delta_{k-1} + Delta_k + Delta_{k+1}) g,
//!
//! with all products taken in physical space. For fields whose spectrum lies
//! in the partition's unity region the three parts sum to f g exactly (the
//! index pairs (j, k) partition into j <= k-2, j >= k+2 and |j-k| <= 1), so
//! the identity holds to round-off.

use super::partition::DyadicPartition;
use crate::field::{forward_transform_complex, inverse_transform, SpectralField};
use crate::{Complex, Result};

#[derive(Debug, Clone)]
pub struct Paraproduct {
    /// T_f g: low frequencies of f against blocks of g.
    pub low_high: SpectralField,
    /// T_g f: low frequencies of g against blocks of f.
    pub high_low: SpectralField,
    /// Resonant part R(f, g).
    pub resonant: SpectralField,
}

pub fn paraproduct_decompose(
    f: &SpectralField,
    g: &SpectralField,
    part: &DyadicPartition,
) -> Result<Paraproduct> {
    f.check_same_grid(g)?;
    let grid = *f.grid();
    let total = grid.total();
    let bands: Vec<i32> = part.blocks().collect();
    let nb = bands.len();

    // physical samples of every block of f and g
    let mut df_phys: Vec<Vec<f64>> = Vec::with_capacity(nb);
    let mut dg_phys: Vec<Vec<f64>> = Vec::with_capacity(nb);
    for &k in &bands {
        df_phys.push(block_samples(f, part, k));
        dg_phys.push(block_samples(g, part, k));
    }

    let mut tf_g = vec![0.0f64; total];
    let mut tg_f = vec![0.0f64; total];
    let mut resonant = vec![0.0f64; total];
    // cum_* hold S_{k-1} = sum of blocks up to k-2 while the loop is at k
    let mut cum_f = vec![0.0f64; total];
    let mut cum_g = vec![0.0f64; total];
    for b in 0..nb {
        for x in 0..total {
            tf_g[x] += cum_f[x] * dg_phys[b][x];
            tg_f[x] += cum_g[x] * df_phys[b][x];
            let mut tilde = dg_phys[b][x];
            if b > 0 {
                tilde += dg_phys[b - 1][x];
            }
            if b + 1 < nb {
                tilde += dg_phys[b + 1][x];
            }
            resonant[x] += df_phys[b][x] * tilde;
        }
        // push block b-1 so the next iteration sees blocks up to (b+1)-2;
        // pairs at distance 1 belong to the resonant tilde, not to T
        if b >= 1 && b + 1 < nb {
            for x in 0..total {
                cum_f[x] += df_phys[b - 1][x];
                cum_g[x] += dg_phys[b - 1][x];
            }
        }
    }

    Ok(Paraproduct {
        low_high: to_spectral(&grid, &tf_g, f.time_tag),
        high_low: to_spectral(&grid, &tg_f, f.time_tag),
        resonant: to_spectral(&grid, &resonant, f.time_tag),
    })
}

fn block_samples(f: &SpectralField, part: &DyadicPartition, k: i32) -> Vec<f64> {
    let grid = f.grid();
    let mut windowed = f.clone();
    for idx in 0..grid.total() {
        let w = part.phi(k, grid.freq_norm(idx));
        windowed.coeffs_mut()[idx] *= w;
    }
    inverse_transform(&windowed).0
}

fn to_spectral(grid: &crate::grid::Grid, samples: &[f64], time_tag: f64) -> SpectralField {
    let mut data: Vec<Complex> = samples.iter().map(|&s| Complex::new(s, 0.0)).collect();
    forward_transform_complex(grid, &mut data);
    let mut f = SpectralField::from_coeffs(*grid, data, time_tag).expect("same grid");
    f.time_tag = time_tag;
    f
}

/// Max relative physical-space error of the identity
/// f g = low_high + high_low + resonant; the oracle for the decomposition.
pub fn identity_error(f: &SpectralField, g: &SpectralField, parts: &Paraproduct) -> f64 {
    let (pf, _) = inverse_transform(f);
    let (pg, _) = inverse_transform(g);
    let (a, _) = inverse_transform(&parts.low_high);
    let (b, _) = inverse_transform(&parts.high_low);
    let (c, _) = inverse_transform(&parts.resonant);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for x in 0..pf.len() {
        let product = pf[x] * pg[x];
        let sum = a[x] + b[x] + c[x];
        worst = worst.max((product - sum).abs());
        scale = scale.max(product.abs());
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::rng::{annulus_noise, hermitian_noise, seeded};
    use std::f64::consts::PI;

    fn band_limited(grid: &Grid, part: &DyadicPartition, seed: u64) -> SpectralField {
        hermitian_noise(grid, &mut seeded(seed), |r| {
            if r >= part.unity_lo() && r <= part.unity_hi() {
                1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn zero_factor_gives_zero_parts() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let part = DyadicPartition::for_grid(&g).unwrap();
        let f = band_limited(&g, &part, 1);
        let zero = SpectralField::zeros(g);
        let parts = paraproduct_decompose(&f, &zero, &part).unwrap();
        assert_eq!(parts.low_high.max_abs(), 0.0);
        assert_eq!(parts.high_low.max_abs(), 0.0);
        assert_eq!(parts.resonant.max_abs(), 0.0);
    }

    #[test]
    fn identity_holds_for_band_limited_fields() {
        for (dim, n) in [(1usize, 128usize), (2, 32)] {
            let g = Grid::new(dim, n, 2.0 * PI).unwrap();
            let part = DyadicPartition::for_grid(&g).unwrap();
            for seed in 0..4u64 {
                let f = band_limited(&g, &part, 10 + seed);
                let h = band_limited(&g, &part, 20 + seed);
                let parts = paraproduct_decompose(&f, &h, &part).unwrap();
                let err = identity_error(&f, &h, &parts);
                assert!(err <= 1e-10, "dim={dim} seed={seed}: {err}");
            }
        }
    }

    #[test]
    fn widely_separated_annuli_have_no_resonant_part() {
        let g = Grid::new(1, 256, 2.0 * PI).unwrap();
        let part = DyadicPartition::for_grid(&g).unwrap();
        // |xi| = 3 sits in the unity range of block 1 and [43, 48] in that of
        // block 5: four blocks apart, so only T_f h survives, exactly.
        let f = annulus_noise(&g, &mut seeded(31), 3.0, 3.0, 1.0);
        let h = annulus_noise(&g, &mut seeded(32), 43.0, 48.0, 1.0);
        let parts = paraproduct_decompose(&f, &h, &part).unwrap();
        assert_eq!(parts.resonant.max_abs(), 0.0);
        assert_eq!(parts.high_low.max_abs(), 0.0);
        assert!(parts.low_high.max_abs() > 0.0);
        let err = identity_error(&f, &h, &parts);
        assert!(err <= 1e-12, "{err}");
    }
}
