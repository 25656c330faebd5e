//! Dyadic frequency rescaling of spectral fields.
//!
//! `rescale_field` realizes the map `theta_out(xi) = lambda^{2*gamma - beta - n}
//! * theta_in(xi / lambda)` on the lattice. Restricting `lambda` to powers of
//! two makes the frequency remap exact: for `lambda = 2^m` with `m >= 0` the
//! output lives on the `2^m`-sublattice, and for `m < 0` the output pulls from
//! it. Modes whose image leaves the resolved band are dropped; no interpolation
//! is ever performed. The time tag is copied unchanged, the `t -> lambda^{2*gamma} t`
//! relabeling is the caller's bookkeeping.

use crate::{Complex, Error, Result, SpectralField};

/// Decompose `lambda` as an exact power of two, or reject it.
fn dyadic_exponent(lambda: f64) -> Result<i32> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Config(format!(
            "rescale factor lambda must be positive and finite, got {lambda}"
        )));
    }
    let m = lambda.log2().round();
    if (m.exp2() - lambda).abs() > 1e-12 * lambda || m.abs() > 62.0 {
        return Err(Error::Config(format!(
            "rescale factor lambda must be a power of two, got {lambda}"
        )));
    }
    Ok(m as i32)
}

/// Push `theta` through the scaling map with ratio `lambda = 2^m`.
pub fn rescale_field(
    theta: &SpectralField,
    lambda: f64,
    gamma: f64,
    beta: f64,
) -> Result<SpectralField> {
    let m = dyadic_exponent(lambda)?;
    let grid = *theta.grid();
    let n = grid.dim();
    let exponent = 2.0 * gamma - beta - n as f64;
    let amp = lambda.powf(exponent);
    if !amp.is_finite() {
        return Err(Error::Config(format!(
            "rescale amplitude lambda^{exponent} overflows for lambda={lambda}"
        )));
    }

    let mut coeffs = vec![Complex::new(0.0, 0.0); grid.total()];
    if m >= 0 {
        // forward: source mode j lands on lambda*j when that stays in band
        let shift = m as u32;
        'src: for idx in 0..grid.total() {
            let c = theta.coeffs()[idx];
            if c == Complex::new(0.0, 0.0) {
                continue;
            }
            let k = grid.wavevector(idx);
            let mut multi = [0usize; crate::grid::MAX_DIM];
            for (d, slot) in multi.iter_mut().enumerate().take(n) {
                let target = k[d] << shift;
                match grid.axis_index(target) {
                    Some(ai) => *slot = ai,
                    None => continue 'src,
                }
            }
            coeffs[grid.flat_index(&multi[..n])] = c * amp;
        }
    } else {
        // backward: output mode j pulls from 2^{|m|} * j when that exists
        let shift = (-m) as u32;
        'dst: for (idx, slot) in coeffs.iter_mut().enumerate() {
            let k = grid.wavevector(idx);
            let mut multi = [0usize; crate::grid::MAX_DIM];
            for (d, mslot) in multi.iter_mut().enumerate().take(n) {
                let source = k[d] << shift;
                match grid.axis_index(source) {
                    Some(ai) => *mslot = ai,
                    None => continue 'dst,
                }
            }
            *slot = theta.coeffs()[grid.flat_index(&multi[..n])] * amp;
        }
    }
    SpectralField::from_coeffs(grid, coeffs, theta.time_tag)
}
