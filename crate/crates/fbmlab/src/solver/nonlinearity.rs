//! The advective nonlinearity -div(u theta) with u = P[theta], evaluated
//! pseudo-spectrally: velocity in Fourier space, product on the grid,
//! divergence back in Fourier space.

use crate::field::{forward_transform_complex, inverse_transform, SpectralField};
use crate::symbols::{velocity_from_scalar, CouplingSymbol};
use crate::{Complex, Result};

/// Zeroes every mode with any axis wavenumber beyond 2/3 of the Nyquist
/// index. Quadratic products of the survivors then alias only into modes
/// that are themselves zeroed, which is the point of the rule.
pub fn dealias_mask(f: &mut SpectralField) {
    let grid = *f.grid();
    let n = grid.points() as i64;
    for idx in 0..grid.total() {
        let k = grid.wavevector(idx);
        if k.iter().take(grid.dim()).any(|&ki| 3 * ki.abs() > n) {
            f.coeffs_mut()[idx] = Complex::new(0.0, 0.0);
        }
    }
}

/// -div(P[theta] phi), the integrand of the bilinear Duhamel operator. The
/// solved equation uses phi = theta; the Picard machinery needs the mixed
/// form. Both inputs are assumed Hermitian, so the physical products are
/// real. The zero mode of the output vanishes identically (divergence form).
pub fn nonlinearity_pair(
    theta: &SpectralField,
    phi: &SpectralField,
    sym: &CouplingSymbol,
    dealias: bool,
) -> Result<SpectralField> {
    theta.check_same_grid(phi)?;
    let grid = *theta.grid();
    if sym.is_zero() {
        let mut out = SpectralField::zeros(grid);
        out.time_tag = theta.time_tag;
        return Ok(out);
    }
    theta.check_finite()?;

    let (theta_d, phi_d);
    let (theta_ref, phi_ref) = if dealias {
        let mut a = theta.clone();
        let mut b = phi.clone();
        dealias_mask(&mut a);
        dealias_mask(&mut b);
        (theta_d, phi_d) = (a, b);
        (&theta_d, &phi_d)
    } else {
        (theta, phi)
    };

    let velocity = velocity_from_scalar(theta_ref, sym)?;
    let (phi_phys, _) = inverse_transform(phi_ref);

    let mut out = SpectralField::zeros(grid);
    out.time_tag = theta.time_tag;
    let mut work = vec![Complex::new(0.0, 0.0); grid.total()];
    for (axis, u_a) in velocity.iter().enumerate() {
        let (u_phys, _) = inverse_transform(u_a);
        for x in 0..grid.total() {
            work[x] = Complex::new(u_phys[x] * phi_phys[x], 0.0);
        }
        forward_transform_complex(&grid, &mut work);
        for idx in 0..grid.total() {
            let xi_a = grid.freq(idx)[axis];
            // -i xi_a W_hat_a
            out.coeffs_mut()[idx] += Complex::new(0.0, -xi_a) * work[idx];
        }
    }
    if dealias {
        dealias_mask(&mut out);
    }
    out.coeffs_mut()[0] = Complex::new(0.0, 0.0);
    out.check_finite()?;
    Ok(out)
}

/// -div(P[theta] theta), the right-hand side of the evolution equation.
pub fn nonlinearity(
    theta: &SpectralField,
    sym: &CouplingSymbol,
    dealias: bool,
) -> Result<SpectralField> {
    nonlinearity_pair(theta, theta, sym, dealias)
}
