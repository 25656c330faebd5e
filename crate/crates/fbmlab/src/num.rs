//! Small numerical kernels shared by the integrators: the phi functions of
//! exponential time differencing and the integrating-factor weights of the
//! Duhamel quadrature. All of them are analytic with removable singularities
//! at z = 0; below |z| = 1e-4 they switch to truncated Taylor series, which
//! keeps relative error near round-off while the closed forms take over where
//! cancellation is harmless.

/// phi_1(z) = (e^z - 1)/z, phi_1(0) = 1.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        // 1 + z/2 + z^2/6 + z^3/24; next term z^4/120 < 1e-18 here.
        1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0)))
    } else {
        z.exp_m1() / z
    }
}

/// phi_2(z) = (e^z - 1 - z)/z^2, phi_2(0) = 1/2.
pub fn phi2(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0)))
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

/// I0(z) = integral_0^1 e^(-z v) dv = (1 - e^(-z))/z, I0(0) = 1.
pub fn duhamel_i0(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 + z * (-0.5 + z * (1.0 / 6.0 - z * (1.0 / 24.0)))
    } else {
        -(-z).exp_m1() / z
    }
}

/// Iv(z) = integral_0^1 v e^(-z v) dv = (1 - (1 + z) e^(-z))/z^2, Iv(0) = 1/2.
pub fn duhamel_iv(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        0.5 + z * (-1.0 / 3.0 + z * (1.0 / 8.0 - z * (1.0 / 30.0)))
    } else {
        // 1 - (1+z)e^-z = -expm1(-z) - z e^-z keeps one subtraction of
        // like-magnitude terms; fine for |z| >= 1e-4.
        ((-(-z).exp_m1()) - z * (-z).exp()) / (z * z)
    }
}
