//! The bilinear Duhamel operator
//!
//! ```text
//! B(theta, phi)(t) = -int_0^t G_gamma(t - tau) div(P[theta] phi)(tau) dtau
//! ```
//!
//! evaluated per mode with exact integrating-factor weights. The semigroup
//! factor e^(-(t-tau) |xi|^2gamma) is integrated in closed form against a
//! piecewise interpolant of the nonlinearity, so stiffness never enters the
//! quadrature error; what remains is interpolation of W between nodes.

use crate::field::SpectralField;
use crate::num::{duhamel_i0, duhamel_iv};
use crate::semigroup::fractional_symbol;
use crate::solver::nonlinearity::nonlinearity_pair;
use crate::symbols::CouplingSymbol;
use crate::{Complex, Error, Result};

/// How the nonlinearity is interpolated between path nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PathInterp {
    /// Left-endpoint constant on each subinterval; consistent with ETD-Euler.
    PiecewiseConstant,
    /// Linear between nodes; consistent with ETD-RK2 and the Picard solver.
    PiecewiseLinear,
}

const NODE_TOL: f64 = 1e-12;

/// Both paths must be sampled on one strictly increasing node set starting
/// at 0; returns those nodes.
pub fn validate_common_nodes(a: &[SpectralField], b: &[SpectralField]) -> Result<Vec<f64>> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::Config(format!(
            "paths must share a nonempty node set ({} vs {} samples)",
            a.len(),
            b.len()
        )));
    }
    let mut nodes = Vec::with_capacity(a.len());
    for (i, (fa, fb)) in a.iter().zip(b).enumerate() {
        fa.check_same_grid(fb)?;
        if i > 0 {
            fa.check_same_grid(&a[0])?;
        }
        if (fa.time_tag - fb.time_tag).abs() > NODE_TOL * fa.time_tag.abs().max(1.0) {
            return Err(Error::Config(format!(
                "node {i} mismatch: {} vs {}",
                fa.time_tag, fb.time_tag
            )));
        }
        if i == 0 && fa.time_tag.abs() > NODE_TOL {
            return Err(Error::Config(format!(
                "paths must start at t = 0, first node is {}",
                fa.time_tag
            )));
        }
        if i > 0 && fa.time_tag <= nodes[i - 1] {
            return Err(Error::Config(format!(
                "nodes must increase strictly: node {i} = {} after {}",
                fa.time_tag,
                nodes[i - 1]
            )));
        }
        nodes.push(fa.time_tag);
    }
    Ok(nodes)
}

/// W(tau_i) = -div(P[theta(tau_i)] phi(tau_i)) for every node.
pub fn nonlinearity_path(
    theta_path: &[SpectralField],
    phi_path: &[SpectralField],
    sym: &CouplingSymbol,
    dealias: bool,
) -> Result<Vec<SpectralField>> {
    theta_path
        .iter()
        .zip(phi_path)
        .map(|(t, p)| nonlinearity_pair(t, p, sym, dealias))
        .collect()
}

/// B at every node of the path, by the exact per-subinterval recursion
/// B(t_{j+1}) = e^(-a h) B(t_j) + h [W_j Iv(a h) + W_{j+1} (I0 - Iv)(a h)]
/// (piecewise-linear case; the constant case uses W_j I0 alone).
pub fn duhamel_all_nodes(
    w_path: &[SpectralField],
    gamma: f64,
    nodes: &[f64],
    interp: PathInterp,
) -> Result<Vec<SpectralField>> {
    if w_path.len() != nodes.len() || w_path.is_empty() {
        return Err(Error::Config(format!(
            "nonlinearity path has {} samples for {} nodes",
            w_path.len(),
            nodes.len()
        )));
    }
    let grid = *w_path[0].grid();
    let a = fractional_symbol(&grid, gamma)?;
    let total = grid.total();

    let mut out = Vec::with_capacity(nodes.len());
    let mut first = SpectralField::zeros(grid);
    first.time_tag = nodes[0];
    out.push(first);

    let mut acc = vec![Complex::new(0.0, 0.0); total];
    for j in 0..nodes.len() - 1 {
        let h = nodes[j + 1] - nodes[j];
        let wl = w_path[j].coeffs();
        let wr = w_path[j + 1].coeffs();
        for idx in 0..total {
            let z = a[idx] * h;
            let decay = (-z).exp();
            let increment = match interp {
                PathInterp::PiecewiseConstant => wl[idx] * (h * duhamel_i0(z)),
                PathInterp::PiecewiseLinear => {
                    let iv = duhamel_iv(z);
                    wl[idx] * (h * iv) + wr[idx] * (h * (duhamel_i0(z) - iv))
                }
            };
            acc[idx] = acc[idx] * decay + increment;
        }
        let snap = SpectralField::from_coeffs(grid, acc.clone(), nodes[j + 1])?;
        snap.check_finite()?;
        out.push(snap);
    }
    Ok(out)
}

/// B(theta, phi)(t) where t must coincide with one of the path nodes.
pub fn bilinear_duhamel(
    theta_path: &[SpectralField],
    phi_path: &[SpectralField],
    sym: &CouplingSymbol,
    gamma: f64,
    t: f64,
    dealias: bool,
    interp: PathInterp,
) -> Result<SpectralField> {
    let nodes = validate_common_nodes(theta_path, phi_path)?;
    let m = nodes
        .iter()
        .position(|&s| (s - t).abs() <= NODE_TOL * t.abs().max(1.0))
        .ok_or_else(|| {
            Error::Config(format!("t = {t} is not one of the {} path nodes", nodes.len()))
        })?;
    if m == 0 {
        let mut out = SpectralField::zeros(*theta_path[0].grid());
        out.time_tag = t;
        return Ok(out);
    }
    let w = nonlinearity_path(&theta_path[..=m], &phi_path[..=m], sym, dealias)?;
    let mut all = duhamel_all_nodes(&w, gamma, &nodes[..=m], interp)?;
    Ok(all.pop().expect("nonempty by construction"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::symbols::{builtin_symbol, SymbolParams};
    use std::f64::consts::PI;

    fn burgers() -> CouplingSymbol {
        builtin_symbol("burgers", &SymbolParams::default()).unwrap()
    }

    fn single_mode(grid: Grid, k: i64, amp: Complex, t: f64) -> SpectralField {
        let mut f = SpectralField::zeros(grid);
        let plus = grid.axis_index(k).unwrap();
        let minus = grid.conjugate_index(plus);
        f.coeffs_mut()[plus] = amp;
        f.coeffs_mut()[minus] = amp.conj();
        f.time_tag = t;
        f
    }

    fn constant_path(grid: Grid, k: i64, amp: Complex, nodes: &[f64]) -> Vec<SpectralField> {
        nodes.iter().map(|&t| single_mode(grid, k, amp, t)).collect()
    }

    #[test]
    fn zero_time_and_zero_path_give_zero() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let nodes = [0.0, 0.1, 0.3];
        let theta = constant_path(g, 1, Complex::new(0.1, 0.2), &nodes);
        let zero: Vec<_> = nodes
            .iter()
            .map(|&t| {
                let mut f = SpectralField::zeros(g);
                f.time_tag = t;
                f
            })
            .collect();
        let b = bilinear_duhamel(&theta, &theta, &burgers(), 0.8, 0.0, true,
            PathInterp::PiecewiseLinear)
            .unwrap();
        assert_eq!(b.max_abs(), 0.0);
        let b = bilinear_duhamel(&theta, &zero, &burgers(), 0.8, 0.3, true,
            PathInterp::PiecewiseLinear)
            .unwrap();
        assert_eq!(b.max_abs(), 0.0);
    }

    #[test]
    fn constant_paths_match_the_closed_form() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let gamma = 0.8;
        let nodes = [0.0, 0.05, 0.2, 0.5, 1.0];
        let theta = constant_path(g, 1, Complex::new(0.0, -0.35), &nodes);
        let phi = constant_path(g, 2, Complex::new(0.15, 0.0), &nodes);
        let w = nonlinearity_pair(&theta[0], &phi[0], &burgers(), true).unwrap();
        for interp in [PathInterp::PiecewiseConstant, PathInterp::PiecewiseLinear] {
            for &t in &[0.5, 1.0] {
                let b = bilinear_duhamel(&theta, &phi, &burgers(), gamma, t, true, interp)
                    .unwrap();
                for idx in 0..g.total() {
                    let a = g.freq_norm_sq(idx).powf(gamma);
                    let expected = if a == 0.0 {
                        w.coeffs()[idx] * t
                    } else {
                        w.coeffs()[idx] * ((1.0 - (-t * a).exp()) / a)
                    };
                    assert!(
                        (b.coeffs()[idx] - expected).norm() < 1e-10,
                        "interp {interp:?} t={t} idx={idx}"
                    );
                }
            }
        }
    }

    #[test]
    fn linear_in_time_path_is_integrated_exactly() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let gamma = 0.7;
        let nodes = [0.0, 0.07, 0.22, 0.48, 0.8];
        let amp = Complex::new(0.0, -0.2);
        let theta: Vec<_> = nodes
            .iter()
            .map(|&t| single_mode(g, 1, amp * (1.0 + t), t))
            .collect();
        let phi = constant_path(g, 3, Complex::new(0.1, 0.05), &nodes);
        let w0 = nonlinearity_pair(&single_mode(g, 1, amp, 0.0), &phi[0], &burgers(), true)
            .unwrap();
        let t = 0.8;
        let b = bilinear_duhamel(&theta, &phi, &burgers(), gamma, t, true,
            PathInterp::PiecewiseLinear)
            .unwrap();
        let mut worst = 0.0f64;
        for idx in 0..g.total() {
            let a = g.freq_norm_sq(idx).powf(gamma);
            if a == 0.0 {
                continue;
            }
            // int_0^t e^(-a(t-tau)) (1+tau) dtau
            let f0 = (1.0 - (-a * t).exp()) / a;
            let exact = (1.0 + t) * f0 - (1.0 - (1.0 + a * t) * (-a * t).exp()) / (a * a);
            let expected = w0.coeffs()[idx] * exact;
            worst = worst.max((b.coeffs()[idx] - expected).norm());
        }
        assert!(worst < 1e-10, "worst deviation {worst}");
    }

    #[test]
    fn node_mismatches_are_config_errors() {
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let amp = Complex::new(0.1, 0.0);
        let a = constant_path(g, 1, amp, &[0.0, 0.1, 0.2]);
        let b = constant_path(g, 1, amp, &[0.0, 0.1]);
        let sym = burgers();
        let lin = PathInterp::PiecewiseLinear;
        assert!(matches!(
            bilinear_duhamel(&a, &b, &sym, 0.8, 0.2, true, lin),
            Err(Error::Config(_))
        ));
        let c = constant_path(g, 1, amp, &[0.0, 0.11, 0.2]);
        assert!(matches!(
            bilinear_duhamel(&a, &c, &sym, 0.8, 0.2, true, lin),
            Err(Error::Config(_))
        ));
        // t between nodes
        assert!(matches!(
            bilinear_duhamel(&a, &a, &sym, 0.8, 0.15, true, lin),
            Err(Error::Config(_))
        ));
        // path starting after zero
        let late = constant_path(g, 1, amp, &[0.05, 0.1, 0.2]);
        assert!(matches!(
            bilinear_duhamel(&late, &late, &sym, 0.8, 0.2, true, lin),
            Err(Error::Config(_))
        ));
    }
}
