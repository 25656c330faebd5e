//! Empirical inequality checks: Bernstein-type derivative bounds and the
//! Hölder / Young inequalities for the discrete Morrey norm. These are the
//! lemma-level guarantees the norm machinery leans on; each check returns the
//! measured sides so sweeps can record margins instead of booleans.

use super::morrey::{morrey_norm, validate_p_mu, MorreySearch};
use crate::grid::{Grid, MAX_DIM};
use crate::{Complex, Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct BernsteinParams {
    /// Derivative multi-index alpha.
    pub alpha: [u32; MAX_DIM],
    /// Source norm exponents.
    pub p: f64,
    pub mu1: f64,
    /// Target norm exponents.
    pub q: f64,
    pub mu2: f64,
    /// Dyadic support scale: spectrum must lie in |xi| <= support_const * 2^j.
    pub j: i32,
    pub support_const: f64,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct BernsteinReport {
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

/// ratio = ||(i xi)^alpha f_hat||_{M_{q,mu2}}
///       / ( 2^(j|alpha| + j((n-mu2)/q - (n-mu1)/p)) ||f_hat||_{M_{p,mu1}} ).
/// Lemma hypotheses: 1 <= q <= p <= inf and (n-mu2)/p <= (n-mu1)/q; the
/// spectrum support precondition is verified, not assumed.
pub fn bernstein_check(
    f: &crate::field::SpectralField,
    params: &BernsteinParams,
    search: &MorreySearch,
) -> Result<BernsteinReport> {
    let grid = f.grid();
    let n = grid.dim() as f64;
    validate_p_mu(params.p, params.mu1, grid.dim())?;
    validate_p_mu(params.q, params.mu2, grid.dim())?;
    if !(params.q <= params.p) {
        return Err(Error::Precondition(format!(
            "bernstein needs q <= p (q = {}, p = {})",
            params.q, params.p
        )));
    }
    if (n - params.mu2) / params.p > (n - params.mu1) / params.q + 1e-12 {
        return Err(Error::Precondition(format!(
            "bernstein needs (n-mu2)/p <= (n-mu1)/q (lhs = {}, rhs = {})",
            (n - params.mu2) / params.p,
            (n - params.mu1) / params.q
        )));
    }
    let bound = params.support_const * 2f64.powi(params.j);
    let mut derivative = vec![Complex::new(0.0, 0.0); grid.total()];
    for idx in 0..grid.total() {
        let c = f.coeffs()[idx];
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let r = grid.freq_norm(idx);
        if r > bound + 1e-9 {
            return Err(Error::Precondition(format!(
                "spectrum reaches |xi| = {r}, support bound is {bound}"
            )));
        }
        let xi = grid.freq(idx);
        let mut mag = 1.0f64;
        for a in 0..grid.dim() {
            mag *= xi[a].abs().powi(params.alpha[a] as i32);
        }
        derivative[idx] = c * mag;
    }
    let total_alpha: u32 = params.alpha.iter().sum();
    let numerator = morrey_norm(&derivative, grid, params.q, params.mu2, search)?;
    let base = morrey_norm(f.coeffs(), grid, params.p, params.mu1, search)?;
    let exponent = params.j as f64
        * (total_alpha as f64 + (n - params.mu2) / params.q - (n - params.mu1) / params.p);
    let denominator = exponent.exp2() * base;
    Ok(BernsteinReport {
        numerator,
        denominator,
        ratio: if denominator == 0.0 {
            0.0
        } else {
            numerator / denominator
        },
    })
}

#[derive(Debug, Clone, Copy)]
pub struct HolderTriple {
    pub p1: f64,
    pub mu1: f64,
    pub p2: f64,
    pub mu2: f64,
    pub p3: f64,
    pub mu3: f64,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

// round-off slack: the discrete inequalities are exact, any excess beyond
// this is a real violation
const SLACK: f64 = 1e-12;

/// ||f g||_{M_{p3,mu3}} <= ||f||_{M_{p1,mu1}} ||g||_{M_{p2,mu2}} under
/// 1/p3 = 1/p1 + 1/p2 and mu3/p3 = mu1/p1 + mu2/p2. Uses the full center
/// search so both sides see the same search set.
pub fn holder_check(
    f: &[Complex],
    g: &[Complex],
    grid: &Grid,
    t: &HolderTriple,
) -> Result<InequalityReport> {
    let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
    if (inv(t.p3) - inv(t.p1) - inv(t.p2)).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "holder exponents must satisfy 1/p3 = 1/p1 + 1/p2 (p1 = {}, p2 = {}, p3 = {})",
            t.p1, t.p2, t.p3
        )));
    }
    let mw = |mu: f64, p: f64| if p.is_infinite() { 0.0 } else { mu / p };
    if (mw(t.mu3, t.p3) - mw(t.mu1, t.p1) - mw(t.mu2, t.p2)).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "holder weights must satisfy mu3/p3 = mu1/p1 + mu2/p2 (got {} vs {} + {})",
            mw(t.mu3, t.p3),
            mw(t.mu1, t.p1),
            mw(t.mu2, t.p2)
        )));
    }
    if f.len() != g.len() {
        return Err(Error::Dimension(
            "holder factors must share the lattice".into(),
        ));
    }
    let product: Vec<Complex> = f.iter().zip(g).map(|(a, b)| a * b).collect();
    let search = MorreySearch::full();
    let lhs = morrey_norm(&product, grid, t.p3, t.mu3, &search)?;
    let rhs = morrey_norm(f, grid, t.p1, t.mu1, &search)?
        * morrey_norm(g, grid, t.p2, t.mu2, &search)?;
    Ok(InequalityReport {
        lhs,
        rhs,
        satisfied: lhs <= rhs * (1.0 + SLACK) + f64::MIN_POSITIVE,
    })
}

/// ||phi * g||_{M_{p,mu}} <= ||phi||_{L^1} ||g||_{M_{p,mu}} with the
/// zero-extended discrete convolution (phi * g)(x) = sum_y phi(y) g(x-y) h^n.
/// The full center search makes the translation argument closed on the
/// lattice, so violations beyond round-off cannot occur.
pub fn young_check(
    phi: &[Complex],
    g: &[Complex],
    grid: &Grid,
    p: f64,
    mu: f64,
) -> Result<InequalityReport> {
    if phi.len() != grid.total() || g.len() != grid.total() {
        return Err(Error::Dimension(
            "young factors must live on the grid lattice".into(),
        ));
    }
    let v = grid.cell_volume();
    let total = grid.total();
    let mut conv = vec![Complex::new(0.0, 0.0); total];
    // quadratic loop in sorted wavenumber space; test-scale lattices only
    for x in 0..total {
        let kx = grid.wavevector(x);
        let mut acc = Complex::new(0.0, 0.0);
        for y in 0..total {
            if phi[y].norm_sqr() == 0.0 {
                continue;
            }
            let ky = grid.wavevector(y);
            let mut mi = [0usize; MAX_DIM];
            let mut inside = true;
            for a in 0..grid.dim() {
                match grid.axis_index(kx[a] - ky[a]) {
                    Some(i) => mi[a] = i,
                    None => {
                        inside = false;
                        break;
                    }
                }
            }
            if !inside {
                continue;
            }
            acc += phi[y] * g[grid.flat_index(&mi[..grid.dim()])];
        }
        conv[x] = acc * v;
    }
    let l1_phi: f64 = phi.iter().map(|c| c.norm()).sum::<f64>() * v;
    let search = MorreySearch::full();
    let lhs = morrey_norm(&conv, grid, p, mu, &search)?;
    let rhs = l1_phi * morrey_norm(g, grid, p, mu, &search)?;
    Ok(InequalityReport {
        lhs,
        rhs,
        satisfied: lhs <= rhs * (1.0 + SLACK) + f64::MIN_POSITIVE,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepReport {
    pub trials: usize,
    pub violations: usize,
    /// max over trials of lhs/rhs (1.0 is sharpness)
    pub worst_margin: f64,
}

fn random_lattice_field(grid: &Grid, rng: &mut ChaCha8Rng, sparse: bool) -> Vec<Complex> {
    (0..grid.total())
        .map(|_| {
            if sparse && rng.gen::<f64>() < 0.7 {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
            }
        })
        .collect()
}

/// Exponent triple sampler: p3 in [1,4], the split 1/p3 = u/p3 + (1-u)/p3
/// keeps p1, p2 >= p3 >= 1 and mu3 a convex combination below n.
fn random_holder_triple(dim: usize, rng: &mut ChaCha8Rng) -> HolderTriple {
    let p3 = 1.0 + 3.0 * rng.gen::<f64>();
    let u = 0.05 + 0.9 * rng.gen::<f64>();
    let p1 = p3 / u;
    let p2 = p3 / (1.0 - u);
    let n = dim as f64;
    let mu1 = rng.gen::<f64>() * n * 0.99;
    let mu2 = rng.gen::<f64>() * n * 0.99;
    let mu3 = p3 * (mu1 / p1 + mu2 / p2);
    HolderTriple {
        p1,
        mu1,
        p2,
        mu2,
        p3,
        mu3,
    }
}

/// Randomized Hölder + Young sweep; alternates the two inequalities.
pub fn holder_young_sweep(grid: &Grid, trials: usize, rng: &mut ChaCha8Rng) -> Result<SweepReport> {
    let mut violations = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let report = if trial % 2 == 0 {
            let f = random_lattice_field(grid, rng, false);
            let g = random_lattice_field(grid, rng, false);
            let t = random_holder_triple(grid.dim(), rng);
            holder_check(&f, &g, grid, &t)?
        } else {
            let phi = random_lattice_field(grid, rng, true);
            let g = random_lattice_field(grid, rng, false);
            let p = 1.0 + 3.0 * rng.gen::<f64>();
            let mu = rng.gen::<f64>() * grid.dim() as f64 * 0.99;
            young_check(&phi, &g, grid, p, mu)?
        };
        if !report.satisfied {
            violations += 1;
        }
        if report.rhs > 0.0 {
            worst = worst.max(report.lhs / report.rhs);
        }
    }
    Ok(SweepReport {
        trials,
        violations,
        worst_margin: worst,
    })
}
