//! Fourier-Besov-Morrey norm: weighted ell^q aggregation of per-block Morrey
//! norms of the windowed coefficients,
//!
//!   ||f||_{FN^s_{p,mu,q}} = || { 2^(ks) ||phi_k f_hat||_{M_{p,mu}} }_k ||_{ell^q}.

use super::morrey::{morrey_norm, validate_p_mu, MorreySearch};
use super::partition::DyadicPartition;
use crate::field::SpectralField;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NormParams {
    pub p: f64,
    pub mu: f64,
    pub q: f64,
    pub s: f64,
}

impl NormParams {
    pub fn new(p: f64, mu: f64, q: f64, s: f64) -> Self {
        NormParams { p, mu, q, s }
    }

    /// The scaling-critical regularity s = n - (n-mu)/p - (2 gamma - beta).
    pub fn critical_s(n: usize, gamma: f64, beta: f64, p: f64, mu: f64) -> f64 {
        n as f64 - (n as f64 - mu) / p - (2.0 * gamma - beta)
    }

    /// NormParams with s picked at the critical value.
    pub fn auto(n: usize, gamma: f64, beta: f64, p: f64, mu: f64, q: f64) -> Self {
        NormParams {
            p,
            mu,
            q,
            s: Self::critical_s(n, gamma, beta, p, mu),
        }
    }

    /// Basic exponent sanity, independent of any theorem window.
    pub fn validate_basic(&self, dim: usize) -> Result<()> {
        validate_p_mu(self.p, self.mu, dim)?;
        if self.q.is_nan() || self.q < 1.0 {
            return Err(Error::Domain(format!("norm.q must be >= 1 (got {})", self.q)));
        }
        if !self.s.is_finite() {
            return Err(Error::Domain(format!("norm.s must be finite (got {})", self.s)));
        }
        Ok(())
    }

    /// Full well-posedness window. Every violated inequality is reported, each
    /// named exactly as it must hold.
    pub fn validate_theorem_window(&self, n: usize, gamma: f64, beta: f64) -> Result<()> {
        let nf = n as f64;
        let mut bad: Vec<String> = Vec::new();
        if !(gamma > 0.5) {
            bad.push(format!("gamma > 1/2 (gamma = {gamma})"));
        }
        if !(beta >= 0.0 && beta < 2.0 * gamma) {
            bad.push(format!("0 <= beta < 2*gamma (beta = {beta}, gamma = {gamma})"));
        }
        if !(2.0 * gamma < (nf + beta + 1.0) / 2.0) {
            bad.push(format!(
                "2*gamma < (n+beta+1)/2 (gamma = {gamma}, n = {n}, beta = {beta})"
            ));
        }
        if !(self.mu >= 0.0 && self.mu < nf) {
            bad.push(format!("0 <= mu < n (mu = {})", self.mu));
        }
        if self.p.is_nan() || self.p < 1.0 {
            bad.push(format!("p >= 1 (p = {})", self.p));
        }
        if self.q.is_nan() || self.q < 1.0 {
            bad.push(format!("q >= 1 (q = {})", self.q));
        }
        let denom = nf + beta + 1.0 - 4.0 * gamma;
        if denom > 0.0 && !(self.p > (nf - self.mu) / denom) {
            bad.push(format!(
                "p > (n-mu)/(n+beta+1-4*gamma) = {:.6} (p = {})",
                (nf - self.mu) / denom,
                self.p
            ));
        }
        let s_crit = Self::critical_s(n, gamma, beta, self.p, self.mu);
        if (self.s - s_crit).abs() > 1e-12 {
            bad.push(format!(
                "s = n - (n-mu)/p - (2*gamma-beta) = {:.12} (s = {})",
                s_crit, self.s
            ));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "norm parameters violate the admissibility window: {}",
                bad.join("; ")
            )))
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BlockNorm {
    pub k: i32,
    pub block_norm: f64,
    pub weight: f64,
    pub weighted: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct FbmReport {
    pub blocks: Vec<BlockNorm>,
    pub value: f64,
    pub params: NormParams,
    pub center_stride: usize,
}

/// Per-block report plus the aggregated norm.
pub fn fbm_norm_report(
    f: &SpectralField,
    part: &DyadicPartition,
    np: &NormParams,
    search: &MorreySearch,
) -> Result<FbmReport> {
    let grid = f.grid();
    np.validate_basic(grid.dim())?;
    let mut scratch = vec![crate::Complex::new(0.0, 0.0); grid.total()];
    let mut blocks = Vec::with_capacity(part.len());
    for k in part.blocks() {
        let mut any = false;
        for idx in 0..grid.total() {
            let w = part.phi(k, grid.freq_norm(idx));
            let c = f.coeffs()[idx] * w;
            any |= c.norm_sqr() > 0.0;
            scratch[idx] = c;
        }
        let block_norm = if any {
            morrey_norm(&scratch, grid, np.p, np.mu, search)?
        } else {
            0.0
        };
        let weight = (np.s * k as f64).exp2();
        blocks.push(BlockNorm {
            k,
            block_norm,
            weight,
            weighted: weight * block_norm,
        });
    }
    let value = if np.q.is_infinite() {
        blocks.iter().map(|b| b.weighted).fold(0.0, f64::max)
    } else {
        blocks
            .iter()
            .map(|b| b.weighted.powf(np.q))
            .sum::<f64>()
            .powf(1.0 / np.q)
    };
    Ok(FbmReport {
        blocks,
        value,
        params: *np,
        center_stride: search.center_stride,
    })
}

/// The norm alone.
pub fn fbm_norm(
    f: &SpectralField,
    part: &DyadicPartition,
    np: &NormParams,
    search: &MorreySearch,
) -> Result<f64> {
    Ok(fbm_norm_report(f, part, np, search)?.value)
}
