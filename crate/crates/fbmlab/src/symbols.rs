//! Velocity coupling symbols u_hat = P~(xi) theta_hat.
//!
//! Every builtin obeys the growth envelope |P~(xi)| <= C |xi|^(beta - 1) on
//! the resolved lattice (C scanned, not stored) and the Hermitian
//! compatibility P~(-xi) = conj(P~(xi)), so real scalars produce real
//! velocities. Homogeneous symbols additionally satisfy
//! P~(lambda xi) = lambda^(beta-1) P~(xi).

use crate::field::SpectralField;
use crate::grid::{Grid, MAX_DIM};
use crate::{Complex, Error, Result};

/// Position of beta relative to the dissipation strength 2*gamma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criticality {
    SubCritical,
    Critical,
    SuperCritical,
}

/// beta < 2 gamma is sub-critical, equality critical, above super-critical.
pub fn criticality(beta: f64, gamma: f64) -> Criticality {
    let two_gamma = 2.0 * gamma;
    if beta < two_gamma {
        Criticality::SubCritical
    } else if beta == two_gamma {
        Criticality::Critical
    } else {
        Criticality::SuperCritical
    }
}

/// Optional scalar parameters accepted by [`builtin_symbol`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SymbolParams {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub chi: Option<f64>,
}

#[derive(Debug, Clone)]
enum Kind {
    Zero,
    Burgers,
    Hilbert,
    HilbertAlpha { alpha: f64 },
    Vorticity2d,
    Gsqg { beta: f64 },
    LogCoupling { alpha: f64, chi: f64 },
    LogLogCoupling { alpha: f64, chi: f64 },
    Mg3d,
    MCoupling { chi: f64 },
    Custom { grid: Grid, components: Vec<Vec<Complex>> },
}

#[derive(Debug, Clone)]
pub struct CouplingSymbol {
    name: String,
    dim: usize,
    beta: f64,
    homogeneous: bool,
    divergence_free: bool,
    kind: Kind,
}

impl CouplingSymbol {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Declared growth degree: |P~| <= C |xi|^(beta-1).
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn divergence_free(&self) -> bool {
        self.divergence_free
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, Kind::Zero)
    }

    pub fn criticality(&self, gamma: f64) -> Criticality {
        criticality(self.beta, gamma)
    }

    /// P~(xi). Unused components of the result are zero; P~(0) = 0 for every
    /// kind (the zero mode carries no transport).
    pub fn evaluate(&self, xi: &[f64; MAX_DIM]) -> [Complex; MAX_DIM] {
        let zero = [Complex::new(0.0, 0.0); MAX_DIM];
        let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if r2 == 0.0 {
            return zero;
        }
        let r = r2.sqrt();
        // i * xi-perp = (-i xi_2, i xi_1); shared by every planar coupling.
        let perp = |scale: f64| {
            let mut v = zero;
            v[0] = Complex::new(0.0, -xi[1] * scale);
            v[1] = Complex::new(0.0, xi[0] * scale);
            v
        };
        match &self.kind {
            Kind::Zero => zero,
            Kind::Burgers => {
                let mut v = zero;
                v[0] = Complex::new(1.0, 0.0);
                v
            }
            Kind::Hilbert => {
                let mut v = zero;
                v[0] = Complex::new(0.0, -xi[0].signum());
                v
            }
            Kind::HilbertAlpha { alpha } => {
                let mut v = zero;
                v[0] = Complex::new(0.0, -xi[0].signum() * r.powf(*alpha));
                v
            }
            Kind::Vorticity2d => perp(1.0 / r2),
            Kind::Gsqg { beta } => perp(r.powf(beta - 2.0)),
            Kind::LogCoupling { alpha, chi } => perp(r.powf(alpha - 2.0) * r2.ln_1p().powf(*chi)),
            Kind::LogLogCoupling { alpha, chi } => {
                perp(r.powf(alpha - 2.0) * r2.ln_1p().ln_1p().powf(*chi))
            }
            Kind::Mg3d => {
                // Anisotropic degree-0 prefactor with the magneto-geostrophic
                // singular axis xi_2 = xi_3 = 0; s <= xi_2^2/|xi|^2 <= 1.
                let (a, b) = (xi[1], xi[2]);
                let den = b * b * r2 + a * a * a * a;
                if den == 0.0 {
                    return zero;
                }
                let s = (a * a * b * b) / den;
                let mut v = zero;
                v[0] = Complex::new(0.0, -xi[1] * s);
                v[1] = Complex::new(0.0, xi[0] * s);
                v
            }
            Kind::MCoupling { chi } => {
                let m = 1.0 + r2.ln_1p().ln_1p().powf(*chi);
                perp(m / r)
            }
            Kind::Custom { grid, components } => {
                let h = grid.spacing();
                let mut mi = [0usize; MAX_DIM];
                for axis in 0..grid.dim() {
                    let k = (xi[axis] / h).round() as i64;
                    match grid.axis_index(k) {
                        Some(i) => mi[axis] = i,
                        None => return zero,
                    }
                }
                let idx = grid.flat_index(&mi[..grid.dim()]);
                let mut v = zero;
                for (j, comp) in components.iter().enumerate() {
                    v[j] = comp[idx];
                }
                v
            }
        }
    }

    /// Lattice scan of C = max |P~(xi)| / |xi|^(beta-1) over nonzero modes.
    pub fn growth_constant(&self, grid: &Grid) -> Result<f64> {
        if grid.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "symbol {} is {}-dimensional, grid is {}-dimensional",
                self.name,
                self.dim,
                grid.dim()
            )));
        }
        let mut c = 0.0f64;
        for idx in 1..grid.total() {
            let xi = grid.freq(idx);
            let r = grid.freq_norm(idx);
            if r == 0.0 {
                continue;
            }
            let v = self.evaluate(&xi);
            let mag = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
            c = c.max(mag / r.powf(self.beta - 1.0));
        }
        Ok(c)
    }
}

/// Construct a catalog symbol by name. Parameter requirements:
/// `hilbert_alpha` needs alpha in [-1, 1); `gsqg` needs beta in [0, 3);
/// `log_coupling`/`loglog_coupling` need alpha in [0, 3) and chi > 0;
/// `m_coupling` needs chi in (0, 1). Other names take no parameters.
pub fn builtin_symbol(name: &str, params: &SymbolParams) -> Result<CouplingSymbol> {
    let sym = match name {
        "zero" => CouplingSymbol {
            name: name.into(),
            dim: 0, // placeholder; fixed by with_dim below
            beta: 0.0,
            homogeneous: true,
            divergence_free: true,
            kind: Kind::Zero,
        },
        "burgers" => CouplingSymbol {
            name: name.into(),
            dim: 1,
            beta: 1.0,
            homogeneous: true,
            divergence_free: false,
            kind: Kind::Burgers,
        },
        "hilbert" => CouplingSymbol {
            name: name.into(),
            dim: 1,
            beta: 1.0,
            homogeneous: true,
            divergence_free: false,
            kind: Kind::Hilbert,
        },
        "hilbert_alpha" => {
            let alpha = require(params.alpha, "symbol.alpha", name)?;
            if !(-1.0..1.0).contains(&alpha) {
                return Err(Error::Catalog(format!(
                    "symbol.alpha for hilbert_alpha must lie in [-1, 1) (got {alpha})"
                )));
            }
            CouplingSymbol {
                name: name.into(),
                dim: 1,
                beta: alpha + 1.0,
                homogeneous: true,
                divergence_free: false,
                kind: Kind::HilbertAlpha { alpha },
            }
        }
        "vorticity2d" => CouplingSymbol {
            name: name.into(),
            dim: 2,
            beta: 0.0,
            homogeneous: true,
            divergence_free: true,
            kind: Kind::Vorticity2d,
        },
        "gsqg" => {
            let beta = require(params.beta, "symbol.beta", name)?;
            if !(0.0..3.0).contains(&beta) {
                return Err(Error::Catalog(format!(
                    "symbol.beta for gsqg must lie in [0, 3) (got {beta})"
                )));
            }
            CouplingSymbol {
                name: name.into(),
                dim: 2,
                beta,
                homogeneous: true,
                divergence_free: true,
                kind: Kind::Gsqg { beta },
            }
        }
        "log_coupling" | "loglog_coupling" => {
            let alpha = require(params.alpha, "symbol.alpha", name)?;
            let chi = require(params.chi, "symbol.chi", name)?;
            if !(0.0..3.0).contains(&alpha) {
                return Err(Error::Catalog(format!(
                    "symbol.alpha for {name} must lie in [0, 3) (got {alpha})"
                )));
            }
            if !(chi > 0.0) {
                return Err(Error::Catalog(format!(
                    "symbol.chi for {name} must be positive (got {chi})"
                )));
            }
            CouplingSymbol {
                name: name.into(),
                dim: 2,
                beta: alpha,
                homogeneous: false,
                divergence_free: true,
                kind: if name == "log_coupling" {
                    Kind::LogCoupling { alpha, chi }
                } else {
                    Kind::LogLogCoupling { alpha, chi }
                },
            }
        }
        "mg3d" => CouplingSymbol {
            name: name.into(),
            dim: 3,
            beta: 2.0,
            homogeneous: true,
            divergence_free: true,
            kind: Kind::Mg3d,
        },
        "m_coupling" => {
            let chi = params.chi.unwrap_or(0.5);
            if !(chi > 0.0 && chi < 1.0) {
                return Err(Error::Catalog(format!(
                    "symbol.chi for m_coupling must lie in (0, 1) (got {chi})"
                )));
            }
            CouplingSymbol {
                name: name.into(),
                dim: 2,
                beta: 1.0,
                homogeneous: false,
                divergence_free: true,
                kind: Kind::MCoupling { chi },
            }
        }
        other => {
            return Err(Error::Catalog(format!(
                "unknown symbol.name '{other}' (builtins: zero, burgers, hilbert, \
                 hilbert_alpha, vorticity2d, gsqg, log_coupling, loglog_coupling, \
                 mg3d, m_coupling; table symbols go through symbols::custom_symbol)"
            )))
        }
    };
    Ok(sym)
}

/// The zero symbol works in any dimension; pin it to a grid's. Builtins with
/// a fixed dimension reject mismatches instead.
pub fn builtin_symbol_for_dim(name: &str, params: &SymbolParams, dim: usize) -> Result<CouplingSymbol> {
    let mut sym = builtin_symbol(name, params)?;
    if sym.is_zero() {
        sym.dim = dim;
        return Ok(sym);
    }
    if sym.dim != dim {
        return Err(Error::Config(format!(
            "symbol.name = '{}' is {}-dimensional but grid.n = {}",
            sym.name, sym.dim, dim
        )));
    }
    Ok(sym)
}

/// Symbol backed by per-frequency tables, one per velocity component.
pub fn custom_symbol(
    name: String,
    grid: Grid,
    components: Vec<Vec<Complex>>,
    beta: f64,
    homogeneous: bool,
    divergence_free: bool,
) -> Result<CouplingSymbol> {
    if components.len() != grid.dim() {
        return Err(Error::Config(format!(
            "custom symbol needs {} component tables, got {}",
            grid.dim(),
            components.len()
        )));
    }
    for (j, comp) in components.iter().enumerate() {
        if comp.len() != grid.total() {
            return Err(Error::Dimension(format!(
                "custom symbol component {} has {} entries, grid needs {}",
                j + 1,
                comp.len(),
                grid.total()
            )));
        }
    }
    if !(0.0..(grid.dim() as f64 + 1.0)).contains(&beta) {
        return Err(Error::Config(format!(
            "symbol.beta must lie in [0, n+1) (got {beta})"
        )));
    }
    Ok(CouplingSymbol {
        name,
        dim: grid.dim(),
        beta,
        homogeneous,
        divergence_free,
        kind: Kind::Custom { grid, components },
    })
}

fn require(v: Option<f64>, key: &str, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Catalog(format!("{key} is required for symbol '{name}'")))
}

/// u_hat_j(xi) = P~_j(xi) theta_hat(xi), one spectral field per component.
pub fn velocity_from_scalar(
    theta: &SpectralField,
    sym: &CouplingSymbol,
) -> Result<Vec<SpectralField>> {
    let grid = *theta.grid();
    if grid.dim() != sym.dim {
        return Err(Error::Dimension(format!(
            "symbol {} is {}-dimensional, field is {}-dimensional",
            sym.name,
            sym.dim,
            grid.dim()
        )));
    }
    let mut comps: Vec<SpectralField> = (0..grid.dim())
        .map(|_| {
            let mut f = SpectralField::zeros(grid);
            f.time_tag = theta.time_tag;
            f
        })
        .collect();
    for idx in 0..grid.total() {
        let xi = grid.freq(idx);
        let p = sym.evaluate(&xi);
        let t = theta.coeffs()[idx];
        for (j, comp) in comps.iter_mut().enumerate() {
            comp.coeffs_mut()[idx] = p[j] * t;
        }
    }
    Ok(comps)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct HomogeneityReport {
    pub pairs_tested: usize,
    pub max_rel_deviation: f64,
}

/// Compare |P~(2 xi)| against 2^(beta-1) |P~(xi)| componentwise over lattice
/// pairs (xi, 2 xi). Homogeneous symbols report deviations at round-off;
/// log-corrected ones report their genuine drift.
pub fn check_homogeneity(sym: &CouplingSymbol, grid: &Grid) -> Result<HomogeneityReport> {
    if grid.dim() != sym.dim {
        return Err(Error::Dimension(format!(
            "symbol {} is {}-dimensional, grid is {}-dimensional",
            sym.name,
            sym.dim,
            grid.dim()
        )));
    }
    let factor = 2.0f64.powf(sym.beta - 1.0);
    let quarter = grid.points() as i64 / 4;
    let mut pairs = 0usize;
    let mut worst = 0.0f64;
    for idx in 1..grid.total() {
        let k = grid.wavevector(idx);
        // keep 2k strictly inside the symmetric band
        if (0..grid.dim()).any(|a| k[a].abs() >= quarter) {
            continue;
        }
        if k.iter().all(|&ki| ki == 0) {
            continue;
        }
        let xi = grid.freq(idx);
        let xi2 = [2.0 * xi[0], 2.0 * xi[1], 2.0 * xi[2]];
        let p1 = sym.evaluate(&xi);
        let p2 = sym.evaluate(&xi2);
        pairs += 1;
        for j in 0..grid.dim() {
            let reference = factor * p1[j].norm();
            let value = p2[j].norm();
            let scale = reference.max(value);
            if scale > 0.0 {
                worst = worst.max((value - reference).abs() / scale);
            }
        }
    }
    Ok(HomogeneityReport {
        pairs_tested: pairs,
        max_rel_deviation: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{forward_transform, inverse_transform};
    use std::f64::consts::PI;

    fn grid2(n: usize) -> Grid {
        Grid::new(2, n, 2.0 * PI).unwrap()
    }

    #[test]
    fn criticality_trichotomy() {
        assert_eq!(criticality(0.5, 0.8), Criticality::SubCritical);
        assert_eq!(criticality(1.0, 0.5), Criticality::Critical);
        assert_eq!(criticality(1.5, 0.6), Criticality::SuperCritical);
    }

    #[test]
    fn catalog_rejects_unknown_and_bad_parameters() {
        assert!(builtin_symbol("navier", &SymbolParams::default()).is_err());
        assert!(builtin_symbol("gsqg", &SymbolParams::default()).is_err());
        let bad = SymbolParams {
            beta: Some(3.5),
            ..Default::default()
        };
        assert!(builtin_symbol("gsqg", &bad).is_err());
        let bad_alpha = SymbolParams {
            alpha: Some(1.2),
            ..Default::default()
        };
        assert!(builtin_symbol("hilbert_alpha", &bad_alpha).is_err());
    }

    #[test]
    fn hilbert_sign_convention() {
        let sym = builtin_symbol("hilbert", &SymbolParams::default()).unwrap();
        let v = sym.evaluate(&[2.0, 0.0, 0.0]);
        assert!((v[0] - Complex::new(0.0, -1.0)).norm() < 1e-15);
        let w = sym.evaluate(&[-3.0, 0.0, 0.0]);
        assert!((w[0] - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn gsqg_unit_frequency_example() {
        let params = SymbolParams {
            beta: Some(1.0),
            ..Default::default()
        };
        let sym = builtin_symbol("gsqg", &params).unwrap();
        let v = sym.evaluate(&[1.0, 0.0, 0.0]);
        assert!(v[0].norm() < 1e-15);
        assert!((v[1] - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn growth_constants_of_unit_envelope_symbols() {
        let g1 = Grid::new(1, 64, 2.0 * PI).unwrap();
        for name in ["burgers", "hilbert"] {
            let sym = builtin_symbol(name, &SymbolParams::default()).unwrap();
            let c = sym.growth_constant(&g1).unwrap();
            assert!((c - 1.0).abs() < 1e-12, "{name}: C = {c}");
        }
        let params = SymbolParams {
            beta: Some(0.5),
            ..Default::default()
        };
        let sym = builtin_symbol("gsqg", &params).unwrap();
        let c = sym.growth_constant(&grid2(32)).unwrap();
        assert!((c - 1.0).abs() < 1e-12, "gsqg: C = {c}");
    }

    #[test]
    fn declared_divergence_free_symbols_are_divergence_free() {
        let cases: Vec<(CouplingSymbol, Grid)> = vec![
            (
                builtin_symbol("vorticity2d", &SymbolParams::default()).unwrap(),
                grid2(16),
            ),
            (
                builtin_symbol(
                    "gsqg",
                    &SymbolParams {
                        beta: Some(1.2),
                        ..Default::default()
                    },
                )
                .unwrap(),
                grid2(16),
            ),
            (
                builtin_symbol("mg3d", &SymbolParams::default()).unwrap(),
                Grid::new(3, 8, 2.0 * PI).unwrap(),
            ),
        ];
        for (sym, grid) in cases {
            assert!(sym.divergence_free());
            for idx in 0..grid.total() {
                let xi = grid.freq(idx);
                let p = sym.evaluate(&xi);
                let div = xi[0] * p[0] + xi[1] * p[1] + xi[2] * p[2];
                assert!(div.norm() < 1e-12, "{}: div = {div} at {xi:?}", sym.name());
            }
        }
    }

    #[test]
    fn builtins_are_hermitian_compatible() {
        let names: Vec<(&str, SymbolParams, Grid)> = vec![
            ("burgers", SymbolParams::default(), Grid::new(1, 32, 7.0).unwrap()),
            ("hilbert", SymbolParams::default(), Grid::new(1, 32, 7.0).unwrap()),
            (
                "hilbert_alpha",
                SymbolParams {
                    alpha: Some(0.3),
                    ..Default::default()
                },
                Grid::new(1, 32, 7.0).unwrap(),
            ),
            ("vorticity2d", SymbolParams::default(), grid2(16)),
            (
                "gsqg",
                SymbolParams {
                    beta: Some(0.7),
                    ..Default::default()
                },
                grid2(16),
            ),
            (
                "log_coupling",
                SymbolParams {
                    alpha: Some(0.5),
                    chi: Some(0.4),
                    ..Default::default()
                },
                grid2(16),
            ),
            (
                "loglog_coupling",
                SymbolParams {
                    alpha: Some(0.5),
                    chi: Some(0.4),
                    ..Default::default()
                },
                grid2(16),
            ),
            ("m_coupling", SymbolParams::default(), grid2(16)),
            ("mg3d", SymbolParams::default(), Grid::new(3, 8, 2.0 * PI).unwrap()),
        ];
        for (name, params, grid) in names {
            let sym = builtin_symbol(name, &params).unwrap();
            for idx in 0..grid.total() {
                let xi = grid.freq(idx);
                let neg = [-xi[0], -xi[1], -xi[2]];
                let p = sym.evaluate(&xi);
                let q = sym.evaluate(&neg);
                for j in 0..3 {
                    assert!(
                        (q[j] - p[j].conj()).norm() < 1e-10,
                        "{name} at {xi:?} component {j}"
                    );
                }
            }
        }
    }

    #[test]
    fn homogeneity_report_separates_the_catalog() {
        let g = grid2(32);
        let gsqg = builtin_symbol(
            "gsqg",
            &SymbolParams {
                beta: Some(0.5),
                ..Default::default()
            },
        )
        .unwrap();
        let rep = check_homogeneity(&gsqg, &g).unwrap();
        assert!(rep.pairs_tested > 0);
        assert!(rep.max_rel_deviation < 1e-12, "{rep:?}");

        let log = builtin_symbol(
            "log_coupling",
            &SymbolParams {
                alpha: Some(0.5),
                chi: Some(1.0),
                ..Default::default()
            },
        )
        .unwrap();
        let rep = check_homogeneity(&log, &g).unwrap();
        assert!(rep.max_rel_deviation > 1e-2, "{rep:?}");
    }

    #[test]
    fn mg3d_is_finite_and_inside_its_envelope() {
        let sym = builtin_symbol("mg3d", &SymbolParams::default()).unwrap();
        let grid = Grid::new(3, 16, 2.0 * PI).unwrap();
        for idx in 0..grid.total() {
            let xi = grid.freq(idx);
            let p = sym.evaluate(&xi);
            let mag = (p[0].norm_sqr() + p[1].norm_sqr() + p[2].norm_sqr()).sqrt();
            assert!(mag.is_finite());
            let r = grid.freq_norm(idx);
            assert!(mag <= r + 1e-12, "envelope at {xi:?}: {mag} vs {r}");
        }
        let c = sym.growth_constant(&grid).unwrap();
        assert!(c <= 1.0 + 1e-12);
        let rep = check_homogeneity(&sym, &grid).unwrap();
        assert!(rep.max_rel_deviation < 1e-12, "{rep:?}");
    }

    #[test]
    fn velocity_of_single_mode_under_gsqg() {
        // theta = cos(x1) with beta = 1: u = (0, -sin(x1)).
        let g = grid2(16);
        let samples: Vec<f64> = (0..g.total())
            .map(|idx| {
                let x = g.point(idx);
                x[0].cos()
            })
            .collect();
        let theta = forward_transform(&g, &samples).unwrap();
        let sym = builtin_symbol(
            "gsqg",
            &SymbolParams {
                beta: Some(1.0),
                ..Default::default()
            },
        )
        .unwrap();
        let u = velocity_from_scalar(&theta, &sym).unwrap();
        let (u1, res1) = inverse_transform(&u[0]);
        let (u2, res2) = inverse_transform(&u[1]);
        assert!(res1 < 1e-12 && res2 < 1e-12);
        for idx in 0..g.total() {
            let x = g.point(idx);
            assert!(u1[idx].abs() < 1e-12);
            assert!((u2[idx] + x[0].sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_symbol_adapts_dimension_and_vanishes() {
        let sym = builtin_symbol_for_dim("zero", &SymbolParams::default(), 2).unwrap();
        assert!(sym.is_zero());
        assert_eq!(sym.dim(), 2);
        let v = sym.evaluate(&[1.0, 2.0, 0.0]);
        assert!(v.iter().all(|c| c.norm() == 0.0));
        assert!(builtin_symbol_for_dim("burgers", &SymbolParams::default(), 2).is_err());
    }

    #[test]
    fn custom_symbol_table_lookup() {
        let g = grid2(8);
        let sym_src = builtin_symbol(
            "gsqg",
            &SymbolParams {
                beta: Some(1.0),
                ..Default::default()
            },
        )
        .unwrap();
        let mut comps = vec![vec![Complex::new(0.0, 0.0); g.total()]; 2];
        for idx in 0..g.total() {
            let p = sym_src.evaluate(&g.freq(idx));
            comps[0][idx] = p[0];
            comps[1][idx] = p[1];
        }
        let custom =
            custom_symbol("custom".into(), g, comps, 1.0, true, true).unwrap();
        for idx in 0..g.total() {
            let xi = g.freq(idx);
            let a = custom.evaluate(&xi);
            let b = sym_src.evaluate(&xi);
            for j in 0..2 {
                assert!((a[j] - b[j]).norm() < 1e-15);
            }
        }
    }
}
