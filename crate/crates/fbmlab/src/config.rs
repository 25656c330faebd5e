//! TOML run configuration: one file describes model, grid, norm, time
//! stepping, initial data, and output placement. Everything the binary does
//! is driven from here so a run is reproducible from its config artifact
//! alone. Validation failures name the offending key (or the violated
//! inequality) rather than pointing at a line number.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::experiments::data::{make_truncated_homogeneous_data, TruncMode};
use crate::lp::NormParams;
use crate::rng::{gaussian_bump, single_mode};
use crate::snapshot::read_snapshot;
use crate::solver::{FixedPointConfig, Scheme, TimeStepConfig};
use crate::symbols::{builtin_symbol_for_dim, CouplingSymbol, SymbolParams};
use crate::{Error, Grid, Result, SpectralField};

/// Explicit regularity or the critical choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SOrAuto {
    Value(f64),
    Word(String),
}

impl Default for SOrAuto {
    fn default() -> Self {
        SOrAuto::Word("auto".into())
    }
}

/// Time-stepping scheme, including the fixed-point path that ETD cannot take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunScheme {
    EtdEuler,
    EtdRk2,
    Picard,
}

impl RunScheme {
    pub fn name(self) -> &'static str {
        match self {
            RunScheme::EtdEuler => "etd_euler",
            RunScheme::EtdRk2 => "etd_rk2",
            RunScheme::Picard => "picard",
        }
    }

    /// The marching scheme, when this is one.
    pub fn stepping(self) -> Option<Scheme> {
        match self {
            RunScheme::EtdEuler => Some(Scheme::EtdEuler),
            RunScheme::EtdRk2 => Some(Scheme::EtdRk2),
            RunScheme::Picard => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n: usize,
    pub gamma: f64,
    /// Symbol growth order; required by symbols that take it as a parameter,
    /// cross-checked against symbols that fix their own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub symbol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    /// Dissipation strength; only the normalized value 1 is supported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub points: usize,
    pub length: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSection {
    pub p: f64,
    pub mu: f64,
    pub q: f64,
    #[serde(default)]
    pub s: SOrAuto,
}

fn default_true() -> bool {
    true
}

fn default_picard_nodes() -> usize {
    17
}

fn default_picard_max_iter() -> usize {
    24
}

fn default_picard_tol() -> f64 {
    1e-9
}

fn default_quad_nodes() -> usize {
    32
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardSection {
    #[serde(default = "default_picard_nodes")]
    pub nodes: usize,
    #[serde(default = "default_picard_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_picard_tol")]
    pub tol: f64,
    #[serde(default = "default_quad_nodes")]
    pub quad_nodes: usize,
    #[serde(default)]
    pub theorem_mode: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_bound: Option<f64>,
}

impl Default for PicardSection {
    fn default() -> Self {
        PicardSection {
            nodes: default_picard_nodes(),
            max_iter: default_picard_max_iter(),
            tol: default_picard_tol(),
            quad_nodes: default_quad_nodes(),
            theorem_mode: false,
            epsilon: None,
            k_bound: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_final: f64,
    pub dt: f64,
    pub scheme: RunScheme,
    #[serde(default = "default_true")]
    pub dealias: bool,
    #[serde(default)]
    pub picard: PicardSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IcKind {
    TruncatedHomogeneous,
    Gaussian,
    SingleMode,
    File,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcSection {
    #[serde(rename = "type")]
    pub kind: IcKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<TruncMode>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
}

fn default_directory() -> String {
    "runs".into()
}

fn default_record_every() -> usize {
    10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_directory")]
    pub directory: String,
    /// Steps between snapshots; 0 writes only the final state.
    #[serde(default)]
    pub snapshot_every: usize,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            directory: default_directory(),
            snapshot_every: 0,
            record_every: default_record_every(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub grid: GridSection,
    pub norm: NormSection,
    pub time: TimeSection,
    pub ic: IcSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Everything resolved and validated, minus the initial data.
#[derive(Debug, Clone)]
pub struct ResolvedParams {
    pub grid: Grid,
    pub sym: CouplingSymbol,
    pub gamma: f64,
    pub beta: f64,
    pub np: NormParams,
    pub scheme: RunScheme,
    pub ts: TimeStepConfig,
    pub fp: FixedPointConfig,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_str_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_toml(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self)
            .map_err(|e| Error::Format(format!("config serialization failed: {e}")))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }

    /// Validate and resolve every section except the initial data.
    pub fn resolve_params(&self, seed_override: Option<u64>) -> Result<ResolvedParams> {
        let m = &self.model;
        if let Some(kappa) = m.kappa {
            if kappa != 1.0 {
                return Err(Error::Config(format!(
                    "model.kappa = {kappa} is not supported; the dissipation is \
                     normalized to kappa = 1"
                )));
            }
        }
        if !(1..=crate::grid::MAX_DIM).contains(&m.n) {
            return Err(Error::Config(format!(
                "model.n must be 1, 2, or 3 (got {})",
                m.n
            )));
        }
        if !(m.gamma.is_finite() && m.gamma > 0.5) {
            return Err(Error::Config(format!(
                "model.gamma must exceed 1/2 (got {})",
                m.gamma
            )));
        }
        if !(self.grid.points >= 4 && self.grid.points.is_power_of_two()) {
            return Err(Error::Config(format!(
                "grid.points must be a power of two >= 4 (got {})",
                self.grid.points
            )));
        }
        if !(self.grid.length.is_finite() && self.grid.length > 0.0) {
            return Err(Error::Config(format!(
                "grid.length must be positive (got {})",
                self.grid.length
            )));
        }
        let grid = Grid::new(m.n, self.grid.points, self.grid.length)?;

        let params = SymbolParams {
            alpha: m.alpha,
            beta: m.beta,
            chi: m.chi,
        };
        let sym = builtin_symbol_for_dim(&m.symbol, &params, m.n)
            .map_err(|e| Error::Config(format!("[model] symbol resolution failed: {e}")))?;
        let beta = sym.beta();
        if let Some(b) = m.beta {
            if (b - beta).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "model.beta = {b} conflicts with symbol '{}' which has beta = {beta}",
                    sym.name()
                )));
            }
        }

        let np = self.resolve_norm(m.n, m.gamma, beta)?;

        let t = &self.time;
        if !(t.t_final.is_finite() && t.t_final > 0.0) {
            return Err(Error::Config(format!(
                "time.t_final must be positive (got {})",
                t.t_final
            )));
        }
        if !(t.dt.is_finite() && t.dt > 0.0 && t.dt <= t.t_final) {
            return Err(Error::Config(format!(
                "time.dt must satisfy 0 < dt <= time.t_final (got dt = {}, t_final = {})",
                t.dt, t.t_final
            )));
        }
        if t.scheme == RunScheme::Picard && t.picard.nodes < 2 {
            return Err(Error::Config(format!(
                "time.picard.nodes must be >= 2 (got {})",
                t.picard.nodes
            )));
        }
        let ts = TimeStepConfig {
            t_final: t.t_final,
            dt: t.dt,
            scheme: t.scheme.stepping().unwrap_or(Scheme::EtdRk2),
            dealias: t.dealias,
        };
        let fp = FixedPointConfig {
            epsilon: t.picard.epsilon.unwrap_or(0.05),
            k_bound: t.picard.k_bound.unwrap_or(1.0),
            max_iter: t.picard.max_iter,
            tol: t.picard.tol,
            quad_nodes: t.picard.quad_nodes,
            theorem_mode: t.picard.theorem_mode,
        };

        Ok(ResolvedParams {
            grid,
            sym,
            gamma: m.gamma,
            beta,
            np,
            scheme: t.scheme,
            ts,
            fp,
            seed: seed_override.unwrap_or(self.ic.seed),
        })
    }

    /// Norm parameters against externally supplied model numbers (used when
    /// the grid and exponents travel with a snapshot instead of `[model]`).
    pub fn norm_params(&self, n: usize, gamma: f64, beta: f64) -> Result<NormParams> {
        self.resolve_norm(n, gamma, beta)
    }

    fn resolve_norm(&self, n: usize, gamma: f64, beta: f64) -> Result<NormParams> {
        let ns = &self.norm;
        match &ns.s {
            SOrAuto::Value(s) => {
                let np = NormParams::new(ns.p, ns.mu, ns.q, *s);
                np.validate_basic(n)?;
                Ok(np)
            }
            SOrAuto::Word(w) if w == "auto" => {
                let np = NormParams::auto(n, gamma, beta, ns.p, ns.mu, ns.q);
                np.validate_theorem_window(n, gamma, beta)?;
                Ok(np)
            }
            SOrAuto::Word(w) => Err(Error::Config(format!(
                "norm.s must be a number or the string \"auto\" (got \"{w}\")"
            ))),
        }
    }

    /// Build the initial data described by `[ic]` on the resolved grid.
    pub fn build_initial_data(&self, rp: &ResolvedParams) -> Result<SpectralField> {
        let ic = &self.ic;
        let need = |opt: Option<f64>, key: &str, kind: &str| -> Result<f64> {
            opt.ok_or_else(|| {
                Error::Config(format!("ic.{key} is required for ic.type = \"{kind}\""))
            })
        };
        match ic.kind {
            IcKind::TruncatedHomogeneous => {
                let delta = need(ic.delta, "delta", "truncated_homogeneous")?;
                let r1 = need(ic.r1, "r1", "truncated_homogeneous")?;
                let mode = ic.mode.unwrap_or(TruncMode::Lowpass);
                make_truncated_homogeneous_data(delta, r1, mode, &rp.grid, rp.gamma, rp.beta)
            }
            IcKind::Gaussian => {
                let amplitude = need(ic.amplitude, "amplitude", "gaussian")?;
                let width = need(ic.width, "width", "gaussian")?;
                let mid = vec![rp.grid.length() / 2.0; rp.grid.dim()];
                let center = ic.center.as_deref().unwrap_or(&mid);
                if center.len() != rp.grid.dim() {
                    return Err(Error::Config(format!(
                        "ic.center needs {} coordinates (got {})",
                        rp.grid.dim(),
                        center.len()
                    )));
                }
                gaussian_bump(&rp.grid, amplitude, width, center)
            }
            IcKind::SingleMode => {
                let amplitude = need(ic.amplitude, "amplitude", "single_mode")?;
                let k = ic.k.as_ref().ok_or_else(|| {
                    Error::Config("ic.k is required for ic.type = \"single_mode\"".into())
                })?;
                if k.len() != rp.grid.dim() {
                    return Err(Error::Config(format!(
                        "ic.k needs {} components (got {})",
                        rp.grid.dim(),
                        k.len()
                    )));
                }
                single_mode(&rp.grid, k, amplitude)
            }
            IcKind::File => {
                let path = ic.path.as_ref().ok_or_else(|| {
                    Error::Config("ic.path is required for ic.type = \"file\"".into())
                })?;
                let (field, _meta) = read_snapshot(path)?;
                if field.grid() != &rp.grid {
                    return Err(Error::Config(format!(
                        "ic.path snapshot grid (n = {}, points = {}, length = {}) does not \
                         match [grid] (n = {}, points = {}, length = {})",
                        field.grid().dim(),
                        field.grid().points(),
                        field.grid().length(),
                        rp.grid.dim(),
                        rp.grid.points(),
                        rp.grid.length()
                    )));
                }
                Ok(field)
            }
        }
    }

    /// Full resolve: parameters plus initial data.
    pub fn resolve(&self, seed_override: Option<u64>) -> Result<(ResolvedParams, SpectralField)> {
        let rp = self.resolve_params(seed_override)?;
        let theta0 = self.build_initial_data(&rp)?;
        Ok((rp, theta0))
    }
}
