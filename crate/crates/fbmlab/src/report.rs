//! Run records and experiment reports: the JSON/CSV persistence layer. All
//! map-valued fields use BTreeMap so serialization order is deterministic.

use crate::lp::NormParams;
use crate::{Error, Grid, Result};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

pub fn code_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct NormSample {
    pub t: f64,
    pub fn_norm: f64,
    pub l2_norm: f64,
    pub max_abs: f64,
}

/// One time integration: parameters in, norm series and diagnostics out.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub scheme: String,
    pub symbol: String,
    pub gamma: f64,
    pub beta: f64,
    pub grid: Grid,
    pub dt: f64,
    pub t_final: f64,
    pub dealias: bool,
    pub steps: usize,
    pub norm_params: NormParams,
    pub norm_series: Vec<NormSample>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub picard: Option<serde_json::Value>,
    pub created_utc: String,
}

impl RunRecord {
    pub fn save_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// CSV with one row per recorded sample.
    pub fn write_norms_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["t", "fn_norm", "l2_norm", "max_abs"])?;
        for s in &self.norm_series {
            w.write_record([
                s.t.to_string(),
                s.fn_norm.to_string(),
                s.l2_norm.to_string(),
                s.max_abs.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One metrics row; absent columns stay empty in the CSV.
#[derive(Debug, Clone, Copy, Default, serde::Serialize, serde::Deserialize)]
pub struct MetricRow {
    pub t: f64,
    pub fn_norm: Option<f64>,
    pub l2_norm: Option<f64>,
    pub diff_norm: Option<f64>,
    pub proxy_norm: Option<f64>,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub version: String,
}

/// Experiment-level result: parameters, metric series, verdicts, provenance.
/// Verdict flags must be computable from the recorded metrics and scalars.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub metrics: Vec<MetricRow>,
    pub scalars: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn new(id: &str, config_sha256: String) -> Self {
        ExperimentReport {
            id: id.to_string(),
            parameters: BTreeMap::new(),
            metrics: Vec::new(),
            scalars: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            notes: Vec::new(),
            provenance: Provenance {
                config_sha256,
                version: code_version().to_string(),
            },
        }
    }

    pub fn passed(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.values().all(|&v| v)
    }

    fn check_finite(&self) -> Result<()> {
        for row in &self.metrics {
            let cols = [
                Some(row.t),
                row.fn_norm,
                row.l2_norm,
                row.diff_norm,
                row.proxy_norm,
            ];
            if cols.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::Format(format!(
                    "non-finite metric at t = {}",
                    row.t
                )));
            }
        }
        for (k, v) in &self.scalars {
            if !v.is_finite() {
                return Err(Error::Format(format!("non-finite scalar {k} = {v}")));
            }
        }
        Ok(())
    }

    /// report.json + metrics.csv side by side.
    pub fn save(&self, dir: &Path) -> Result<()> {
        self.check_finite()?;
        std::fs::create_dir_all(dir)?;
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(dir.join("report.json"), text)?;
        let mut w = csv::Writer::from_path(dir.join("metrics.csv"))?;
        w.write_record(["t", "fn_norm", "l2_norm", "diff_norm", "proxy_norm"])?;
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for row in &self.metrics {
            w.write_record([
                row.t.to_string(),
                cell(row.fn_norm),
                cell(row.l2_norm),
                cell(row.diff_norm),
                cell(row.proxy_norm),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Timestamp for provenance fields; wall-clock, not part of any oracle.
pub fn utc_now_string() -> String {
    chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

/// Writer helper shared by the CLI: pretty JSON to an arbitrary path.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(serde_json::to_string_pretty(value)?.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}
