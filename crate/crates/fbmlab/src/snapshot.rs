//! FBM1 snapshot files: a one-line ASCII header followed by raw coefficient
//! bytes. The header carries the grid, the model exponents, and the time tag
//! in shortest round-trip decimal; the body is the coefficient array in flat
//! row-major order, each value an (re, im) pair of little-endian f64. The
//! round trip is bit-exact.

use crate::field::SpectralField;
use crate::{Complex, Error, Grid, Result};
use std::path::Path;

pub const MAGIC: &str = "FBM1";

#[derive(Debug, Clone, Copy)]
pub struct SnapshotMeta {
    pub gamma: f64,
    pub beta: f64,
}

pub fn write_snapshot(path: &Path, field: &SpectralField, gamma: f64, beta: f64) -> Result<()> {
    let grid = field.grid();
    let header = format!(
        "{MAGIC} n={} N={} L={} gamma={} beta={} time={}\n",
        grid.dim(),
        grid.points(),
        grid.length(),
        gamma,
        beta,
        field.time_tag
    );
    let mut bytes = Vec::with_capacity(header.len() + grid.total() * 16);
    bytes.extend_from_slice(header.as_bytes());
    for c in field.coeffs() {
        bytes.extend_from_slice(&c.re.to_le_bytes());
        bytes.extend_from_slice(&c.im.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

fn header_value<'a>(tokens: &'a [&str], key: &str) -> Result<&'a str> {
    tokens
        .iter()
        .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| Error::Format(format!("snapshot header lacks {key}=")))
}

fn parse_f64(s: &str, key: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Format(format!("snapshot header {key}={s} is not a number")))
}

pub fn read_snapshot(path: &Path) -> Result<(SpectralField, SnapshotMeta)> {
    let bytes = std::fs::read(path)?;
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Format("snapshot has no header line".into()))?;
    let header = std::str::from_utf8(&bytes[..newline])
        .map_err(|_| Error::Format("snapshot header is not ASCII".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.first() != Some(&MAGIC) {
        return Err(Error::Format(format!(
            "bad snapshot magic: expected {MAGIC}, found {:?}",
            tokens.first().unwrap_or(&"")
        )));
    }
    let dim: usize = header_value(&tokens, "n")?
        .parse()
        .map_err(|_| Error::Format("snapshot header n= is not an integer".into()))?;
    let points: usize = header_value(&tokens, "N")?
        .parse()
        .map_err(|_| Error::Format("snapshot header N= is not an integer".into()))?;
    let length = parse_f64(header_value(&tokens, "L")?, "L")?;
    let gamma = parse_f64(header_value(&tokens, "gamma")?, "gamma")?;
    let beta = parse_f64(header_value(&tokens, "beta")?, "beta")?;
    let time = parse_f64(header_value(&tokens, "time")?, "time")?;

    let grid = Grid::new(dim, points, length)?;
    let body = &bytes[newline + 1..];
    if body.len() != grid.total() * 16 {
        return Err(Error::Format(format!(
            "snapshot body holds {} bytes, grid needs {}",
            body.len(),
            grid.total() * 16
        )));
    }
    let mut coeffs = Vec::with_capacity(grid.total());
    for chunk in body.chunks_exact(16) {
        let re = f64::from_le_bytes(chunk[..8].try_into().expect("chunk size"));
        let im = f64::from_le_bytes(chunk[8..].try_into().expect("chunk size"));
        coeffs.push(Complex::new(re, im));
    }
    let field = SpectralField::from_coeffs(grid, coeffs, time)?;
    Ok((field, SnapshotMeta { gamma, beta }))
}
