//! Exponential time differencing integrators. The linear part is advanced by
//! the exact semigroup factor, so the only discretization error is in the
//! nonlinearity: first order for the Euler variant, second order for the
//! Cox-Matthews two-stage variant.

use crate::field::SpectralField;
use crate::lp::{fbm_norm, DyadicPartition, MorreySearch, NormParams};
use crate::num::{phi1, phi2};
use crate::report::{utc_now_string, NormSample, RunRecord};
use crate::semigroup::fractional_symbol;
use crate::solver::nonlinearity::nonlinearity;
use crate::symbols::CouplingSymbol;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    EtdEuler,
    EtdRk2,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::EtdEuler => "etd_euler",
            Scheme::EtdRk2 => "etd_rk2",
        }
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct TimeStepConfig {
    pub t_final: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub dealias: bool,
}

impl TimeStepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("time.dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt) || !self.t_final.is_finite() {
            return Err(Error::Config(format!(
                "time.t_final must be at least dt (t_final = {}, dt = {})",
                self.t_final, self.dt
            )));
        }
        Ok(())
    }
}

struct StepTables {
    dt: f64,
    decay: Vec<f64>,
    w1: Vec<f64>,
    w2: Vec<f64>,
}

impl StepTables {
    fn build(a: &[f64], dt: f64, scheme: Scheme) -> StepTables {
        let decay = a.iter().map(|&ai| (-dt * ai).exp()).collect();
        let w1 = a.iter().map(|&ai| dt * phi1(-dt * ai)).collect();
        let w2 = match scheme {
            Scheme::EtdEuler => Vec::new(),
            Scheme::EtdRk2 => a.iter().map(|&ai| dt * phi2(-dt * ai)).collect(),
        };
        StepTables { dt, decay, w1, w2 }
    }
}

fn wrap_blowup(err: Error, prev: &SpectralField) -> Error {
    match err {
        Error::Blowup { time, .. } => Error::Blowup {
            time,
            last: Some(Box::new(prev.clone())),
        },
        other => other,
    }
}

/// One ETD step of size `tables.dt` starting from `theta`.
fn etd_step(
    theta: &SpectralField,
    sym: &CouplingSymbol,
    scheme: Scheme,
    dealias: bool,
    tables: &StepTables,
) -> Result<SpectralField> {
    let grid = *theta.grid();
    let n0 = nonlinearity(theta, sym, dealias).map_err(|e| wrap_blowup(e, theta))?;
    let mut stage = SpectralField::zeros(grid);
    for idx in 0..grid.total() {
        stage.coeffs_mut()[idx] =
            theta.coeffs()[idx] * tables.decay[idx] + n0.coeffs()[idx] * tables.w1[idx];
    }
    stage.time_tag = theta.time_tag + tables.dt;
    let next = match scheme {
        Scheme::EtdEuler => stage,
        Scheme::EtdRk2 => {
            let n1 = nonlinearity(&stage, sym, dealias).map_err(|e| wrap_blowup(e, theta))?;
            let mut corrected = stage;
            for idx in 0..grid.total() {
                corrected.coeffs_mut()[idx] +=
                    (n1.coeffs()[idx] - n0.coeffs()[idx]) * tables.w2[idx];
            }
            corrected
        }
    };
    next.check_finite().map_err(|e| wrap_blowup(e, theta))?;
    Ok(next)
}

/// Integrates theta0 over [0, t_final], recording norms every `record_every`
/// steps and invoking `on_snapshot` every `snapshot_every` steps (both also
/// fire at the initial and final states; 0 disables the in-between calls).
/// On blowup the error carries the last finite field.
pub fn etd_integrate(
    theta0: &SpectralField,
    sym: &CouplingSymbol,
    gamma: f64,
    ts: &TimeStepConfig,
    np: &NormParams,
    record_every: usize,
    snapshot_every: usize,
    mut on_snapshot: impl FnMut(usize, &SpectralField) -> Result<()>,
) -> Result<(RunRecord, SpectralField)> {
    ts.validate()?;
    theta0.check_finite()?;
    let grid = *theta0.grid();
    let a = fractional_symbol(&grid, gamma)?;
    let part = DyadicPartition::for_grid(&grid)?;
    let search = MorreySearch::default();

    let mut record = RunRecord {
        version: crate::report::code_version().to_string(),
        scheme: ts.scheme.name().to_string(),
        symbol: sym.name().to_string(),
        gamma,
        beta: sym.beta(),
        grid,
        dt: ts.dt,
        t_final: ts.t_final,
        dealias: ts.dealias,
        steps: 0,
        norm_params: *np,
        norm_series: Vec::new(),
        config_sha256: None,
        seed: None,
        picard: None,
        created_utc: utc_now_string(),
    };

    let mut theta = theta0.clone();
    theta.time_tag = 0.0;
    let sample = |rec: &mut RunRecord, f: &SpectralField| -> Result<()> {
        rec.norm_series.push(NormSample {
            t: f.time_tag,
            fn_norm: fbm_norm(f, &part, np, &search)?,
            l2_norm: f.l2_physical(),
            max_abs: f.max_abs(),
        });
        Ok(())
    };
    sample(&mut record, &theta)?;
    on_snapshot(0, &theta)?;

    let mut tables = StepTables::build(&a, ts.dt, ts.scheme);
    let mut step = 0usize;
    loop {
        let remaining = ts.t_final - theta.time_tag;
        if remaining <= 1e-12 * ts.t_final {
            break;
        }
        let dt = ts.dt.min(remaining);
        if (dt - tables.dt).abs() > f64::EPSILON * dt {
            tables = StepTables::build(&a, dt, ts.scheme);
        }
        theta = etd_step(&theta, sym, ts.scheme, ts.dealias, &tables)?;
        step += 1;
        let last = ts.t_final - theta.time_tag <= 1e-12 * ts.t_final;
        if last || (record_every > 0 && step % record_every == 0) {
            sample(&mut record, &theta)?;
        }
        if last || (snapshot_every > 0 && step % snapshot_every == 0) {
            on_snapshot(step, &theta)?;
        }
    }
    record.steps = step;
    Ok((record, theta))
}
