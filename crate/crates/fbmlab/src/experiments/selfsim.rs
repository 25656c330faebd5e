//! Self-similar collapse of truncated power-law data.
//!
//! For beta-homogeneous coupling, the evolution of the power-law profile
//! truncated at cutoff R, viewed at time pairs (ta, tb) with tb = lambda^{2*gamma} ta,
//! satisfies `theta_hat(xi, ta) = lambda^{2*gamma - beta - n} theta_hat(xi/lambda, tb)`
//! on the shared sublattice, except that the rescaled side secretly evolves the
//! cutoff-(lambda R) data. The two data sets agree below R, so the collapse is
//! measured on shells strictly inside the cutoff; the residual deviation there
//! is the nonlinear feedback of the missing band plus time-step error.
//!
//! A pure-semigroup control run through the identical comparison pipeline
//! isolates what the pipeline itself contributes (it is exact for the linear
//! flow on shared modes), so a tight baseline certifies that an observed
//! nonlinear deviation is physics, not bookkeeping.

use serde_json::json;

use crate::experiments::rescale::rescale_field;
use crate::lp::{fbm_norm, DyadicPartition, MorreySearch, NormParams};
use crate::report::{ExperimentReport, MetricRow};
use crate::semigroup::apply_semigroup;
use crate::solver::{etd_integrate, Scheme, TimeStepConfig};
use crate::symbols::{check_homogeneity, CouplingSymbol};
use crate::{Error, Result, SpectralField};

/// Knobs for one collapse run.
#[derive(Debug, Clone)]
pub struct SelfsimRun {
    /// Earliest comparison time; the others are t1*2^{2 gamma} and t1*2^{4 gamma}.
    pub t1: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub dealias: bool,
    /// Physical |xi| window the shell deviations are scored on. Keep the upper
    /// edge strictly below the data cutoff, the identity does not hold outside.
    pub band: (f64, f64),
    /// Verdict threshold for the nonlinear pairs.
    pub max_deviation: f64,
    /// Verdict threshold for the semigroup control.
    pub baseline_max: f64,
    /// Let inhomogeneous symbols through the gate (their collapse is expected
    /// to drift; useful as a negative control).
    pub allow_non_homogeneous: bool,
    pub homogeneity_tol: f64,
}

impl Default for SelfsimRun {
    fn default() -> Self {
        SelfsimRun {
            t1: 0.005,
            dt: 5e-4,
            scheme: Scheme::EtdRk2,
            dealias: true,
            band: (2.0, 12.0),
            max_deviation: 0.05,
            baseline_max: 1e-3,
            allow_non_homogeneous: false,
            homogeneity_tol: 1e-6,
        }
    }
}

/// Relative l1 mismatch between `earlier` and the rescaled `later`, per unit
/// shell of |xi|, scored over the sublattice the rescaling populates.
pub fn rescaled_collapse_deviation(
    earlier: &SpectralField,
    later: &SpectralField,
    lambda: f64,
    gamma: f64,
    beta: f64,
    band: (f64, f64),
) -> Result<f64> {
    earlier.check_same_grid(later)?;
    let resc = rescale_field(later, lambda, gamma, beta)?;
    let grid = *earlier.grid();
    let h = grid.spacing();
    let m = lambda.log2().round() as i64;
    if m < 0 {
        return Err(Error::Config(
            "collapse comparison expects lambda >= 1 (later time rescaled down)".into(),
        ));
    }
    let mask = (1i64 << m) - 1;
    let shells = (grid.max_axis_freq() / h * 2.0) as usize + 2;
    let mut num = vec![0.0f64; shells];
    let mut den = vec![0.0f64; shells];
    for idx in 0..grid.total() {
        let k = grid.wavevector(idx);
        if (0..grid.dim()).any(|a| k[a] & mask != 0) {
            continue; // not on the shared sublattice
        }
        let rho = grid.freq_norm(idx);
        if rho == 0.0 {
            continue;
        }
        let shell = (rho / h).floor() as usize;
        num[shell] += (earlier.coeffs()[idx] - resc.coeffs()[idx]).norm();
        den[shell] += earlier.coeffs()[idx].norm();
    }
    let mut worst = 0.0f64;
    let mut scored = 0usize;
    for (r, (nu, de)) in num.iter().zip(&den).enumerate() {
        let lo = r as f64 * h;
        let hi = (r + 1) as f64 * h;
        if lo >= band.0 && hi <= band.1 && *de > 0.0 {
            worst = worst.max(nu / de);
            scored += 1;
        }
    }
    if scored == 0 {
        return Err(Error::Config(format!(
            "no populated shells inside the comparison band [{}, {}]",
            band.0, band.1
        )));
    }
    Ok(worst)
}

/// Evolve, rescale, compare; two dyadic time pairs plus a linear control.
pub fn selfsimilarity_experiment(
    theta0: &SpectralField,
    sym: &CouplingSymbol,
    gamma: f64,
    np: &NormParams,
    run: &SelfsimRun,
) -> Result<ExperimentReport> {
    let grid = *theta0.grid();
    if !(run.t1 > 0.0 && run.dt > 0.0 && run.t1 >= run.dt) {
        return Err(Error::Config(format!(
            "selfsim needs 0 < dt <= t1, got t1={} dt={}",
            run.t1, run.dt
        )));
    }
    let hom = check_homogeneity(sym, &grid)?;
    let homogeneous = hom.max_rel_deviation <= run.homogeneity_tol;
    if !homogeneous && !run.allow_non_homogeneous {
        return Err(Error::Precondition(format!(
            "symbol '{}' deviates from exact beta-homogeneity by {:.3e}; the \
             collapse identity presumes a homogeneous symbol (override to probe anyway)",
            sym.name(),
            hom.max_rel_deviation
        )));
    }

    let beta = sym.beta();
    let lambda = 2.0f64;
    let stretch = lambda.powf(2.0 * gamma);
    let times = [run.t1, run.t1 * stretch, run.t1 * stretch * stretch];

    // three back-to-back segments so each target time is hit by construction
    let mut states: Vec<SpectralField> = Vec::with_capacity(3);
    let mut state = theta0.clone();
    let mut t_prev = 0.0f64;
    for &t_target in &times {
        let ts = TimeStepConfig {
            t_final: t_target - t_prev,
            dt: run.dt.min(t_target - t_prev),
            scheme: run.scheme,
            dealias: run.dealias,
        };
        let (_, mut out) = etd_integrate(
            &state,
            sym,
            gamma,
            &ts,
            np,
            usize::MAX,
            usize::MAX,
            |_, _| Ok(()),
        )?;
        out.time_tag = t_target;
        states.push(out.clone());
        state = out;
        t_prev = t_target;
    }

    let dev1 = rescaled_collapse_deviation(&states[0], &states[1], lambda, gamma, beta, run.band)?;
    let dev2 = rescaled_collapse_deviation(&states[1], &states[2], lambda, gamma, beta, run.band)?;

    // same pipeline fed with the exact semigroup flow
    let lin: Vec<SpectralField> = times
        .iter()
        .map(|&t| apply_semigroup(theta0, gamma, t))
        .collect::<Result<Vec<_>>>()?;
    let base1 = rescaled_collapse_deviation(&lin[0], &lin[1], lambda, gamma, beta, run.band)?;
    let base2 = rescaled_collapse_deviation(&lin[1], &lin[2], lambda, gamma, beta, run.band)?;

    let part = DyadicPartition::for_grid(&grid)?;
    let search = MorreySearch::default();
    let mut report = ExperimentReport::new("selfsim", String::new());
    report.parameters.insert("symbol".into(), json!(sym.name()));
    report.parameters.insert("gamma".into(), json!(gamma));
    report.parameters.insert("beta".into(), json!(beta));
    report.parameters.insert("lambda".into(), json!(lambda));
    report.parameters.insert("t1".into(), json!(times[0]));
    report.parameters.insert("t2".into(), json!(times[1]));
    report.parameters.insert("t3".into(), json!(times[2]));
    report.parameters.insert("dt".into(), json!(run.dt));
    report.parameters.insert("scheme".into(), json!(run.scheme.name()));
    report
        .parameters
        .insert("band".into(), json!([run.band.0, run.band.1]));
    report.parameters.insert("grid_n".into(), json!(grid.dim()));
    report
        .parameters
        .insert("grid_points".into(), json!(grid.points()));

    for st in &states {
        report.metrics.push(MetricRow {
            t: st.time_tag,
            fn_norm: Some(fbm_norm(st, &part, np, &search)?),
            l2_norm: Some(st.l2_physical()),
            diff_norm: None,
            proxy_norm: None,
        });
    }

    report.scalars.insert("pair1_deviation".into(), dev1);
    report.scalars.insert("pair2_deviation".into(), dev2);
    report.scalars.insert("pair1_baseline".into(), base1);
    report.scalars.insert("pair2_baseline".into(), base2);
    report
        .scalars
        .insert("homogeneity_deviation".into(), hom.max_rel_deviation);

    report
        .verdicts
        .insert("symbol_homogeneous".into(), homogeneous);
    report
        .verdicts
        .insert("pair1_collapse".into(), dev1 <= run.max_deviation);
    report
        .verdicts
        .insert("pair2_collapse".into(), dev2 <= run.max_deviation);
    report
        .verdicts
        .insert("pair1_baseline_tight".into(), base1 <= run.baseline_max);
    report
        .verdicts
        .insert("pair2_baseline_tight".into(), base2 <= run.baseline_max);

    if !homogeneous {
        report.notes.push(format!(
            "symbol '{}' is not beta-homogeneous (deviation {:.3e}); collapse verdicts \
             describe the drift, not a defect",
            sym.name(),
            hom.max_rel_deviation
        ));
    }
    Ok(report)
}
