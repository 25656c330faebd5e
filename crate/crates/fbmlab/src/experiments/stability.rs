//! Perturbation decay against the linear proxy.
//!
//! Two data sets are evolved side by side; the observable is the norm of
//! their difference D(t) next to the proxy `||e^{-t A}(theta0 - phi0)||`,
//! the exactly computable linear prediction. For data in the small-data
//! regime the two should fall together: the proxy sets the clock, D follows
//! within a bounded ratio. The horizon can be derived from the proxy alone
//! (bisection on its monotone decay), so the experiment needs no tuning to
//! know how long "until the difference has died" takes.

use serde_json::json;

use crate::lp::{fbm_norm, DyadicPartition, MorreySearch, NormParams};
use crate::report::{ExperimentReport, MetricRow};
use crate::semigroup::apply_semigroup;
use crate::solver::{etd_integrate, Scheme, TimeStepConfig};
use crate::symbols::CouplingSymbol;
use crate::{Error, Result, SpectralField};

#[derive(Debug, Clone)]
pub struct StabilityRun {
    /// Integration horizon; None derives it from the proxy decay time.
    pub t_final: Option<f64>,
    pub dt: f64,
    pub scheme: Scheme,
    pub dealias: bool,
    /// Decay target: both D and the proxy should fall below this fraction of D(0).
    pub target_fraction: f64,
    /// Safety stretch applied to the derived horizon.
    pub time_margin: f64,
    /// Sampling cadence for the difference curve, in steps.
    pub record_every: usize,
    /// Verdict threshold for max_t D(t) / proxy(t).
    pub ratio_bound: f64,
}

impl Default for StabilityRun {
    fn default() -> Self {
        StabilityRun {
            t_final: None,
            dt: 1e-3,
            scheme: Scheme::EtdRk2,
            dealias: true,
            target_fraction: 0.1,
            time_margin: 1.25,
            record_every: 10,
            ratio_bound: 10.0,
        }
    }
}

/// Smallest dyadically bracketed t with `||e^{-tA} diff0|| <= frac * ||diff0||`.
///
/// The proxy norm is strictly decreasing in t (every coefficient shrinks), so
/// doubling plus bisection brackets the crossing; the returned time sits on
/// the decayed side of it.
pub fn time_for_proxy_decay(
    diff0: &SpectralField,
    gamma: f64,
    np: &NormParams,
    frac: f64,
) -> Result<f64> {
    if !(frac > 0.0 && frac < 1.0) {
        return Err(Error::Config(format!(
            "decay fraction must lie in (0, 1), got {frac}"
        )));
    }
    let part = DyadicPartition::for_grid(diff0.grid())?;
    let search = MorreySearch::default();
    let base = fbm_norm(diff0, &part, np, &search)?;
    if base == 0.0 {
        return Err(Error::Config(
            "initial difference is zero; the decay time is undefined".into(),
        ));
    }
    let target = frac * base;
    let proxy = |t: f64| -> Result<f64> {
        fbm_norm(&apply_semigroup(diff0, gamma, t)?, &part, np, &search)
    };
    let mut hi = 1e-3;
    let mut grew = 0;
    while proxy(hi)? > target {
        hi *= 2.0;
        grew += 1;
        if grew > 80 {
            return Err(Error::Config(
                "proxy decay target not reached; data may contain an undamped mode".into(),
            ));
        }
    }
    let mut lo = if grew == 0 { 0.0 } else { hi / 2.0 };
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if proxy(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Evolve `theta0` and `phi0` together and score D(t) against the proxy.
pub fn stability_experiment(
    theta0: &SpectralField,
    phi0: &SpectralField,
    sym: &CouplingSymbol,
    gamma: f64,
    np: &NormParams,
    run: &StabilityRun,
) -> Result<ExperimentReport> {
    theta0.check_same_grid(phi0)?;
    let grid = *theta0.grid();
    let part = DyadicPartition::for_grid(&grid)?;
    let search = MorreySearch::default();

    let diff0 = theta0.sub(phi0)?;
    let d0 = fbm_norm(&diff0, &part, np, &search)?;
    let t_final = match run.t_final {
        Some(t) if t > 0.0 => t,
        Some(t) => {
            return Err(Error::Config(format!(
                "stability horizon must be positive, got {t}"
            )))
        }
        None => {
            if d0 == 0.0 {
                return Err(Error::Config(
                    "initial difference is zero; give an explicit horizon".into(),
                ));
            }
            run.time_margin * time_for_proxy_decay(&diff0, gamma, np, run.target_fraction)?
        }
    };

    let ts = TimeStepConfig {
        t_final,
        dt: run.dt.min(t_final),
        scheme: run.scheme,
        dealias: run.dealias,
    };
    let cadence = run.record_every.max(1);
    let mut theta_states: Vec<SpectralField> = Vec::new();
    let mut phi_states: Vec<SpectralField> = Vec::new();
    etd_integrate(theta0, sym, gamma, &ts, np, usize::MAX, cadence, |_, st| {
        theta_states.push(st.clone());
        Ok(())
    })?;
    etd_integrate(phi0, sym, gamma, &ts, np, usize::MAX, cadence, |_, st| {
        phi_states.push(st.clone());
        Ok(())
    })?;
    if theta_states.len() != phi_states.len() {
        return Err(Error::Config(
            "paired integrations produced different sampling grids".into(),
        ));
    }

    let mut report = ExperimentReport::new("stability", String::new());
    let mut max_ratio = 0.0f64;
    let mut d_final = 0.0f64;
    let mut proxy_final = 0.0f64;
    for (a, b) in theta_states.iter().zip(&phi_states) {
        if (a.time_tag - b.time_tag).abs() > 1e-12 * t_final.max(1.0) {
            return Err(Error::Config(
                "paired integrations drifted apart in time".into(),
            ));
        }
        let t = a.time_tag;
        let d = fbm_norm(&a.sub(b)?, &part, np, &search)?;
        let proxy = fbm_norm(&apply_semigroup(&diff0, gamma, t)?, &part, np, &search)?;
        if proxy > 0.0 {
            max_ratio = max_ratio.max(d / proxy);
        }
        d_final = d;
        proxy_final = proxy;
        report.metrics.push(MetricRow {
            t,
            fn_norm: Some(fbm_norm(a, &part, np, &search)?),
            l2_norm: Some(a.l2_physical()),
            diff_norm: Some(d),
            proxy_norm: Some(proxy),
        });
    }

    report.parameters.insert("symbol".into(), json!(sym.name()));
    report.parameters.insert("gamma".into(), json!(gamma));
    report.parameters.insert("beta".into(), json!(sym.beta()));
    report.parameters.insert("t_final".into(), json!(t_final));
    report.parameters.insert("dt".into(), json!(run.dt));
    report.parameters.insert("scheme".into(), json!(run.scheme.name()));
    report
        .parameters
        .insert("target_fraction".into(), json!(run.target_fraction));
    report
        .parameters
        .insert("derived_horizon".into(), json!(run.t_final.is_none()));

    report.scalars.insert("d0".into(), d0);
    report.scalars.insert("d_final".into(), d_final);
    report.scalars.insert("proxy_final".into(), proxy_final);
    report.scalars.insert("max_ratio".into(), max_ratio);
    report.scalars.insert("t_final".into(), t_final);

    let target = run.target_fraction * d0;
    report
        .verdicts
        .insert("diff_decayed".into(), d_final <= target);
    report
        .verdicts
        .insert("proxy_decayed".into(), proxy_final <= target);
    report
        .verdicts
        .insert("ratio_bounded".into(), max_ratio <= run.ratio_bound);
    if d0 == 0.0 {
        report
            .notes
            .push("identical data: difference is identically zero".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{annulus_noise, seeded, single_mode};
    use crate::symbols::{builtin_symbol, SymbolParams};
    use crate::Grid;

    const TAU: f64 = 2.0 * std::f64::consts::PI;

    fn burgers() -> CouplingSymbol {
        builtin_symbol("burgers", &SymbolParams::default()).unwrap()
    }

    fn small_data(g: &Grid) -> SpectralField {
        annulus_noise(g, &mut seeded(21), 2.0, 10.0, 0.05)
    }

    #[test]
    fn equal_data_gives_identically_zero_difference() {
        let g = Grid::new(1, 64, TAU).unwrap();
        let theta0 = small_data(&g);
        let np = NormParams::auto(1, 0.9, 1.0, 2.0, 0.5, 1.0);
        let run = StabilityRun {
            t_final: Some(0.05),
            dt: 5e-3,
            ..StabilityRun::default()
        };
        let rep =
            stability_experiment(&theta0, &theta0.clone(), &burgers(), 0.9, &np, &run).unwrap();
        assert_eq!(rep.scalars["d0"], 0.0);
        assert_eq!(rep.scalars["d_final"], 0.0);
        assert_eq!(rep.scalars["max_ratio"], 0.0);
        assert!(rep.verdicts["diff_decayed"]);
        assert!(!rep.notes.is_empty());
    }

    #[test]
    fn swapping_the_pair_leaves_the_difference_curve_unchanged() {
        let g = Grid::new(1, 64, TAU).unwrap();
        let theta0 = small_data(&g);
        let bump = single_mode(&g, &[5], 1e-3).unwrap();
        let phi0 = theta0.add(&bump).unwrap();
        let np = NormParams::auto(1, 0.9, 1.0, 2.0, 0.5, 1.0);
        let run = StabilityRun {
            t_final: Some(0.05),
            dt: 5e-3,
            ..StabilityRun::default()
        };
        let ab = stability_experiment(&theta0, &phi0, &burgers(), 0.9, &np, &run).unwrap();
        let ba = stability_experiment(&phi0, &theta0, &burgers(), 0.9, &np, &run).unwrap();
        for key in ["d0", "d_final", "max_ratio", "proxy_final"] {
            assert_eq!(
                ab.scalars[key].to_bits(),
                ba.scalars[key].to_bits(),
                "{key} not swap symmetric"
            );
        }
    }

    #[test]
    fn proxy_decay_time_brackets_the_target() {
        let g = Grid::new(1, 64, TAU).unwrap();
        let diff0 = single_mode(&g, &[5], 1e-3).unwrap();
        let np = NormParams::auto(1, 0.9, 1.0, 2.0, 0.5, 1.0);
        let part = DyadicPartition::for_grid(&g).unwrap();
        let search = MorreySearch::default();
        let base = fbm_norm(&diff0, &part, &np, &search).unwrap();
        let t = time_for_proxy_decay(&diff0, 0.9, &np, 0.1).unwrap();
        let at = fbm_norm(&apply_semigroup(&diff0, 0.9, t).unwrap(), &part, &np, &search)
            .unwrap();
        let before = fbm_norm(
            &apply_semigroup(&diff0, 0.9, 0.9 * t).unwrap(),
            &part,
            &np,
            &search,
        )
        .unwrap();
        assert!(at <= 0.1 * base);
        assert!(before > 0.1 * base, "bracket loose: {before} vs {base}");
        // single mode |k| = 5: the crossing is at ln(10)/5^(1.8) exactly
        let exact = (10.0f64).ln() / 5f64.powf(1.8);
        assert!((t - exact).abs() < 1e-6 * exact, "{t} vs {exact}");
    }

    #[test]
    fn small_perturbation_tracks_the_proxy_to_decay() {
        let g = Grid::new(1, 64, TAU).unwrap();
        let theta0 = small_data(&g);
        let bump = single_mode(&g, &[5], 1e-3).unwrap();
        let phi0 = theta0.add(&bump).unwrap();
        let np = NormParams::auto(1, 0.9, 1.0, 2.0, 0.5, 1.0);
        let run = StabilityRun {
            dt: 2e-3,
            ..StabilityRun::default()
        };
        let rep = stability_experiment(&theta0, &phi0, &burgers(), 0.9, &np, &run).unwrap();
        assert!(rep.passed(), "verdicts {:?} scalars {:?}", rep.verdicts, rep.scalars);
        assert!(rep.scalars["max_ratio"] < 3.0, "{}", rep.scalars["max_ratio"]);
        assert!(rep.metrics.len() >= 3);
    }

    #[test]
    fn final_difference_is_monotone_in_perturbation_size() {
        let g = Grid::new(1, 64, TAU).unwrap();
        let theta0 = small_data(&g);
        let np = NormParams::auto(1, 0.9, 1.0, 2.0, 0.5, 1.0);
        let run = StabilityRun {
            t_final: Some(0.1),
            dt: 2e-3,
            ..StabilityRun::default()
        };
        let mut finals = Vec::new();
        for amp in [1e-4, 1e-3, 1e-2] {
            let bump = single_mode(&g, &[5], amp).unwrap();
            let phi0 = theta0.add(&bump).unwrap();
            let rep =
                stability_experiment(&theta0, &phi0, &burgers(), 0.9, &np, &run).unwrap();
            finals.push(rep.scalars["d_final"]);
        }
        assert!(
            finals[0] < finals[1] && finals[1] < finals[2],
            "not monotone: {finals:?}"
        );
    }
}
