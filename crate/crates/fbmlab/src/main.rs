//! Command line entry point: simulate runs, measure norms, drive the
//! self-similarity and stability experiments, estimate the bilinear constant,
//! and run the property check suite. Exit codes: 0 success, 1 a verdict
//! failed, 2 configuration or usage error, 3 numerical blowup.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use fbmlab::config::{IcKind, RunConfig, RunScheme};
use fbmlab::experiments::{
    estimate_k, selfsimilarity_experiment, stability_experiment, SelfsimRun, StabilityRun,
};
use fbmlab::lp::{
    bernstein_check, fbm_norm, fbm_norm_report, holder_young_sweep, identity_error,
    paraproduct_decompose, partition_residue, BernsteinParams, DyadicPartition, MorreySearch,
};
use fbmlab::report::{code_version, sha256_hex, utc_now_string, NormSample, RunRecord};
use fbmlab::rng::{annulus_noise, hermitian_noise, seeded};
use fbmlab::snapshot::{read_snapshot, write_snapshot};
use fbmlab::solver::{chebyshev_early_nodes, etd_integrate, picard_solve};
use fbmlab::{field, Error, Grid, Result};

#[derive(Parser)]
#[command(
    name = "fbmlab",
    version,
    about = "Pseudo-spectral lab for dissipative active scalars with multiplier coupling"
)]
struct Cli {
    /// Suppress progress output (errors still go to stderr).
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate configured runs; writes run.json, norms.csv, and snapshots.
    Simulate {
        /// Config file(s); with several, --jobs runs them concurrently.
        #[arg(long = "config", required = true, num_args = 1..)]
        configs: Vec<PathBuf>,
        /// Override output.directory from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override ic.seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for multi-config sweeps.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Norm report for a stored snapshot.
    Norms {
        #[arg(long)]
        snapshot: PathBuf,
        /// Config supplying the [norm] section; model numbers come from the snapshot.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Self-similar collapse experiment from truncated homogeneous data.
    Selfsim {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comparison band lower edge in |xi| (default 2 lattice units).
        #[arg(long)]
        band_lo: Option<f64>,
        /// Comparison band upper edge in |xi| (default 0.7 * ic.r1).
        #[arg(long)]
        band_hi: Option<f64>,
        /// Collapse verdict threshold.
        #[arg(long, default_value_t = 0.05)]
        max_deviation: f64,
        /// Linear-control verdict threshold.
        #[arg(long, default_value_t = 1e-3)]
        baseline_max: f64,
        /// Run even when the symbol fails the homogeneity gate.
        #[arg(long)]
        allow_non_homogeneous: bool,
    },
    /// Evolve two data sets and compare their difference with the linear proxy.
    Stability {
        /// Config for the first data set and all shared sections.
        #[arg(long)]
        config: PathBuf,
        /// Config for the second data set; must agree outside [ic].
        #[arg(long)]
        config_b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Derive the horizon from the proxy decay instead of time.t_final.
        #[arg(long)]
        derive_horizon: bool,
        /// Decay target as a fraction of the initial difference norm.
        #[arg(long, default_value_t = 0.1)]
        target_fraction: f64,
        /// Verdict bound for max_t D(t)/proxy(t).
        #[arg(long, default_value_t = 10.0)]
        ratio_bound: f64,
    },
    /// Sample the bilinear constant K and report the suggested epsilon.
    EstimateK {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 16)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Property suite: partition of unity, Bernstein, Holder/Young,
    /// paraproduct identity, and round-trips.
    Check {
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 1234)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Simulate {
            configs,
            out,
            seed,
            jobs,
        } => simulate_many(configs, out.as_deref(), *seed, *jobs, cli.quiet),
        Cmd::Norms {
            snapshot,
            config,
            out,
        } => norms(snapshot, config, out.as_deref(), cli.quiet),
        Cmd::Selfsim {
            config,
            out,
            seed,
            band_lo,
            band_hi,
            max_deviation,
            baseline_max,
            allow_non_homogeneous,
        } => selfsim(
            config,
            out.as_deref(),
            *seed,
            *band_lo,
            *band_hi,
            *max_deviation,
            *baseline_max,
            *allow_non_homogeneous,
            cli.quiet,
        ),
        Cmd::Stability {
            config,
            config_b,
            out,
            seed,
            derive_horizon,
            target_fraction,
            ratio_bound,
        } => stability(
            config,
            config_b,
            out.as_deref(),
            *seed,
            *derive_horizon,
            *target_fraction,
            *ratio_bound,
            cli.quiet,
        ),
        Cmd::EstimateK {
            config,
            trials,
            seed,
            out,
        } => estimate_k_cmd(config, *trials, *seed, out.as_deref(), cli.quiet),
        Cmd::Check { points, dim, seed } => check(*points, *dim, *seed, cli.quiet),
    }
}

/// Fresh run directory `<base>/<stem>-<timestamp>[-k]`.
fn create_run_dir(base: &Path, stem: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(base)?;
    let ts = utc_now_string().replace([':', '-'], "").replace('.', "_");
    for k in 0..1000 {
        let name = if k == 0 {
            format!("{stem}-{ts}")
        } else {
            format!("{stem}-{ts}-{k}")
        };
        let dir = base.join(name);
        match std::fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(Error::Io(std::io::Error::other(
        "could not allocate a unique run directory",
    )))
}

fn config_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into())
}

fn out_base(cfg: &RunConfig, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&cfg.output.directory))
}

fn simulate_many(
    configs: &[PathBuf],
    out: Option<&Path>,
    seed: Option<u64>,
    jobs: usize,
    quiet: bool,
) -> Result<bool> {
    if configs.len() == 1 || jobs <= 1 {
        for path in configs {
            simulate_one(path, out, seed, quiet)?;
        }
        return Ok(true);
    }
    // fan out over a shared index; results are reported in input order
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<PathBuf>)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(configs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= configs.len() {
                    break;
                }
                let r = simulate_one(&configs[i], out, seed, true);
                results.lock().unwrap().push((i, r));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(i, _)| *i);
    let mut first_err: Option<Error> = None;
    for (i, r) in results {
        match r {
            Ok(dir) => {
                if !quiet {
                    println!("[{}] wrote {}", config_stem(&configs[i]), dir.display());
                }
            }
            Err(e) => {
                eprintln!("[{}] failed: {e}", config_stem(&configs[i]));
                // keep the most severe exit code (blowup beats config error)
                let replace = match (&first_err, &e) {
                    (None, _) => true,
                    (Some(prev), cur) => cur.exit_code() > prev.exit_code(),
                };
                if replace {
                    first_err = Some(e);
                }
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(true),
    }
}

/// One configured run; returns the run directory.
fn simulate_one(
    cfg_path: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    quiet: bool,
) -> Result<PathBuf> {
    let cfg_bytes = std::fs::read(cfg_path)?;
    let cfg = RunConfig::from_str_toml(std::str::from_utf8(&cfg_bytes).map_err(|_| {
        Error::Config(format!("config {} is not valid UTF-8", cfg_path.display()))
    })?)?;
    let (rp, theta0) = cfg.resolve(seed)?;
    let sha = sha256_hex(&cfg_bytes);

    let dir = create_run_dir(&out_base(&cfg, out), &config_stem(cfg_path))?;
    let snap_dir = dir.join("snapshots");
    std::fs::create_dir_all(&snap_dir)?;
    std::fs::write(dir.join("config.toml"), &cfg_bytes)?;

    let (mut record, last) = match rp.scheme {
        RunScheme::Picard => {
            let nodes = chebyshev_early_nodes(cfg.time.t_final, cfg.time.picard.nodes)?;
            let (path, diag) =
                picard_solve(&theta0, &rp.sym, rp.gamma, &rp.fp, &rp.np, &nodes, rp.ts.dealias)?;
            let part = DyadicPartition::for_grid(&rp.grid)?;
            let search = MorreySearch::default();
            let mut series = Vec::with_capacity(path.len());
            for st in &path {
                series.push(NormSample {
                    t: st.time_tag,
                    fn_norm: fbm_norm(st, &part, &rp.np, &search)?,
                    l2_norm: st.l2_physical(),
                    max_abs: st.max_abs(),
                });
            }
            let cadence = cfg.output.snapshot_every;
            if cadence > 0 {
                for (i, st) in path.iter().enumerate() {
                    if i % cadence == 0 {
                        write_snapshot(
                            &snap_dir.join(format!("node_{i:03}.bin")),
                            st,
                            rp.gamma,
                            rp.beta,
                        )?;
                    }
                }
            }
            let record = RunRecord {
                version: code_version().into(),
                scheme: "picard".into(),
                symbol: rp.sym.name().into(),
                gamma: rp.gamma,
                beta: rp.beta,
                grid: rp.grid,
                dt: cfg.time.dt,
                t_final: cfg.time.t_final,
                dealias: rp.ts.dealias,
                steps: diag.iterations,
                norm_params: rp.np,
                norm_series: series,
                config_sha256: None,
                seed: None,
                picard: Some(serde_json::to_value(&diag)?),
                created_utc: utc_now_string(),
            };
            (record, path.into_iter().next_back().unwrap())
        }
        _ => {
            let result = etd_integrate(
                &theta0,
                &rp.sym,
                rp.gamma,
                &rp.ts,
                &rp.np,
                cfg.output.record_every,
                cfg.output.snapshot_every,
                |step, st| {
                    write_snapshot(
                        &snap_dir.join(format!("step_{step:06}.bin")),
                        st,
                        rp.gamma,
                        rp.beta,
                    )
                },
            );
            match result {
                Ok(pair) => pair,
                Err(Error::Blowup { time, last }) => {
                    // persist the evidence, then report the blowup upward
                    if let Some(state) = last {
                        write_snapshot(
                            &snap_dir.join("last_finite.bin"),
                            &state,
                            rp.gamma,
                            rp.beta,
                        )?;
                    }
                    fbmlab::report::write_json(
                        &dir.join("blowup.json"),
                        &json!({ "time": time, "threshold": fbmlab::BLOWUP_THRESHOLD }),
                    )?;
                    return Err(Error::Blowup { time, last: None });
                }
                Err(e) => return Err(e),
            }
        }
    };
    record.config_sha256 = Some(sha);
    record.seed = Some(rp.seed);

    write_snapshot(&snap_dir.join("final.bin"), &last, rp.gamma, rp.beta)?;
    record.save_json(&dir.join("run.json"))?;
    record.write_norms_csv(&dir.join("norms.csv"))?;
    if !quiet {
        let last_fn = record.norm_series.last().map(|s| s.fn_norm).unwrap_or(0.0);
        println!(
            "[{}] wrote {} ({} {}, final FN {:.6e})",
            config_stem(cfg_path),
            dir.display(),
            record.steps,
            if rp.scheme == RunScheme::Picard {
                "iterations"
            } else {
                "steps"
            },
            last_fn
        );
    }
    Ok(dir)
}

fn norms(snapshot: &Path, config: &Path, out: Option<&Path>, quiet: bool) -> Result<bool> {
    let (field, meta) = read_snapshot(snapshot)?;
    let cfg = RunConfig::from_path(config)?;
    let np = cfg.norm_params(field.grid().dim(), meta.gamma, meta.beta)?;
    let part = DyadicPartition::for_grid(field.grid())?;
    let report = fbm_norm_report(&field, &part, &np, &MorreySearch::default())?;
    if !quiet {
        println!(
            "FN norm = {:.12e}  (p = {}, mu = {}, q = {}, s = {}, t = {})",
            report.value, np.p, np.mu, np.q, np.s, field.time_tag
        );
        for b in &report.blocks {
            if b.block_norm > 0.0 {
                println!(
                    "  block {:>3}: morrey {:.6e}  weighted {:.6e}",
                    b.k, b.block_norm, b.weighted
                );
            }
        }
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        fbmlab::report::write_json(
            &dir.join("norms_report.json"),
            &json!({
                "snapshot": snapshot.display().to_string(),
                "gamma": meta.gamma,
                "beta": meta.beta,
                "time": field.time_tag,
                "report": report,
            }),
        )?;
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn selfsim(
    config: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    band_lo: Option<f64>,
    band_hi: Option<f64>,
    max_deviation: f64,
    baseline_max: f64,
    allow_non_homogeneous: bool,
    quiet: bool,
) -> Result<bool> {
    let cfg_bytes = std::fs::read(config)?;
    let cfg = RunConfig::from_str_toml(std::str::from_utf8(&cfg_bytes).map_err(|_| {
        Error::Config(format!("config {} is not valid UTF-8", config.display()))
    })?)?;
    let (rp, theta0) = cfg.resolve(seed)?;
    if rp.scheme == RunScheme::Picard {
        return Err(Error::Config(
            "time.scheme = \"picard\" is not a marching scheme; selfsim needs etd_euler \
             or etd_rk2"
                .into(),
        ));
    }
    let h = rp.grid.spacing();
    let band = match (band_lo, band_hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            let r1 = match (cfg.ic.kind, cfg.ic.r1) {
                (IcKind::TruncatedHomogeneous, Some(r1)) => r1,
                _ => {
                    return Err(Error::Config(
                        "default comparison band needs ic.type = \"truncated_homogeneous\" \
                         with ic.r1; otherwise give --band-lo and --band-hi"
                            .into(),
                    ))
                }
            };
            (band_lo.unwrap_or(2.0 * h), band_hi.unwrap_or(0.7 * r1))
        }
    };
    let run = SelfsimRun {
        t1: cfg.time.t_final,
        dt: cfg.time.dt,
        scheme: rp.ts.scheme,
        dealias: rp.ts.dealias,
        band,
        max_deviation,
        baseline_max,
        allow_non_homogeneous,
        homogeneity_tol: 1e-6,
    };
    let mut report = selfsimilarity_experiment(&theta0, &rp.sym, rp.gamma, &rp.np, &run)?;
    report.provenance.config_sha256 = sha256_hex(&cfg_bytes);

    let dir = create_run_dir(
        &out_base(&cfg, out),
        &format!("{}-selfsim", config_stem(config)),
    )?;
    std::fs::write(dir.join("config.toml"), &cfg_bytes)?;
    report.save(&dir)?;
    if !quiet {
        println!(
            "selfsim: pair deviations {:.4e} / {:.4e}, baselines {:.2e} / {:.2e} -> {}",
            report.scalars["pair1_deviation"],
            report.scalars["pair2_deviation"],
            report.scalars["pair1_baseline"],
            report.scalars["pair2_baseline"],
            if report.passed() { "pass" } else { "FAIL" }
        );
        println!("report written to {}", dir.display());
    }
    Ok(report.passed())
}

#[allow(clippy::too_many_arguments)]
fn stability(
    config: &Path,
    config_b: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    derive_horizon: bool,
    target_fraction: f64,
    ratio_bound: f64,
    quiet: bool,
) -> Result<bool> {
    let bytes_a = std::fs::read(config)?;
    let cfg_a = RunConfig::from_path(config)?;
    let cfg_b = RunConfig::from_path(config_b)?;
    for (name, a, b) in [
        (
            "[model]",
            toml::to_string(&cfg_a.model).ok(),
            toml::to_string(&cfg_b.model).ok(),
        ),
        (
            "[grid]",
            toml::to_string(&cfg_a.grid).ok(),
            toml::to_string(&cfg_b.grid).ok(),
        ),
        (
            "[norm]",
            toml::to_string(&cfg_a.norm).ok(),
            toml::to_string(&cfg_b.norm).ok(),
        ),
        (
            "[time]",
            toml::to_string(&cfg_a.time).ok(),
            toml::to_string(&cfg_b.time).ok(),
        ),
    ] {
        if a != b {
            return Err(Error::Config(format!(
                "stability configs must agree outside [ic]; {name} differs between {} and {}",
                config.display(),
                config_b.display()
            )));
        }
    }
    let (rp, theta0) = cfg_a.resolve(seed)?;
    if rp.scheme == RunScheme::Picard {
        return Err(Error::Config(
            "time.scheme = \"picard\" is not a marching scheme; stability needs etd_euler \
             or etd_rk2"
                .into(),
        ));
    }
    let phi0 = cfg_b.build_initial_data(&rp)?;
    let run = StabilityRun {
        t_final: if derive_horizon {
            None
        } else {
            Some(cfg_a.time.t_final)
        },
        dt: cfg_a.time.dt,
        scheme: rp.ts.scheme,
        dealias: rp.ts.dealias,
        target_fraction,
        time_margin: 1.25,
        record_every: cfg_a.output.record_every,
        ratio_bound,
    };
    let mut report = stability_experiment(&theta0, &phi0, &rp.sym, rp.gamma, &rp.np, &run)?;
    report.provenance.config_sha256 = sha256_hex(&bytes_a);
    report
        .parameters
        .insert("config_b".into(), json!(config_b.display().to_string()));

    let dir = create_run_dir(
        &out_base(&cfg_a, out),
        &format!("{}-stability", config_stem(config)),
    )?;
    std::fs::write(dir.join("config.toml"), &bytes_a)?;
    std::fs::copy(config_b, dir.join("config_b.toml"))?;
    report.save(&dir)?;
    if !quiet {
        println!(
            "stability: D0 {:.4e} -> D(T) {:.4e}, proxy(T) {:.4e}, max ratio {:.3} -> {}",
            report.scalars["d0"],
            report.scalars["d_final"],
            report.scalars["proxy_final"],
            report.scalars["max_ratio"],
            if report.passed() { "pass" } else { "FAIL" }
        );
        println!("report written to {}", dir.display());
    }
    Ok(report.passed())
}

fn estimate_k_cmd(
    config: &Path,
    trials: usize,
    seed: Option<u64>,
    out: Option<&Path>,
    quiet: bool,
) -> Result<bool> {
    let cfg_bytes = std::fs::read(config)?;
    let cfg = RunConfig::from_str_toml(std::str::from_utf8(&cfg_bytes).map_err(|_| {
        Error::Config(format!("config {} is not valid UTF-8", config.display()))
    })?)?;
    let rp = cfg.resolve_params(seed)?;
    let est = estimate_k(&rp.sym, rp.gamma, &rp.np, &rp.grid, trials, rp.seed)?;
    if !quiet {
        println!(
            "K_est = {:.12e}  epsilon = {:.12e}  ({} trials, {} skipped, seed {})",
            est.k_est, est.epsilon, est.trials, est.skipped, rp.seed
        );
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        fbmlab::report::write_json(
            &dir.join("kestimate.json"),
            &json!({
                "k_est": est.k_est,
                "epsilon": est.epsilon,
                "trials": est.trials,
                "skipped": est.skipped,
                "seed": rp.seed,
                "symbol": rp.sym.name(),
                "gamma": rp.gamma,
                "beta": rp.beta,
                "config_sha256": sha256_hex(&cfg_bytes),
            }),
        )?;
    }
    Ok(true)
}

struct Suite {
    name: &'static str,
    passed: bool,
    detail: String,
    millis: u128,
}

fn run_suite(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Suite {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(pair) => pair,
        Err(e) => (false, format!("error: {e}")),
    };
    Suite {
        name,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

fn check(points: usize, dim: usize, seed: u64, quiet: bool) -> Result<bool> {
    let tau = 2.0 * std::f64::consts::PI;
    let grid = Grid::new(dim, points, tau)?;
    let part = DyadicPartition::for_grid(&grid)?;

    let mut suites = Vec::new();

    suites.push(run_suite("partition-of-unity", || {
        let residue = partition_residue(&grid, &part);
        Ok((residue <= 1e-12, format!("max residue {residue:.3e}")))
    }));

    suites.push(run_suite("fft-round-trip", || {
        let f = hermitian_noise(&grid, &mut seeded(seed), |r| if r > 0.0 { 1.0 } else { 0.0 });
        let (samples, residue) = field::inverse_transform(&f);
        let back = field::forward_transform(&grid, &samples)?;
        let mut worst = 0.0f64;
        for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
            worst = worst.max((a - b).norm());
        }
        let ok = worst <= 1e-12 * f.max_abs().max(1.0) && residue <= 1e-12;
        Ok((
            ok,
            format!("coeff error {worst:.3e}, imaginary residue {residue:.3e}"),
        ))
    }));

    suites.push(run_suite("snapshot-round-trip", || {
        let f = hermitian_noise(&grid, &mut seeded(seed ^ 1), |_| 1.0);
        let path = std::env::temp_dir().join(format!(
            "fbmlab-check-{}-{seed}.bin",
            std::process::id()
        ));
        write_snapshot(&path, &f, 0.9, 1.0)?;
        let (back, meta) = read_snapshot(&path)?;
        let _ = std::fs::remove_file(&path);
        let bitwise = back.coeffs() == f.coeffs() && back.time_tag == f.time_tag;
        Ok((
            bitwise && meta.gamma == 0.9,
            format!("bitwise equal: {bitwise}"),
        ))
    }));

    suites.push(run_suite("bernstein-ratio", || {
        let mut rng = seeded(seed ^ 2);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        let mut alpha = [0u32; fbmlab::grid::MAX_DIM];
        alpha[0] = 1;
        // only blocks whose annulus is fully resolved on this grid
        let j_max = ((grid.max_axis_freq() / 1.6).log2().floor() as i32).clamp(2, 4);
        for j in 2..=j_max {
            for _ in 0..10 {
                let f = annulus_noise(
                    &grid,
                    &mut rng,
                    2f64.powi(j) * 0.8,
                    2f64.powi(j) * 1.6,
                    1.0,
                );
                let params = BernsteinParams {
                    alpha,
                    p: 2.0,
                    mu1: 0.5,
                    q: 1.0,
                    mu2: 0.0,
                    j,
                    support_const: 8.0 / 3.0,
                };
                let rep = bernstein_check(&f, &params, &MorreySearch::default())?;
                lo = lo.min(rep.ratio);
                hi = hi.max(rep.ratio);
            }
        }
        Ok((
            hi / lo <= 10.0,
            format!("ratio spread {:.3} (lo {lo:.3e}, hi {hi:.3e})", hi / lo),
        ))
    }));

    suites.push(run_suite("holder-young", || {
        // quadratic-cost convolution oracle: keep the sweep grid small
        let sweep_points = match dim {
            1 => points.min(64),
            2 => points.min(16),
            _ => points.min(8),
        };
        let sweep_grid = Grid::new(dim, sweep_points, tau)?;
        let rep = holder_young_sweep(&sweep_grid, 200, &mut seeded(seed ^ 3))?;
        Ok((
            rep.violations == 0,
            format!(
                "{} trials, {} violations, worst margin {:.6}",
                rep.trials, rep.violations, rep.worst_margin
            ),
        ))
    }));

    suites.push(run_suite("paraproduct-identity", || {
        let mut rng = seeded(seed ^ 4);
        let cutoff = grid.max_axis_freq() / 3.0;
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let f = annulus_noise(&grid, &mut rng, 1.0, cutoff, 1.0);
            let g = annulus_noise(&grid, &mut rng, 1.0, cutoff, 1.0);
            let parts = paraproduct_decompose(&f, &g, &part)?;
            worst = worst.max(identity_error(&f, &g, &parts));
        }
        Ok((worst <= 1e-10, format!("max relative error {worst:.3e}")))
    }));

    let mut all = true;
    for s in &suites {
        all &= s.passed;
        if !quiet || !s.passed {
            println!(
                "check {:<22} {}  ({} ms)  {}",
                s.name,
                if s.passed { "pass" } else { "FAIL" },
                s.millis,
                s.detail
            );
        }
    }
    Ok(all)
}
