//! End-to-end checks of the binary: exit codes, run directory layout, and
//! bit-for-bit determinism of the artifacts a rerun is supposed to reproduce.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fbmlab"))
}

fn write_cfg(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

/// Small 1D run: 10 steps at 64 points, well inside the admissible window.
fn small_burgers(out: &Path) -> String {
    format!(
        r#"
[model]
n = 1
gamma = 0.7
symbol = "burgers"

[grid]
points = 64
length = 6.283185307179586

[norm]
p = 8.0
mu = 0.0
q = inf
s = "auto"

[time]
t_final = 0.01
dt = 0.001
scheme = "etd_rk2"

[ic]
type = "truncated_homogeneous"
delta = 0.01
r1 = 12.0
seed = 3

[output]
directory = "{}"
record_every = 2
snapshot_every = 5
"#,
        out.display()
    )
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process was signalled")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// The single run directory created under `base`.
fn only_run_dir(base: &Path) -> PathBuf {
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(base)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_dir())
        .collect();
    assert_eq!(dirs.len(), 1, "expected one run dir in {}", base.display());
    dirs.pop().unwrap()
}

#[test]
fn simulate_writes_the_run_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("runs");
    let cfg = write_cfg(tmp.path(), "run.toml", &small_burgers(&out));

    let res = bin().args(["simulate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));

    let dir = only_run_dir(&out);
    for name in ["run.json", "norms.csv", "config.toml"] {
        assert!(dir.join(name).is_file(), "missing {name}");
    }
    assert_eq!(
        std::fs::read(dir.join("config.toml")).unwrap(),
        std::fs::read(&cfg).unwrap(),
        "config copy must be byte-identical to the input"
    );

    // snapshot_every = 5 over 10 steps: initial, 5, and the forced final state
    let snaps = dir.join("snapshots");
    for name in ["step_000000.bin", "step_000005.bin", "final.bin"] {
        assert!(snaps.join(name).is_file(), "missing snapshots/{name}");
    }

    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("run.json")).unwrap()).unwrap();
    assert_eq!(record["scheme"], "etd_rk2");
    assert_eq!(record["seed"], 3);
    assert!(record["config_sha256"].as_str().unwrap().len() == 64);

    let csv_text = std::fs::read_to_string(dir.join("norms.csv")).unwrap();
    let mut lines = csv_text.lines();
    assert_eq!(lines.next(), Some("t,fn_norm,l2_norm,max_abs"));
    // record_every = 2 over 10 steps plus the forced endpoints: 0,2,4,6,8,10
    assert_eq!(lines.count(), 6);
}

#[test]
fn simulate_reruns_bit_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");
    let cfg_a = write_cfg(tmp.path(), "a.toml", &small_burgers(&out_a));
    let cfg_b = write_cfg(tmp.path(), "b.toml", &small_burgers(&out_b));

    for cfg in [&cfg_a, &cfg_b] {
        let res = bin()
            .args(["--quiet", "simulate", "--config"])
            .arg(cfg)
            .output()
            .unwrap();
        assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));
    }
    let dir_a = only_run_dir(&out_a);
    let dir_b = only_run_dir(&out_b);
    assert_eq!(
        std::fs::read(dir_a.join("norms.csv")).unwrap(),
        std::fs::read(dir_b.join("norms.csv")).unwrap(),
        "norm series must not depend on when or where the run happened"
    );
    assert_eq!(
        std::fs::read(dir_a.join("snapshots/final.bin")).unwrap(),
        std::fs::read(dir_b.join("snapshots/final.bin")).unwrap(),
        "final state must be bitwise reproducible"
    );
}

#[test]
fn persisted_config_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("runs");
    let cfg = write_cfg(tmp.path(), "run.toml", &small_burgers(&out));
    let res = bin()
        .args(["--quiet", "simulate", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));
    let dir = only_run_dir(&out);

    // re-ingest the copy the run wrote, pointing output somewhere fresh
    let out2 = tmp.path().join("replay");
    let res = bin()
        .args(["--quiet", "simulate", "--out"])
        .arg(&out2)
        .args(["--config"])
        .arg(dir.join("config.toml"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));
    let dir2 = only_run_dir(&out2);
    assert_eq!(
        std::fs::read(dir.join("snapshots/final.bin")).unwrap(),
        std::fs::read(dir2.join("snapshots/final.bin")).unwrap(),
        "replaying the persisted config must reproduce the final state"
    );
    assert_eq!(
        std::fs::read(dir.join("norms.csv")).unwrap(),
        std::fs::read(dir2.join("norms.csv")).unwrap(),
    );
}

#[test]
fn seed_flag_overrides_the_config() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("runs");
    let cfg = write_cfg(tmp.path(), "run.toml", &small_burgers(&out));

    let res = bin()
        .args(["--quiet", "simulate", "--seed", "99", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));
    let record: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(only_run_dir(&out).join("run.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(record["seed"], 99);
}

#[test]
fn missing_config_exits_two() {
    let res = bin()
        .args(["simulate", "--config", "/nonexistent/nowhere.toml"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 2);
}

#[test]
fn malformed_toml_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_cfg(tmp.path(), "bad.toml", "[model\nn = 1");
    let res = bin().args(["simulate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(exit_code(&res), 2);
    assert!(!stderr_of(&res).is_empty());
}

#[test]
fn out_of_window_parameters_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("runs");
    // gamma = 0.9 in 1D puts 2 gamma above (n + beta + 1) / 2 = 1.5
    let body = small_burgers(&out).replace("gamma = 0.7", "gamma = 0.9");
    let cfg = write_cfg(tmp.path(), "hot.toml", &body);
    let res = bin().args(["simulate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(exit_code(&res), 2);
    assert!(
        stderr_of(&res).contains("admissibility"),
        "stderr should name the violated window: {}",
        stderr_of(&res)
    );
}

#[test]
fn blowup_exits_three_and_persists_evidence() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("runs");
    let body = small_burgers(&out).replace(
        "type = \"truncated_homogeneous\"\ndelta = 0.01\nr1 = 12.0\nseed = 3",
        "type = \"single_mode\"\nk = [1]\namplitude = 1e7",
    );
    let cfg = write_cfg(tmp.path(), "boom.toml", &body);
    let res = bin().args(["simulate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(exit_code(&res), 3, "stderr: {}", stderr_of(&res));
    assert!(stderr_of(&res).contains("blowup"));

    let dir = only_run_dir(&out);
    assert!(dir.join("snapshots/last_finite.bin").is_file());
    let evidence: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("blowup.json")).unwrap()).unwrap();
    assert!(evidence["time"].as_f64().unwrap() >= 0.0);
    assert!(evidence["threshold"].as_f64().unwrap() > 0.0);
}

#[test]
fn jobs_fan_out_a_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");
    let cfg_a = write_cfg(tmp.path(), "a.toml", &small_burgers(&out_a));
    let cfg_b = write_cfg(tmp.path(), "b.toml", &small_burgers(&out_b));

    let res = bin()
        .args(["--quiet", "simulate", "--jobs", "2", "--config"])
        .arg(&cfg_a)
        .arg(&cfg_b)
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));
    only_run_dir(&out_a);
    only_run_dir(&out_b);
}

#[test]
fn norms_reports_a_stored_snapshot() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("runs");
    let cfg = write_cfg(tmp.path(), "run.toml", &small_burgers(&out));
    let res = bin()
        .args(["--quiet", "simulate", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));
    let snapshot = only_run_dir(&out).join("snapshots/final.bin");

    let report_dir = tmp.path().join("report");
    let res = bin()
        .args(["norms", "--snapshot"])
        .arg(&snapshot)
        .args(["--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&report_dir)
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));
    assert!(stdout_of(&res).contains("FN norm ="));

    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(report_dir.join("norms_report.json")).unwrap(),
    )
    .unwrap();
    assert!(report["report"]["value"].as_f64().unwrap() > 0.0);
    assert_eq!(report["gamma"].as_f64().unwrap(), 0.7);
}

#[test]
fn estimate_k_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        tmp.path(),
        "run.toml",
        &small_burgers(&tmp.path().join("unused")),
    );
    let out_a = tmp.path().join("ka");
    let out_b = tmp.path().join("kb");
    for out in [&out_a, &out_b] {
        let res = bin()
            .args(["estimate-k", "--trials", "4", "--config"])
            .arg(&cfg)
            .args(["--out"])
            .arg(out)
            .output()
            .unwrap();
        assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));
        assert!(stdout_of(&res).contains("K_est"));
    }
    let a = std::fs::read(out_a.join("kestimate.json")).unwrap();
    let b = std::fs::read(out_b.join("kestimate.json")).unwrap();
    assert_eq!(a, b, "same seed and trials must reproduce the estimate file");
    let parsed: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert!(parsed["k_est"].as_f64().unwrap() > 0.0);
    assert!(parsed["epsilon"].as_f64().unwrap() > 0.0);
}

#[test]
fn stability_names_the_mismatched_section() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("runs");
    let cfg_a = write_cfg(tmp.path(), "a.toml", &small_burgers(&out));
    let body_b = small_burgers(&out).replace("t_final = 0.01", "t_final = 0.02");
    let cfg_b = write_cfg(tmp.path(), "b.toml", &body_b);

    let res = bin()
        .args(["stability", "--config"])
        .arg(&cfg_a)
        .args(["--config-b"])
        .arg(&cfg_b)
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 2);
    assert!(
        stderr_of(&res).contains("[time] differs"),
        "stderr should name the section: {}",
        stderr_of(&res)
    );
}

#[test]
fn selfsim_rejects_a_picard_scheme() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("runs");
    let body = small_burgers(&out).replace("scheme = \"etd_rk2\"", "scheme = \"picard\"");
    let cfg = write_cfg(tmp.path(), "p.toml", &body);
    let res = bin().args(["selfsim", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(exit_code(&res), 2);
    assert!(stderr_of(&res).contains("not a marching scheme"));
}

#[test]
fn check_suite_passes_in_one_dimension() {
    let res = bin()
        .args(["check", "--points", "32", "--dim", "1"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&res), 0, "stderr: {}", stderr_of(&res));
    let text = stdout_of(&res);
    assert!(text.contains("partition-of-unity"));
    assert!(text.contains("paraproduct-identity"));
    assert!(!text.contains("FAIL"), "no suite may fail:\n{text}");
}
