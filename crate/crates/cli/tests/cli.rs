//! End-to-end tests of the `resonator` binary: config round-trips, report
//! shapes, artifact determinism, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_resonator"))
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

fn periodic_config() -> &'static str {
    r#"{
      "schema_version": 1,
      "mode": "periodic",
      "nonlinearity": "sigmoid",
      "n": 1,
      "forcing": { "cosine": [1.0] }
    }"#
}

fn dirichlet_config() -> &'static str {
    r#"{
      "schema_version": 1,
      "mode": "dirichlet",
      "nonlinearity": "sigmoid",
      "amplitude": 1.0,
      "modes": 8,
      "sweep": { "xi_lo": -1.0, "xi_hi": 1.0, "step": 0.5 }
    }"#
}

fn run_ok(output: Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout must be JSON")
}

#[test]
fn check_reports_the_sharp_condition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.json");
    write(&cfg, periodic_config());
    let report = run_ok(bin().args(["check", "--config"]).arg(&cfg).output().unwrap());
    assert!((report["lhs"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(report["rhs"].as_f64().unwrap(), 4.0);
    assert_eq!(report["holds"], serde_json::Value::Bool(true));
}

#[test]
fn dumped_config_reparses_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.json");
    write(&cfg, periodic_config());
    let first = run_ok(
        bin()
            .args(["check", "--dump-config", "--config"])
            .arg(&cfg)
            .output()
            .unwrap(),
    );

    // Feed the dump back in: resolving it again must be a fixed point.
    let cfg2 = dir.path().join("dumped.json");
    write(&cfg2, &serde_json::to_string(&first).unwrap());
    let second = run_ok(
        bin()
            .args(["check", "--dump-config", "--config"])
            .arg(&cfg2)
            .output()
            .unwrap(),
    );
    assert_eq!(first, second);
}

#[test]
fn tol_flag_overrides_the_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.json");
    write(&cfg, periodic_config());
    let report = run_ok(
        bin()
            .args(["check", "--dump-config", "--tol", "1e-6", "--config"])
            .arg(&cfg)
            .output()
            .unwrap(),
    );
    assert_eq!(report["tolerances"]["rel"].as_f64().unwrap(), 1e-6);
    assert_eq!(report["tolerances"]["abs"].as_f64().unwrap(), 1e-8);
}

#[test]
fn curve_artifacts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("d.json");
    write(&cfg, dirichlet_config());

    let out1 = dir.path().join("run1");
    let out2 = dir.path().join("run2");
    for out in [&out1, &out2] {
        let report = run_ok(
            bin()
                .args(["curve", "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(out)
                .output()
                .unwrap(),
        );
        assert_eq!(report["points"].as_u64().unwrap(), 5);
    }
    let csv1 = fs::read(out1.join("curve.csv")).unwrap();
    let csv2 = fs::read(out2.join("curve.csv")).unwrap();
    assert_eq!(csv1, csv2, "identical runs must produce identical bytes");

    let header = String::from_utf8_lossy(&csv1);
    assert!(header.starts_with("xi,A,residual,x2,x3,x4,x5,x6,x7,x8\n"));
    assert!(out1.join("curve.gp").exists());
}

#[test]
fn count_accepts_a_positional_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("d.json");
    write(&cfg, dirichlet_config());
    let report = run_ok(
        bin()
            .args(["count", "--config"])
            .arg(&cfg)
            .arg("--")
            .arg("-5.0")
            .output()
            .unwrap(),
    );
    assert_eq!(report["a_query"].as_f64().unwrap(), -5.0);
    assert_eq!(report["count"].as_u64().unwrap(), 0);
}

#[test]
fn invalid_configs_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();

    let unknown_key = dir.path().join("a.json");
    write(
        &unknown_key,
        r#"{"schema_version":1,"mode":"periodic","nonlinearity":"sigmoid","n":1,"bogus":1}"#,
    );
    let cross_mode = dir.path().join("b.json");
    write(
        &cross_mode,
        r#"{"schema_version":1,"mode":"periodic","nonlinearity":"sigmoid","n":1,"amplitude":1.0}"#,
    );
    let missing_n = dir.path().join("c.json");
    write(
        &missing_n,
        r#"{"schema_version":1,"mode":"periodic","nonlinearity":"sigmoid"}"#,
    );
    for cfg in [&unknown_key, &cross_mode, &missing_n] {
        let output = bin().args(["check", "--config"]).arg(cfg).output().unwrap();
        assert_eq!(output.status.code(), Some(2), "config {cfg:?}");
    }
}

#[test]
fn solver_failures_exit_with_3() {
    // Forcing above the sharp threshold: no periodic solution exists, and a
    // deliberately tiny seed grid keeps the search fast.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fail.json");
    write(
        &cfg,
        r#"{
          "schema_version": 1, "mode": "periodic", "nonlinearity": "sigmoid", "n": 1,
          "forcing": { "cosine": [1.5] },
          "seed_grid": { "radii": 1, "angles": 2, "ball": 3.0 }
        }"#,
    );
    let output = bin().args(["periodic", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["error"]["kind"], "no_fixed_point");
}

#[test]
fn shipped_configs_resolve() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["fig1.json", "fig1-dirichlet.json", "empty-forcing.json"] {
        let output = bin()
            .args(["check", "--dump-config", "--config"])
            .arg(configs.join(name))
            .output()
            .unwrap();
        assert!(output.status.success(), "shipped config {name} must resolve");
    }
}

#[test]
fn verify_reports_gap_and_identity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.json");
    write(&cfg, periodic_config());
    let report = run_ok(bin().args(["verify", "--config"]).arg(&cfg).output().unwrap());
    assert!(report["gap"].as_f64().unwrap() < 1e-8);
    assert!(report["max_ode_residual"].as_f64().unwrap() < 1e-6);
    let identity = &report["identity"];
    let defect = (identity["integral"].as_f64().unwrap() - identity["rhs"].as_f64().unwrap()).abs();
    assert!(defect < 1e-4);
}
