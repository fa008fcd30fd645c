#![allow(clippy::approx_constant)]

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};
use std::path::Path;
use std::process::Command;

use dqw_cli::{cmd_evolve, ExperimentConfig, InitialCondition};
use dqw_core::{uniform_electric_config, ElectricField, WalkKind};

fn dqw(out: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dqw"))
        .arg("--out-dir")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn dispersion_resolution_sets_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dqw(dir.path(), &["dispersion", "--walk", "honeycomb", "--nx", "8", "--ny", "8"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("dispersion_honeycomb.csv")).unwrap();
    assert_eq!(text.lines().count(), 65);
    assert!(text.starts_with("kx,ky,omega_minus\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn six_step_massless_minimum_is_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    assert!(dqw(dir.path(), &["dispersion", "--walk", "six-step"]).status.success());
    let rows = csv_rows(&dir.path().join("dispersion_six-step.csv"));
    let best = rows
        .iter()
        .min_by(|a, b| a[2].abs().total_cmp(&b[2].abs()))
        .unwrap();
    assert!(best[0].abs() < 1e-12 && best[1].abs() < 1e-12, "{best:?}");
}

#[test]
fn three_step_mass_period_gives_identical_csv() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let m = (4.0 * std::f64::consts::PI / 3.0).to_string();
    assert!(dqw(a.path(), &["dispersion", "--walk", "three-step", "--mass", "0"]).status.success());
    assert!(dqw(b.path(), &["dispersion", "--walk", "three-step", "--mass", &m]).status.success());
    let name = "dispersion_three-step.csv";
    assert_eq!(
        std::fs::read(a.path().join(name)).unwrap(),
        std::fs::read(b.path().join(name)).unwrap()
    );
}

#[test]
fn zitter_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dqw(dir.path(), &["zitter", "--walk", "three-step", "--masses", "pi"]);
    assert!(out.status.success());
    let rows = csv_rows(&dir.path().join("zitter_three-step.csv"));
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert!((r[1] - FRAC_PI_6).abs() < 1e-6 && (r[2] - FRAC_PI_3).abs() < 1e-6);
        assert!((r[3].abs() - 1.5708).abs() < 5e-4 && (r[4].abs() - 0.9069).abs() < 5e-4);
        assert!(r[3] * r[4] < 0.0);
    }

    let out = dqw(dir.path(), &["zitter", "--walk", "isosceles", "--masses", "pi"]);
    assert!(out.status.success());
    let rows = csv_rows(&dir.path().join("zitter_isosceles.csv"));
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[1].abs() < 1e-9));
    assert!(rows.iter().any(|r| r[3].abs() < 5e-4 && (r[4] - 1.8138).abs() < 5e-4));

    let out = dqw(dir.path(), &["zitter", "--walk", "six-step", "--masses", "0"]);
    assert!(out.status.success());
    let rows = csv_rows(&dir.path().join("zitter_six-step.csv"));
    assert_eq!(rows.len(), 1);
    assert!(rows[0][3].abs() < 5e-4 && rows[0][4].abs() < 5e-4);
}

#[test]
fn degenerate_lines_print_free_token() {
    let dir = tempfile::tempdir().unwrap();
    assert!(dqw(dir.path(), &["zitter", "--walk", "six-step", "--masses", "pi"]).status.success());
    let text = std::fs::read_to_string(dir.path().join("zitter_six-step.csv")).unwrap();
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l.ends_with(",free")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| dqw(dir.path(), args).status.code().unwrap();
    assert_eq!(code(&["zitter", "--walk", "honeycomb"]), 1);
    assert_eq!(code(&["dispersion", "--walk", "square"]), 1);
    assert_eq!(code(&["dispersion", "--walk", "six-step", "--nx", "3"]), 1);
    assert_eq!(code(&["cone-check", "--walk", "six-step", "--radius", "2"]), 1);
    assert_eq!(code(&["gauge-check", "--seed", "4"]), 0);
    assert_eq!(code(&["gauge-check", "--seed", "4", "--corrupt"]), 2);
    assert_eq!(code(&["gauge-check", "--zero-phase"]), 0);
    let blocked = dir.path().join("file");
    std::fs::write(&blocked, b"x").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dqw"))
        .arg("--out-dir")
        .arg(blocked.join("sub"))
        .args(["dispersion", "--walk", "six-step", "--nx", "8", "--ny", "8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gauge_check_zero_phase_prints_exact_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dqw(dir.path(), &["gauge-check", "--zero-phase"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("max deviation 0e0: pass"));
}

#[test]
fn cone_check_writes_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dqw(dir.path(), &["cone-check", "--walk", "honeycomb", "--directions", "12"]);
    assert!(out.status.success());
    let rows = csv_rows(&dir.path().join("cone_honeycomb.csv"));
    assert_eq!(rows.len(), 12);
    let mean = rows.iter().map(|r| r[1]).sum::<f64>() / 12.0;
    assert!(rows.iter().all(|r| (r[1] - mean).abs() / mean < 0.05));
}

fn small_config(dir: &Path, steps: usize) -> ExperimentConfig {
    ExperimentConfig {
        walk: WalkKind::ThreeStepEquilateral,
        mass: 0.5,
        n_x: 48,
        n_y: 16,
        epsilon: 1.0,
        steps,
        initial: InitialCondition::Symmetric,
        field: Some(uniform_electric_config(ElectricField::new(0.1, 0.0))),
        out_dir: dir.to_path_buf(),
        seed: 0,
    }
}

#[test]
fn evolve_artifacts_have_spec_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), 40);
    let outcome = cmd_evolve(&cfg).unwrap();
    assert!(outcome.warnings.is_empty() || cfg.wrap_warning().is_some());

    let pgm = std::fs::read(dir.path().join("density.pgm")).unwrap();
    let header = b"P5\n48 41\n65535\n";
    assert_eq!(&pgm[..header.len()], header);
    assert_eq!(pgm.len(), header.len() + 2 * 48 * 41);

    let rows = csv_rows(&dir.path().join("density.csv"));
    assert_eq!(rows.len(), 41 * 96);
    for t in 0..=40 {
        let total: f64 = rows.iter().filter(|r| r[0] == t as f64).map(|r| r[2]).sum();
        assert!((total - 1.0).abs() < 5e-9, "t={t}: {total}");
    }
    assert!(outcome.moments.iter().all(|m| (m.norm - 1.0).abs() < 1e-10));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bloch.json")).unwrap()).unwrap();
    for key in ["period_steps", "predictions", "relative_error", "detected"] {
        assert!(report.get(key).is_some(), "{key}");
    }
    assert_eq!(report["predictions"].as_array().unwrap().len(), 3);
}

#[test]
fn evolve_accepts_json_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let config = serde_json::json!({
        "walk": "three-step",
        "mass": 0.3,
        "n_x": 32,
        "n_y": 16,
        "steps": 20,
        "initial": {"type": "gaussian", "width": 2.0, "k0": [0.2, 0.0], "spinor": [[1.0, 0.0], [0.0, 1.0]]},
        "field": {"type": "uniform_electric", "ex": 0.0, "ey": 0.1},
        "out_dir": out_dir,
    });
    let path = dir.path().join("config.json");
    std::fs::write(&path, config.to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dqw"))
        .args(["evolve", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: packet may wrap"));
    for f in ["density.csv", "density.pgm", "moments.csv", "bloch.json"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
}

#[test]
fn evolve_without_field_writes_no_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(dir.path(), 10);
    cfg.field = None;
    let out = cmd_evolve(&cfg).unwrap();
    assert!(out.bloch.is_none());
    assert!(!dir.path().join("bloch.json").exists());
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"walk": "three-step", "mass": 0.1}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dqw"))
        .args(["evolve", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn wrap_warning_follows_the_reach_rule() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(dir.path(), 2);
    cfg.n_x = 64;
    cfg.n_y = 64;
    assert!(cfg.wrap_warning().is_none());
    cfg.steps = 11;
    assert!(cfg.wrap_warning().is_some());
}

#[test]
fn free_walk_centroid_has_no_period() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(dir.path(), 60);
    cfg.n_x = 256;
    cfg.n_y = 32;
    cfg.field = Some(uniform_electric_config(ElectricField::new(0.0, 0.0)));
    let out = cmd_evolve(&cfg).unwrap();
    let report = out.bloch.unwrap();
    assert!(!report.detected && report.period_steps.is_none());
    assert!(report.predictions.is_empty() && report.relative_error.is_none());
}
