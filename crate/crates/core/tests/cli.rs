//! End-to-end checks of the command-line interface: exit codes, output
//! layout, and byte-level determinism of the reports.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thermoflow"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

const PAIR_CONFIG: &str = r#"
[system]
kind = "ideal-gas-tp"
c = 1.5
n0kb = 1.0

[target]
temp = 275.0
eta2 = -1.0e5

[initial]
temp = 375.0
eta2 = -1.0e5

[initial2]
temp = 300.0
eta2 = -189487.5

[flow]
lambda = 1.0
horizon = 20.0
grid_points = 2000
"#;

const SINGLE_CONFIG: &str = r#"
[system]
kind = "ideal-gas-tp"
c = 1.5
n0kb = 1.0

[target]
temp = 275.0
eta2 = -1.0e5

[initial]
temp = 375.0
eta2 = -1.0e5

[flow]
lambda = 1.0
horizon = 20.0
grid_points = 4000
"#;

fn run(args: &[&str], out: &Path) -> Output {
    bin()
        .args(args)
        .args(["--out", out.to_str().unwrap()])
        .env_remove("THERMOFLOW_OUT")
        .output()
        .unwrap()
}

#[test]
fn simulate_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "pair.toml", PAIR_CONFIG);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let res = run(&["simulate", &cfg], out);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    }
    for name in ["report.json", "series.csv", "series2.csv"] {
        let x = fs::read(a.join(name)).unwrap();
        let y = fs::read(b.join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between identical runs");
    }
}

#[test]
fn series_header_and_report_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "pair.toml", PAIR_CONFIG);
    let out = tmp.path().join("out");
    assert!(run(&["simulate", &cfg], &out).status.success());

    let csv = fs::read_to_string(out.join("series.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,T,eta2,D_star,speed_sq,cubic");
    assert_eq!(csv.lines().count(), 2002); // header + grid_points + 1

    let report = fs::read_to_string(out.join("report.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&report).unwrap();
    for key in ["tool_version", "config_sha256", "t_star", "faster"] {
        assert!(json.get(key).is_some(), "missing key {key}");
    }
    // Keys come out sorted at every level.
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    assert_eq!(keys, sorted);
}

#[test]
fn env_var_overrides_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "single.toml", SINGLE_CONFIG);
    let (flag_dir, env_dir) = (tmp.path().join("flag"), tmp.path().join("env"));
    let res = bin()
        .args(["simulate", &cfg, "--out", flag_dir.to_str().unwrap()])
        .env("THERMOFLOW_OUT", env_dir.to_str().unwrap())
        .output()
        .unwrap();
    assert!(res.status.success());
    assert!(env_dir.join("report.json").exists());
    assert!(!flag_dir.exists());
}

#[test]
fn malformed_config_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", "[system]\nkind = \"ideal-gas-tp\"\nbogus = 1\n");
    let res = run(&["simulate", &cfg], &tmp.path().join("out"));
    assert_eq!(res.status.code(), Some(2));

    let res = run(&["simulate", "/nonexistent/nowhere.toml"], &tmp.path().join("out"));
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn invalid_state_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "neg.toml",
        &SINGLE_CONFIG.replace("temp = 375.0", "temp = -375.0"),
    );
    let res = run(&["simulate", &cfg], &tmp.path().join("out"));
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn coarse_audit_grid_exits_4() {
    // lambda * step = 1.0 here; the audit refuses to certify a bound on a
    // grid this coarse instead of reporting a spurious violation.
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "coarse.toml",
        &SINGLE_CONFIG.replace("grid_points = 4000", "grid_points = 20"),
    );
    let res = run(&["audit", &cfg, "--mode", "tur"], &tmp.path().join("out"));
    assert_eq!(res.status.code(), Some(4));
}

#[test]
fn audits_pass_on_sound_grids() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "single.toml", SINGLE_CONFIG);
    let out = tmp.path().join("tur");
    let res = run(&["audit", &cfg, "--mode", "tur"], &out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["violated"], serde_json::Value::Bool(false));
    for row in json["table"].as_array().unwrap() {
        assert!(row["ratio"].as_f64().unwrap() >= 1.0 - 1e-8);
    }

    let driven = write_config(
        tmp.path(),
        "driven.toml",
        r#"
[system]
kind = "ideal-gas-tp"
c = 1.5
n0kb = 1.0

[target]
temp = 300.0
eta2 = -1.0e5

[initial]
temp = 300.0
eta2 = -1.0e5

[flow]
lambda = 1.0
horizon = 10.0
grid_points = 5000

[drive]
from = { temp = 300.0, eta2 = -1.0e5 }
to = { temp = 350.0, eta2 = -1.2e5 }

[drive.rate]
kind = "sinusoidal"
base = 1.0
amp = 0.5
omega = 1.0
"#,
    );
    let out = tmp.path().join("hc");
    let res = run(&["audit", &driven, "--mode", "horse-carrot"], &out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(json["table"][0]["ratio"].as_f64().unwrap() >= 1.0 - 1e-8);
}

#[test]
fn tensor_prints_components() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "single.toml", SINGLE_CONFIG);
    let res = run(&["tensor", &cfg, "--at", "300,-1.0e5"], &tmp.path().join("out"));
    assert!(res.status.success());
    let json: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    for key in ["g11", "g12", "g22"] {
        assert!(json["metric"][key].is_number());
    }
    for key in ["c111", "c112", "c122", "c222"] {
        assert!(json["cubic"][key].is_number());
    }

    let res = run(&["tensor", &cfg, "--at", "banana"], &tmp.path().join("out"));
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn reproduce_figures() {
    let tmp = tempfile::tempdir().unwrap();

    let out = tmp.path().join("fig1");
    let res = run(&["reproduce", "fig1"], &out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    // Warming wins for the classical gas: the divergence gap keeps one sign.
    for line in fs::read_to_string(out.join("fig1_delta.csv")).unwrap().lines().skip(1) {
        let delta: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(delta >= -1e-12, "sign flip in fig1 gap: {line}");
    }

    let out = tmp.path().join("fig2");
    let res = run(&["reproduce", "fig2"], &out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    // Cooling wins for the boson gas; the recorded gap uses that convention.
    for line in fs::read_to_string(out.join("fig2_delta.csv")).unwrap().lines().skip(1) {
        let delta: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(delta >= -1e-12, "sign flip in fig2 gap: {line}");
    }

    let out = tmp.path().join("fig3");
    let res = run(&["reproduce", "fig3"], &out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(out.join("fig3_field.csv").exists());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("fig3_report.json")).unwrap()).unwrap();
    let t_star = json["t_star"].as_f64().unwrap();
    assert!((t_star - 0.511742).abs() < 1e-4);

    // The speed gap must change sign within one grid cell of the extremum of
    // the divergence gap.
    let text = fs::read_to_string(out.join("fig3_delta.csv")).unwrap();
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    for line in text.lines().skip(1) {
        let mut it = line.split(',');
        let t: f64 = it.next().unwrap().parse().unwrap();
        let dd: f64 = it.next().unwrap().parse().unwrap();
        let ds: f64 = it.next().unwrap().parse().unwrap();
        rows.push((t, dd, ds));
    }
    let extremum = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.abs().total_cmp(&b.1 .1.abs()))
        .unwrap()
        .0;
    let step = rows[1].0 - rows[0].0;
    let crossing = rows
        .windows(2)
        .find(|w| w[0].2.signum() != w[1].2.signum())
        .map(|w| w[0].0)
        .expect("speed gap never changes sign");
    assert!(
        (crossing - rows[extremum].0).abs() <= 2.0 * step,
        "crossing {crossing} vs extremum {}",
        rows[extremum].0
    );

    let res = run(&["reproduce", "fig9"], &tmp.path().join("oops"));
    assert_eq!(res.status.code(), Some(2));
}
