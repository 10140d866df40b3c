use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const EX1_IC: &str = "0.487957127501505,0.84849821703225,-0.036041155996589,0.02072666577125";

fn rtbp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtbp")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn example_one_report_and_ic_path_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = rtbp(&["example", "1", "--out-dir", "out"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let report = json(&dir.path().join("out/example1.report.json"));
    assert!((num(&report, "two_t") - 12.607219).abs() < 1e-5);
    assert!((num(&report, "area_integral") - 6.32403).abs() < 5e-3);
    assert_eq!(report["case"]["k"], 2);
    assert_eq!(report["case"]["orientation"], "clockwise");
    for f in ["example1.orbit.json", "example1.csv", "example1.svg"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }

    let out = rtbp(&["verify", "--ic", EX1_IC, "--mu", "0.000953875", "--json", "ic.json"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let a = std::fs::read(dir.path().join("ic.json")).unwrap();
    let b = std::fs::read(dir.path().join("out/example1.report.json")).unwrap();
    assert_eq!(a, b, "report from flags differs from the example report");
}

#[test]
fn orbit_file_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    assert!(rtbp(&["example", "2", "--out-dir", "."], dir.path()).status.success());
    let out = rtbp(&["verify", "example2.orbit.json", "--json", "r.json", "--orbit-out", "o.json"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let before = json(&dir.path().join("example2.orbit.json"));
    let after = json(&dir.path().join("o.json"));
    for key in ["mu", "jacobi", "period"] {
        assert_eq!(before[key], after[key], "{key}");
    }
    assert_eq!(
        std::fs::read(dir.path().join("r.json")).unwrap(),
        std::fs::read(dir.path().join("example2.report.json")).unwrap()
    );
    let report = json(&dir.path().join("r.json"));
    assert!((num(&report, "period") - 0.30139544664015).abs() < 1e-6);
    assert_eq!(report["case"]["k"], 1);
    assert_eq!(report["case"]["orientation"], "counterclockwise");
    assert_eq!(report["case"]["enclosed"]["second"], 1);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    assert!(rtbp(&["example", "2", "--out-dir", "a"], dir.path()).status.success());
    assert!(rtbp(&["example", "2", "--out-dir", "b"], dir.path()).status.success());
    for f in ["example2.orbit.json", "example2.report.json", "example2.csv", "example2.svg"] {
        assert_eq!(
            std::fs::read(dir.path().join("a").join(f)).unwrap(),
            std::fs::read(dir.path().join("b").join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn example_four_lifts_and_plots_side_by_side() {
    let dir = tempfile::tempdir().unwrap();
    let out = rtbp(&["example", "4", "--out-dir", "."], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let report = json(&dir.path().join("example4.report.json"));
    assert_eq!(report["case"]["covering_index"], 3);
    let rhs = -3.0 * PI - num(&report, "area_integral");
    assert!((rhs - 12.5698).abs() < 2e-2, "{rhs}");
    assert!(num(&report, "lift_roundtrip_error") <= 1e-9);
    let svg = std::fs::read_to_string(dir.path().join("example4.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(svg.contains("lifting, n = 3"));
}

#[test]
fn lift_subcommand_writes_lifted_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = rtbp(&["lift", "--example", "4", "--csv", "beta.csv"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("covering index n:   3"));
    let csv = std::fs::read_to_string(dir.path().join("beta.csv")).unwrap();
    assert!(csv.starts_with("x,y\n"));
    assert!(csv.lines().count() > 1000);
    let out = rtbp(&["lift", "--example", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn equilibrium_initial_condition_is_not_periodic() {
    let dir = tempfile::tempdir().unwrap();
    let mu = 0.000953875_f64;
    let ic = format!("{},{},0,0", 0.5 - mu, 3f64.sqrt() / 2.0);
    let out = rtbp(&["verify", "--ic", &ic, "--mu", "0.000953875"], dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("equilibrium"));
}

#[test]
fn garbage_orbit_file_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "not json at all").unwrap();
    let out = rtbp(&["verify", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("schema error"));

    std::fs::write(dir.path().join("v2.json"), r#"{"schema_version":"2","mu":0.001,"jacobi":3,"period":1,"closure_residual":0,"samples":[],"provenance":""}"#).unwrap();
    let out = rtbp(&["verify", "v2.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("schema_version"));
}

#[test]
fn simulate_zero_span_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = rtbp(&["simulate", "--ic", EX1_IC, "--tmax", "0"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("empty integration interval"));
}

fn last_row(csv: &str) -> Vec<f64> {
    csv.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect()
}

#[test]
fn simulate_example_three_closes() {
    let dir = tempfile::tempdir().unwrap();
    let out = rtbp(
        &["simulate", "--example", "3", "--tmax", "5.4912835927302", "--csv", "t.csv", "--svg", "t.svg"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(csv.starts_with("t,y1,y2,v1,v2\n"));
    let end = last_row(&csv);
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let d: f64 = (1..5).map(|i| (end[i] - first[i]).powi(2)).sum::<f64>().sqrt();
    assert!(d < 1e-4, "{d}");
    assert!(std::fs::read_to_string(dir.path().join("t.svg")).unwrap().contains("<svg"));
}

#[test]
fn simulate_reports_small_drift() {
    let dir = tempfile::tempdir().unwrap();
    let out = rtbp(&["simulate", "--ic", EX1_IC, "--tmax", "6.3036094149426", "--tol", "1e-12"], dir.path());
    assert!(out.status.success());
    let line = stdout(&out).lines().find(|l| l.starts_with("Jacobi drift:")).unwrap().to_string();
    let drift: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
    assert!(drift <= 1e-9, "{drift}");
}

#[test]
fn l4_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = rtbp(&["l4", "--mu", "0.000953875", "--jacobi", "2.9", "--json", "l4.json"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: clockwise only"));
    let v = json(&dir.path().join("l4.json"));
    assert!(num(&v["l4"], "radius") > 0.0);
    assert_eq!(v["l4"]["verdict"], "clockwise_only");

    let out = rtbp(&["l4", "--jacobi", "3.01"], dir.path());
    assert!(stdout(&out).contains("verdict: neighborhood outside U_C"));

    let c0 = 3.0 - 0.000953875 + 0.000953875_f64.powi(2);
    let out = rtbp(&["l4", "--jacobi", &format!("{c0}")], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("critical value"));
}
