use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isac-rs"))
}

fn narrow_scenario() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/narrow_spread.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn crb_prints_both_routes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "crb",
        "--config",
        narrow_scenario().to_str().unwrap(),
        "--pc",
        "6",
        "--ps",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("closed-form") && text.contains("rel. delta"));
    let csv = fs::read_to_string(dir.path().join("crb.csv")).unwrap();
    assert!(csv.starts_with("# isac-rs crb schema v1\n"));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn crb_rejects_out_of_range_interval() {
    let o = run(&["crb", "--pc", "792", "--ps", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pc"));
}

#[test]
fn crb_near_unit_eta_tracks_range_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["crb", "--eta", "0.999", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("crb.csv")).unwrap();
    let row: Vec<f64> = csv.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    let (crb_r, crb_s) = (row[3], row[5]);
    assert!((crb_s - crb_r).abs() / crb_r < 0.01);
}

#[test]
fn bad_eta_is_an_input_error() {
    assert_eq!(run(&["crb", "--eta", "1.5"]).status.code(), Some(2));
}

#[test]
fn missing_config_is_an_input_error() {
    assert_eq!(run(&["crb", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
}

#[test]
fn optimize_zero_floor_gives_smallest_corner() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["optimize", "--config", narrow_scenario().to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exhaustive   pc=2 ps=2"));
    let outcome: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("outcome.json")).unwrap()).unwrap();
    assert_eq!(outcome["status"], "ok");
}

#[test]
fn optimize_impossible_floor_exits_infeasible() {
    let o = run(&["optimize", "--config", narrow_scenario().to_str().unwrap(), "--rate-floor", "1e13"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_is_sorted_monotone_and_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = run(&[
            "sweep",
            "--config",
            narrow_scenario().to_str().unwrap(),
            "--cmin",
            "0.1:0.95:20",
            "--relative",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let csv_a = fs::read(a.path().join("sweep.csv")).unwrap();
    assert_eq!(csv_a, fs::read(b.path().join("sweep.csv")).unwrap());
    assert_eq!(fs::read(a.path().join("sweep.svg")).unwrap(), fs::read(b.path().join("sweep.svg")).unwrap());

    let text = String::from_utf8(csv_a).unwrap();
    assert!(!text.contains('\r'));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("c_min,crb_exhaustive,crb_rounded,gap_rel,pc_ex,ps_ex,pc_rd,ps_rd"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.windows(2).all(|w| w[1][0] >= w[0][0]));
    assert!(rows.windows(2).all(|w| w[1][1] >= w[0][1]));

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "sweep");
    assert_eq!(manifest["outputs"], serde_json::json!(["sweep.csv", "sweep.svg"]));
}

#[test]
fn sweep_rejects_malformed_grid() {
    assert_eq!(run(&["sweep", "--cmin", "1:2"]).status.code(), Some(2));
}

#[test]
fn validate_refuses_too_few_trials() {
    let o = run(&["validate", "--suite", "sensing", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_reports_per_criterion_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "validate",
        "--suite",
        "sensing",
        "--trials",
        "50",
        "--seed",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    // Exit 0 or 1 depending on the ratios; the report itself must be complete.
    assert!(matches!(o.status.code(), Some(0) | Some(1)));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count(), 2);
    let csv = fs::read_to_string(dir.path().join("validate.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.starts_with("sensing_ratio")).count(), 2);
}

#[test]
fn unknown_subcommand_is_an_input_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
