use std::path::Path;
use std::process::{Command, Output};

use rbcd_cli::read_trace_csv;

fn rbcd(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbcd"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn csv_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv") && n != "summary.csv")
        .collect();
    names.sort();
    names
}

#[test]
fn single_run_writes_one_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbcd(&["run", "--solver", "rbcd", "--seed", "4", "--m", "20", "--n", "20", "--epochs", "30"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csv_files(dir.path()), vec!["rbcd_seed4.csv"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("epochs = 30"), "{stdout}");
    assert!(dir.path().join("config.toml").exists());
    let records = read_trace_csv(&dir.path().join("rbcd_seed4.csv")).unwrap();
    assert_eq!(records.len(), 30);
    assert!(records.windows(2).all(|w| w[1].objective <= w[0].objective));
}

#[test]
fn gamma_sweep_writes_six_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbcd(
        &["run", "--problem", "poisson", "--solver", "arbcd,abpg", "--gamma", "0.1,1.0,2.0", "--seed", "1", "--m", "20", "--n", "20", "--epochs", "10"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csv_files(dir.path()).len(), 6);
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 7);
}

#[test]
fn divergence_is_recorded_without_aborting() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbcd(
        &["run", "--problem", "relent", "--solver", "arbcd-efficient,rbcd", "--gamma", "0.1", "--seed", "1..3", "--m", "60", "--n", "60", "--epochs", "40"],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(csv_files(dir.path()).len(), 6);
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let rbcd_row = summary.lines().find(|l| l.starts_with("rbcd,")).unwrap();
    assert!(rbcd_row.starts_with("rbcd,,3,0,"), "{summary}");
}

#[test]
fn env_var_sets_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_rbcd"))
        .args(["run", "--seed", "2", "--m", "5", "--n", "5", "--epochs", "2"])
        .env(rbcd_cli::OUT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(csv_files(dir.path()), vec!["rbcd_seed2.csv"]);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(rbcd(&["run", "--solver", ""], dir.path()).status.code(), Some(1));
    assert_eq!(rbcd(&["run", "--epochs", "many"], dir.path()).status.code(), Some(1));
    assert_eq!(rbcd(&["check", "everything"], dir.path()).status.code(), Some(1));
}

#[test]
fn missing_instance_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.txt");
    let out = rbcd(&["run", "--instance", missing.to_str().unwrap(), "--seed", "1"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn instance_file_is_shared_by_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("p.txt");
    let status = Command::new(env!("CARGO_BIN_EXE_rbcd"))
        .args(["synth", "--problem", "relent", "--m", "8", "--n", "6", "--seed", "3", "--out"])
        .arg(&instance)
        .status()
        .unwrap();
    assert!(status.success());
    let out = rbcd(
        &["run", "--problem", "relent", "--instance", instance.to_str().unwrap(), "--seed", "1,2", "--epochs", "5"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a = read_trace_csv(&dir.path().join("rbcd_seed1.csv")).unwrap();
    let b = read_trace_csv(&dir.path().join("rbcd_seed2.csv")).unwrap();
    // Same data and start; only the block draws differ.
    assert_ne!(a, b);
}

#[test]
fn gti_check_fails_for_burg_above_one_half() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbcd(&["check", "gti", "--ref", "burg", "--gamma", "0.6"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.starts_with("FAIL"), "{report}");
    let json = std::fs::read_to_string(dir.path().join("report.jsonl")).unwrap();
    let record: serde_json::Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
    assert_eq!(record["status"], "fail");
    assert!(record["max_violation"].as_f64().unwrap() > 0.0);
}

#[test]
fn quadratic_rate_check_reports_linear_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbcd(&["check", "rates", "--problem", "quadratic", "--seeds", "20"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("rate-linear/quadratic"));
}

#[test]
fn full_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbcd(&["check", "all", "--seed", "7"], dir.path());
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(out.status.success(), "{report}");
    assert!(report.lines().count() > 40);
}

#[test]
fn too_few_seeds_is_not_a_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbcd(&["check", "rates", "--problem", "relent", "--seeds", "5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.starts_with("INCONCLUSIVE"));
}
