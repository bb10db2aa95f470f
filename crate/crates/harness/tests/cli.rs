use std::path::Path;
use std::process::{Command, Output};

use hardyspace_harness::report::{read_csv, read_jsonl};
use hardyspace_harness::{coverage_gaps, run_experiment, ExperimentConfig, HarnessError, Status, CHECKS, CLAIMS};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardyspace")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn unknown_check_exits_2() {
    let out = bin(&["check", "no_such_check"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_check"));
    let err = run_experiment(&ExperimentConfig::named("no_such_check")).unwrap_err();
    assert!(matches!(err, HarnessError::UnknownCheck(n) if n == "no_such_check"));
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", "{ \"check\": ");
    let out = bin(&["check", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(matches!(ExperimentConfig::from_json("{ \"check\": "), Err(HarnessError::ConfigParse(_))));
    // unknown keys are rejected too
    assert!(ExperimentConfig::from_json(r#"{"check": "beesack", "tolerance": 1}"#).is_err());
}

#[test]
fn config_params_reach_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"check": "gamma_closed_form", "params": {"p": [4]}}"#);
    let out = bin(&["check", "--config", &cfg, "--format", "jsonl"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = read_jsonl(&out.stdout[..]).unwrap();
    assert_eq!(reports.len(), 1);
    let g = reports[0].get("gamma(t^(1/4))").unwrap();
    assert!((g - 4.0 / 3.0).abs() < 1e-8);
}

#[test]
fn report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("r.jsonl");
    let out = bin(&["check", "k0_forms", "--format", "jsonl", "--out", jsonl.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let original = read_jsonl(&std::fs::read(&jsonl).unwrap()[..]).unwrap();
    assert_eq!(original[0].status, Status::DiscrepancyLogged);

    let csv = dir.path().join("r.csv");
    let out = bin(&["report", jsonl.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let back = read_csv(&std::fs::read(&csv).unwrap()[..]).unwrap();
    assert_eq!(back[0].check_name, "k0_forms");
    assert_eq!(back[0].status, original[0].status);
    assert_eq!(back[0].value, original[0].value);

    let again = bin(&["report", jsonl.to_str().unwrap(), "--format", "jsonl"]);
    assert_eq!(read_jsonl(&again.stdout[..]).unwrap(), original);
}

#[test]
fn every_claim_has_one_check() {
    assert!(coverage_gaps().is_empty(), "{:?}", coverage_gaps());
    assert!(CHECKS.len() >= CLAIMS.len());
    let mut names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), CHECKS.len());
}

#[test]
fn tol_override_can_fail_a_check() {
    let out = bin(&["check", "gamma_closed_form", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("gamma_closed_form,fail"));
}

#[test]
fn norm_and_rearrange_tools() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "f.json",
        r#"{"params": {"f": {"form": "indicator", "lo": 0, "hi": 1}, "p": 2, "t": [0.5, 2]}}"#,
    );
    let out = bin(&["rearrange", "--config", &cfg, "--format", "jsonl"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &read_jsonl(&out.stdout[..]).unwrap()[0];
    assert_eq!(r.get("f*(0.5)"), Some(1.0));
    assert!((r.get("f**(2)").unwrap() - 0.5).abs() < 1e-12);

    let out = bin(&["norm", "--config", &cfg, "--format", "jsonl"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_jsonl(&out.stdout[..]).unwrap().len(), 1);

    let missing = write(dir.path(), "m.json", r#"{"params": {}}"#);
    assert_eq!(bin(&["rearrange", "--config", &missing]).status.code(), Some(2));
}
