//! End-to-end tests of the `kfree` binary: exit codes, output shapes,
//! reproducibility, and worker-count independence.

use std::path::Path;
use std::process::{Command, Output};

fn kfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kfree")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

/// Strips the timing field, the one value allowed to differ between runs.
fn strip_elapsed(json: &str) -> serde_json::Value {
    let mut value: serde_json::Value = serde_json::from_str(json).expect("valid JSON");
    if let Some(obj) = value.as_object_mut() {
        obj.remove("elapsed_ms");
    }
    value
}

#[test]
fn table1_golden_passes() {
    let out = kfree(&["table1", "--golden"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("81 entries matched"));
}

#[test]
fn table1_single_cells() {
    let out = kfree(&["table1", "--q", "9", "--h", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("20"));
    let out = kfree(&["table1", "--q", "7", "--h", "4", "--format", "csv"]);
    assert!(stdout(&out).contains("16†"));
}

#[test]
fn table1_rejects_non_prime_powers() {
    let out = kfree(&["table1", "--q", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_pass_fail_and_budget() {
    let out = kfree(&["scan", "--q", "2", "--k", "2", "--h", "1", "--n", "9"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("pass"));

    // Decided by exhaustive scan: the first failing degree for h = 1.
    let out = kfree(&["scan", "--q", "2", "--k", "2", "--h", "1", "--n", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("00110001011"));

    let out = kfree(&["scan", "--q", "2", "--k", "2", "--h", "1", "--n", "25"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn scan_json_is_reproducible_and_worker_independent() {
    let args = ["scan", "--q", "3", "--k", "2", "--h", "1", "--n", "6", "--format", "json"];
    let first = strip_elapsed(&stdout(&kfree(&args)));
    let second = strip_elapsed(&stdout(&kfree(&args)));
    assert_eq!(first, second);
    let one_worker = strip_elapsed(&stdout(&kfree(
        &["scan", "--q", "3", "--k", "2", "--h", "1", "--n", "6", "--format", "json", "--workers", "1"],
    )));
    let four_workers = strip_elapsed(&stdout(&kfree(
        &["scan", "--q", "3", "--k", "2", "--h", "1", "--n", "6", "--format", "json", "--workers", "4"],
    )));
    assert_eq!(one_worker, four_workers);
    assert_eq!(first, one_worker);
    assert_eq!(first["pass"], serde_json::Value::Bool(true));
}

#[test]
fn count_example_interval() {
    let out = kfree(&["count", "--q", "2", "--k", "2", "--n", "3", "--h", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["non_k_free"], "2");
    assert_eq!(value["k_free"], "2");
    assert_eq!(value["first_k_free"], "1001");
}

#[test]
fn gap_round_trip_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let path_str = path.to_str().unwrap();

    let out = kfree(&["gap", "--q", "2", "--k", "2", "--h", "0", "--out", path_str]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verified: true"));
    assert!(Path::new(path_str).exists());

    let out = kfree(&["verify-gap", path_str]);
    assert_eq!(out.status.code(), Some(0));

    // Round trip is bit-exact: saving the loaded certificate reproduces the
    // file.
    let text = std::fs::read_to_string(&path).unwrap();
    let cert = kfree_core::gap::GapCertificate::from_json_str(&text).unwrap();
    assert_eq!(cert.to_json_string(), text);

    // Tampering flips the verdict.
    let tampered = text.replacen("\"001\"", "\"101\"", 1);
    assert_ne!(tampered, text);
    std::fs::write(&path, tampered).unwrap();
    let out = kfree(&["verify-gap", path_str]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gap_q3_k3_verifies() {
    let out = kfree(&["gap", "--q", "3", "--k", "3", "--h", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verified: true"));
}

#[test]
fn spacing_small_grid() {
    let out = kfree(&[
        "spacing", "--q", "2,3", "--k", "2", "--n-max", "7", "--trials", "3", "--seed", "9",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn bounds_reports_breakdowns() {
    let out = kfree(&["bounds", "--q", "9", "--k", "2", "--n", "20", "--h", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let total = value["squarefree"]["total_coefficient"].as_f64().unwrap();
    assert!(total < 1.0);
}

#[test]
fn irred_cache_builds_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = kfree(&[
        "irred-cache", "--q", "3", "--max-d", "3", "--cache-root", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("q3").join("irred_d3.tbl").exists());
}
