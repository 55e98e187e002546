use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ddt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddt")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

/// Flux with the given (i, j, n) entries, as a config file.
fn config(dir: &Path, name: &str, entries: &[(usize, usize, i64)], extra: &str) -> String {
    let mut flux = vec![0i64; 21];
    let mut idx = 0;
    for i in 1..=7 {
        for j in i + 1..=7 {
            if let Some(&(_, _, n)) = entries.iter().find(|e| e.0 == i && e.1 == j) {
                flux[idx] = n;
            }
            idx += 1;
        }
    }
    let text = format!("{{\"flux\": {flux:?}{extra}}}");
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn check_passed(r: &Value, name: &str) -> bool {
    r["checks"].as_array().unwrap().iter().any(|c| c["name"] == name && c["passed"] == true)
}

#[test]
fn verify_passes_and_is_deterministic() {
    let a = ddt(&["verify", "--float-samples", "1000", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    let r = report(&a);
    assert_eq!(r["status"], "ok");
    let ids = r["summary"]["identities"].as_array().unwrap();
    assert_eq!(ids.len(), 12);
    assert!(ids.iter().all(|i| i["reduced_to_zero"] == true && i.get("elapsed_seconds").is_none()));
    let b = ddt(&["verify", "--float-samples", "1000", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn mutated_identity_fails_verification() {
    let out = ddt(&["verify", "--mutate", "A5", "--float-samples", "5", "--pairing-samples", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let a5 = r["summary"]["identities"].as_array().unwrap().iter().find(|i| i["id"] == "A5").unwrap().clone();
    assert_eq!(a5["reduced_to_zero"], false);
    assert!(a5["witness"]["monomial"].is_string());
    let bad = ddt(&["verify", "--mutate", "A5:nowhere"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn instanton_obstruction_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", &[(1, 2, 1)], "");
    let out = ddt(&["instanton", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["status"], "numerical_failure");
    assert!(r["error"].as_str().unwrap().contains("no instanton"));

    let cfg = config(dir.path(), "d.json", &[(1, 2, 1), (4, 7, 1)], "");
    let out = ddt(&["instanton", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("instanton.snap").exists());
    assert!(dir.path().join("instanton.json").exists());
}

#[test]
fn flow_then_cylinder() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let cfg = config(dir.path(), "c.json", &[(1, 2, 1), (4, 7, 1)], ", \"flow\": {\"scheme\": \"rk4\", \"steps\": 40}");
    let out = ddt(&["flow", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(check_passed(&report(&out), "functional-non-decreasing"));
    let csv = std::fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,functional,residual_l2,theta_min"));
    assert_eq!(csv.lines().count(), 42);

    let out = ddt(&["cylinder", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["summary"]["order_table"]["ratios"].as_array().unwrap().len(), 2);
    assert!(check_passed(&r, "second-order-refinement"));

    // Same config and seed, same bytes.
    let again = dir.path().join("again");
    ddt(&["flow", "--config", &cfg, "--out", again.to_str().unwrap()]);
    assert_eq!(csv, std::fs::read_to_string(again.join("trajectory.csv")).unwrap());
}

#[test]
fn continuation_reports_obstruction_for_cubic_flux() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", &[(1, 2, 1), (4, 7, 2), (5, 6, -1)], "");
    let out = ddt(&["continue", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert!(r["summary"]["reason"].as_str().unwrap().contains("cohomological obstruction"));
    assert_eq!(r["summary"]["steps"].as_array().unwrap().len(), 1);

    let cfg = config(dir.path(), "d.json", &[(1, 2, 1), (4, 7, 1)], ", \"perturbation\": 0.01");
    let out = ddt(&["continue", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn moment_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.json", &[(1, 2, 1), (4, 7, 1)], ", \"seed\": 3, \"moment_samples\": 2");
    let out = ddt(&["moment", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert!(check_passed(&report(&out), "moment-map-derivative"));
}

#[test]
fn decompose_single_blade() {
    let out = ddt(&["decompose", "--form", "1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let u = r["summary"]["u"].as_array().unwrap();
    assert!((u[2].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"grid\": {\"axes\": [3, 1], \"n\": 4}}").unwrap();
    assert_eq!(ddt(&["flow", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, "{\"no_such_field\": 1}").unwrap();
    assert_eq!(ddt(&["flow", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ddt(&["decompose", "--form", "1 2 3"]).status.code(), Some(2));
    assert_eq!(ddt(&["cylinder"]).status.code(), Some(2));
}
