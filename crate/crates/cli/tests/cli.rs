use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(task: &str, config: &str, extra: &[&str], dir: &Path) -> (Output, Option<Value>) {
    let cfg = dir.join(if config.trim_start().starts_with('{') { "cfg.json" } else { "cfg.toml" });
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join("out");
    let output = Command::new(env!("CARGO_BIN_EXE_harmonics"))
        .arg(task)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    let report = std::fs::read_to_string(out.join("report.json")).ok().map(|t| serde_json::from_str(&t).unwrap());
    (output, report)
}

#[test]
fn entropy_of_the_heisenberg_example() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run("entropy", "group = \"heisenberg(1)\"\nf = \"3 - a - b\"\n", &[], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = report.unwrap();
    assert_eq!(report["result"]["entropy"].as_f64().unwrap(), 3f64.ln());
    assert_eq!(report["result"]["exact"], "log 3");
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn orders_test_on_the_free_group_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run("orders-test", r#"{"group": "free(2)"}"#, &[], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report.unwrap()["result"]["pass"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = run("entropy", "group = \"heisenberg(1)\"\nf = \"3 - a -\"\n", &[], dir.path());
    assert_eq!(malformed.0.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&malformed.0.stderr).contains("parse error"));
    let unknown = run("entropy", "group = \"z(1)\"\nfff = \"3\"\n", &[], dir.path());
    assert_eq!(unknown.0.status.code(), Some(2));
    let mismatch = run("walk", "task = \"entropy\"\ngroup = \"z(1)\"\n", &[], dir.path());
    assert_eq!(mismatch.0.status.code(), Some(2));
    let (out, report) = run("entropy", "group = \"heisenberg(1)\"\nf = \"3 - a - b^-1\"\n", &[], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report.unwrap()["error"]["kind"], "hypothesis");
    let capped = run("walk", "group = \"z(5)\"\n[caps]\nsupport_cap = 50\n", &[], dir.path());
    assert_eq!(capped.0.status.code(), Some(4));
}

#[test]
fn same_config_and_seed_give_identical_reports() {
    let config = "group = \"heisenberg(1)\"\nf = \"3 - a - b\"\n[factor]\nalpha = [\"1 + a\", \"3 - a - b\"]\nnSamples = 2000\nN = 12\n";
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run("factor-check", config, &["--seed", "5", "--jobs", "2"], a.path());
    run("factor-check", config, &["--seed", "5"], b.path());
    for name in ["report.json", "estimates.csv"] {
        let left = std::fs::read(a.path().join("out").join(name)).unwrap();
        let right = std::fs::read(b.path().join("out").join(name)).unwrap();
        assert_eq!(left, right, "{name}");
    }
}

#[test]
fn seed_flag_changes_the_estimate_and_the_hash() {
    let config = "group = \"heisenberg(1)\"\nf = \"3 - a - b\"\n[factor]\nalpha = [\"1 - b\"]\nnSamples = 2000\nN = 12\n";
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = run("factor-check", config, &["--seed", "1"], a.path()).1.unwrap();
    let rb = run("factor-check", config, &["--seed", "2"], b.path()).1.unwrap();
    assert_ne!(ra["config_hash"], rb["config_hash"]);
    let mc = |r: &Value| r["result"]["haar"]["rows"][0]["estimate"]["mc_mean"].clone();
    assert_ne!(mc(&ra), mc(&rb));
    assert_eq!(ra["result"]["haar"]["pass"], rb["result"]["haar"]["pass"]);
}

#[test]
fn corrupted_recipe_is_a_targeted_failure() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run("reproduce", "[reproduce]\ncorrupt_nu = true\nonly = [1, 11]\n", &[], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report = report.unwrap();
    assert_eq!(report["status"], "failed");
    assert_eq!(report["result"]["failed"], serde_json::json!([1]));
    let clean = run("reproduce", "[reproduce]\nonly = [1, 2, 11]\n", &[], dir.path());
    assert_eq!(clean.0.status.code(), Some(0));
}

#[test]
fn inverse_writes_csv_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run("inverse", "group = \"z(1)\"\nf = \"3 - a\"\n[inverse]\nN = 2\n", &[], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report.unwrap()["result"]["inverse"]["residual_l1_exact"], "1/27");
    let csv = std::fs::read_to_string(dir.path().join("out/increments.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn membership_reports_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let config = "group = \"heisenberg(1)\"\nf = \"3 - a - b\"\n[membership]\nalpha = [\"3 - a - b\", \"1\"]\n";
    let (_, report) = run("membership", config, &[], dir.path());
    let rows = report.unwrap()["result"]["membership"].clone();
    assert_eq!(rows[0]["verdict"], "member");
    assert_eq!(rows[1]["verdict"], "non_member");
    assert_eq!(rows[1]["witness"]["value_den"], "3");
}
