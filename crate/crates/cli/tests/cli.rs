use std::path::Path;
use std::process::{Command, Output};

use mht_core::extremal::NormEstimate;

fn mht(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mht")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn gowers_of_ones_prints_one() {
    let out = mht(&["gowers", "--n-domain", "64", "--d", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1.0\n");
}

#[test]
fn bump_verify_passes_by_default() {
    let out = mht(&["bump-verify"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = doc["certification"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn violated_contract_exits_one_and_records_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("bumps.json");
    let out = mht(&["bump-verify", "--tol-telescoping", "0", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out_path.exists());
    let record = dir.path().join("bumps.json.violation.json");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(record).unwrap()).unwrap();
    assert!(doc["violation"].as_str().unwrap().contains("telescoping"));
}

#[test]
fn curve_is_normalized_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = mht(&[
            "curve",
            "--k",
            "1",
            "--exponents",
            "2,2",
            "--ratios",
            "16,32,64,128,256,512,1024,2048,4096,8192,16384",
            "--seed",
            "7",
            "--workers",
            "1",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(path).unwrap()
    };
    let text = run("a.csv");
    assert!(text.starts_with("# config: {"));
    assert!(text.contains("\"seed\":7"));
    let normalized = csv_column(&text, "normalized");
    assert_eq!(normalized.len(), 11);
    assert!(normalized.iter().all(|v| v.parse::<f64>().unwrap() <= 1.0));
    let lower = csv_column(&text, "lower_bound");
    assert!(lower.iter().all(|v| v.parse::<f64>().unwrap() <= 3.8));
    assert_eq!(text, run("b.csv"));
}

#[test]
fn norm_search_json_reverifies() {
    let out = mht(&["norm-search", "--k", "2", "--R", "4", "--n-domain", "16", "--seed", "5", "--max-iter", "50"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["config"]["seed"], 5);
    let est: NormEstimate = serde_json::from_value(doc["estimate"].clone()).unwrap();
    assert_eq!(est.extremizers.len(), 3);
    assert!(est.verify().unwrap() < 1e-9);
}

#[test]
fn config_file_supplies_command_and_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(&cfg, "command = \"tree-stats\"\nseed = 3\nn-domain = 48\nR = 8.0\ndelta = 0.02\n").unwrap();
    let out = mht(&["--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["config"]["n-domain"], 48);
    assert_eq!(doc["cover"]["check"]["coverage"], true);
    // flags override the file
    let out = mht(&["--config", cfg.to_str().unwrap(), "--seed", "4"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["config"]["seed"], 4);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(mht(&["curve"]).status.code(), Some(2));
    assert_eq!(mht(&["norm-search", "--seed", "1", "--exponents", "2,3"]).status.code(), Some(2));
    assert_eq!(mht(&["vn-check", "--seed", "1", "--n-domain", "30"]).status.code(), Some(2));
    assert_eq!(mht(&["transform", "--seed", "1", "--r", "4", "--R", "2"]).status.code(), Some(2));
    assert_eq!(mht(&["--bogus"]).status.code(), Some(2));
    assert_eq!(mht(&[]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "sead = 3\n").unwrap();
    assert_eq!(mht(&["gowers", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(mht(&["gowers", "--config", Path::new("/nonexistent.toml").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn vn_check_and_transform_run() {
    let out = mht(&["vn-check", "--seed", "2", "--k", "3", "--n-domain", "17", "--trials", "5", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(csv_column(&stdout(&out), "holds"), vec!["true"; 5]);
    let out = mht(&["transform", "--seed", "1", "--k", "2", "--n-domain", "10", "--R", "3"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let bound = &doc["trivial_bound"];
    assert!(bound["lhs"].as_f64().unwrap() <= bound["rhs"].as_f64().unwrap());
}

#[test]
fn transform_reads_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.json");
    std::fs::write(&input, r#"[{"offset": 0, "values": [[1.0, 0.0]]}]"#).unwrap();
    let out = mht(&["transform", "--input", input.to_str().unwrap(), "--R", "1", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // H(δ_0)(x) = 1/(-x) at x = ±1
    let text = stdout(&out);
    assert_eq!(csv_column(&text, "x"), vec!["-1", "0", "1"]);
    assert_eq!(csv_column(&text, "re"), vec!["1.0", "0.0", "-1.0"]);
}

#[test]
fn help_lists_defaults() {
    let text = stdout(&mht(&["--help"]));
    for needle in ["--tol-odd", "1e-14", "--tol-telescoping", "1e-10", "--n-domain", "--a-max", "--format"] {
        assert!(text.contains(needle), "missing {needle}");
    }
}
