use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semiqt"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

#[test]
fn verify_parity_passes_three_claims() {
    let (code, v) = run_json(&["verify", "parity"]);
    assert_eq!(code, 0);
    assert_eq!(v["theory"], "parity");
    let claims = v["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 3);
    assert!(claims.iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_all_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let out = run(&["verify", "all", "--seed", "1729", "-o", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let reports: Vec<Value> = serde_json::from_slice(&ta).unwrap();
    assert_eq!(reports.len(), 7);
}

#[test]
fn verify_markdown_renders_tables() {
    let out = run(&["verify", "tropical", "--format", "md"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| claim | result | anchor |"));
    assert!(text.contains("selection_law"));
}

#[test]
fn unknown_theory_is_a_usage_error() {
    assert_eq!(run(&["verify", "nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["bell", "/nonexistent/config.json"]).status.code(), Some(2));
}

#[test]
fn parity_bell_has_a_field_lhv() {
    let (code, v) = run_json(&["bell", config("parity_bell.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["no_signalling"]["holds"], true);
    assert_eq!(v["field_lhv"]["found"], true);
    assert_eq!(v["field_lhv"]["solution"]["residual_zero"], true);
}

#[test]
fn pythagorean_chsh_is_nonlocal() {
    let (code, v) = run_json(&["bell", config("chsh_pythagorean.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["no_signalling"]["holds"], true);
    assert_eq!(v["nonneg_lhv"]["local"], false);
    assert_eq!(v["nonneg_lhv"]["certificate"]["margin"], "3093005043392/3814697265625");
    assert_eq!(v["chsh_oracle"]["normalised_margin"], "3093005043392/3814697265625");
    assert_eq!(v["nonneg_lhv"]["visibility"], "3814697265625/5361199787321");
}

#[test]
fn pr_box_table_input() {
    let (code, v) = run_json(&["bell", config("pr_box.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["nonneg_lhv"]["certificate"]["value"], "4");
    assert_eq!(v["nonneg_lhv"]["visibility"], "1/2");
}

#[test]
fn signalling_table_is_flagged() {
    let (code, v) = run_json(&["bell", config("signalling_table.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["no_signalling"]["holds"], false);
    assert!(v["no_signalling"]["witness"].is_object());
}

#[test]
fn non_normalised_measurement_is_a_domain_failure() {
    let text = std::fs::read_to_string(config("chsh_pythagorean.json")).unwrap();
    let mut cfg: Value = serde_json::from_str(&text).unwrap();
    cfg["measurements"][0][0] = json!([["1", "1"], ["0", "1"]]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    let out = run(&["bell", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-normalised"));
}

#[test]
fn simon_hsp_recovers_the_diagonal() {
    let (code, v) = run_json(&["hsp", config("simon.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"]["generators"], json!([[1, 1]]));
    assert_eq!(v["outcome"]["subgroup"], json!([[0, 0], [1, 1]]));
}

#[test]
fn hsp_rejects_non_subgroups() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(&path, r#"{"semiring":{"kind":"rational"},"group":[4],"hidden":[[0],[1]]}"#).unwrap();
    assert_eq!(run(&["hsp", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn phases_and_mermin() {
    let (code, v) = run_json(&["phases", "ffqt", "3", "1"]);
    assert_eq!(code, 0);
    assert_eq!((v["order"].clone(), v["cyclic_factors"].clone()), (json!(4), json!([4])));
    let (_, v) = run_json(&["phases", "padic", "3", "3"]);
    assert_eq!(v["order"], 36);
    let (code, v) = run_json(&["mermin", "5", "1"]);
    assert_eq!((code, v["feasible"].clone()), (0, json!(false)));
    let (_, v) = run_json(&["mermin", "7", "1"]);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["witness"]["solution_verified"], true);
    assert_eq!(run(&["mermin", "4", "1"]).status.code(), Some(2));
}

#[test]
fn budget_override_is_a_domain_failure() {
    let out = bin().args(["phases", "ffqt", "7", "2"]).env("SEMIQT_BUDGET", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn saved_run_config_replays() {
    let out = run(&["run", config("verify_parity.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let direct = run(&["verify", "parity", "--format", "md"]);
    assert_eq!(out.stdout, direct.stdout);
}
