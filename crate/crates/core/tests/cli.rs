use std::path::Path;
use std::process::{Command, Output};

use dimlab::generators::{ifs_attractor, IfsSpec};
use dimlab::rational::Q;
use dimlab::DyadicTree;
use serde_json::Value;

fn dimlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimlab"))
        .args(args)
        .env_remove("DIMLAB_BUDGET_CELLS")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn error_code(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("JSON error object on stderr");
    v["error"]["code"].as_str().unwrap().to_string()
}

fn gen_cantor(dir: &Path, depth: u32) -> std::path::PathBuf {
    let path = dir.join(format!("cantor{depth}.tree"));
    let out = dimlab(&["gen", "--ifs", "r=1/3", "t=0,2/3", "--depth", &depth.to_string(), "-o", p(&path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn gen_matches_library_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_cantor(dir.path(), 12);
    let first = std::fs::read(&path).unwrap();
    let expected = ifs_attractor(&IfsSpec::two_map(Q::new(1, 3)).unwrap(), 12).unwrap();
    assert_eq!(DyadicTree::from_text(std::str::from_utf8(&first).unwrap()).unwrap(), expected);

    let again = gen_cantor(dir.path(), 12);
    assert_eq!(std::fs::read(again).unwrap(), first);

    let out = dimlab(&["gen", "--reciprocal", "--depth", "16"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("dyadic-tree v1 depth=16 span=1"));
}

#[test]
fn invalid_specs_exit_2() {
    let out = dimlab(&["gen", "--ifs", "r=1.5", "t=0", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "SPEC_INVALID");

    let out = dimlab(&["gen", "--depth", "8"]);
    assert_eq!(out.status.code(), Some(2));

    let out = dimlab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "USAGE");
}

#[test]
fn sums_of_cantor_sets() {
    let dir = tempfile::tempdir().unwrap();
    let c = gen_cantor(dir.path(), 10);
    let sum = dir.path().join("sum.tree");
    let report = dir.path().join("sum.json");
    let out = dimlab(&["sum", p(&c), p(&c), "--level", "10", "-o", p(&sum), "--report", p(&report)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = DyadicTree::from_text(&std::fs::read_to_string(&sum).unwrap()).unwrap();
    assert_eq!(t.span(), 2);
    assert_eq!(t.level(10).to_vec(), (0..2 * 1024 - 1).collect::<Vec<u64>>());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["report"]["count_exact"], 2047);
    assert_eq!(r["report"]["bracket"][0], 1023.5);

    let copy = dir.path().join("copy.tree");
    assert!(dimlab(&["sum", p(&c), "-k", "1", "-o", p(&copy)]).status.success());
    assert_eq!(std::fs::read(&copy).unwrap(), std::fs::read(&c).unwrap());

    let three = dir.path().join("three.tree");
    assert!(dimlab(&["sum", p(&c), "-k", "3", "-o", p(&three)]).status.success());
    let t = DyadicTree::from_text(&std::fs::read_to_string(&three).unwrap()).unwrap();
    assert_eq!(t.span(), 3);
}

#[test]
fn sum_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let c10 = gen_cantor(dir.path(), 10);
    let c8 = gen_cantor(dir.path(), 8);
    let out = dimlab(&["sum", p(&c10), p(&c8)]);
    assert_eq!(out.status.code(), Some(2));

    let empty = dir.path().join("empty.tree");
    std::fs::write(&empty, DyadicTree::empty(1, 6).unwrap().to_text()).unwrap();
    let dest = dir.path().join("empty-sum.tree");
    let out = dimlab(&["sum", p(&empty), p(&empty), "-o", p(&dest)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let t = DyadicTree::from_text(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert!(t.is_empty());
}

#[test]
fn budget_guard_exits_3_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("big.tree");
    let out = Command::new(env!("CARGO_BIN_EXE_dimlab"))
        .args(["gen", "--reciprocal", "--depth", "20", "-o", p(&dest)])
        .env("DIMLAB_BUDGET_CELLS", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_code(&out), "RESOURCE");
    assert!(!dest.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    let out = dimlab(&["--budget-cells", "1000", "gen", "--reciprocal", "--depth", "20"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn analyze_reports_estimates_profiles_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let c = gen_cantor(dir.path(), 24);
    let json = dir.path().join("a.json");
    let csv = dir.path().join("a.csv");
    let out = dimlab(&["analyze", p(&c), "--box", "16,24", "--lower", "8", "--json", p(&json), "--csv", p(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let slope = v["estimates"].as_array().unwrap().iter().find(|e| e["kind"] == "box_slope").unwrap();
    let value = slope["value"].as_f64().unwrap();
    assert!((0.61..=0.66).contains(&value), "{value}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("set,kind,n,log2_count,value\n"));
    assert!(text.contains("cantor24,box_slope,16,"));

    let full = dir.path().join("full.tree");
    std::fs::write(&full, DyadicTree::full(1, 12).unwrap().to_text()).unwrap();
    let out = dimlab(&["analyze", p(&full), "--profile", "0.1,5"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["profile"]["I"], serde_json::json!([0, 1, 2, 3, 4, 5, 6, 7]));

    let full20 = dir.path().join("full20.tree");
    std::fs::write(&full20, DyadicTree::full(1, 20).unwrap().to_text()).unwrap();
    let out = dimlab(&["analyze", p(&full20), "--profile", "0.1", "--covering"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["covering"]["uniform"]["fired"], true);
    assert_eq!(v["covering"]["uniform"]["holds"], true);

    let out = dimlab(&["analyze", p(&full), "--box", "4,30"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "RANGE");
}

#[test]
fn difference_and_distance_sets() {
    let dir = tempfile::tempdir().unwrap();
    let c = gen_cantor(dir.path(), 8);
    let out = dimlab(&["diff", p(&c)]);
    assert!(out.status.success());
    let t = DyadicTree::from_text(&String::from_utf8_lossy(&out.stdout)).unwrap();
    // C − C = [−1, 1], shifted by the largest index
    assert_eq!(t.level(8).len(), 2 * 255 + 1);

    let dest = dir.path().join("dist.tree");
    let out = dimlab(&["dist", p(&c), "-d", "2", "-o", p(&dest)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = DyadicTree::from_text(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(t.span(), 2);
    assert!(t.level(8).contains(0));
}

#[test]
fn config_pipeline_matches_explicit_commands() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    std::fs::write(
        &config,
        r#"{
            "name": "cantor-plus-cantor",
            "generator": {"type": "ifs", "r": "1/3", "translations": [0, "2/3"]},
            "pipeline": [{"op": "sum", "k": 2}],
            "depth": 9
        }"#,
    )
    .unwrap();
    let via_config = dimlab(&["--config", p(&config), "gen"]);
    assert!(via_config.status.success(), "{}", String::from_utf8_lossy(&via_config.stderr));

    let c = gen_cantor(dir.path(), 9);
    let direct = dimlab(&["sum", p(&c), "-k", "2"]);
    assert_eq!(via_config.stdout, direct.stdout);

    std::fs::write(&config, r#"{"budget_cells": 0}"#).unwrap();
    assert_eq!(dimlab(&["--config", p(&config), "gen", "--reciprocal"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = dimlab(&["verify", "nonexistent"]);
    assert_eq!(out.status.code(), Some(2));

    let out = dimlab(&["verify", "sumset"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"][0]["id"], 5);

    let out = dimlab(&["verify", "growth"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["criteria"][0]["measured"]["upper_strictly_increasing"], true);
    assert_eq!(out.status.code(), Some(if v["passed"] == true { 0 } else { 1 }));
}
