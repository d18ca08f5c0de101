use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hl_core::calculus::{check_derivation, derivation_from_json};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn hlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlc"))
        .args(args)
        .env_remove("HLC_BUDGET_NODES")
        .env_remove("HLC_BUDGET_DEPTH")
        .output()
        .expect("hlc runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn derive_exit_codes() {
    assert_eq!(code(&hlc(&["derive", path(&fixture("sgr-a.seq"))])), 0);
    assert_eq!(code(&hlc(&["derive", path(&fixture("four-edge.seq"))])), 0);
    assert_eq!(code(&hlc(&["derive", path(&fixture("ps.seq"))])), 1);
    assert_eq!(code(&hlc(&["derive", "--budget-nodes", "1", path(&fixture("four-edge.seq"))])), 3);
    assert_eq!(code(&hlc(&["derive"])), 2);
    assert_eq!(code(&hlc(&["derive", "/nonexistent.seq"])), 2);
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_hlc"))
        .args(["derive", path(&fixture("four-edge.seq"))])
        .env("HLC_BUDGET_NODES", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_hlc"))
        .args(["derive", path(&fixture("four-edge.seq"))])
        .env("HLC_BUDGET_DEPTH", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn repeated_attachment_is_a_positioned_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.hgf");
    fs::write(&bad, "nodes: u v\nedge e0 a/2 : u u\n").unwrap();
    let o = hlc(&["oracle", "--check", "l1", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.hgf:2:"), "{err}");
    assert!(err.contains("repeat"), "{err}");
}

#[test]
fn emitted_tree_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tree.json");
    assert_eq!(code(&hlc(&["derive", path(&fixture("four-edge.seq")), "--emit-tree", out.to_str().unwrap()])), 0);
    let t = derivation_from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    check_derivation(&t).unwrap();
    assert_eq!(t.rule_counts()[0], 4);
}

#[test]
fn sequent_survives_a_print_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let o = hlc(&["print", "--canonical", path(&fixture("four-edge.seq"))]);
    assert_eq!(code(&o), 0);
    let again = dir.path().join("again.seq");
    fs::write(&again, stdout(&o)).unwrap();
    assert_eq!(code(&hlc(&["derive", again.to_str().unwrap()])), 0);
    let twice = hlc(&["print", "--canonical", again.to_str().unwrap()]);
    assert_eq!(stdout(&twice), stdout(&o));
}

#[test]
fn sgr_file_round_trips_byte_identically() {
    let file = fixture("sgr.hlg");
    let o = hlc(&["print", "--canonical", path(&file)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), fs::read_to_string(&file).unwrap());
    let o = hlc(&["print", path(&fixture("sgr.hrg"))]);
    assert_eq!(stdout(&o), fs::read_to_string(fixture("sgr.hrg")).unwrap());
}

#[test]
fn membership_both_grammar_kinds() {
    let sgr = fixture("sgr.hlg");
    assert_eq!(code(&hlc(&["member", "--grammar", path(&sgr), "--graph", path(&fixture("abb.hgf"))])), 0);
    assert_eq!(code(&hlc(&["member", "--grammar", path(&sgr), "--graph", path(&fixture("ab.hgf"))])), 1);
    let hrg = fixture("sgr.hrg");
    assert_eq!(code(&hlc(&["member", "--hrg", path(&hrg), "--graph", path(&fixture("abb.hgf"))])), 0);
    assert_eq!(code(&hlc(&["member", "--hrg", path(&hrg), "--graph", path(&fixture("ab.hgf"))])), 1);
    assert_eq!(code(&hlc(&["member", "--graph", path(&fixture("ab.hgf"))])), 2);
    let hgr1 = fixture("hgr1.hlg");
    assert_eq!(code(&hlc(&["member", "--grammar", path(&hgr1), "--graph", path(&fixture("four-edge.hgf"))])), 0);
    assert_eq!(code(&hlc(&["member", "--grammar", path(&fixture("hgr2.hlg")), "--graph", path(&fixture("triangle.hgf"))])), 1);
}

#[test]
fn generated_strings() {
    let o = hlc(&["hrg-generate", "--grammar", path(&fixture("sgr.hrg")), "--max-edges", "7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn converted_grammar_accepts_the_tree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("syntree.hlg");
    assert_eq!(code(&hlc(&["convert", "--in", path(&fixture("syntree.hrg")), "--out", out.to_str().unwrap()])), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("map l/2 -> p_l/2"), "{text}");
    let o = hlc(&["member", "--grammar", out.to_str().unwrap(), "--graph", path(&fixture("syntree.hgf"))]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn iso_and_match() {
    let four = fixture("four-edge.hgf");
    assert_eq!(code(&hlc(&["iso", path(&four), path(&four), "--witness"])), 0);
    assert_eq!(code(&hlc(&["iso", path(&four), path(&fixture("triangle.hgf"))])), 1);
    let o = hlc(&["match", "--host", path(&fixture("abb.hgf")), "--pattern", path(&fixture("split.hgf")), "--count"]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = hlc(&["match", "--host", path(&fixture("b.hgf")), "--pattern", path(&fixture("split.hgf")), "--count"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (1, "0".to_string()));
}

#[test]
fn model_check_verdicts() {
    let val = fixture("sgr.val");
    assert_eq!(code(&hlc(&["model-check", "--valuation", path(&val), "--sequent", path(&fixture("sgr-a.seq"))])), 0);
    let o = hlc(&["model-check", "--valuation", path(&val), "--sequent", path(&fixture("ps.seq"))]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (1, "false".to_string()));
}

#[test]
fn oracles() {
    let tri = fixture("triangle.hgf");
    assert_eq!(code(&hlc(&["oracle", "--check", "bipartite", path(&tri)])), 1);
    assert_eq!(code(&hlc(&["oracle", "--check", "regular", path(&tri)])), 0);
    assert_eq!(code(&hlc(&["oracle", "--check", "l1", path(&tri)])), 0);
    assert_eq!(code(&hlc(&["oracle", "--check", "l1", path(&fixture("abb.hgf"))])), 1);
    assert_eq!(code(&hlc(&["oracle", "--check", "bipartite", path(&fixture("four-edge.hgf"))])), 1);
    assert_eq!(code(&hlc(&["oracle", "--check", "nope", path(&tri)])), 2);
}

fn without_timing(v: &mut serde_json::Value) {
    v.as_object_mut().unwrap().remove("elapsed_ms");
}

#[test]
fn suite_reports_are_deterministic() {
    let run = || {
        let o = hlc(&["suite", "cut", "--seed", "7", "--json"]);
        assert_eq!(code(&o), 0);
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        without_timing(&mut v);
        v
    };
    let a = run();
    assert_eq!(a, run());
    assert_eq!(a["seed"], 7);
    assert!(a["passed"].as_u64().unwrap() >= 100);
    assert_eq!(code(&hlc(&["suite", "nope"])), 2);
}

#[test]
fn sgr_suite_counts() {
    let o = hlc(&["suite", "sgr", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counts"]["accepted"], 4);
}
