use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pcw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn gen_cone_lists_every_inequality() {
    let o = pcw(&["gen-cone", "paper-4-2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains("\\le")).count(), 32);
    assert_eq!(out.lines().filter(|l| l.ends_with("\\ge 0")).count(), 8);
    assert!(out.contains("# 32 nontrivial, 8 nonnegativity"));

    let o = pcw(&["--format", "json", "gen-cone", "paper-4-2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nontrivial"], 32);
    assert_eq!(v["total"], 40);
    assert_eq!(v["inequalities"][0]["kind"], "single-type1");
}

#[test]
fn gen_cone_binary() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.json", r#"{"q":2,"rows":1,"cols":3,"entries":[[1,1,1]]}"#);
    let o = pcw(&["gen-cone", &h]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("f_1 \\le ( f_2 + f_3 )"));
    assert!(out.contains("# 3 nontrivial, 3 nonnegativity"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.json", "{\"q\":3,\n");
    let o = pcw(&["gen-cone", &h]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = pcw(&["gen-cone", "no-such-file.json"]);
    assert_eq!(code(&o), 2);

    let bad_entry = write(dir.path(), "e.json", r#"{"q":3,"rows":1,"cols":2,"entries":[[1,3]]}"#);
    assert_eq!(code(&pcw(&["gen-cone", &bad_entry])), 2);
}

#[test]
fn check_accepts_and_rejects() {
    let o = pcw(&["check", "paper-4-2", "paper-f"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("pseudocodeword: yes"));

    let dir = tempfile::tempdir().unwrap();
    let outside = write(dir.path(), "f.json", "[[3,0,0,0],[0,0,0,0]]");
    let o = pcw(&["check", "paper-4-2", &outside]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("cone violation"), "{}", stdout(&o));

    let odd = write(dir.path(), "g.json", "[[1,1,1,1],[0,0,0,0]]");
    let o = pcw(&["--format", "json", "check", "paper-4-2", &odd]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pseudocodeword"], false);
}

#[test]
fn lift_trace_shows_snapshots() {
    let o = pcw(&["lift", "paper-hs", "paper-fhat", "--trace"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("M' = 4, M = 10"));
    assert!(out.contains("step 1 (row 1)"));
    assert!(out.contains("[1 2 2 0]"));
    assert!(out.contains("type one"));
}

#[test]
fn lift_of_zero_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "z.json", "[[0,0,0,0],[0,0,0,0]]");
    let o = pcw(&["lift", "paper-4-2", &zero]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("cover of degree 1"));
}

#[test]
fn lift_rejects_non_pseudocodewords() {
    let dir = tempfile::tempdir().unwrap();
    let odd = write(dir.path(), "f.json", "[[1,1,1,1],[0,0,0,0]]");
    let o = pcw(&["lift", "paper-4-2", &odd]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("syndrome"), "{}", stderr(&o));
}

#[test]
fn lift_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cover.json");
    let dot = dir.path().join("cover.dot");
    let o = pcw(&["lift", "paper-4-2", "paper-f", "--out", out.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph"));

    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["M"], 10);
    assert!(doc["trace"].as_array().is_some_and(|t| !t.is_empty()));

    let o = pcw(&["--format", "json", "verify", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["matrix"], serde_json::json!([[2, 2, 2, 2], [2, 2, 0, 0]]));
}

#[test]
fn verify_fixture_cover() {
    let o = pcw(&["verify", "paper-cover-16"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("valid cover of degree 4"));
    assert!(out.contains("[2 2 2 2]"));
}

#[test]
fn verify_names_failing_checks() {
    let src = pcw_core::fixtures::source("paper-cover-16").unwrap();
    let mut doc: Value = serde_json::from_str(src).unwrap();
    doc["labels"][0][0] = serde_json::json!(2);
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c.json", &doc.to_string());
    let o = pcw(&["verify", &path]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("parity check fails at v_{1,"), "{}", stderr(&o));

    let mut doc: Value = serde_json::from_str(src).unwrap();
    doc["perms"]["1,1"] = serde_json::json!([1, 1, 2, 3]);
    let path = write(dir.path(), "p.json", &doc.to_string());
    let o = pcw(&["verify", &path]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not a permutation"), "{}", stderr(&o));
}

#[test]
fn theorem_checks_pass() {
    let o = pcw(&["theorems", "--necessity", "2", "paper-4-2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("violations 0"));

    let o = pcw(&["--format", "json", "theorems", "--sufficiency", "2", "paper-4-2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["theorem"], "3-sufficiency");
    assert_eq!(v["violations"], serde_json::json!([]));
}

#[test]
fn budget_overrun_exits_three() {
    let o = pcw(&["--budget", "10", "enumerate", "--degree", "3", "paper-4-2"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn enumerate_small_degree() {
    let o = pcw(&["enumerate", "--degree", "1", "paper-4-2"]);
    assert_eq!(code(&o), 0);
    // degree-1 covers give the nine codewords
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[[")).count(), 9);
}

#[test]
fn approx_scales_to_integers() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.json", r#"[["1/2","1/2","1/2","1/2"],["1/2","1/2",0,0]]"#);
    let o = pcw(&["approx", "paper-4-2", &z]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("pseudocodeword: yes"));

    let o = pcw(&["--seed", "7", "approx", "paper-4-2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("c F - Z = 0: true"));
}
