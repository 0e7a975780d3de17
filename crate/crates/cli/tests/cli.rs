use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn succinv(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_succinv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

const PATH5: &str = r#"{"n":5,"edges":[[0,1],[1,2],[2,3],[3,4]]}"#;

#[test]
fn verify_figure_fixture_passes() {
    let out = succinv(&["verify", "figure2"], "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out);
    assert_eq!(rep["passed"], true);
    assert_eq!(rep["suites"][0]["suite"], "figure2");
}

#[test]
fn spantree_report_on_disconnected_graph() {
    let g = r#"{"n":6,"edges":[[0,1],[1,2],[3,4]]}"#;
    let out = succinv(&["spantree", "--in", "-", "--r", "2"], g);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    assert_eq!(rep["components"], 3);
    assert_eq!(rep["spanning_tree"], true);
    assert_eq!(rep["F"].as_array().unwrap().len(), 5);
    assert!(rep["max_degree"].as_u64().unwrap() <= 3);
    assert!(rep["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn random_output_is_byte_identical() {
    let a = succinv(&["random", "tree", "--n", "50", "--seed", "7"], "");
    let b = succinv(&["random", "tree", "--n", "50", "--seed", "7"], "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let g = report(&a);
    assert_eq!(g["n"], 50);
    assert_eq!(g["edges"].as_array().unwrap().len(), 49);
}

#[test]
fn report_digest_ignores_timings() {
    let a = report(&succinv(&["successor", "--in", "-", "--r", "1"], PATH5));
    let b = report(&succinv(&["successor", "--in", "-", "--r", "1"], PATH5));
    assert_eq!(a["report_digest"], b["report_digest"]);
    assert_eq!(a["input_digest"], b["input_digest"]);
    assert_eq!(a["order"].as_array().unwrap().len(), 5);
    assert!(a["bound"].is_string());
}

#[test]
fn kwalk_emits_expansion() {
    let rep = report(&succinv(&["kwalk", "--in", "-"], PATH5));
    assert_eq!(rep["passed"], true);
    assert_eq!(rep["succ"].as_array().unwrap().len(), 4);
    assert!(rep["E"].is_object() && rep["P"].is_object());
}

#[test]
fn encodings_and_posets() {
    let m = report(&succinv(&["encode", "matching", "--in", "-"], PATH5));
    assert_eq!(m["passed"], true);
    assert_eq!(m["tables"]["position_offset"], 1);
    let s = report(&succinv(&["encode", "starforest", "--in", "-"], PATH5));
    assert_eq!(s["host"]["n"], 3 * 5 + 3 * 4);
    let p = report(&succinv(&["poset", "chains", "--in", "-"], r#"{"n":3,"le":[[0,1]]}"#));
    assert_eq!(p["width"], 2);
}

#[test]
fn clique_transform_doubles_width() {
    let e = r#"{"op":"edge","rel":"E","from":1,"to":2,"child":{"op":"oplus","left":{"op":"leaf","color":1},"right":{"op":"leaf","color":2}}}"#;
    let rep = report(&succinv(&["clique", "transform", "--in", "-"], e));
    assert_eq!(rep["passed"], true);
    assert_eq!(rep["expression"]["width"], 4);
    let ev = report(&succinv(&["clique", "eval", "--in", "-"], e));
    assert_eq!(ev["relations"]["E"], serde_json::json!([[0, 1]]));
}

#[test]
fn bad_input_exits_with_two() {
    let out = succinv(&["colnum", "--in", "-"], r#"{"n":3,"edges":[[0,1],[1,1]]}"#);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("self-loop") && err.contains("edges[1]"), "{err}");
    assert_eq!(succinv(&["colnum"], "").status.code(), Some(2));
    assert_eq!(succinv(&["verify", "nosuch"], "").status.code(), Some(2));
    let out = succinv(&["clique", "eval", "--in", "-"], r#"{"op":"leaf"}"#);
    assert_eq!(out.status.code(), Some(2));
}
