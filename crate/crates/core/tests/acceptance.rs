//! One line per headline criterion; the suites themselves live in
//! `succinv::verify` so the command-line tool runs the same code.
//!
//! Lines go straight to stderr so they show up without `--nocapture`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::sync::Mutex;

use succinv::verify::{run_suite, SuiteReport, DEFAULT_SEED};

// criteria run one at a time so the timing checks see an idle machine
static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(label: &str, suite: &str) -> SuiteReport {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let rep = run_suite(suite, DEFAULT_SEED).expect("known suite");
    let mut out = format!("\n[{label}] {}\n", rep.summary());
    for c in &rep.checks {
        let tight = c
            .tightest
            .as_ref()
            .map(|t| format!(" tightest {} vs {} ({})", t.lhs, t.rhs, t.instance))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "    {} {}: {}/{} ok{tight}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.instances - c.violations,
            c.instances
        );
        if let Some(f) = &c.first_failure {
            let _ = writeln!(out, "        first failure: {f}");
        }
    }
    let _ = std::io::stderr().lock().write_all(out.as_bytes());
    rep
}

fn assert_passes(label: &str, suite: &str) {
    let rep = criterion(label, suite);
    assert!(rep.passed, "{label} failed: {}", rep.summary());
}

#[test]
fn connected_tree_bound() {
    assert_passes("connected: adm_r(G+F,L) <= 2 col_2r(G,L), 500 graphs, < 5 min", "connected");
}

#[test]
fn main_technical_bound() {
    assert_passes("main-technical: adm_r(G+F,L) <= 2 + 2 col_2r(G,L), 200 disconnected graphs", "main-technical");
}

#[test]
fn degree_and_spanning() {
    assert_passes("degree: T spanning tree with max degree <= 3, 1000 graphs", "degree");
}

#[test]
fn generalised_colouring_inequality() {
    assert_passes("gen-col: adm_r <= col_r <= adm_r^r, 500 pairs, r <= 4", "gen-col");
}

#[test]
fn elimination_tree_properties() {
    assert_passes("eltree: properties 1-4, all connected graphs n <= 6 plus 2000 random pairs", "eltree");
}

#[test]
fn cube_path() {
    assert_passes("cube-path: 500 trees n <= 200, tree distance <= 3, S-bar degree <= 2", "cube-path");
}

#[test]
fn k_walk_interpretation() {
    assert_passes("kwalk: 300 trees, k = 3, interpretation = successor of w_1", "kwalk");
}

#[test]
fn order_clique() {
    assert_passes("order-clique: 200 expressions, 2k colours, E kept, < total, < 1 min", "order-clique");
}

#[test]
fn dilworth() {
    assert_passes("dilworth: 300 posets n <= 18, cover = width, lifted order total", "dilworth");
}

#[test]
fn encodings_round_trip() {
    assert_passes("encodings: 300 graphs per encoding, round trip and host class", "encodings");
}

#[test]
fn density_bounds() {
    assert_passes("density: col-vs-nabla (100) and stability-lex (50), r in {0,1}", "density");
}

#[test]
fn figure_fixture() {
    assert_passes("figure2: drawn elimination tree, U and T", "figure2");
}

#[test]
fn performance() {
    assert_passes("perf: build_tree_U n = 2e5 < 5 s, doubling ratio < 2.6", "perf");
}
