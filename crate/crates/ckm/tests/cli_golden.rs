//! Golden tests for the command-line surface: documented invocations
//! must produce byte-identical output and the documented exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ckm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckm"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixtures() -> TempDir {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "line.tq", "arc a - - len inf\n");
    write(d, "wedge.tq", "node v\narc c v v len 1\narc t v - len inf\n");
    write(d, "wedge.iv", "t:0,1\nc:0,1\n");
    write(d, "units.iv", "a:0,1\na:1,2\na:2,3\n");
    write(d, "coarse.iv", "a:0,2\na:2,3\n");
    write(d, "affineA1.txt", "2\n2 -2\n-2 2\n");
    dir
}

#[test]
fn mult_table_is_concordant_for_the_affine_matrix() {
    let dir = fixtures();
    let out = ckm(
        dir.path(),
        &["mult", "--matrix", "affineA1.txt", "--max-height", "6", "--oracle", "both"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("MULT (1,1) 1\n"), "{text}");
    assert_eq!(text.lines().last(), Some("CONCORDANT"), "{text}");
    // Determinism: a second run is byte-identical.
    let again = ckm(
        dir.path(),
        &["mult", "--matrix", "affineA1.txt", "--max-height", "6", "--oracle", "both"],
    );
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn bracket_reduces_a_nested_generator_pair() {
    let dir = fixtures();
    let out = ckm(
        dir.path(),
        &["bracket", "--graph", "line.tq", "--expr", "[e(a:0,2), f(a:0,1)]"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "-1 * e(a:1,2)\n");
}

#[test]
fn bracket_reports_the_unresolvable_pair() {
    let dir = fixtures();
    write(
        dir.path(),
        "circle2.tq",
        "node v1\nnode v2\narc c1 v1 v2 len 1\narc c2 v2 v1 len 1\n",
    );
    let out = ckm(
        dir.path(),
        &["bracket", "--graph", "circle2.tq", "--expr", "[e(c1:0,1), e(c2:0,1)]"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "UNRESOLVABLE [e(c1:0,1), e(c2:0,1)]\n");
}

#[test]
fn cartan_prints_the_wedge_matrix_and_a_loop_diagram() {
    let dir = fixtures();
    let out = ckm(
        dir.path(),
        &["cartan", "--graph", "wedge.tq", "--set", "wedge.iv", "--dot", "out.dot"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "2\n2 -1\n-1 0\nIRREDUCIBLE\nDOT out.dot\n"
    );
    let dot = fs::read_to_string(dir.path().join("out.dot")).unwrap();
    assert_eq!(
        dot,
        "graph cartan {\n  a1 [label=\"t:0,1\"];\n  a2 [label=\"c:0,1\"];\n  a1 -- a2;\n  a2 -- a2;\n}\n"
    );
}

#[test]
fn cartan_flags_tangent_circles_but_still_exports() {
    let dir = fixtures();
    write(
        dir.path(),
        "tangent.tq",
        "node v\narc c1 v v len 1\narc c2 v v len 1\n",
    );
    write(dir.path(), "tangent.iv", "c1:0,1\nc2:0,1\n");
    let out = ckm(
        dir.path(),
        &["cartan", "--graph", "tangent.tq", "--set", "tangent.iv"],
    );
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("2\n0 -2\n-2 0\n"), "{text}");
    assert!(text.contains("NOT IRREDUCIBLE"), "{text}");
}

#[test]
fn check_axioms_passes_on_a_line_window() {
    let dir = fixtures();
    let out = ckm(
        dir.path(),
        &[
            "check-axioms",
            "--graph",
            "line.tq",
            "--grid",
            "1",
            "--window",
            "0",
            "3",
            "--max-runs",
            "2",
            "--samples",
            "50",
            "--seed",
            "11",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("AXIOM")).count(), 4);
    assert!(text.lines().all(|l| !l.contains("FAIL")), "{text}");
}

#[test]
fn verify_and_embed_succeed_on_a_line_refinement() {
    let dir = fixtures();
    let out = ckm(
        dir.path(),
        &["verify", "--graph", "line.tq", "--set", "units.iv", "--depth", "3"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("AXIOM presentation PASS"));
    let out = ckm(
        dir.path(),
        &[
            "embed", "--graph", "line.tq", "--set", "coarse.iv", "--into", "units.iv",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("EMBED e1 -> +[1, 1, 0]:[1]\n"), "{text}");
    assert_eq!(
        text.lines().last(),
        Some("HOMOMORPHISM verified on all generator pairs")
    );
}

#[test]
fn dot_writes_parallel_edges_for_double_bonds() {
    let dir = fixtures();
    let out = ckm(dir.path(), &["dot", "--matrix", "affineA1.txt"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "graph cartan {\n  a1 [label=\"α1\"];\n  a2 [label=\"α2\"];\n  a1 -- a2;\n  a1 -- a2;\n}\n"
    );
}

#[test]
fn usage_and_limit_exit_codes() {
    let dir = fixtures();
    let out = ckm(dir.path(), &["mult", "--matrix", "affineA1.txt"]);
    assert_eq!(out.status.code(), Some(2), "missing required flag");
    let out = ckm(dir.path(), &["mult", "--matrix", "affineA1.txt", "--max-height", "6", "--bogus"]);
    assert_eq!(out.status.code(), Some(2), "unknown flag");
    let out = ckm(
        dir.path(),
        &["mult", "--matrix", "affineA1.txt", "--max-height", "9", "--oracle", "serre"],
    );
    assert_eq!(out.status.code(), Some(3), "height over the guard rail");
    let out = ckm(
        dir.path(),
        &["bracket", "--graph", "line.tq", "--expr", "[e(a:0,2), f(a:0,1)"],
    );
    assert_eq!(out.status.code(), Some(2), "unbalanced expression");
}
