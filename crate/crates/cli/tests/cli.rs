//! End-to-end command-line checks: exit codes, output files, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_omcert")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn limit_of_square_writes_four_tuples() {
    let out = run(&["limit", "--diagram", data("square_2x2.json").to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("tuples: 4"));
    assert!(text.contains("(2, 1, 2)"));
}

#[test]
fn limit_of_polytope_diagram_reports_h_and_v() {
    let out = run(&[
        "limit",
        "--diagram",
        data("segment_product.json").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kind: polytope"));
    assert!(text.contains("vertices: 4"));
}

#[test]
fn malformed_compose_table_exits_two() {
    let out = run(&[
        "limit",
        "--diagram",
        data("malformed_compose.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: malformed-category:"), "{err}");
}

#[test]
fn enumerate_counts_match() {
    let out = run(&["enumerate", "--functor", "exp", "--points", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# functor=exp n=3 count=7"));

    let out = run(&["enumerate", "--functor", "G", "--points", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# functor=G n=3 count=18"));

    let out = run(&["enumerate", "--functor", "lambda", "--points", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: enumeration-too-large:"));
}

#[test]
fn certify_p_passes_and_is_byte_deterministic() {
    let dir = std::env::temp_dir();
    let out1 = dir.join("omcert_cli_test_p1.json");
    let out2 = dir.join("omcert_cli_test_p2.json");
    for out in [&out1, &out2] {
        let o = run(&[
            "certify",
            "--diagram",
            data("square_2x2.json").to_str().unwrap(),
            "--functor",
            "P",
            "--seed",
            "42",
            "--samples",
            "15",
            "--eps",
            "1/10,1/100",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b);

    // A different seed changes the report.
    let out3 = dir.join("omcert_cli_test_p3.json");
    let o = run(&[
        "certify",
        "--diagram",
        data("square_2x2.json").to_str().unwrap(),
        "--functor",
        "P",
        "--seed",
        "43",
        "--samples",
        "15",
        "--eps",
        "1/10,1/100",
        "--out",
        out3.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let c = std::fs::read(&out3).unwrap();
    assert_ne!(a, c);
}

#[test]
fn certify_cc_on_equalizer_fails_with_witness() {
    let o = run(&[
        "certify",
        "--diagram",
        data("square_equalizer.json").to_str().unwrap(),
        "--functor",
        "cc",
        "--seed",
        "7",
        "--samples",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("projection mismatch"), "{text}");
}

#[test]
fn certify_rejects_bad_pairings_and_grids() {
    let o = run(&[
        "certify",
        "--diagram",
        data("square_2x2.json").to_str().unwrap(),
        "--functor",
        "cc",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&[
        "certify",
        "--diagram",
        data("square_2x2.json").to_str().unwrap(),
        "--functor",
        "P",
        "--seed",
        "1",
        "--eps",
        "0,1/10",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["certify", "--functor", "P"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn limit_of_equalizer_is_the_diagonal() {
    let out = run(&[
        "limit",
        "--diagram",
        data("square_equalizer.json").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kind: polytope"));
    assert!(text.contains("vertices: 2"));
    assert!(text.contains("(0, 0, 0)"));
    assert!(text.contains("(1, 1, 1)"));
}

#[test]
fn certify_cc_on_product_square_passes() {
    let o = run(&[
        "certify",
        "--diagram",
        data("segment_product.json").to_str().unwrap(),
        "--functor",
        "cc",
        "--seed",
        "11",
        "--samples",
        "6",
        "--eps",
        "1/10,1/100",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("pass"));
}
