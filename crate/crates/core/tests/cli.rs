//! End-to-end runs of the `trimat` command through `cli::run`.

mod common;

use std::path::{Path, PathBuf};

use common::*;
use tempfile::TempDir;
use trimat::cli::{self, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use trimat::textio::{self, Object};
use trimat::Matrix3;

const EX5: &str = "field rational\n\
A: matrix 3x3x2 { layer 1: [1 2 4; 8 1 1; 3 1 0] layer 2: [3 1 5; 0 2 1; 1 7 4] }\n\
s: mscalar 2 [2 -1]\n";

const SINGULAR: &str =
    "field rational\nB: matrix 2x2x2 {\n  layer 1: [1 2; 3 4]\n  layer 2: [1 2; 2 4]\n}\n";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn trimat(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("trimat").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn det_prints_multiscalar() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "ex5.m3", EX5);
    let run = trimat(&["det", s(&f), "A"]);
    assert_eq!(run.code, EXIT_OK, "{}", run.stderr);
    assert_eq!(run.stdout, "mscalar 2 [25 -6]\n");
}

#[test]
fn inv_prints_parseable_inverse() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "ex5.m3", EX5);
    let run = trimat(&["inv", s(&f), "A"]);
    assert_eq!(run.code, EXIT_OK, "{}", run.stderr);
    assert!(
        run.stdout.contains("layer 2: [-1/6 -31/6 3/2;"),
        "{}",
        run.stdout
    );
    let parsed = textio::parse_object(&run.stdout, rational()).unwrap();
    assert_eq!(parsed, Object::Matrix(inverse_3x3x2_fixture(rational())));
}

#[test]
fn adj_add_and_smul() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "ex5.m3", EX5);
    let adj = trimat(&["adj", s(&f), "A"]);
    assert_eq!(adj.code, EXIT_OK);
    assert!(
        adj.stdout.contains("layer 1: [-1 4 -2; 3 -12 31; 5 5 -15]"),
        "{}",
        adj.stdout
    );

    let sum = trimat(&["add", s(&f), "A", "A"]);
    let doubled = fixture_3x3x2(rational())
        .add(&fixture_3x3x2(rational()))
        .unwrap();
    assert_eq!(
        textio::parse_object(&sum.stdout, rational()).unwrap(),
        Object::Matrix(doubled)
    );

    let scaled = trimat(&["smul", s(&f), "s", "A"]);
    assert_eq!(scaled.code, EXIT_OK, "{}", scaled.stderr);
    assert!(
        scaled.stdout.contains("layer 1: [2 4 8; 16 2 2; 6 2 0]"),
        "{}",
        scaled.stdout
    );
    assert!(
        scaled
            .stdout
            .contains("layer 2: [-3 -1 -5; 0 -2 -1; -1 -7 -4]"),
        "{}",
        scaled.stdout
    );
}

#[test]
fn inverse_then_product_is_identity() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "ex5.m3", EX5);
    let inv_path = dir.path().join("inv.m3");
    let run = trimat(&["inv", s(&f), "A", "-o", s(&inv_path)]);
    assert_eq!(run.code, EXIT_OK, "{}", run.stderr);
    assert!(run.stdout.is_empty());
    let doc = textio::parse_document(&std::fs::read_to_string(&inv_path).unwrap()).unwrap();
    assert!(doc.get("A_inv").is_some());

    for (a, b) in [("A", "A_inv"), ("A_inv", "A")] {
        let run = trimat(&["mul", s(&f), a, b, "--with", s(&inv_path)]);
        assert_eq!(run.code, EXIT_OK, "{}", run.stderr);
        let got = textio::parse_object(&run.stdout, rational()).unwrap();
        assert_eq!(
            got,
            Object::Matrix(Matrix3::identity(3, 2, rational()).unwrap())
        );
    }
}

#[test]
fn json_input_is_accepted() {
    let dir = TempDir::new().unwrap();
    let doc = textio::parse_document(EX5).unwrap();
    let f = write(&dir, "ex5.json", &textio::document_to_json(&doc));
    let run = trimat(&["det", s(&f), "A"]);
    assert_eq!(run.stdout, "mscalar 2 [25 -6]\n");
}

#[test]
fn singular_layer_is_a_domain_error_naming_the_layer() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "singular.m3", SINGULAR);
    let run = trimat(&["inv", s(&f), "B"]);
    assert_eq!(run.code, EXIT_DOMAIN);
    assert!(run.stdout.is_empty());
    assert!(run.stderr.contains("layer(s) 2"), "{}", run.stderr);
    assert!(!run.stderr.contains("layer(s) 1"), "{}", run.stderr);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "ex5.m3", EX5);
    let bad = write(
        &dir,
        "bad.m3",
        "field rational\nA: matrix 2x2x1 { layer 1: [1 2; 3] }\n",
    );
    assert_eq!(trimat(&["det", s(&f), "Missing"]).code, EXIT_USAGE);
    assert_eq!(trimat(&["det", s(&f), "s"]).code, EXIT_USAGE);
    assert_eq!(trimat(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(
        trimat(&["census", "--q", "4", "-n", "1", "-p", "1"]).code,
        EXIT_USAGE
    );
    let run = trimat(&["det", s(&bad), "A"]);
    assert_eq!(run.code, EXIT_USAGE);
    assert!(run.stderr.contains("line 2"), "{}", run.stderr);
    let shape = write(
        &dir,
        "shape.m3",
        "field rational\nA: matrix 2x3x1 { layer 1: [1 2 3; 4 5 6] }\n",
    );
    assert_eq!(trimat(&["det", s(&shape), "A"]).code, EXIT_DOMAIN);
}

#[test]
fn census_prints_counts() {
    let run = trimat(&["census", "--q", "2", "-n", "2", "-p", "2"]);
    assert_eq!(run.code, EXIT_OK);
    assert_eq!(run.stdout, "total=256 gl=36\n");
}

#[test]
fn verify_is_byte_identical_for_identical_argv() {
    let args = [
        "verify",
        "--field",
        "gf7",
        "-n",
        "2",
        "-p",
        "2",
        "--samples",
        "50",
        "--seed",
        "7",
    ];
    let first = trimat(&args);
    let second = trimat(&args);
    assert_eq!(first.code, EXIT_OK, "{}", first.stdout);
    assert_eq!(first.stdout, second.stdout);
    let lines: Vec<&str> = first.stdout.lines().collect();
    assert_eq!(lines[0], "verify field=gf 7 n=2 p=2 samples=50 seed=7");
    let order: Vec<&str> = lines[1..5]
        .iter()
        .map(|l| l.split(' ').next().unwrap())
        .collect();
    assert_eq!(order, ["add-group", "semigroup", "closure", "gl-group"]);
    assert_eq!(lines[5], "summary: 4/4 laws passed");

    let one = trimat(&[
        "verify", "--field", "rational", "-n", "3", "-p", "2", "--seed", "1", "--law", "gl-group",
    ]);
    assert_eq!(one.code, EXIT_OK);
    assert!(one.stdout.contains("summary: 1/1 laws passed"));
    assert_eq!(
        trimat(&["verify", "--field", "gf7", "-n", "2", "-p", "2", "--law", "nope", "--seed", "1"])
            .code,
        EXIT_USAGE
    );
}

#[test]
fn seed_defaults_to_environment() {
    // The only test that touches the variable; every other verify run passes --seed.
    std::env::set_var(cli::SEED_ENV, "42");
    let from_env = trimat(&[
        "verify",
        "--field",
        "gf5",
        "-n",
        "2",
        "-p",
        "1",
        "--samples",
        "20",
    ]);
    std::env::remove_var(cli::SEED_ENV);
    let explicit = trimat(&[
        "verify",
        "--field",
        "gf5",
        "-n",
        "2",
        "-p",
        "1",
        "--samples",
        "20",
        "--seed",
        "42",
    ]);
    assert!(from_env
        .stdout
        .starts_with("verify field=gf 5 n=2 p=1 samples=20 seed=42\n"));
    assert_eq!(from_env.stdout, explicit.stdout);
}
