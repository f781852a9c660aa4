use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use specscale::io::{parse_matrix_file, read_matrix_file, MatrixSource};

fn specscale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specscale"))
        .args(args)
        .env_remove("SPECSCALE_THREADS")
        .output()
        .expect("run specscale")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SQUARE: &str = r#"{"n": 2, "A1": {"re": [[1, 0], [0, -1]]}, "A2": {"re": [[1, 0], [0, 1]]}, "comment": "flat square"}"#;

#[test]
fn gen_round_trips_every_kind() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["hermitian", "normal", "singular-pencil"] {
        let out = dir.path().join(format!("{kind}.json"));
        let o = specscale(&["gen", "--kind", kind, "--n", "4", "--seed", "18446744073709551615", "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let file = read_matrix_file(&out).unwrap();
        let again = dir.path().join("again.json");
        file.write(&again).unwrap();
        assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap(), "{kind}");
        assert_eq!(read_matrix_file(&again).unwrap(), file);
        assert_eq!(parse_matrix_file(&out).unwrap().dim(), 4);
        match (kind, &file.source) {
            ("normal", MatrixSource::Full(_)) | (_, MatrixSource::Pair(..)) => {}
            _ => panic!("{kind} written in the wrong form"),
        }
    }
}

#[test]
fn gen_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = ["a", "b", "c"].iter().map(|n| dir.path().join(n)).collect();
    for (p, seed) in paths.iter().zip(["5", "5", "6"]) {
        assert_eq!(specscale(&["gen", "--kind", "hermitian", "--n", "3", "--seed", seed, "--out", s(p)]).status.code(), Some(0));
    }
    let read = |p: &PathBuf| std::fs::read(p).unwrap();
    assert_eq!(read(&paths[0]), read(&paths[1]));
    assert_ne!(read(&paths[0]), read(&paths[2]));
}

#[test]
fn verify_exit_code_matches_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "square.json", SQUARE);
    let report = dir.path().join("report.json");
    let o = specscale(&["verify", "--input", s(&input), "--directions", "4", "--report", s(&report)]);
    let doc: Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    let all_passed = doc["payload"]["reports"].as_array().unwrap().iter().all(|r| r["passed"] == Value::Bool(true));
    assert_eq!(doc["passed"], Value::Bool(all_passed));
    assert_eq!(o.status.code(), Some(if all_passed { 0 } else { 1 }));
    assert!(all_passed);
    assert_eq!(doc["payload"]["reports"].as_array().unwrap().len(), 5);
    assert_eq!(doc["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_single_subject_on_ensemble() {
    let o = specscale(&[
        "verify", "--subject", "2.4", "--normal-matrices", "5", "--seed", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["payload"]["reports"][0]["subject"], "rmk-2.4");
    assert_eq!(doc["seed"], 3);
}

#[test]
fn faces_reports_the_square_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "square.json", SQUARE);
    let o = specscale(&["faces", "--input", s(&input)]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let matched = doc["payload"]["matched"].as_array().unwrap();
    assert_eq!(matched.len(), 2);
    for m in matched {
        assert_eq!(m["x_extent"].as_f64(), Some(0.5));
    }
}

#[test]
fn pencil_reports_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "one.json", r#"{"n":1, "A1": {"re":[[2]], "im":[[0]]}, "A2": {"re":[[1]], "im":[[0]]}}"#);
    let o = specscale(&["pencil", "--input", s(&input)]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    for spec in doc["payload"]["spectra"].as_array().unwrap() {
        let r = spec["real_subset"][0].as_f64().unwrap();
        assert!((r + 2.0).abs() < 1e-12, "{spec}");
    }
    assert_eq!(doc["payload"]["agreement"]["regular"], true);
}

#[test]
fn scale_writes_flat_square_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "square.json", SQUARE);
    let mesh = dir.path().join("square.obj");
    let report = dir.path().join("scale.json");
    let o = specscale(&["scale", "--input", s(&input), "--mesh", s(&mesh), "--report", s(&report)]);
    assert_eq!(o.status.code(), Some(0));
    let obj = std::fs::read_to_string(&mesh).unwrap();
    assert!(obj.contains("# degenerate: dim=2\n"));
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2);
    let first = std::fs::read(&report).unwrap();
    specscale(&["scale", "--input", s(&input), "--mesh", s(&mesh), "--report", s(&report)]);
    assert_eq!(first, std::fs::read(&report).unwrap());
}

#[test]
fn scale2d_accepts_negative_components() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "square.json", SQUARE);
    let o = specscale(&["scale2d", "--input", s(&input), "--t", "-3,4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((doc["payload"]["t"][0].as_f64().unwrap() + 0.6).abs() < 1e-15);
}

#[test]
fn exit_codes_classify_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write(dir.path(), "bad.json", "{\"n\": 2,\n \"A\": [");
    let non_hermitian = write(dir.path(), "nh.json", r#"{"n":2, "A1": {"re":[[0,1],[0,0]]}, "A2": {"re":[[1,0],[0,1]]}}"#);
    let wrong_dim = write(dir.path(), "dim.json", r#"{"n":3, "A": {"re":[[0,1],[0,0]]}}"#);
    let zero_a2 = write(dir.path(), "z.json", r#"{"n":2, "A": {"re":[[1,0],[0,2]]}}"#);
    let singular = write(dir.path(), "sing.json", r#"{"n":2, "A1": {"re":[[1,0],[0,0]]}, "A2": {"re":[[2,0],[0,0]]}}"#);
    let missing = dir.path().join("missing.json");

    let code = |args: &[&str]| specscale(args).status.code();
    assert_eq!(code(&["pencil", "--input", s(&bad_json)]), Some(2));
    assert_eq!(code(&["pencil", "--input", s(&non_hermitian)]), Some(2));
    assert_eq!(code(&["pencil", "--input", s(&wrong_dim)]), Some(2));
    assert_eq!(code(&["pencil", "--input", s(&zero_a2)]), Some(4));
    assert_eq!(code(&["faces", "--input", s(&zero_a2)]), Some(4));
    assert_eq!(code(&["faces", "--input", s(&singular)]), Some(3));
    assert_eq!(code(&["verify", "--input", s(&singular), "--subject", "2.5", "--directions", "2"]), Some(3));
    assert_eq!(code(&["verify", "--input", s(&singular), "--subject", "2.1", "--directions", "2"]), Some(0));
    assert_eq!(code(&["pencil", "--input", s(&singular)]), Some(0));
    assert_eq!(code(&["pencil", "--input", s(&missing)]), Some(5));
    assert_eq!(code(&["verify", "--subject", "9.9"]), Some(2));
    assert_eq!(code(&["pencil", "--input", s(&singular), "--tol", "2"]), Some(2));
    assert_eq!(code(&["nonsense"]), Some(2));

    let o = specscale(&["pencil", "--input", s(&non_hermitian)]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("A1"), "{err}");
    let o = specscale(&["pencil", "--input", s(&bad_json)]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn invalid_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_specscale"))
        .args(["verify", "--subject", "2.4", "--normal-matrices", "1"])
        .env("SPECSCALE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
