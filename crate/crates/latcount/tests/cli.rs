//! End-to-end tests of the latcount binary: parsing, output formats,
//! exit codes, and thread-count transparency.

use std::path::PathBuf;
use std::process::{Command, Output};

fn write_instance(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latcount"))
        .args(args)
        .env_remove("LATCOUNT_THREADS")
        .output()
        .unwrap()
}

const EX1: &str = r#"{"A": [[1,1,3],[1,1,1]], "y": [5,3]}"#;
const EX2: &str = r#"{"A": [[1,2],[2,1]], "y": [7,5]}"#;
const K33: &str = r#"{"n": 6, "edges": [[1,4],[1,5],[1,6],[2,4],[2,5],[2,6],[3,4],[3,5],[3,6]]}"#;

#[test]
fn count_with_trace_prints_count_and_reduction() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "ex1.json", EX1);
    let out = run(&["count", "--input", path.to_str().unwrap(), "--trace"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "3");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("scaled coefficients"), "stderr: {err}");
    assert!(err.contains("subtract"), "stderr: {err}");
}

#[test]
fn check_against_oracles_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "ex2.json", EX2);
    let out = run(&["count", "--input", path.to_str().unwrap(), "--check"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
}

#[test]
fn zero_column_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "bad.json", r#"{"A": [[1,0]], "y": [1]}"#);
    let out = run(&["count", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn matching_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "k33.json", K33);
    let out = run(&["match", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "6");
    let out = run(&["match", "--uniform", "2", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "6");
}

#[test]
fn oracle_subcommand_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "ex1.json", EX1);
    for flag in ["--dp", "--brute"] {
        let out = run(&["oracle", flag, "--input", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "3");
    }
}

#[test]
fn json_output_is_thread_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "ex1.json", EX1);
    let normalize = |raw: &[u8]| -> serde_json::Value {
        let mut doc: serde_json::Value = serde_json::from_slice(raw).unwrap();
        let obj = doc.as_object_mut().unwrap();
        obj.remove("elapsed_ms");
        obj.remove("threads");
        doc
    };
    let one = run(&["count", "--format", "json", "--trace", "--threads", "1", "--input", path.to_str().unwrap()]);
    let eight = run(&["count", "--format", "json", "--trace", "--threads", "8", "--input", path.to_str().unwrap()]);
    assert!(one.status.success() && eight.status.success());
    assert_eq!(normalize(&one.stdout), normalize(&eight.stdout));
    let doc = normalize(&one.stdout);
    assert_eq!(doc["count"], "3");
    assert_eq!(doc["N"], 6);
    assert_eq!(doc["scale"], "36");
}

#[test]
fn threads_env_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(&dir, "ex1.json", EX1);
    let out = Command::new(env!("CARGO_BIN_EXE_latcount"))
        .args(["count", "--input", path.to_str().unwrap()])
        .env("LATCOUNT_THREADS", "4")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "3");
}

#[test]
fn bmatch_subcommand_with_partition() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"n": 6,
        "edges": [[1,4],[1,5],[1,6],[2,4],[2,5],[2,6],[3,4],[3,5],[3,6]],
        "b": [1,1,1,1,1,1],
        "partition": [[1,2,3],[4,5,6]]}"#;
    let path = write_instance(&dir, "k33b.json", body);
    let out = run(&["bmatch", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "6");
}

#[test]
fn stdin_and_bench_paths() {
    use std::io::Write as _;
    let dir = tempfile::tempdir().unwrap();
    write_instance(&dir, "a_ex1.json", EX1);
    write_instance(&dir, "b_k33.json", K33);
    let out = run(&["bench", "--input", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("a_ex1.json"), "table: {table}");
    assert!(table.contains("b_k33.json"), "table: {table}");

    let mut child = Command::new(env!("CARGO_BIN_EXE_latcount"))
        .args(["count"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(EX2.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
}
