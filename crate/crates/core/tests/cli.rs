use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fitting-synth"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synth_writes_report_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let txt = dir.path().join("r.txt");
    let o = run(&[
        "synth",
        "--input",
        s(&data("heisenberg.json")),
        "--output",
        s(&out),
        "--text-report",
        s(&txt),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    let text = fs::read_to_string(&txt).unwrap();
    assert!(text.contains("Q1"), "{text}");
    let v = run(&["verify", "--report", s(&out)]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn overrides_reach_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&[
        "synth",
        "--input",
        s(&data("heisenberg.json")),
        "--output",
        s(&out),
        "--degree",
        "2",
        "--nmax",
        "20",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["options"]["degree"], 2);
    assert_eq!(report["options"]["n_max"], 20);
}

#[test]
fn tampered_report_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let mut report: Value =
        serde_json::from_str(&fs::read_to_string(data("overlap.report.json")).unwrap()).unwrap();
    let cones = report["final_bound"]["cones"].as_array_mut().unwrap();
    let first = cones[0].clone();
    let mut flipped = first.clone();
    for g in flipped["generators"].as_array_mut().unwrap() {
        for x in g.as_array_mut().unwrap() {
            *x = Value::from(-x.as_i64().unwrap());
        }
    }
    cones.push(flipped);
    let path = dir.path().join("bad.json");
    fs::write(&path, serde_json::to_string(&report).unwrap()).unwrap();
    let o = run(&["verify", "--report", s(&path)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line"), "{err}");
}

#[test]
fn decompose_lists_factors() {
    let o = run(&["decompose", "--input", s(&data("overlap.json"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let d: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ranks: Vec<i64> = d["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["group"]["rank"].as_i64().unwrap())
        .collect();
    assert_eq!(ranks.iter().filter(|&&r| r == 1).count(), 2);
    assert!(ranks.iter().all(|&r| r <= 1));
}

#[test]
fn malformed_json_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"schema\": 1,\n  \"class_two\": [\n").unwrap();
    let o = run(&[
        "synth",
        "--input",
        s(&path),
        "--output",
        s(&dir.path().join("o.json")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn schema_violation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"schema": 7, "class_two": {"n": 2, "r": 1, "comm": []}}"#,
    )
    .unwrap();
    let o = run(&[
        "synth",
        "--input",
        s(&path),
        "--output",
        s(&dir.path().join("o.json")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let path = dir.path().join("extra.json");
    fs::write(&path, r#"{"schema": 1, "unknown": true}"#).unwrap();
    assert_eq!(
        run(&["decompose", "--input", s(&path)]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_error_exits_two() {
    assert_eq!(run(&["synth"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
