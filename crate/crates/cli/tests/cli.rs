use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn absix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_absix")).args(args).output().expect("binary runs")
}

fn corpus_file(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.atlas.json"))
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_shipped_file() {
    let o = absix(&["validate", &corpus_file("a1")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn validate_corrupted_pairing() {
    let text = std::fs::read_to_string(corpus_file("a1")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    let y = &mut doc["strata"][0];
    y["pairings"][0] = serde_json::json!([["0"]]);
    y["pairings"][2] = serde_json::json!([["0"]]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.atlas.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = absix(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("PairingNotPerfect")), "{}", stdout(&o));
}

#[test]
fn validate_missing_file() {
    let o = absix(&["validate", "/nonexistent/x.atlas.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.atlas.json");
    std::fs::write(&path, "{\"dimension\": 1, \"bogus\": true}").unwrap();
    let o = absix(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compute_a1_text() {
    let o = absix(&["compute", &corpus_file("a1"), "--what", "all", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("== absoluteIC"));
    assert!(out.contains("verdict: true"));
}

#[test]
fn compute_an2_absic_json() {
    let o = absix(&["compute", "@an:n=2", "--what", "absic", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    let degrees = v["tables"]["absoluteIC"]["degrees"].as_array().unwrap();
    let got: Vec<(i64, i64, i64, i64)> = degrees
        .iter()
        .flat_map(|d| {
            let n = d["degree"].as_i64().unwrap();
            d["weights"].as_array().unwrap().iter().flat_map(move |w| {
                w["hodge"].as_array().unwrap().iter().map(move |h| {
                    (n, h["p"].as_i64().unwrap(), h["q"].as_i64().unwrap(), h["dim"].as_i64().unwrap())
                })
            })
        })
        .collect();
    assert_eq!(got, vec![(0, 0, 0, 1), (4, 2, 2, 1)]);
}

#[test]
fn compute_gm_times_a1_criteria() {
    let o = absix(&["compute", "@gm_times_a1", "--what", "criteria"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: false"));
    assert!(out.contains("cond2 degree 1: fails"));
    assert!(out.lines().any(|l| l.starts_with("failing degrees: 1")));
}

#[test]
fn compute_degree_filter() {
    let o = absix(&["compute", "@a1", "--what", "absic", "--format", "json", "--degree", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tables"]["absoluteIC"]["degrees"].as_array().unwrap().len(), 1);
}

#[test]
fn compute_is_deterministic() {
    let a = absix(&["compute", "@surface_resolution", "--format", "json"]);
    let b = absix(&["compute", "@surface_resolution", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn compute_invalid_atlas_exits_one() {
    let text = std::fs::read_to_string(corpus_file("a1")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["strata"][0]["pairings"][0] = serde_json::json!([["0"]]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.atlas.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = absix(&["compute", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compute_unknown_corpus_item() {
    let o = absix(&["compute", "@no_such_thing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_lists_and_writes() {
    let dir = tempfile::tempdir().unwrap();
    let o = absix(&["corpus", "--write", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let lines = stdout(&o).lines().count();
    assert!(lines >= 8);
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let v = absix(&["validate", path.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "{}", path.display());
        let shipped = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(path.file_name().unwrap());
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(shipped).unwrap());
    }
}
