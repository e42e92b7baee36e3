use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn randgroup(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randgroup"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn digest(path: &Path) -> String {
    hex::encode(Sha256::digest(std::fs::read(path).unwrap()))
}

#[test]
fn sample_writes_nine_relators_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = randgroup(dir.path(), &["sample", "--n", "2", "--d", "0.5", "--L", "4", "--seed", "42", "--out", "p.json"]);
    assert!(out.status.success());
    let p = read_json(&dir.path().join("p.json"));
    assert_eq!(p["relators"].as_array().unwrap().len(), 9);
    assert_eq!(p["L"], 4);
    assert_eq!(p["seed"], 42);

    let m = read_json(&dir.path().join("p.json.manifest.json"));
    assert_eq!(m["command"], "sample");
    assert_eq!(m["seed"], 42);
    assert_eq!(m["outputs"][0]["sha256"], digest(&dir.path().join("p.json")).as_str());
}

#[test]
fn sample_rerun_has_same_digest() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--n", "3", "--d", "0.3", "--L", "9", "--seed", "5", "--out", "a.json"];
    randgroup(dir.path(), &args);
    let first = digest(&dir.path().join("a.json"));
    randgroup(dir.path(), &args);
    assert_eq!(first, digest(&dir.path().join("a.json")));
}

#[test]
fn sample_without_n_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = randgroup(dir.path(), &["sample", "--d", "0.5", "--L", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
}

#[test]
fn sample_over_cap_is_a_budget_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = randgroup(dir.path(), &["sample", "--n", "2", "--d", "0.9", "--L", "40"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn certify_positive_case() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("r.json"), r#"{"n":1,"relators":[[1],[-1]]}"#).unwrap();
    let out = randgroup(dir.path(), &["certify", "--in", "r.json", "--emit-witnesses", "c.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("CERTIFIED"));
    let c = read_json(&dir.path().join("c.json"));
    let entries = c["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["signs"], serde_json::json!([1]));
    assert_eq!(entries[0]["relator_index"], 0);
    assert_eq!(entries[1]["relator_index"], 1);
}

#[test]
fn certify_negative_case_reports_failing_pair() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("r.json"), r#"{"n":2,"relators":[[1],[2],[-1,-2]]}"#).unwrap();
    let out = randgroup(dir.path(), &["certify", "--in", "r.json", "--emit-witnesses", "c.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("NO-CERTIFICATE"));
    let c = read_json(&dir.path().join("c.json"));
    assert_eq!(c["failing"]["signs"], serde_json::json!([1, -1]));
    assert_eq!(c["failing"]["i"], 2);
}

#[test]
fn certify_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"n\": 2, \"relators\": [[1,").unwrap();
    assert_eq!(randgroup(dir.path(), &["certify", "--in", "bad.json"]).status.code(), Some(2));
    std::fs::write(dir.path().join("range.json"), r#"{"n":1,"relators":[[2]]}"#).unwrap();
    assert_eq!(randgroup(dir.path(), &["certify", "--in", "range.json"]).status.code(), Some(2));
    assert_eq!(randgroup(dir.path(), &["certify", "--in", "missing.json"]).status.code(), Some(2));
}

#[test]
fn certify_generator_budget() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("r.json"), r#"{"n":3,"relators":[[1]]}"#).unwrap();
    let out = randgroup(dir.path(), &["certify", "--in", "r.json", "--max-generators", "2"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn automaton_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(randgroup(d, &["automaton", "sign", "--signs", "+,+", "--i", "1", "--out", "a.json"]).status.success());
    let a = read_json(&d.join("a.json"));
    assert_eq!(a["sigma_empty"], serde_json::json!([1]));

    let out = randgroup(d, &["automaton", "count", "--in", "a.json", "--L", "5"]);
    let counts = serde_json::from_slice::<Value>(&out.stdout).unwrap();
    let last = &counts["counts"][4];
    assert_eq!((last["L"].as_u64(), last["words"].as_str()), (Some(5), Some("16")));

    let out = randgroup(d, &["automaton", "accepts", "--in", "a.json", "--word", "a1 a2 a2"]);
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap()["accepts"], true);
    let out = randgroup(d, &["automaton", "accepts", "--in", "a.json", "--word", "[2, 1]"]);
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap()["accepts"], false);

    let out = randgroup(d, &["automaton", "largeness", "--in", "a.json", "--lambda", "0.5"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["large"].as_bool(), v["threshold"].as_u64()), (Some(true), Some(2)));

    let out = randgroup(d, &["automaton", "growth", "--in", "a.json", "--max-L", "10"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["density_lower"].as_f64().unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
}

#[test]
fn blocks_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("p0.json"), r#"{"n":2,"relators":[[1,2,1,2],[2,1,2,1]]}"#).unwrap();
    std::fs::write(d.join("p1.json"), r#"{"n":2,"relators":[[1,2,-1],[1,2,2]]}"#).unwrap();

    assert!(randgroup(d, &["blocks", "associate", "--B", "2", "--in", "p0.json", "--out", "a.json"]).status.success());
    let a = read_json(&d.join("a.json"));
    assert_eq!(a["n"], 6);
    assert_eq!(a["block_alphabet"]["partition_rule"], "lex-precedes-inverse");
    assert_eq!(a["relators"].as_array().unwrap().len(), 2);

    assert!(randgroup(d, &["blocks", "pair", "--B", "2", "--P", "1", "--in", "p1.json", "--out", "pr.json"]).status.success());
    let pr = read_json(&d.join("pr.json"));
    // a1 A1 pairs with a1 a2 a2 and with itself; a1 a2 a2 pairs with nothing
    assert_eq!(pr["pairs"], serde_json::json!([[0, 0], [0, 1]]));

    assert!(randgroup(d, &["blocks", "build", "--B", "2", "--in", "p1.json", "--out", "b.json"]).status.success());
    assert_eq!(read_json(&d.join("b.json"))["relators"].as_array().unwrap().len(), 2);

    assert_eq!(randgroup(d, &["blocks", "associate", "--B", "2", "--in", "p1.json"]).status.code(), Some(2));
    assert_eq!(randgroup(d, &["blocks", "build", "--B", "2", "--P", "0", "--in", "p1.json"]).status.code(), Some(2));
}

#[test]
fn stats_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = randgroup(d, &["stats", "concentration", "--c", "10", "--a", "3", "--b", "5", "--trials", "1000", "--csv", "c.csv"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(d.join("c.csv")).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with(
        "L,c_L,a_L,b_L,mean_exact,var_exact,cheb_bound,empirical_in_window,q_exact,q_bernoulli,hits_distinct_mean,envelope_ratio"
    ));
    assert!(text.lines().nth(1).unwrap().starts_with(",10,3,5,1.5,1.05,"));

    let out = randgroup(d, &["stats", "intersect", "--signs", "++", "--i", "1", "--d", "0.3", "--L", "6", "--trials", "10"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let out = randgroup(d, &["stats", "distinct", "--b", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pipeline_validation_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("empty.toml"), "n = 2\nd = 0.5\nL = []\ntrials = 5\n").unwrap();
    let out = randgroup(d, &["pipeline", "--config", "empty.toml", "--csv", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("L must list"));

    std::fs::write(d.join("s.toml"), "n = 2\nd = 0.5\nL = [4, 6]\ntrials = 10\nseed = 3\n").unwrap();
    assert!(randgroup(d, &["pipeline", "--config", "s.toml", "--csv", "s.csv"]).status.success());
    let m = read_json(&d.join("s.csv.manifest.json"));
    assert_eq!(m["params"]["resolved"]["seed"], 3);
    let first = digest(&d.join("s.csv"));
    assert_eq!(m["outputs"][0]["sha256"], first.as_str());
    // rerun from the manifest's parameters
    std::fs::remove_file(d.join("s.csv")).unwrap();
    assert!(randgroup(d, &["pipeline", "--config", "s.toml", "--csv", "s.csv"]).status.success());
    assert_eq!(digest(&d.join("s.csv")), first);

    let text = std::fs::read_to_string(d.join("s.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * (10 + 1));
    assert!(text.lines().next().unwrap().ends_with("hit_mm_1,hit_mm_2"));
}
