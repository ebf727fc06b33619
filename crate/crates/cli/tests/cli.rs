use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("dspec-cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn dspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dspec")).args(args).output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = dspec(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn coeffs(v: &Value) -> Vec<String> {
    v["terms"].as_array().unwrap().iter().map(|t| t["coeff"].as_str().unwrap().to_string()).collect()
}

const TREE2: &str = r#"{"nodes":["r","a"],"parent":{"a":"r","r":null}}"#;

#[test]
fn forest_coproduct_has_three_cuts() {
    let f = scratch("tree2.json", TREE2);
    let v = ok_json(&["coproduct", "--species", "forest", f.to_str().unwrap()]);
    assert_eq!(coeffs(&v), ["1", "1", "1"]);
    let point = &v["terms"][1];
    assert_eq!(point["left"], point["right"]);
}

#[test]
fn set_coproduct_is_binomial() {
    let f = scratch("set3.json", r#"{"elements":["a","b","c"]}"#);
    let v = ok_json(&["coproduct", "--species", "set", f.to_str().unwrap()]);
    // Terms are ordered by left key, which orders by size.
    assert_eq!(coeffs(&v), ["1", "3", "3", "1"]);
}

#[test]
fn empty_structure_gives_unit_tensor_unit() {
    let f = scratch("empty.json", r#"{"elements":[]}"#);
    let v = ok_json(&["coproduct", "--species", "poset", f.to_str().unwrap()]);
    assert_eq!(coeffs(&v), ["1"]);
    assert_eq!(v["terms"][0]["left"], "poset:00");
    assert_eq!(v["terms"][0]["right"], "poset:00");
}

#[test]
fn forest_antipodes() {
    let point = scratch("point.json", r#"{"nodes":["r"]}"#);
    let v = ok_json(&["antipode", "--species", "forest", point.to_str().unwrap()]);
    assert_eq!(coeffs(&v), ["-1"]);

    let tree = scratch("tree2-antipode.json", TREE2);
    let v = ok_json(&["antipode", "--species", "forest", tree.to_str().unwrap()]);
    // Two isolated points sort before the two-node tree.
    assert_eq!(coeffs(&v), ["1", "-1"]);

    let empty = scratch("empty-forest.json", r#"{"nodes":[]}"#);
    let v = ok_json(&["antipode", "--species", "forest", empty.to_str().unwrap()]);
    assert_eq!(coeffs(&v), ["1"]);
}

#[test]
fn antipode_of_non_monoidal_species_exits_4() {
    let f = scratch("chain2.json", r#"{"elements":["a","b"],"leq":[["a","b"]]}"#);
    let out = dspec(&["antipode", "--species", "linear_order", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn non_convex_restriction_exits_3() {
    let f = scratch("chain3.json", r#"{"elements":["a","b","c"],"leq":[["a","b"],["b","c"]],"restrict":["a","c"]}"#);
    let out = dspec(&["coproduct", "--species", "poset", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not convex"));
}

#[test]
fn convex_restriction_is_applied() {
    let f =
        scratch("chain3-convex.json", r#"{"elements":["a","b","c"],"leq":[["a","b"],["b","c"]],"restrict":["b","c"]}"#);
    let v = ok_json(&["coproduct", "--species", "poset", f.to_str().unwrap()]);
    assert_eq!(coeffs(&v).len(), 3);
}

#[test]
fn parse_errors_exit_2() {
    let f = scratch("broken.json", r#"{"elements":"#);
    assert_eq!(dspec(&["coproduct", "--species", "set", f.to_str().unwrap()]).status.code(), Some(2));
    let f = scratch("wrong-shape.json", r#"{"vertices":["a"]}"#);
    assert_eq!(dspec(&["coproduct", "--species", "set", f.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(dspec(&["table", "--species", "hypergraph"]).status.code(), Some(2));
    assert_eq!(dspec(&["table", "--species", "set", "--size", "0"]).status.code(), Some(2));
}

#[test]
fn invalid_structure_exits_3() {
    let f = scratch("cycle.json", r#"{"elements":["a","b"],"leq":[["a","b"],["b","a"]]}"#);
    assert_eq!(dspec(&["coproduct", "--species", "poset", f.to_str().unwrap()]).status.code(), Some(3));
}

fn statuses(v: &Value) -> Vec<(String, String)> {
    v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["suite"].as_str().unwrap().to_string(), s["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn graph_decomposition_passes() {
    let v = ok_json(&["check", "--species", "graph", "--which", "decomposition", "-n", "3", "--size", "3"]);
    assert_eq!(statuses(&v), [("decomposition".to_string(), "pass".to_string())]);
    assert_eq!(v["ok"], true);
}

#[test]
fn poset_segal_is_an_expected_failure() {
    let v = ok_json(&["check", "--species", "poset", "--which", "segal"]);
    assert_eq!(statuses(&v), [("segal".to_string(), "expected-fail: pass".to_string())]);
    let witness = &v["suites"][0]["report"]["results"][0]["witness"];
    assert!(witness["kind"].is_string());
}

#[test]
fn set_decalage_passes() {
    let v = ok_json(&["check", "--species", "set", "--which", "decalage"]);
    for (suite, status) in statuses(&v) {
        assert_eq!(status, "pass", "{suite}");
    }
}

#[test]
fn coalgebra_suite_reports_cocommutativity() {
    let v = ok_json(&["check", "--species", "poset", "--which", "coalgebra", "--size", "3"]);
    let s = statuses(&v);
    assert!(s.contains(&("cocommutativity".into(), "expected-fail: pass".into())));
    assert!(s.contains(&("cardinality".into(), "pass".into())));
    let v = ok_json(&["check", "--species", "linear_order", "--which", "coalgebra,monoidal"]);
    assert!(statuses(&v).contains(&("antipode".into(), "skipped".into())));
}

fn grade_counts(v: &Value) -> Vec<u64> {
    v["grades"].as_array().unwrap().iter().map(|g| g["count"].as_u64().unwrap()).collect()
}

#[test]
fn tables_count_iso_classes() {
    let v = ok_json(&["table", "--species", "set", "--size", "4"]);
    assert_eq!(grade_counts(&v), [1, 1, 1, 1, 1]);
    for (n, row) in v["rows"].as_array().unwrap().iter().enumerate() {
        let binomials: Vec<String> = (0..=n).map(|k| binomial(n, k).to_string()).collect();
        assert_eq!(coeffs(&row["coproduct"]), binomials);
    }
    assert_eq!(grade_counts(&ok_json(&["table", "--species", "forest", "--size", "3"])), [1, 1, 2, 4]);
    assert_eq!(grade_counts(&ok_json(&["table", "--species", "poset", "--size", "3"])), [1, 1, 2, 5]);
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["check", "--species", "forest", "--which", "decomposition,coalgebra,relabel", "--seed", "7"];
    assert_eq!(dspec(&args).stdout, dspec(&args).stdout);
    let seq: Vec<&str> = args.iter().copied().chain(["--sequential"]).collect();
    assert_eq!(dspec(&args).stdout, dspec(&seq).stdout);
}

#[test]
fn config_file_fills_in_and_flags_win() {
    let cfg = scratch("config.json", r#"{"species":"poset","size":2,"format":"csv"}"#);
    let out = dspec(&["table", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("section,grade,key,shape,left,right,value\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("count,")).count(), 3);

    let v = ok_json(&["table", "--config", cfg.to_str().unwrap(), "--format", "json", "--size", "3"]);
    assert_eq!(v["size"], 3);
    assert_eq!(v["species"], "poset");

    let bad = scratch("config-bad.json", r#"{"species":"poset","sizes":2}"#);
    assert_eq!(dspec(&["table", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_a_file() {
    let dest = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("dspec-cli").join("table-out.json");
    let _ = std::fs::remove_file(&dest);
    std::fs::create_dir_all(dest.parent().unwrap()).unwrap();
    let out = dspec(&["table", "--species", "set", "--size", "2", "--out", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(grade_counts(&v), [1, 1, 1]);
}

#[test]
fn size_cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dspec"))
        .args(["table", "--species", "set", "--size", "3"])
        .env("DSPEC_SIZE_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn multigraph_coproduct_needs_no_edges_flag() {
    let f = scratch("double-edge.json", r#"{"vertices":["a","b"],"edges":[["a","b"],["a","b"],["a","a"]]}"#);
    let v = ok_json(&["coproduct", "--species", "graph", f.to_str().unwrap()]);
    assert_eq!(coeffs(&v), ["1", "1", "1", "1"]);
    let v = ok_json(&["antipode", "--species", "graph", f.to_str().unwrap()]);
    assert!(!coeffs(&v).is_empty());
}
