use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn vcut(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcut"))
        .current_dir(dir)
        .env_remove("RUST_BACKTRACE")
        .args(args)
        .output()
        .expect("spawn vcut")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = vcut(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn generated(dir: &Path) {
    ok(dir, &["generate", "--n", "1000", "--alpha", "2.2", "--edges", "1300", "--seed", "1", "--out", "g.el"]);
}

const STAR: &str = "p 4 3\n0 1 1\n0 2 1\n0 3 1\n";

#[test]
fn generate_is_exact_and_reproducible() {
    let dir = TempDir::new().unwrap();
    generated(dir.path());
    let first = fs::read(dir.path().join("g.el")).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    let body = text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("p ")).count();
    assert_eq!(body, 1300);
    assert!(text.contains("\np 1000 1300\n"));
    generated(dir.path());
    assert_eq!(fs::read(dir.path().join("g.el")).unwrap(), first);
}

#[test]
fn generate_rejects_small_exponent() {
    let dir = TempDir::new().unwrap();
    let out = vcut(dir.path(), &["generate", "--n", "100", "--alpha", "0.9", "--edges", "100"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn balanced_partition_report_respects_load_bound() {
    let dir = TempDir::new().unwrap();
    generated(dir.path());
    ok(dir.path(), &["partition", "g.el", "--algo", "wb-libra", "--p", "8", "--lambda", "1.0", "--out", "a.txt", "--report", "r.json", "--quiet"]);
    let r = &json(&dir.path().join("r.json"))["report"];
    let (w_max, total) = (r["max_weight"].as_f64().unwrap(), r["total_weight"].as_f64().unwrap());
    let imbalance = r["edge_weight_imbalance"].as_f64().unwrap();
    assert!(imbalance >= 1.0 && imbalance <= 1.0 + 8.0 * w_max / total, "{imbalance}");
    assert_eq!(r["loads"].as_array().unwrap().len(), 8);
    assert!(r["theoretical_bound"].is_null());

    // metrics recomputed from the written assignment match exactly
    ok(dir.path(), &["metrics", "g.el", "a.txt", "--lambda", "1.0", "--out", "m.json"]);
    assert_eq!(&json(&dir.path().join("m.json"))["report"], r);
}

#[test]
fn single_cluster_has_no_replicas() {
    let dir = TempDir::new().unwrap();
    generated(dir.path());
    ok(dir.path(), &["partition", "g.el", "--algo", "pg", "--p", "1", "--alpha", "2.2", "--out", "a.txt", "--report", "r.json"]);
    let r = json(&dir.path().join("r.json"));
    assert_eq!(r["report"]["replication_factor"], 1.0);
    assert_eq!(r["report"]["theoretical_bound"], 1.0);
    assert_eq!(r["manifest"]["config"]["algorithm"], "pg");

    let out = ok(dir.path(), &["map", "g.el", "a.txt", "--out", "m.txt"]);
    assert_eq!(out.trim(), "comm_cost 0");
    let mapping = fs::read_to_string(dir.path().join("m.txt")).unwrap();
    assert!(mapping.ends_with("m 4 4 1\n0 0\n"), "{mapping}");
}

#[test]
fn unknown_algorithm_lists_tokens() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("s.el"), STAR).unwrap();
    let out = vcut(dir.path(), &["partition", "s.el", "--algo", "metis", "--p", "2"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    for token in ["random", "pg", "libra", "w-pg", "wb-pg", "w-libra", "wb-libra"] {
        assert!(err.contains(token), "{err}");
    }
}

#[test]
fn star_mapping_cost_is_replica_times_hops() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("s.el"), STAR).unwrap();
    fs::write(dir.path().join("a.txt"), "c 2 3\n0 0\n1 0\n2 1\n").unwrap();
    let out = ok(dir.path(), &["map", "s.el", "a.txt", "--rows", "2", "--cols", "2", "--out", "m.txt"]);
    // one replicated vertex; the second cluster lands on a neighbouring core
    assert_eq!(out.trim(), "comm_cost 1");
    let mapping = fs::read_to_string(dir.path().join("m.txt")).unwrap();
    assert!(mapping.ends_with("m 2 2 2\n0 0\n1 1\n"), "{mapping}");
}

#[test]
fn mismatched_assignment_is_rejected() {
    let dir = TempDir::new().unwrap();
    generated(dir.path());
    fs::write(dir.path().join("s.el"), STAR).unwrap();
    ok(dir.path(), &["partition", "g.el", "--algo", "libra", "--p", "4", "--out", "a.txt", "--quiet"]);
    let out = vcut(dir.path(), &["map", "s.el", "a.txt"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("edge-count mismatch"));
}

#[test]
fn traces_are_detected() {
    let dir = TempDir::new().unwrap();
    let trace = "op=alloca dst=%1\nop=load dst=%2 src=%1 addr=0x10 t=3\nop=add dst=%3 src=%2,%2\n";
    fs::write(dir.path().join("t.txt"), trace).unwrap();
    ok(dir.path(), &["partition", "t.txt", "--algo", "w-libra", "--p", "2", "--out", "a.txt", "--report", "r.json"]);
    let r = json(&dir.path().join("r.json"));
    assert_eq!(r["report"]["edge_count"], 2);
    assert_eq!(r["report"]["total_weight"], 4.0);
    let forced = vcut(dir.path(), &["partition", "t.txt", "--format", "edges", "--algo", "pg", "--p", "2"]);
    assert!(!forced.status.success());
}

fn bench_rows(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "graph,algo,p,seed,lambda,replication_factor,imbalance,comm_cost,scans");
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn bench_tables() {
    let dir = TempDir::new().unwrap();
    fs::create_dir(dir.path().join("corpus")).unwrap();
    ok(dir.path(), &["generate", "--n", "2000", "--alpha", "2.2", "--edges", "2600", "--seed", "3", "--out", "corpus/a.el"]);

    let rows = bench_rows(&ok(dir.path(), &["bench", "corpus", "--p-list", "8", "--algo-list", "libra,wb-libra"]));
    assert_eq!(rows.len(), 2);
    let imbalance = |r: &Vec<String>| r[6].parse::<f64>().unwrap();
    assert_eq!((rows[0][1].as_str(), rows[1][1].as_str()), ("libra", "wb-libra"));
    assert!(imbalance(&rows[1]) <= imbalance(&rows[0]));

    ok(dir.path(), &["generate", "--n", "500", "--alpha", "2.4", "--edges", "700", "--out", "corpus/b.el"]);
    let args = ["bench", "corpus", "--p-list", "8,16", "--algo-list", "random,pg,wb-pg", "--seeds", "1,2,3", "--out", "t.csv"];
    ok(dir.path(), &args);
    let first = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(bench_rows(&first).len(), 2 * 3 * 2 * 3);
    ok(dir.path(), &args);
    assert_eq!(fs::read_to_string(dir.path().join("t.csv")).unwrap(), first);

    let sweep = bench_rows(&ok(
        dir.path(),
        &["bench", "corpus/a.el", "--algo-list", "wb-libra,w-libra", "--lambda-list", "1.0:1.0012:0.0001"],
    ));
    assert_eq!(sweep.len(), 13 + 1);
    assert_eq!(sweep[1][4], "1.0001");
    assert_eq!(sweep[13][1], "w-libra");
    assert_eq!(sweep[13][4], "-");
}

#[test]
fn empty_corpus_fails() {
    let dir = TempDir::new().unwrap();
    fs::create_dir(dir.path().join("corpus")).unwrap();
    let out = vcut(dir.path(), &["bench", "corpus"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));
}
