use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tormono::exactmat::{det, IMat};
use tormono::report::VerdictRecord;

fn tormono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tormono")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = tormono(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn classify_examples() {
    assert_eq!(json(&["classify", "1,1;0,1"])["verdict"], "Indecomposable");
    assert_eq!(json(&["classify", "1,0;0,1"])["verdict"], "Decomposable");
    let s = json(&["classify", "1,0,1;0,2,1;0,1,1", "--stable"]);
    assert_eq!(s["verdict"], "StablyDecomposable");
    assert_eq!(s["certificate_status"], "Verified");
    assert!(s["certificate"].is_string());
}

#[test]
fn classify_json_round_trips_through_the_record() {
    for lit in ["1,1;0,1", "1,1,0;0,3,1;0,2,1", "2,1,0;1,1,0;0,0,1"] {
        for stable in [false, true] {
            let mut args = vec!["classify", lit, "--json"];
            if stable {
                args.push("--stable");
            }
            let text = stdout(&tormono(&args));
            let r: VerdictRecord = serde_json::from_str(&text).unwrap();
            assert_eq!(r.input, lit);
            let again: Value = serde_json::to_value(&r).unwrap();
            assert_eq!(again, serde_json::from_str::<Value>(&text).unwrap());
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&tormono(&["classify", "1,1;0"])), 2);
    assert_eq!(code(&tormono(&["classify", "x"])), 2);
    assert_eq!(code(&tormono(&["classify", "2,0;0,1"])), 3);
    assert_eq!(code(&tormono(&["classify", "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,1"])), 3);
    assert_eq!(code(&tormono(&["iso", "1,1;0,1", "1,0,0;0,1,0;0,0,1"])), 3);
    assert_eq!(code(&tormono(&["gen", "--dim", "3", "--steps", "many"])), 1);
    assert_eq!(code(&tormono(&["gen", "--dim", "7"])), 1);
    assert_eq!(code(&tormono(&["frobnicate"])), 1);
    assert_eq!(code(&tormono(&["batch", "/nonexistent/corpus.jsonl"])), 3);
}

#[test]
fn iso_examples() {
    let v = json(&["iso", "2,1;1,1", "2,1;1,1"]);
    assert_eq!(v["result"], "Iso");
    assert_eq!(v["certificate"], "1,0;0,1");
    assert_eq!(json(&["iso", "1,1;0,1", "1,0;1,1"])["result"], "NotIso");

    let gen = stdout(&tormono(&["gen", "--dim", "2", "--steps", "12", "--seed", "5"]));
    let a: IMat = gen.trim().parse().unwrap();
    let q: IMat = "2,1;1,1".parse().unwrap();
    let qi: IMat = "1,-1;-1,2".parse().unwrap();
    let b = qi.checked_mul(&a).unwrap().checked_mul(&q).unwrap();
    let (la, lb) = (a.to_string(), b.to_string());
    let v = json(&["iso", &la, &lb]);
    assert_eq!(v["result"], "Iso");
    let p: IMat = v["certificate"].as_str().unwrap().parse().unwrap();
    assert_eq!(a.checked_mul(&p).unwrap(), p.checked_mul(&b).unwrap());
}

#[test]
fn gen_examples() {
    assert_eq!(stdout(&tormono(&["gen", "--dim", "2", "--steps", "0", "--count", "1"])).trim(), "1,0;0,1");
    let args = ["gen", "--dim", "3", "--steps", "20", "--seed", "7", "--count", "3"];
    let first = stdout(&tormono(&args));
    assert_eq!(first, stdout(&tormono(&args)));
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines.len(), 3);
    for l in lines {
        let m: IMat = l.parse().unwrap();
        assert_eq!(det(&m).unwrap(), 1.into());
    }
}

#[test]
fn batch_counts_match_individual_runs() {
    let dir = tempfile::tempdir().unwrap();
    let lits = ["1,1;0,1", "1,0;0,1", "1,0,1;0,2,1;0,1,1"];
    let body: String = lits
        .iter()
        .enumerate()
        .map(|(i, l)| format!("{{\"id\":\"w{i}\",\"matrix\":\"{l}\"}}\n"))
        .collect();
    let path = write(dir.path(), "worked.jsonl", &body);
    let summary = json(&["batch", &path]);
    let mut expected = std::collections::BTreeMap::<String, u64>::new();
    for l in lits {
        *expected.entry(json(&["classify", l])["verdict"].as_str().unwrap().to_string()).or_default() += 1;
    }
    let counts: std::collections::BTreeMap<String, u64> =
        serde_json::from_value(summary["verdict_counts"].clone()).unwrap();
    assert_eq!(counts, expected);
    assert_eq!(summary["errors"], 0);
}

#[test]
fn batch_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.jsonl", "");
    let o = tormono(&["batch", &empty, "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 0);

    let mismatch = write(
        dir.path(),
        "mismatch.jsonl",
        "{\"id\":\"a\",\"matrix\":\"1,1;0,1\",\"expected\":\"Decomposable\"}\n{\"id\":\"b\",\"matrix\":\"1,0;0,1\",\"expected\":\"Decomposable\"}\n",
    );
    let o = tormono(&["batch", &mismatch]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("mismatch a: expected Decomposable"));

    let broken = write(dir.path(), "broken.jsonl", "not json\n{\"id\":\"x\",\"matrix\":\"1,2\"}\n");
    assert_eq!(code(&tormono(&["batch", &broken])), 2);

    let mixed = write(dir.path(), "mixed.jsonl", "not json\n{\"id\":\"ok\",\"matrix\":\"1,1;0,1\"}\n");
    let o = tormono(&["batch", &mixed, "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["errors"], 1);
}

#[test]
fn batch_parallel_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let gen = stdout(&tormono(&["gen", "--dim", "3", "--steps", "15", "--seed", "3", "--count", "30"]));
    let body: String = gen.lines().enumerate().map(|(i, m)| format!("{{\"id\":\"g{i:02}\",\"matrix\":\"{m}\"}}\n")).collect();
    let path = write(dir.path(), "gen.jsonl", &body);
    let seq = stdout(&tormono(&["batch", &path]));
    assert_eq!(seq, stdout(&tormono(&["batch", &path, "--parallel"])));
    assert_eq!(seq, stdout(&tormono(&["batch", &path, "--parallel"])));
}

#[test]
fn product_thicken_and_oracle() {
    let v = json(&["product", "1,1;0,1", "1"]);
    assert_eq!(v["monodromy"], "1,1,0;0,1,0;0,0,1");
    assert_eq!(json(&["thicken", "1,1;0,1@3"])["verdict"]["verdict"], "Indecomposable");
    let s = json(&["oracle", "split", "1,0,1;0,2,1;0,1,1"]);
    assert_eq!(s["outcome"], "Found");
    assert_eq!(json(&["oracle", "similarity", "1,1;0,1", "1,0;1,1"])["outcome"], "NoneWithinBound");
    assert_eq!(code(&tormono(&["witness", "1,0,1;0,2,1;0,1,1"])), 0);
}
