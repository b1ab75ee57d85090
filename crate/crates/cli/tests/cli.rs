use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ordermotion"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], files: &[&Path]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    for f in files {
        cmd.arg("-i").arg(f);
    }
    cmd.output().unwrap()
}

fn json_out(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const QUAD: &str = r#"{"d":2,"points":[[0,0],[4,0],[2,4],[2,1]]}"#;
const QUAD2: &str = r#"{"d":2,"points":[["1/2",0],[5,1],[2,3],[-3,1]]}"#;
const TRI: &str = r#"{"d":2,"points":[[0,0],[4,1],[1,3]]}"#;

#[test]
fn ordertype_outputs_and_errors() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", QUAD);
    let v = json_out(&run(&["ordertype"], &[&p]));
    assert_eq!(v["result"]["signs"], serde_json::json!([1, 1, -1, 1]));

    let bad = write(&dir, "bad.json", r#"{"d":2,"points":[["1/0",0],[1,1],[2,3]]}"#);
    assert_eq!(run(&["ordertype"], &[&bad]).status.code(), Some(2));

    let col = write(&dir, "col.json", r#"{"d":2,"points":[[5,0],[0,0],[1,1],[2,2]]}"#);
    let out = run(&["ordertype"], &[&col]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[1, 2, 3]"));

    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["ordertype"], &[&missing]).status.code(), Some(2));

    let csv = run(&["ordertype", "--format", "csv"], &[&p]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "subset,sign\n0-1-2,1\n0-1-3,1\n0-2-3,-1\n1-2-3,1\n");
}

#[test]
fn cost_variants_and_csv_consistency() {
    let dir = TempDir::new().unwrap();
    let (p, q) = (write(&dir, "p.json", QUAD), write(&dir, "q.json", QUAD2));
    let same = json_out(&run(&["cost"], &[&p, &p]));
    assert_eq!(same["result"]["total"], 0);

    let csv_path = dir.path().join("ledger.csv");
    let v = json_out(&run(&["cost", "--theorem1", "--csv", csv_path.to_str().unwrap()], &[&p, &q]));
    let total = v["result"]["total"].as_u64().unwrap();
    assert!(total <= 4);
    let csv = fs::read_to_string(&csv_path).unwrap();
    let sum: u64 = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(sum, total);

    let mirror_branch = json_out(&run(&["cost", "--mirror-branch"], &[&p, &q]));
    let linear = json_out(&run(&["cost"], &[&p, &q]));
    assert!(mirror_branch["result"]["total"].as_u64() <= linear["result"]["total"].as_u64());

    let tri = write(&dir, "t.json", TRI);
    assert_eq!(run(&["cost"], &[&p, &tri]).status.code(), Some(2));
    assert_eq!(run(&["cost"], &[&p]).status.code(), Some(2));
}

#[test]
fn plan_writes_output_file() {
    let dir = TempDir::new().unwrap();
    let (p, q) = (write(&dir, "p.json", QUAD), write(&dir, "q.json", QUAD2));
    let out = dir.path().join("plan.json");
    let res = run(&["plan", "-o", out.to_str().unwrap()], &[&p, &q]);
    assert!(res.status.success());
    assert!(res.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["command"], "plan");
    assert_eq!(v["params"]["seed"], 0);
}

#[test]
fn blowup_passes_and_rejects_mismatch() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.json", TRI);
    let v = json_out(&run(&["blowup", "-m", "3", "--seed", "5"], &[&t, &t]));
    assert_eq!(v["result"]["verification"]["all_pass"], true);
    assert_eq!(v["result"]["blowup"]["certificate"]["min_flips"], "54");
    assert_eq!(v["params"]["seed"], 5);

    let flipped = write(&dir, "f.json", r#"{"d":2,"points":[[0,0],[-4,1],[-1,3]]}"#);
    assert_eq!(run(&["blowup", "-m", "2", "--seed", "1"], &[&t, &flipped]).status.code(), Some(3));
}

#[test]
fn thirteen_point_certificate() {
    let dir = TempDir::new().unwrap();
    let pts: Vec<String> = (0..13).map(|i| format!("[{},{}]", i, i * i)).collect();
    let q = write(&dir, "q.json", &format!(r#"{{"d":2,"points":[{}]}}"#, pts.join(",")));
    let v = json_out(&run(&["blowup", "-m", "10", "--seed", "1", "--samples", "5"], &[&q, &q]));
    let cert = &v["result"]["blowup"]["certificate"];
    assert_eq!(cert["min_flips"], "2000");
    assert_eq!(cert["constant"], "2/2197");
}

#[test]
fn goodrot_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.json", TRI);
    let u = write(&dir, "u.json", r#"{"d":2,"points":[[3,-1],[9,4],[-2,6]]}"#);
    let a = run(&["goodrot", "-N", "300", "--seed", "9"], &[&t, &u]);
    let b = run(&["goodrot", "-N", "300", "--seed", "9"], &[&t, &u]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["result"]["estimate"].as_f64().unwrap() > 0.5);
    assert!(v["result"]["half_width"].as_f64().unwrap() > 0.0);
    assert!(v["result"]["best_cost"].is_u64());
    assert_eq!(v["params"]["samples"], 300);

    assert_eq!(run(&["goodrot", "-N", "0", "--seed", "1"], &[&t, &u]).status.code(), Some(2));
    assert_eq!(run(&["goodrot", "-N", "10"], &[&t, &u]).status.code(), Some(2));
    let flipped = write(&dir, "f.json", r#"{"d":2,"points":[[0,0],[-4,1],[-1,3]]}"#);
    assert_eq!(run(&["goodrot", "-N", "10", "--seed", "1"], &[&t, &flipped]).status.code(), Some(3));
}

#[test]
fn aspect_and_oracle() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", QUAD);
    let q = write(&dir, "q.json", QUAD2);
    let v = json_out(&run(&["aspect", "--alpha", "2"], &[&p]));
    assert_eq!(v["result"]["aspect_ratios"].as_array().unwrap().len(), 4);
    assert_eq!(v["result"]["aspect_ratios"][0]["squared"], "25/4");
    assert!(v["result"]["non_elongated"].is_boolean());

    let o = json_out(&run(&["oracle", "--steps", "4"], &[&p, &q]));
    assert_eq!(o["result"]["agree"], true);
    assert_eq!(o["result"]["exact_total"], o["result"]["discretized_total"]);
}

#[test]
fn thread_variable_is_validated() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", QUAD);
    let ok = bin().env("ORDERMOTION_THREADS", "2").args(["ordertype", "-i"]).arg(&p).output().unwrap();
    assert!(ok.status.success());
    let bad = bin().env("ORDERMOTION_THREADS", "zero").args(["ordertype", "-i"]).arg(&p).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
