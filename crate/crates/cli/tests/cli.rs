use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const WORKED: &str = r#"{"n": 2, "m": 4, "edges": [[1, 1], [2, 1], [4, 1], [1, 2], [3, 2], [4, 2]]}"#;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scp-anneal"))
        .args(args)
        .env_remove("SCP_ANNEAL_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = cli(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        ok(&["gen", "--n", "2", "--m", "3", "--count", "3", "--seed", "9", "--out-dir", d.to_str().unwrap()]);
    }
    for i in 0..3 {
        let name = format!("instance-{i:04}.json");
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap());
    }
    let manifest = json_file(&a.join("gen.manifest.json"));
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 3);

    // a smaller batch is a prefix of a larger one
    let c = dir.path().join("c");
    ok(&["gen", "--n", "2", "--m", "3", "--count", "1", "--seed", "9", "--out-dir", c.to_str().unwrap()]);
    assert_eq!(fs::read(a.join("instance-0000.json")).unwrap(), fs::read(c.join("instance-0000.json")).unwrap());
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_scp-anneal"))
        .args(["gen", "--n", "1", "--m", "2"])
        .env("SCP_ANNEAL_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("instance-0000.json").exists());
}

#[test]
fn reduce_worked_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "worked.json", WORKED);
    let model: Value = serde_json::from_str(&ok(&["reduce", &inst])).unwrap();
    assert_eq!(model["h"].as_array().unwrap().len(), 14);

    let out = dir.path().join("ising.json");
    ok(&["reduce", &inst, "--alpha", "0.25", "--out", out.to_str().unwrap()]);
    assert_eq!(json_file(&out), model);
    let manifest = json_file(&dir.path().join("ising.manifest.json"));
    assert_eq!(manifest["config"]["alpha"], "1/4");
    assert_eq!(manifest["config"]["labels"][0], "s1");

    let loose: Value = serde_json::from_str(&ok(&["reduce", &inst, "--no-top-penalty"])).unwrap();
    assert_ne!(loose, model);
}

#[test]
fn solve_with_every_backend() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "worked.json", WORKED);

    let oracle: Value = serde_json::from_str(&ok(&["solve", &inst, "--backend", "oracle"])).unwrap();
    assert_eq!(oracle["energy"], "1/2");
    assert_eq!(oracle["cover"], serde_json::json!([1, 4]));
    assert_eq!(oracle["consistent"], true);
    assert_eq!(oracle["optimal_size"], 2);

    let out = dir.path().join("sa.json");
    let curve = dir.path().join("curve.csv");
    ok(&[
        "solve", &inst, "--backend", "sa", "--seed", "3", "--sweeps-grid", "20,100", "--runs", "100",
        "--out", out.to_str().unwrap(), "--curve-csv", curve.to_str().unwrap(),
    ]);
    let sa = json_file(&out);
    assert_eq!(sa["valid"], true);
    assert!(sa["S_star"] == 20 || sa["S_star"] == 100);
    let rows = fs::read_to_string(&curve).unwrap();
    assert!(rows.starts_with("S,w,ci_low,ci_high,R,T"));
    assert_eq!(rows.lines().count(), 3);
    assert!(dir.path().join("sa.manifest.json").exists());

    let loose: Value = serde_json::from_str(&ok(&[
        "solve", &inst, "--backend", "sa", "--seed", "3", "--sweeps-grid", "20", "--runs", "100", "--criterion", "cover",
    ]))
    .unwrap();
    assert_eq!(loose["valid"], true);

    let qa: Value = serde_json::from_str(&ok(&["solve", &inst, "--backend", "qa", "--t-max", "256"])).unwrap();
    assert!(qa["p"].as_f64().unwrap() >= 0.25);
    assert!(qa["T"].as_u64().unwrap() >= 1);
    assert_eq!(qa["M"], 14);
}

#[test]
fn embed_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "worked.json", WORKED);
    let out_dir = dir.path().join("emb");
    let summary: Value = serde_json::from_str(&ok(&["embed", &inst, "--out-dir", out_dir.to_str().unwrap()])).unwrap();
    assert_eq!(summary["f1"], 4);
    assert_eq!(summary["f2"], 4);
    assert_eq!(summary["valid"], true);
    assert!(summary["qubits_used"].as_u64().unwrap() <= 128);
    let emb = json_file(&out_dir.join("embedding.json"));
    assert_eq!(emb["chains"].as_object().unwrap().len(), 14);
    assert!(fs::read_to_string(out_dir.join("embedding.dot")).unwrap().starts_with("graph"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // malformed input
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(cli(&["reduce", &bad]).status.code(), Some(2));
    assert_eq!(cli(&["reduce", WORKED]).status.code(), Some(1));
    let inst = write(dir.path(), "worked.json", WORKED);
    assert_eq!(cli(&["reduce", &inst, "--alpha", "2"]).status.code(), Some(2));
    // ground element 2 is only touched by one object
    let infeasible = write(dir.path(), "inf.json", r#"{"n": 2, "m": 2, "edges": [[1, 1], [2, 1], [2, 2]]}"#);
    assert_eq!(cli(&["solve", &infeasible, "--backend", "oracle"]).status.code(), Some(3));
    assert_eq!(cli(&["embed", &infeasible, "--out-dir", dir.path().to_str().unwrap()]).status.code(), Some(3));
    // anneal time budget too small
    assert_eq!(cli(&["solve", &inst, "--backend", "qa", "--t-max", "1", "--target-p", "0.99"]).status.code(), Some(3));
    // too many spins to simulate
    let big = r#"{"n": 1, "m": 8, "edges": [[1,1],[2,1],[3,1],[4,1],[5,1],[6,1],[7,1],[8,1]]}"#;
    let big = write(dir.path(), "big.json", big);
    assert_eq!(cli(&["solve", &big, "--backend", "qa"]).status.code(), Some(4));
}

#[test]
fn bench_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench");
    ok(&[
        "bench", "--backend", "qa,sa", "--spins", "3..5", "--per-size", "2", "--seed", "1", "--t-max", "64",
        "--sweeps-grid", "10,50", "--runs", "50", "--out-dir", out.to_str().unwrap(),
    ]);
    let qa = fs::read_to_string(out.join("qa_times.csv")).unwrap();
    assert!(qa.starts_with("M,instance_id,T_star,p_at_t_star"));
    assert_eq!(qa.lines().count(), 7);
    let sa = fs::read_to_string(out.join("sa_times.csv")).unwrap();
    assert!(sa.starts_with("M,instance_id,S_star,T_star,w"));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 7);
    let fit = json_file(&out.join("fit.json"));
    assert!(fit["qa"]["slope"].is_f64());
    assert!(json_file(&out.join("bench.manifest.json"))["warnings"].is_array());

    let refit: Value = serde_json::from_str(&ok(&["fit", out.join("qa_times.csv").to_str().unwrap(), "--medians"])).unwrap();
    assert!((refit["slope"].as_f64().unwrap() - fit["qa"]["slope"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn fit_synthetic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("M,T_star\n");
    for m in 3..=10 {
        text += &format!("{m},{}\n", 2f64.powf(0.5 * m as f64));
    }
    let path = write(dir.path(), "t.csv", &text);
    let fit: Value = serde_json::from_str(&ok(&["fit", &path])).unwrap();
    assert!((fit["slope"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(cli(&["fit", &path, "--column", "nope"]).status.code(), Some(2));
}
