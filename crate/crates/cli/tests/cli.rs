use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_filiform"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn family(dir: &Path, name: &str, tag: &str, params: &str, prime: u32) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec!["family", tag, "--prime"];
    let p = prime.to_string();
    args.push(&p);
    if !params.is_empty() {
        args.extend(["--params", params]);
    }
    args.extend(["-o", path.to_str().unwrap()]);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn classify_dim6_over_f2() {
    let o = run(&["classify", "--dim", "6", "--prime", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("isomorphism classes: expected 6, found 6"));
}

#[test]
fn classify_report_round_trip() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let o = run(&[
        "--seed",
        "7",
        "classify",
        "--dim",
        "7",
        "--prime",
        "3",
        "--isotopy",
        "-o",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let json = std::fs::read_to_string(&report).unwrap();
    assert!(json.contains("\"tool_version\""));
    assert!(json.contains("\"seed\": 7"));
    let o = run(&["check-report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("report ok"));

    let tampered = dir.path().join("t.json");
    std::fs::write(&tampered, json.replacen("\"dim\": 7", "\"dim\": 6", 1)).unwrap();
    assert_eq!(run(&["check-report", tampered.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn iso_dim5_representatives() {
    let dir = TempDir::new().unwrap();
    let a = family(dir.path(), "m.flie", "model", "5", 3);
    let b = family(dir.path(), "n.flie", "dim5", "", 3);
    let o = run(&["iso", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("fingerprint mismatch"));
    assert!(out.contains("d_4: 4 vs 2"));
}

#[test]
fn iso_with_witness_and_offline_check() {
    let dir = TempDir::new().unwrap();
    let a = family(dir.path(), "a.flie", "g6", "0,1,1", 5);
    let b = family(dir.path(), "b.flie", "g6", "0,1,0", 5);
    let report = dir.path().join("iso.json");
    let o = run(&["iso", a.to_str().unwrap(), b.to_str().unwrap(), "-o", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("isomorphic"));
    let o = run(&["check-report", report.to_str().unwrap()]);
    assert!(stdout(&o).contains("1 witnesses re-verified"));
}

#[test]
fn isotopy_verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let a = family(dir.path(), "a.flie", "g7", "0,0,1,1", 2);
    let b = family(dir.path(), "b.flie", "g7", "0,0,1,0", 2);
    // f(e4) = e4 - e3, h(e3) = e3 - e2; columns are images
    let id = |n: usize| -> Vec<Vec<u32>> { (0..n).map(|r| (0..n).map(|c| (r == c) as u32).collect()).collect() };
    let mut f = id(7);
    f[2][3] = 1;
    let mut h = id(7);
    h[1][2] = 1;
    let good = serde_json::json!({"characteristic": 2, "f": f, "g": f, "h": h});
    let w = dir.path().join("w.json");
    std::fs::write(&w, good.to_string()).unwrap();
    let args = |w: &Path| {
        vec![
            "isotopy-verify".to_string(),
            a.to_str().unwrap().into(),
            b.to_str().unwrap().into(),
            "--witness".into(),
            w.to_str().unwrap().into(),
        ]
    };
    assert_eq!(bin().args(args(&w)).output().unwrap().status.code(), Some(0));
    let bad = serde_json::json!({"characteristic": 2, "f": id(7), "g": id(7), "h": h});
    std::fs::write(&w, bad.to_string()).unwrap();
    assert_eq!(bin().args(args(&w)).output().unwrap().status.code(), Some(1));
}

#[test]
fn identify_and_info() {
    let dir = TempDir::new().unwrap();
    let a = family(dir.path(), "h.flie", "h7type3", "1", 2);
    let o = run(&["identify", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("class: h7_a[1]"));
    let o = run(&["info", a.to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("filiform: true"));
    assert!(out.contains("lower central series dims: 7 5 4 3 2 1 0"));
}

#[test]
fn invariants_json() {
    let dir = TempDir::new().unwrap();
    let a = family(dir.path(), "g.flie", "g6", "1,0,0", 3);
    let o = run(&["invariants", a.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["body"]["kind"], "invariants");
    assert_eq!(v["body"]["data"]["fingerprint"]["dim"], 6);
}

#[test]
fn unchecked_flag_admits_non_lie_tables() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.flie");
    std::fs::write(&path, "FLIE 1\ndim 3\nchar 5\n1 2 3 1\n1 3 1 1\n2 3 1 1\n").unwrap();
    assert_eq!(run(&["info", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["--unchecked", "info", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--dim", "6"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--dim", "8", "--prime", "2"]).status.code(), Some(2));
    assert_eq!(run(&["family", "g6", "--params", "1,2", "--prime", "3"]).status.code(), Some(2));
    assert_eq!(run(&["info", "/nonexistent/file.flie"]).status.code(), Some(2));
    assert_eq!(run(&["verify-paper", "--scope", "dim9"]).status.code(), Some(2));
    let o = bin()
        .env("FILIFORM_THREADS", "zero")
        .args(["classify", "--dim", "5", "--prime", "2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_the_report() {
    let run_with = |threads: &str| {
        let o = bin()
            .env("FILIFORM_THREADS", threads)
            .args(["classify", "--dim", "7", "--prime", "3", "--json"])
            .output()
            .unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["body"]["data"]["seconds"] = serde_json::Value::Null;
        v["summary"] = serde_json::Value::Null;
        v["content_sha256"] = serde_json::Value::Null;
        v
    };
    assert_eq!(run_with("1"), run_with("3"));
}

#[test]
fn verify_paper_small_scope() {
    let o = run(&["verify-paper", "--scope", "dim5; dim6:2,3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("[PASS] iso-dim6-p2"));
    assert!(out.contains("[SKIP] iso-dim8-p2"));
}
