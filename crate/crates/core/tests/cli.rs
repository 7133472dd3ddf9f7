use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainrebuild")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn circle_prints_a_passing_ledger_and_writes_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("circle.json");
    let o = run(&["circle", "--d", "16", "--T", "4", "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("ranks [16, 16] -> [8, 8]"), "{out}");
    assert!(!out.contains("Fail"));

    let v = run(&["verify", cert.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("certificate ok"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("circle.json");
    assert_eq!(run(&["circle", "--d", "8", "--T", "2", "--out", cert.to_str().unwrap()]).status.code(), Some(0));
    let mut json: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    // claim a larger T than the retract supports
    json["quality"]["t"] = Value::String("8".into());
    fs::write(&cert, serde_json::to_string(&json).unwrap()).unwrap();
    let o = run(&["verify", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["circle", "--d", "4", "--T", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["circle", "--d", "4", "--T", "9"]).status.code(), Some(2));
    assert_eq!(run(&["gradient", "--group", "Q", "--chain", "1", "--out", "x.csv"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "/nonexistent/complex.json"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_reports_a_broken_differential() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // d_1 d_2 on Z --1--> Z --1--> Z is nonzero
    let bad = serde_json::json!({
        "degrees": [
            { "degree": 0, "rank": 1 },
            { "degree": 1, "rank": 1, "differential": [[0, 0, "1"]] },
            { "degree": 2, "rank": 1, "differential": [[0, 0, "1"]] }
        ]
    });
    fs::write(&path, bad.to_string()).unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{out}{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.contains("∂∂ ≠ 0"), "{out}");
}

#[test]
fn gradient_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let o = run(&["gradient", "--group", "Z", "--chain", "pow2:3", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("group,j,i,index,field,betti,log_tors,betti_per_index,log_tors_per_index"));
    assert!(text.contains("Z,1,3,8,Q,1,0,0.125,0"), "{text}");
    assert!(dir.path().join("g.json").exists());
}

#[test]
fn cwr_curve_and_selftest_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let o = run(&["cwr-curve", "--T", "2,4", "--chain", "1,16", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("d=16 T=4 j=0 certified"));
    let s = run(&["--seed", "7", "selftest", "--cases", "10"]);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).contains("10 cases, 0 failures (seed 7)"));
}
