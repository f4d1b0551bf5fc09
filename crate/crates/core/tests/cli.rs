use std::process::{Command, Output};

const WORKED: &str = "X1^8*X2^3 - X1^6*X2^2*X3^3";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gorenstein")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hilbert_text_and_json() {
    let o = run(&["hilbert", WORKED]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(1,3,6,10,12,12,12,12,10,6,3,1)"));
    let o = run(&["hilbert", WORKED, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sperner"]["flat_length"], 4);
    assert_eq!(v["hvector"][4], 12);
}

#[test]
fn basis_and_hessian() {
    let o = run(&["basis", WORKED, "--degree", "5"]);
    assert!(stdout(&o).starts_with("[x1^5, x1^4*x2,"));
    let o = run(&["hessian", WORKED, "--t", "5", "--eval", "1,0,0", "--symbolic"]);
    let out = stdout(&o);
    assert!(out.contains("full rank: true"));
    assert!(out.trim_end().ends_with("*X1^12"));
}

#[test]
fn lefschetz_verdicts() {
    let o = run(&["wlp", WORKED, "--certify"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "HOLDS");
    let o = run(&["wlp", WORKED, "--ell", "0,0,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lefschetz_element"], false);
    let o = run(&["slp", "X1*X4^2+X2*X4*X5+X3*X5^2", "--certify"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "FAILS");
}

#[test]
fn classify_reports_theorems() {
    let o = run(&["classify", WORKED]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = v["matches"].as_array().unwrap().iter().map(|m| m["theorem"].as_str().unwrap()).collect();
    assert!(ids.contains(&"family4i"));
    assert_eq!(v["key"], "n3r2a6,2,0b2,1,3");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["hilbert", "X1^2 + X2"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "X1^2 + 2*X2^2"]).status.code(), Some(2));
    assert_eq!(run(&["wlp", WORKED, "--ell", "1,2"]).status.code(), Some(2));
    let generic = "X1^2*X2*X3 + X2^2*X4*X5 + X3^2*X1*X5 + X4^2*X1*X2 + X5^2*X3*X4 + X1^3*X4 + X2^3*X5 + X3^3*X2 \
                   + X4^3*X3 + X5^3*X1 + X1*X2*X3*X4 + X2*X3*X4*X5 + X1^2*X5^2 + X2^2*X3^2 + X3*X4^2*X5";
    assert!(stdout(&run(&["hilbert", generic])).contains("(1,5,15,5,1)"));
    assert_eq!(run(&["hessian", generic, "--t", "2", "--symbolic"]).status.code(), Some(3));
    assert_eq!(run(&["hessian", generic, "--t", "1", "--symbolic"]).status.code(), Some(0));
}

#[test]
fn search_writes_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let o = run(&["search", "--max-vars", "2", "--max-degree", "4", "--out", out.to_str().unwrap(), "--seed", "4", "--jobs", "2"]);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // nonzero disagreements (the family4 (ii) bound on two variables) exit 4
    let expected = if summary["disagreements"] == 0 { 0 } else { 4 };
    assert_eq!(o.status.code(), Some(expected));
    assert!(summary["disagreements"].as_u64().unwrap() > 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), summary["total"].as_u64().unwrap() as usize);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["seed"], 4);
    }
}
