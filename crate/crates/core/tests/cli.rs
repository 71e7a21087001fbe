use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn mlunify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlunify")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const T1: &str = "f(x:Nat, g(1), g(z:Nat))";
const T2: &str = "f(g(y:Nat), g(y), g(g(x:Nat)))";

#[test]
fn unify_prints_the_mgu() {
    let sig = data("worked.sig");
    let o = mlunify(&["unify", sig.to_str().unwrap(), T1, T2]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "MGU: {x -> g(1), y -> 1, z -> g(g(1))}\n");
    let o = mlunify(&["unify", sig.to_str().unwrap(), "g(x:Nat)", "g(x:Nat)"]);
    assert_eq!(stdout(&o), "MGU: {}\n");
}

#[test]
fn unify_trace_is_json() {
    let sig = data("worked.sig");
    let o = mlunify(&["unify", sig.to_str().unwrap(), T1, T2, "--trace"]);
    let text = stdout(&o);
    let json = text.split_once('\n').unwrap().1;
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    let rules: Vec<&str> = v.as_array().unwrap().iter().map(|s| s["rule"].as_str().unwrap()).collect();
    assert_eq!(rules.len(), 6);
    assert_eq!(rules[3], "Orient");
}

#[test]
fn failures_exit_two() {
    let sig = data("worked.sig");
    let o = mlunify(&["unify", sig.to_str().unwrap(), "x:Nat", "g(x:Nat)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("FAIL: occurs-check\n"));
    let o = mlunify(&["unify", sig.to_str().unwrap(), "g(1)", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("FAIL: symbol-clash\n"));
    let o = mlunify(&["certify", sig.to_str().unwrap(), "g(1)", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_input_exits_one() {
    let sig = data("worked.sig");
    let o = mlunify(&["unify", sig.to_str().unwrap(), "g(", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = mlunify(&["unify", "/nonexistent.sig", "1", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(mlunify(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn certify_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let sig = data("worked.sig");
    let sig = sig.to_str().unwrap();
    let prefix = dir.path().join("w");
    let prefix = prefix.to_str().unwrap();
    let o = mlunify(&["certify", sig, T1, T2, "--out", prefix]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s1 = format!("{prefix}.stage1.json");
    let o = mlunify(&["check", &s1, sig]);
    assert_eq!(stdout(&o).trim(), r#"{"ok":true,"failed_line":null,"reason":null}"#);
    let o = mlunify(&["check", &s1, sig, "--no-derived"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["failed_line"], 2);

    let o = mlunify(&["certify", sig, T1, T2, "--out", prefix, "--expand", "--stage", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(mlunify(&["check", &s1, sig, "--no-derived"]).status.code(), Some(0));
    assert!(std::fs::read_to_string(format!("{prefix}.stage1.txt")).unwrap().contains("[hypothesis]"));
}

#[test]
fn tampered_certificate_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let sig = data("worked.sig");
    let sig = sig.to_str().unwrap();
    let prefix = dir.path().join("w");
    let prefix = prefix.to_str().unwrap();
    mlunify(&["certify", sig, T1, T2, "--out", prefix, "--stage", "2"]);
    let path = format!("{prefix}.stage2.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["lines"][3]["formula"] = "x:Nat = g(g(1))".into();
    std::fs::write(&path, v.to_string()).unwrap();
    let o = mlunify(&["check", &path, sig]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["ok"], false);
    assert_eq!(report["failed_line"], 4);
}

#[test]
fn eval_sets_and_verdicts() {
    let (sig, model) = (data("countermodel.sig"), data("countermodel.model"));
    let args = ["eval", sig.to_str().unwrap(), "--model", model.to_str().unwrap()];
    let o = mlunify(&[&args[..], &["x:S /\\ f(x:S)", "--valuation", "x=a"]].concat());
    assert_eq!(stdout(&o), "{a}\n");
    let o = mlunify(&[&args[..], &["--theorem1", "x:S", "f(x:S)"]].concat());
    assert_eq!(stdout(&o), "NOT EQUIVALENT\n");
    assert_eq!(o.status.code(), Some(2));

    let (sig, model) = (data("nat.sig"), data("nat.model"));
    let o = mlunify(&["eval", sig.to_str().unwrap(), "--model", model.to_str().unwrap(), "o \\/ exists x:Nat . succ(x)"]);
    assert_eq!(stdout(&o), "SATISFIED\n");
    let o = mlunify(&["eval", sig.to_str().unwrap(), "--model", model.to_str().unwrap(), "o"]);
    assert_eq!(stdout(&o), "NOT SATISFIED\n");
    assert_eq!(o.status.code(), Some(2));

    let sig = data("worked.sig");
    let o = mlunify(&["eval", sig.to_str().unwrap(), "--random", "--size", "1", "--theorem1", T1, T2]);
    assert_eq!(stdout(&o), "EQUIVALENT\n");
}

#[test]
fn axioms_are_listed_with_tags() {
    let sig = data("nat.sig");
    let o = mlunify(&["axioms", sig.to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("succ(x1) = succ(y1) -> x1:Nat = y1  # injectivity succ"));
}

#[test]
fn outputs_are_deterministic() {
    let sig = data("worked.sig");
    let a = mlunify(&["eval", sig.to_str().unwrap(), "--random", "--size", "1", "--seed", "9", "--theorem1", T1, T2]);
    let b = mlunify(&["eval", sig.to_str().unwrap(), "--random", "--size", "1", "--seed", "9", "--theorem1", T1, T2]);
    assert_eq!(a.stdout, b.stdout);
}
