use std::path::Path;
use std::process::{Command, Output};

fn submin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_submin")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn minimize_writes_a_row() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "t.json", r#"{"kind": "tightness", "d": 5, "alpha": 0.5, "beta": 0.5}"#);
    let out = submin(&["minimize", "--instance", &inst, "--iterations", "50", "--audit"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("d,set,value"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "5");
    assert_eq!(row[7], "-6");
}

#[test]
fn dimacs_input() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.max", "p max 4 4\nn 1 s\nn 4 t\na 1 2 1\na 1 3 1\na 2 4 1\na 3 4 1\n");
    let out = submin(&["minimize", "--dimacs", &g, "--iterations", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"schema": 1, "experiment": "nonsense"}"#);
    assert_eq!(submin(&["experiment", "--config", &bad]).status.code(), Some(2));
    assert_eq!(submin(&["experiment", "--config", "/nonexistent.json"]).status.code(), Some(2));
    let odd = write(dir.path(), "h.json", r#"{"kind": "hardness", "d": 7, "alpha": 0.5, "delta": 1.0}"#);
    assert_eq!(submin(&["minimize", "--instance", &odd]).status.code(), Some(2));
    let t = write(dir.path(), "t.json", r#"{"kind": "tightness", "d": 4, "alpha": 0.5, "beta": 0.5}"#);
    assert_eq!(submin(&["minimize", "--instance", &t, "--step", "bogus"]).status.code(), Some(2));
}

#[test]
fn experiment_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"schema": 1, "experiment": "tightness_demo", "d": 4, "alpha": 0.5, "beta": 0.5, "solver": {"iterations": 20}}"#,
    );
    let out = submin(&["experiment", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("schema,experiment"));

    let out = submin(&["verify", "--level", "fast"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn decompose_and_params() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "r.json", r#"{"kind": "random_table", "d": 4, "seed": 2}"#);
    let out = submin(&["decompose", "--instance", &inst, "--alpha", "0.5", "--beta", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 17);

    let out = submin(&["params", "--instance", &inst, "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0));

    let out = submin(&["decompose", "--instance", &inst, "--alpha", "0.5", "--beta", "0.5", "--eps", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let weights = vec!["1.0"; 25].join(", ");
    let inst = write(dir.path(), "m.json", &format!(r#"{{"kind": "modular", "weights": [{weights}]}}"#));
    let out = submin(&["minimize", "--instance", &inst, "--iterations", "5", "--audit"]);
    assert_eq!(out.status.code(), Some(1));
}
