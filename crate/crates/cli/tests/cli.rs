use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn egw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egw"))
        .args(args)
        .env_remove("EGW_LIMITS_JSON")
        .output()
        .expect("run egw")
}

fn egw_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egw"))
        .args(args)
        .env(key, val)
        .output()
        .expect("run egw")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\nstderr:\n{}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_neighborhood_n3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let o = egw(&["construct", "neighborhood", "--n", "3", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["nodes"], 15);
    assert_eq!(r["edges"], 8);
    assert_eq!(r["max_neighborhood"], 3);
    assert_eq!(r["expected_max_neighborhood"], "2^{n-2}+2^{n-3} = 3");
    assert_eq!(r["pairing"]["consensus"], true);
    let tree: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(tree["id"], "");
}

#[test]
fn construct_family_flag_and_stdout_artifact() {
    let o = egw(&["construct", "--family", "regular-weak", "--n", "4"]);
    assert_eq!(code(&o), 0);
    let tree: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(tree.get("id").is_some());
    let report: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(report["max_degree_bound"], "2^{n+2}/n = 16");
    assert!(report["max_degree"].as_u64().unwrap() <= 8);
    assert_eq!(report["root_degree"], 4);
}

#[test]
fn construct_is_byte_stable() {
    let a = egw(&["construct", "neighborhood", "--n", "4", "--format", "board"]);
    let b = egw(&["construct", "neighborhood", "--n", "4", "--format", "board"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn strong_symbolic_reports_guard() {
    let o = egw(&["construct", "regular-strong", "--n", "64", "--symbolic"]);
    assert_eq!(code(&o), 2);
    let r = stdout_json(&o);
    assert_eq!(r["certified"], false);
    assert!(r["failing_guard"].as_str().unwrap().contains("guard failed"));
}

#[test]
fn strong_execution_hits_node_limit() {
    let o = egw(&["construct", "regular-strong", "--n", "512", "--limit-nodes", "1000"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));
}

#[test]
fn pipeline_to_cnf_sat_mu1() {
    let dir = tempfile::tempdir().unwrap();
    let board = dir.path().join("b.json");
    let cnf = dir.path().join("f.cnf");
    let o = egw(&["construct", "neighborhood", "--n", "3", "--format", "board", "--out", p(&board)]);
    assert_eq!(code(&o), 0);
    let o = egw(&["to-cnf", p(&board), "--double", "--out", p(&cnf)]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!((r["vars"].as_u64(), r["clauses"].as_u64()), (Some(15), Some(16)));
    assert_eq!(r["balanced"], true);
    let o = egw(&["sat", p(&cnf)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["result"], "UNSAT");
    let o = egw(&["mu1", p(&cnf)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["mu1"]["is_mu1"], true);
    // Without doubling the sibling pairing is not pure.
    assert_eq!(code(&egw(&["to-cnf", p(&board)])), 1);
}

#[test]
fn tree_input_needs_n() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    egw(&["construct", "complete-game", "--n", "3", "--out", p(&t)]);
    let o = egw(&["solve", p(&t)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--n"));
    let o = egw(&["solve", p(&t), "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["outcome"]["winner"], "maker");
    let o = egw(&["verify", p(&t), "--n", "3", "--s", "2^2"]);
    assert_eq!(code(&o), 0);
    let o = egw(&["verify", p(&t), "--n", "3", "--s", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn sat_trivial_and_satisfiable() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("u.cnf");
    fs::write(&f, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    let o = egw(&["sat", p(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["result"], "UNSAT");
    fs::write(&f, "c sat\np cnf 2 2\n1 2 0\n-1 0\n").unwrap();
    let o = egw(&["sat", p(&f)]);
    assert_eq!(code(&o), 2);
    let r = stdout_json(&o);
    assert_eq!(r["result"], "SAT");
    assert_eq!(r["model"], serde_json::json!([-1, 2]));
    assert_eq!(code(&egw(&["mu1", p(&f)])), 2);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.cnf");
    fs::write(&f, "p cnf 2 1\n1 x 0\n").unwrap();
    let o = egw(&["sat", p(&f)]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.cnf") && err.contains("line 2"), "{err}");
    assert_eq!(code(&egw(&["sat", "/nonexistent/file.cnf"])), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&egw(&["construct", "neighborhood"])), 1);
    assert_eq!(code(&egw(&["nonsense"])), 1);
    assert_eq!(code(&egw(&["construct", "neighborhood", "--n", "3", "--c", "2"])), 0);
    assert_eq!(code(&egw(&["construct", "regular-strong", "--n", "512", "--c", "2", "--symbolic"])), 1);
    assert_eq!(code(&egw(&["--help"])), 0);
}

#[test]
fn limits_from_env_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("b.json");
    egw(&["construct", "complete-game", "--n", "4", "--format", "board", "--out", p(&t)]);
    assert_eq!(code(&egw(&["solve", p(&t)])), 0);
    assert_eq!(code(&egw(&["solve", p(&t), "--limit-vertices", "10"])), 1);
    assert_eq!(code(&egw_env(&["solve", p(&t)], "EGW_LIMITS_JSON", r#"{"solver_vertices": 10}"#)), 1);
    // Flags override the environment.
    let o = egw_env(
        &["solve", p(&t), "--limit-vertices", "20"],
        "EGW_LIMITS_JSON",
        r#"{"solver_vertices": 10}"#,
    );
    assert_eq!(code(&o), 0);
    assert_eq!(code(&egw_env(&["solve", p(&t)], "EGW_LIMITS_JSON", r#"{"solver_vertices": 0}"#)), 1);
    assert_eq!(code(&egw_env(&["solve", p(&t)], "EGW_LIMITS_JSON", r#"{"bogus": 1}"#)), 1);
}

#[test]
fn from_cnf_and_color() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.cnf");
    let b = dir.path().join("b.json");
    fs::write(&f, "p cnf 2 2\n1 2 0\n-1 -2 0\n").unwrap();
    let o = egw(&["from-cnf", p(&f), "--out", p(&b)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["vertices"], 4);
    let col = dir.path().join("c.json");
    let o = egw(&["color", p(&b), "--halving", "--out", p(&col)]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["check"]["proper"], true);
    assert_eq!(r["check"]["pairing_respected"], true);
    let c: Value = serde_json::from_str(&fs::read_to_string(&col).unwrap()).unwrap();
    assert!(c["x1"] == "R" || c["x1"] == "B");
    // Pure pairing wins exactly when the formula is unsatisfiable.
    assert_eq!(code(&egw(&["verify", p(&b)])), 2);
}

#[test]
fn plan_toy_and_bounds() {
    let o = egw(&["plan", "--toy"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["holds"], true);
    let o = egw(&["bounds", "--k", "8"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["rows"][0]["value"], "11");
    assert_eq!(code(&egw(&["bounds", "--k", "2"])), 1);
}

#[test]
fn plan_certified_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("plan.json");
    let o = egw(&["plan", "--n", "512", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["ok"], true);
    assert!(fs::metadata(&out).unwrap().len() > 0);
}

#[test]
fn play_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    egw(&["construct", "complete-game", "--n", "4", "--out", p(&t)]);
    let a = egw(&["play", p(&t), "--n", "4", "--maker", "descent", "--breaker", "random", "--seed", "7"]);
    let b = egw(&["play", p(&t), "--n", "4", "--maker", "descent", "--breaker", "random", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let rec: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(rec["winner"], "maker");
}

#[test]
fn stats_on_cnf_and_board() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.cnf");
    fs::write(&f, "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n").unwrap();
    let o = egw(&["stats", p(&f), "--k", "2", "--s", "4"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["max_sharing_neighborhood"], 3);
    assert_eq!(code(&egw(&["stats", p(&f), "--k", "2", "--s", "3"])), 2);
    let b = dir.path().join("b.json");
    egw(&["construct", "neighborhood", "--n", "4", "--format", "board", "--out", p(&b)]);
    let o = egw(&["stats", p(&b)]);
    assert_eq!(stdout_json(&o)["max_neighborhood"], 6);
}
