use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opaque-sat")).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_opaque-sat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn verify_prints_a_certificate_with_one_branch_per_assignment() {
    let f = data("example1.cnf");
    let o = run(&["--json", "backdoor", "verify", "-S", "x1,x3,x5", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["command"], "backdoor verify");
    assert_eq!(v["verdict"]["status"], "certified");
    assert_eq!(v["verdict"]["branches"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_of_a_non_backdoor_exits_negative() {
    let f = data("example1.cnf");
    let o = run(&["backdoor", "verify", "-S", "1", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not a strong backdoor"));
}

#[test]
fn solve_reads_standard_input_and_prints_a_model() {
    let o = run_stdin(&["solve", "-"], "p cnf 2 2\n1 0\n-1 -2 0\n");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("s SATISFIABLE\nv 1 -2 0\n"), "{text}");
}

#[test]
fn oracle_and_default_solver_agree_on_grammar_input() {
    let f = data("backbone.prop");
    let a = json(&run(&["--json", "solve", f.to_str().unwrap()]));
    let b = json(&run(&["--json", "solve", "--oracle", f.to_str().unwrap()]));
    assert_eq!(a["result"]["verdict"], b["result"]["verdict"]);
}

#[test]
fn propagation_only_solve_rejects_when_stuck() {
    let f = data("example1.cnf");
    let o = run(&["solve", "--up", f.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("s REJECTS"));
    let o = run_stdin(&["solve", "--up", "--trace", "-"], "p cnf 2 2\n1 0\n-1 2 0\n");
    let text = stdout(&o);
    assert!(text.starts_with("s SATISFIABLE"), "{text}");
    assert_eq!(text.matches("c step").count(), 2);
}

#[test]
fn padded_instance_is_recognized_and_the_base_is_not() {
    let dir = tempfile::tempdir().unwrap();
    let padded = dir.path().join("padded.cnf");
    let base = data("example1.cnf");
    let o = run(&["gen", "pad-backdoor", "-k", "2", base.to_str().unwrap(), "-o", padded.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&padded).unwrap();
    assert!(text.contains("c opaque-sat family=backdoor k=2 base-vars=5"));

    let o = run(&["--json", "recognize", "backdoor", "-k", "2", padded.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["backdoor"], serde_json::json!([1, 2, 3, 4, 5]));
    assert_eq!(v["tail_vars"].as_array().unwrap().len(), 20);

    let o = run(&["recognize", "backdoor", "-k", "2", base.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not a member");
}

#[test]
fn backbone_predicates_report_through_exit_codes() {
    let f = data("backbone.prop");
    let path = f.to_str().unwrap();
    assert_eq!(run(&["backbone", "large", "--beta", "3/5", path]).status.code(), Some(0));
    assert_eq!(run(&["backbone", "large", "--beta", "2/3", path]).status.code(), Some(1));
    assert_eq!(run(&["backbone", "nontrivial", path]).status.code(), Some(0));
    assert_eq!(run(&["backbone", "check", "-S", "x1,x2", path]).status.code(), Some(0));
    assert_eq!(run(&["backbone", "check", "-S", "x4", path]).status.code(), Some(1));
}

#[test]
fn bench_agrees_and_is_reproducible_without_timings() {
    let args = [
        "bench", "--base-vars", "6", "--base-clauses", "24", "-k", "2", "--count", "4", "--seed", "3",
        "--search-cap", "2", "--no-timings",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, run(&args).stdout);
    let text = stdout(&first);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# opaque-sat "));
    assert!(lines.next().unwrap().starts_with("instance,total_vars,k,recognize_ns"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[1], "36");
        assert_eq!(cells[3], "");
        assert!(cells[10] == "sat" || cells[10] == "unsat", "{row}");
    }
}

#[test]
fn bench_json_lists_every_record() {
    let o = run(&[
        "--json", "bench", "--base-vars", "5", "--base-clauses", "20", "-k", "2", "--count", "2", "--seed", "9",
        "--search-cap", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["records"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_arguments_and_bad_input_use_distinct_exit_codes() {
    let f = data("backbone.prop");
    assert_eq!(run(&["backbone", "large", "--beta", "1", f.to_str().unwrap()]).status.code(), Some(2));
    let o = run_stdin(&["solve", "-"], "p cnf 2 1\n1 x 0\n");
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("opaque-sat: "));
    assert_eq!(run(&["solve", "/no/such/file.cnf"]).status.code(), Some(3));
}

#[test]
fn cnf_only_commands_refuse_grammar_input() {
    let f = data("backbone.prop");
    assert_eq!(run(&["backdoor", "find", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn random_generation_is_seeded() {
    let args = ["gen", "random", "--vars", "8", "--clauses", "12", "--seed", "42"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&args).stdout);
    assert!(stdout(&a).contains("p cnf 8 12"));
}

#[test]
fn compose_pads_the_hook_output() {
    let f = data("example1.cnf");
    let o = run(&["--json", "gen", "compose", "--hook", "cat", "-k", "2", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["tail_vars"], 20);
    assert!(v["formula"].as_str().unwrap().contains("family=backdoor"));
    let o = run(&["gen", "compose", "--hook", "false", "-k", "2", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}
