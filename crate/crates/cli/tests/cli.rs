use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn corpus(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "../../corpus", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subint")).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_subint"))
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
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_accepts_golden_file() {
    let o = run(&["check", &corpus("golden/axiom7.nd")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("accepted"));
}

#[test]
fn check_rejects_ipc_derivation_with_dagger() {
    let o = run(&["check", &corpus("negative/ipc_transitivity.nd")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("restriction ‡ violated"));
}

#[test]
fn check_json_reports_status() {
    let o = run(&["check", "--format", "json", &corpus("negative/af_on_assumption.hil")]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "rejected");
    assert_eq!(v["kind"], "hilbert");
    assert!(v["report"]["diagnostics"][0]["message"]
        .as_str()
        .unwrap()
        .contains("restriction violated"));
}

#[test]
fn logic_override_changes_verdict() {
    // ImpIConj is not a WF rule
    let o = run(&["check", "--logic", "WF", &corpus("golden/conj_redex.nd")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_2() {
    let o = run_stdin(&["check", "-"], "(document (logic WF) (kind nd) (body (AndI \"p &\")))");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["check", "/nonexistent/file.nd"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn normalize_traces_and_output_rechecks() {
    let o = run(&["normalize", "--trace", &corpus("golden/trans_redex.nd")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().starts_with("; step at ["));
    let again = run_stdin(&["check", "-"], &out);
    assert_eq!(again.status.code(), Some(0), "{out}");
}

#[test]
fn normalize_json_lists_steps() {
    let o = run(&["normalize", "--trace", "--format", "json", &corpus("golden/conj_redex.nd")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["steps"][0]["conversion"], "Conj");
}

#[test]
fn normalize_rejects_hilbert_input() {
    let o = run(&["normalize", &corpus("negative/af_on_assumption.hil")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn translate_round_trips_through_stdin() {
    let h = run(&["translate", &corpus("golden/rule10_conj_imp.nd")]);
    assert_eq!(h.status.code(), Some(0));
    let text = stdout(&h);
    assert!(text.contains("(kind hilbert)"));
    assert_eq!(run_stdin(&["check", "-"], &text).status.code(), Some(0));
    let nd = run_stdin(&["translate", "--to", "nd", "-"], &text);
    assert_eq!(nd.status.code(), Some(0));
    assert_eq!(run_stdin(&["check", "-"], &stdout(&nd)).status.code(), Some(0));
}

#[test]
fn translate_to_same_kind_exits_2() {
    let o = run(&["translate", "--to", "nd", &corpus("golden/axiom7.nd")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_command_checks_directories() {
    let golden = run(&["corpus", &corpus("golden")]);
    assert_eq!(golden.status.code(), Some(0), "{}", stdout(&golden));
    let negative = run(&["corpus", "--expect", "reject", &corpus("negative")]);
    assert_eq!(negative.status.code(), Some(0), "{}", stdout(&negative));
    let wrong = run(&["corpus", &corpus("negative")]);
    assert_eq!(wrong.status.code(), Some(1));
}
