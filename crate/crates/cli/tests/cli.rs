use std::fs;
use std::process::{Command, Output};

fn gorbit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gorbit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_passes() {
    let o = gorbit(&["algebra", "validate", "--family", "so", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Jacobi yes"));
}

#[test]
fn bi_invariant_metric_exits_zero() {
    let o = gorbit(&["check", "natred", "--family", "so", "--n", "6", "--partition", "2,2,2", "--params", "1,1,1,1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("naturally reductive: yes (bi-invariant)"));
}

#[test]
fn disproved_go_exits_two_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let o = gorbit(&[
        "check", "go", "--family", "so", "--n", "6", "--partition", "2,2,2", "--params", "1,2,3,4,5,6",
        "--format", "machine", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"verdict\":\"disproved\""));
    let r = gorbit(&["replay", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains("counterexamples 1/1 verified"));
}

#[test]
fn regularity_verbs() {
    let so9 = ["--family", "so", "--n", "9", "--partition", "3,3,3"];
    let regular = gorbit(&[&["check", "regular"][..], &so9[..]].concat());
    assert_eq!(regular.status.code(), Some(2));
    assert!(stdout(&regular).contains("regular: no"));
    let weak = gorbit(&[&["check", "weakly-regular"][..], &so9[..]].concat());
    assert_eq!(weak.status.code(), Some(0));
    assert!(stdout(&weak).contains("weakly regular: yes"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(gorbit(&["check", "go", "--family", "so", "--n", "6"]).status.code(), Some(1));
    assert_eq!(gorbit(&["scenario", "run", "no-such-scenario"]).status.code(), Some(1));
    assert_eq!(gorbit(&["bogus"]).status.code(), Some(1));
}

#[test]
fn spec_file_parse_error_is_located() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "name = \"x\"\nchecks = [\"validate\"]\n[algebra]\nfamily = \"so\"\nn = 4\ncolour = 1\n").unwrap();
    let o = gorbit(&["scenario", "run", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"));
}

#[test]
fn scenario_list_and_machine_determinism() {
    let list = stdout(&gorbit(&["scenario", "list"]));
    assert!(list.lines().count() >= 7);
    let a = gorbit(&["scenario", "run", "so9-333-regularity", "--format", "machine"]);
    let b = gorbit(&["scenario", "run", "so9-333-regularity", "--format", "machine"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn float_backend_go() {
    let o = gorbit(&[
        "check", "go", "--family", "so", "--n", "6", "--partition", "2,2,2", "--params", "2,2,2,1,1,1",
        "--backend", "float", "--samples", "8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("not disproved") || stdout(&o).contains("not-disproved"));
}
