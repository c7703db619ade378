//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

use subsetjl::syntax::parse_formula;
use subsetjl::{single_world_model, Dialect, FormulaUniverse};

fn subsetjl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsetjl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("temp write");
    path.to_str().expect("utf-8 path").to_string()
}

#[test]
fn derived_application_proof_is_accepted() {
    let dir = tempfile::tempdir().expect("tempdir");
    let emitted = subsetjl(&["derive-j", "x1", "x2", "p0", "p1"]);
    assert_eq!(code(&emitted), 0);
    let file = write(dir.path(), "deriv.txt", &stdout(&emitted));

    let checked = subsetjl(&[
        "check-proof",
        "--logic",
        "star",
        "--beta",
        "jt,j4,jd",
        "--cs",
        "total",
        &file,
    ]);
    assert_eq!(code(&checked), 0, "stderr: {:?}", checked.stderr);
    assert_eq!(stdout(&checked), "accepted\n");

    let as_json = subsetjl(&["check-proof", "--logic", "star", "--json", &file]);
    assert_eq!(code(&as_json), 0);
    assert_eq!(stdout(&as_json), "{\"verdict\":\"accepted\"}\n");
}

#[test]
fn rejected_proofs_exit_one_and_name_the_step() {
    let dir = tempfile::tempdir().expect("tempdir");
    let file = write(dir.path(), "bad.txt", "1. p0 ; AX(cl1)\n");
    let out = subsetjl(&["check-proof", "--logic", "star", &file]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("rejected at step 1:"), "{out:?}");
}

#[test]
fn single_world_dump_validates_and_evaluates() {
    let dir = tempfile::tempdir().expect("tempdir");
    let seed = parse_formula("~x1:_|_", Dialect::Prob).expect("seed");
    let universe = FormulaUniverse::closure(vec![seed], Dialect::Prob).expect("closure");
    let model = single_world_model(&universe).expect("construction");
    let file = write(dir.path(), "model.json", &model.to_json());

    let checked = subsetjl(&["check-model", &file]);
    assert_eq!(code(&checked), 0, "stderr: {:?}", checked.stderr);
    assert_eq!(stdout(&checked), "no violations\n");

    let json = subsetjl(&["check-model", "--json", &file]);
    assert_eq!(code(&json), 0);
    assert_eq!(stdout(&json), "[]\n");

    // Empty evidence supports anything, even falsum.
    let truthy = subsetjl(&["eval", "--model", &file, "--world", "0", "x1:_|_"]);
    assert_eq!(code(&truthy), 0);
    assert_eq!(stdout(&truthy), "true\n");

    let falsy = subsetjl(&["eval", "--model", &file, "--world", "0", "~x1:_|_"]);
    assert_eq!(code(&falsy), 1);
    assert_eq!(stdout(&falsy), "false\n");
}

#[test]
fn tampered_models_are_rejected_with_a_named_condition() {
    let dir = tempfile::tempdir().expect("tempdir");
    let seed = parse_formula("~x1:_|_", Dialect::Prob).expect("seed");
    let universe = FormulaUniverse::closure(vec![seed], Dialect::Prob).expect("closure");
    let model = single_world_model(&universe).expect("construction");

    let mut value: serde_json::Value = serde_json::from_str(&model.to_json()).expect("json");
    value["V"]["0"]["_|_"] = serde_json::json!(1);
    let file = write(dir.path(), "tampered.json", &value.to_string());

    let out = subsetjl(&["check-model", &file]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("v-bottom"), "{out:?}");
}

#[test]
fn the_textbook_bound_is_one_half() {
    let dir = tempfile::tempdir().expect("tempdir");
    let db = write(dir.path(), "db.txt", "u1 : p0\nu2 : p0 -> p1\ntarget : p1\n");
    let space = write(dir.path(), "space.txt", "1 1/4\n2 1/4\n3 1/4\n4 1/4\n");
    let asg = write(dir.path(), "asg.txt", "u1 = {1,2,3}\nu2 = {2,3,4}\n");

    let agg = subsetjl(&["aggregate", "--db", &db]);
    assert_eq!(code(&agg), 0);
    assert_eq!(stdout(&agg), "x1 + x2\n");

    let out = subsetjl(&["bound", "--db", &db, "--space", &space, "--asg", &asg]);
    assert_eq!(code(&out), 0, "stderr: {:?}", out.stderr);
    assert_eq!(stdout(&out), "1/2\n");
}

#[test]
fn parse_echoes_canonical_forms() {
    let out = subsetjl(&["parse", "--logic", "star", "x1:((p0)->p1)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "x1 : (p0 -> p1)\n");

    let term = subsetjl(&["parse", "--logic", "prob", "--term", "((x1+0) \\/ x2)"]);
    assert_eq!(code(&term), 0);
    assert_eq!(stdout(&term), "(x1 + 0) \\/ x2\n");

    let translated = subsetjl(&["translate", "--logic", "app", "(x1.x2):p1 -> ~p0"]);
    assert_eq!(code(&translated), 0);
    assert_eq!(stdout(&translated), "p1 -> p0 -> _|_\n");
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().expect("tempdir");

    let garbage = subsetjl(&["parse", "--logic", "star", "p0 ->"]);
    assert_eq!(code(&garbage), 2);
    assert!(garbage.stdout.is_empty());

    let wrong_dialect = subsetjl(&["parse", "--logic", "star", "--term", "x1 . x2"]);
    assert_eq!(code(&wrong_dialect), 2);

    let missing = subsetjl(&["check-model", "/no/such/file.json"]);
    assert_eq!(code(&missing), 2);

    let bad_proof = write(dir.path(), "nonsense.txt", "step one is vibes\n");
    let unparsed = subsetjl(&["check-proof", &bad_proof]);
    assert_eq!(code(&unparsed), 2);

    let unknown_beta = subsetjl(&["fuzz-soundness", "--beta", "j5", "--count", "1"]);
    assert_eq!(code(&unknown_beta), 2);
}

#[test]
fn fuzz_output_is_deterministic_and_seed_ordered() {
    let args = [
        "fuzz-soundness",
        "--logic",
        "prob",
        "--beta",
        "j4",
        "--seed",
        "3",
        "--count",
        "4",
        "--json",
    ];
    let first = subsetjl(&args);
    let second = subsetjl(&args);
    assert_eq!(code(&first), 0, "stderr: {:?}", first.stderr);
    assert_eq!(stdout(&first), stdout(&second));

    let text = subsetjl(&["fuzz-soundness", "--seed", "3", "--count", "4"]);
    assert_eq!(code(&text), 0);
    let lines: Vec<String> = stdout(&text).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 5);
    for (i, line) in lines[..4].iter().enumerate() {
        assert!(line.starts_with(&format!("seed {}: ok", 3 + i)), "{line}");
    }
    assert!(lines[4].starts_with("checked 4/4 seeds, 0 counterexamples"));
}
