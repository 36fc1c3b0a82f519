//! End-to-end tests of the `tthue` binary: subcommand contracts, JSONL
//! shape, exit codes, configuration precedence, and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::str::FromStr;

use serde_json::Value;
use tthue::Dyadic;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tthue"));
    // Isolate from the ambient environment so tests control precision.
    cmd.env_remove("TTHUE_BITS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_lines(output: &Output) -> Vec<Value> {
    let text = String::from_utf8(output.stdout.clone()).expect("utf-8 stdout");
    text.lines()
        .map(|line| serde_json::from_str(line).expect("valid JSON line"))
        .collect()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tthue-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

#[test]
fn condition_example_holds_with_exit_zero() {
    let out = run(&["condition", "--s", "5", "--t", "1", "--epsilon", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["holds"], Value::Bool(true));
    assert_eq!(lines[0]["epsilon"], Value::String("1/2".into()));
}

#[test]
fn failing_condition_exits_one() {
    // min(|2s−t|, |2t−s|, |s+t|) = 1 at (1, 1), not above the floor of 2.
    let out = run(&["condition", "--s", "1", "--t", "1", "--epsilon", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["holds"], Value::Bool(false));
}

#[test]
fn form_example_coefficients() {
    let out = run(&["form", "--n", "3", "--s", "1", "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["e1"], Value::from(2));
    assert_eq!(lines[0]["e2"], Value::from(-5));
    assert_eq!(lines[0]["e3"], Value::from(1));
}

#[test]
fn unknown_subcommand_exits_two() {
    let out = run(&["frm", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_required_flag_exits_two() {
    let out = run(&["form", "--n", "3", "--s", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn eval_serializes_large_integers_as_strings() {
    let big_x = "123456789012345678901";
    let out = run(&["eval", "--n", "3", "--s", "1", "--t", "1", "--x", big_x, "--y", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["x"], Value::String(big_x.into()));
    assert_eq!(lines[0]["y"], Value::from(1));
    assert!(lines[0]["value"].is_string(), "cube of a 70-bit number needs a string");
    assert_eq!(lines[0]["is_solution"], Value::Bool(false));
}

#[test]
fn decompose_untwisted_unit() {
    let out =
        run(&["decompose", "--n", "3", "--s", "1", "--t", "0", "--x", "-1", "--y", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["sign"], Value::from(1));
    assert_eq!(lines[0]["a"], Value::from(1));
    assert_eq!(lines[0]["b"], Value::from(1));
    assert_eq!(lines[0]["exact_verified"], Value::Bool(true));
}

#[test]
fn decompose_rejects_non_solution_with_exit_one() {
    let out = run(&["decompose", "--n", "3", "--s", "1", "--t", "0", "--x", "2", "--y", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not 1"), "diagnostic names the failure: {err}");
}

#[test]
fn roots_enclosures_round_trip_and_bracket() {
    let out = run(&["roots", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    let lam0 = &lines[0]["lam0"];
    let lo = Dyadic::from_str(lam0["lo"].as_str().unwrap()).unwrap();
    let hi = Dyadic::from_str(lam0["hi"].as_str().unwrap()).unwrap();
    assert!(lo <= hi);
    // Re-serialization reproduces the exact strings.
    assert_eq!(lo.to_string(), lam0["lo"].as_str().unwrap());
    assert_eq!(hi.to_string(), lam0["hi"].as_str().unwrap());
    // λ0 at n = 3 lies in (3 + 1/3, 3 + 2/3).
    assert!(lo.to_f64() > 3.3 && hi.to_f64() < 3.7);
    assert_eq!(lines[0]["bracket_status"], Value::String("pass".into()));
    assert_eq!(lines[0]["log_bracket_status"], Value::String("pass".into()));
}

#[test]
fn verify_reports_three_valued_status() {
    let pass = run(&[
        "verify", "--lemma", "alphadiff", "--n", "100", "--s", "5", "--t", "-3",
        "--epsilon", "1/10",
    ]);
    assert_eq!(pass.status.code(), Some(0));
    let lines = stdout_lines(&pass);
    assert_eq!(lines[0]["status"], Value::String("pass".into()));
    assert_eq!(lines[0]["hypothesis_ok"], Value::Bool(true));

    // Hypothesis violation (a·b·c ≠ 1): no claim, so undecided and exit 1.
    let undecided =
        run(&["verify", "--lemma", "prodbymax", "--a", "1/2", "--b", "1/3", "--c", "1"]);
    assert_eq!(undecided.status.code(), Some(1));
    let lines = stdout_lines(&undecided);
    assert_eq!(lines[0]["status"], Value::String("undecided".into()));

    let unknown = run(&["verify", "--lemma", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn search_output_is_byte_identical_across_runs() {
    let args = [
        "search", "--n-min", "3", "--n-max", "3", "--s-min", "1", "--s-max", "2",
        "--t-min", "-1", "--t-max", "1", "--y-max", "8",
    ];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    for _ in 0..2 {
        let again = run(&args);
        assert_eq!(again.status.code(), Some(0));
        assert_eq!(first.stdout, again.stdout, "reruns must be byte-identical");
    }
    let lines = stdout_lines(&first);
    let summary = lines.last().unwrap();
    assert_eq!(summary["kind"], Value::String("summary".into()));
    assert_eq!(summary["strategy"], Value::String("WINDOWED".into()));
    assert_eq!(
        summary["solutions_found"].as_u64().unwrap(),
        (lines.len() - 1) as u64
    );
}

#[test]
fn config_file_and_env_precedence_for_bits() {
    let dir = scratch_dir("cfg");
    let conf = dir.join("run.conf");
    std::fs::write(&conf, "bits = 160\nepsilon = 1/2\n").unwrap();

    // Config supplies both the precision and ε.
    let out = bin()
        .args(["condition", "--s", "5", "--t", "1", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["epsilon"], Value::String("1/2".into()));

    // Environment sets the default precision…
    let out = bin().args(["roots", "--n", "3"]).env("TTHUE_BITS", "64").output().unwrap();
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["bits"], Value::from(64));

    // …but an explicit config key beats it…
    let out = bin()
        .args(["roots", "--n", "3", "--config"])
        .arg(&conf)
        .env("TTHUE_BITS", "64")
        .output()
        .unwrap();
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["bits"], Value::from(160));

    // …and a flag beats both.
    let out = bin()
        .args(["roots", "--n", "3", "--bits", "96", "--config"])
        .arg(&conf)
        .env("TTHUE_BITS", "64")
        .output()
        .unwrap();
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["bits"], Value::from(96));

    // Bad environment value is a config error.
    let out = bin().args(["roots", "--n", "3"]).env("TTHUE_BITS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_flag_redirects_result_lines() {
    let dir = scratch_dir("out");
    let path = dir.join("form.jsonl");
    let out = bin()
        .args(["form", "--n", "4", "--s", "1", "--t", "1", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let line: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(line["n"], Value::from(4));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bounds_reports_enclosures_and_verdict() {
    let out = run(&["bounds", "--n", "1000000", "--t-count", "2", "--tau", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["tau_within"], Value::String("pass".into()));
    for key in ["baker_constant", "logy_ub", "tau_ub", "logy_by_n", "coeff_by_n"] {
        let enc = &lines[0][key];
        let lo = Dyadic::from_str(enc["lo"].as_str().unwrap()).unwrap();
        let hi = Dyadic::from_str(enc["hi"].as_str().unwrap()).unwrap();
        assert!(lo <= hi, "{key} endpoints ordered");
    }
    // τ = 10 ≥ c₃·log n·log log n fails at small n: certificate absent → 1.
    let out = run(&["bounds", "--n", "3", "--t-count", "2", "--tau", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0]["tau_within"], Value::String("fail".into()));
}
