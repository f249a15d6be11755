use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn posfix(args: &[&str]) -> Output {
    posfix_env(args, &[])
}

fn posfix_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_posfix"));
    for var in [
        "POSFIX_FUEL",
        "POSFIX_BOUND",
        "POSFIX_UNIVERSE",
        "POSFIX_HORIZON",
        "POSFIX_SEED",
        "POSFIX_FORMAT",
        "POSFIX_OUT",
    ] {
        cmd.env_remove(var);
    }
    cmd.args(args)
        .envs(env.iter().copied())
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).expect("schema is JSON"))
        .expect("schema compiles")
}

fn assert_valid(schema_name: &str, out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("output is JSON");
    let errors: Vec<String> = schema(schema_name)
        .iter_errors(&v)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}\n{v:#}");
    v
}

#[test]
fn verify_claims_json_is_valid_and_byte_identical() {
    let a = posfix(&["verify-claims", "--format", "json"]);
    let b = posfix(&["--format", "json", "verify-claims"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let v = assert_valid("report.schema.json", &a);
    assert_eq!(v["totals"]["failed"], 0);
    assert_eq!(v["totals"]["unknown"], 0);
}

#[test]
fn starved_fuel_is_unknown_not_failure() {
    let o = posfix(&["--fuel", "1", "verify-claims", "--format", "json"]);
    assert_eq!(code(&o), 2);
    let v = assert_valid("report.schema.json", &o);
    assert_eq!(v["status"], "unknown");
    assert_eq!(v["totals"]["failed"], 0);
    assert!(v["totals"]["unknown"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_3() {
    for args in [
        &["bogus"][..],
        &[],
        &["--fuel", "0", "demo", "union"],
        &["--horizon", "x", "demo", "union"],
        &["--format", "xml", "demo", "union"],
        &["demo", "nope"],
        &["eval", "0 in"],
        &["eval", "0 in R", "--oracle", "full"],
        &["eval", "x in R", "x=pair(1"],
        &["eval", "x in R"],
        &["lfp", "~ x in R", "-n", "4"],
        &["lfp", "x in R", "-n", "0"],
        &["compile", "/nonexistent/prog.asm"],
        &["compile", "--decode", "12a"],
        &["eval", "0 in R", "--mode", "strict"],
    ] {
        let o = posfix(args);
        assert_eq!(
            code(&o),
            3,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&posfix(&["--help"])), 0);
    assert_eq!(code(&posfix(&["--version"])), 0);
}

#[test]
fn environment_overrides_and_flags_win() {
    let o = posfix_env(&["demo", "union"], &[("POSFIX_FUEL", "0")]);
    assert_eq!(code(&o), 3);
    let o = posfix_env(
        &["--fuel", "100000", "demo", "union"],
        &[("POSFIX_FUEL", "0")],
    );
    assert_eq!(code(&o), 0);
    let o = posfix_env(
        &["demo", "union"],
        &[("POSFIX_FORMAT", "json"), ("POSFIX_HORIZON", "7")],
    );
    let v = assert_valid("report.schema.json", &o);
    assert_eq!(v["config"]["horizon"], 7);
    let o = posfix_env(
        &["--format", "text", "demo", "union"],
        &[("POSFIX_FORMAT", "json")],
    );
    assert!(stdout(&o).starts_with("demo union"));
}

#[test]
fn demos_pass_and_print_their_traces() {
    let o = posfix(&["demo", "union"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let member_rows: Vec<&str> = text
        .lines()
        .filter(|l| l.trim_start().ends_with(" 1"))
        .collect();
    assert!(member_rows.iter().any(|l| l.trim_start().starts_with("3 ")));
    assert!(member_rows.iter().any(|l| l.trim_start().starts_with("5 ")));
    assert_eq!(member_rows.len(), 2, "{text}");

    let o = posfix(&["demo", "diagonal"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("y = 42:"));

    for name in ["complement", "reduction-identity"] {
        let o = posfix(&["demo", name, "--format", "json"]);
        assert_eq!(code(&o), 0, "{name}");
        let v = assert_valid("report.schema.json", &o);
        assert_eq!(v["totals"]["failed"], 0);
        assert_eq!(v["totals"]["unknown"], 0);
    }
}

#[test]
fn text_and_json_report_the_same_counts() {
    let text = stdout(&posfix(&["--fuel", "40", "demo", "complement"]));
    let v: Value = serde_json::from_slice(
        &posfix(&["--fuel", "40", "demo", "complement", "--format", "json"]).stdout,
    )
    .unwrap();
    let t = &v["totals"];
    let line = format!(
        "({} cases, {} passed, {} failed, {} unknown)",
        t["cases"], t["passed"], t["failed"], t["unknown"]
    );
    assert!(text.contains(&line), "{line} not in\n{text}");
}

#[test]
fn eval_examples() {
    let o = posfix(&[
        "eval",
        "builtin:psi",
        "y=pair(pair(0,2),2)",
        "--oracle",
        "empty",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = assert_valid("eval.schema.json", &o);
    assert_eq!(v["verdict"], "true");

    let o = posfix(&["eval", "0 in R", "--oracle", "{0}"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: true"));

    let o = posfix(&[
        "eval",
        "exists t. t in R",
        "--oracle",
        "empty",
        "--mode",
        "conservative",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("verdict: unknown"));

    let o = posfix(&[
        "eval",
        "exists t. t in R",
        "--mode",
        "finite",
        "--bound",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(assert_valid("eval.schema.json", &o)["verdict"], "false");

    let o = posfix(&[
        "eval",
        "x in R",
        "--set",
        "x=3",
        "--oracle",
        "certificates",
        "--format",
        "json",
    ]);
    assert_valid("eval.schema.json", &o);
}

#[test]
fn lfp_examples() {
    let o = posfix(&[
        "lfp",
        "x = 0 \\/ exists y. (y in R /\\ x = y + 1)",
        "-n",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = assert_valid("lfp-trace.schema.json", &o);
    assert_eq!(v["stages"].as_array().unwrap().len(), 6);
    assert_eq!(v["stabilized_at"], 5);
    assert_eq!(v["stages"][5], serde_json::json!([0, 1, 2, 3, 4]));

    let o = posfix(&["lfp", "x in R", "-n", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("stage 0: {}\nstable from stage 0"));

    let o = posfix(&["lfp", "~ x in R", "-n", "5"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("negation"));
}

#[test]
fn compile_round_trips_through_decode() {
    let src = "; successor\n(program 1 (succ (proj 0)))\n";
    let mut child = Command::new(env!("CARGO_BIN_EXE_posfix"))
        .args(["compile", "-", "--format", "json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(src.as_bytes())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0);
    let v = assert_valid("compile.schema.json", &o);
    assert_eq!(v["arity"], 1);

    let index = v["index"].as_str().unwrap();
    let back = posfix(&["compile", "--decode", index, "--format", "json"]);
    let w = assert_valid("compile.schema.json", &back);
    assert_eq!(w["program"], v["program"]);
    assert_eq!(w["index"], v["index"]);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let path = std::env::temp_dir().join(format!("posfix-out-{}.json", std::process::id()));
    let o = posfix(&[
        "demo",
        "union",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(
        written,
        posfix(&["demo", "union", "--format", "json"]).stdout
    );
}
