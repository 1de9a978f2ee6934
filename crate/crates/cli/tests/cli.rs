use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;

use disclosure_cli::{run, EXIT_INVALID, EXIT_OK, EXIT_UNDEFINED, EXIT_USAGE};
use serde_json::Value;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn sdg(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sdg").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn sdg_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = sdg(&full);
    let v: Value = serde_json::from_str(&o.out)
        .unwrap_or_else(|e| panic!("{args:?}: invalid JSON ({e}): {}", o.out));
    (o.code, v)
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/cli-output.schema.json");
        let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        jsonschema::validator_for(&schema).expect("schema compiles")
    })
}

fn assert_schema(v: &Value) {
    let errors: Vec<String> = validator().iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}\n{v:#}");
}

fn write_sdg(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const VALID: &str = "\
scenario coin
params 1 2
outcomes h t
row h 1 1/2
row t 0 1/2
";

#[test]
fn decide_monty_switches_to_two() {
    let o = sdg(&["decide", "monty", "--obs", "y3", "--initial", "1"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.out.trim(), "Switch → {2}");
    assert!(o.err.is_empty());
}

#[test]
fn impossible_observation_exits_undefined() {
    let o = sdg(&["likelihood", "monty", "--obs", "y1"]);
    assert_eq!(o.code, EXIT_UNDEFINED);
    assert!(o.out.contains("MLE: {}"), "{}", o.out);

    let (code, v) = sdg_json(&["likelihood", "monty", "--obs", "y1"]);
    assert_eq!(code, EXIT_UNDEFINED);
    assert_eq!(v["likelihood"]["values"], serde_json::json!(["0", "0", "0"]));
    assert_eq!(v["mle"], serde_json::json!([]));
    assert_eq!(v["impossible"], true);
}

#[test]
fn two_promise_table_flags_infeasible_column() {
    let o = sdg(&["table", "news-promised:AB"]);
    assert_eq!(o.code, EXIT_OK);
    let header = o.out.lines().nth(1).unwrap();
    assert!(header.contains("θ=3*"), "{header}");
    assert!(!header.contains("θ=1*") && !header.contains("θ=2*"));
    assert!(o.out.contains("infeasible"));

    let (_, v) = sdg_json(&["table", "news-promised:AB"]);
    let feasible: Vec<bool> = v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["feasible"].as_bool().unwrap())
        .collect();
    assert_eq!(feasible, [true, true, false]);
}

#[test]
fn game_off_outcome_is_undefined() {
    let o = sdg(&["decide", "forgetful", "--obs", "y4"]);
    assert_eq!(o.code, EXIT_UNDEFINED);
    let o = sdg(&["table", "forgetful"]);
    assert_eq!(o.code, EXIT_OK);
    let y4 = o.out.lines().find(|l| l.starts_with("y4")).unwrap();
    assert!(y4.trim_end().ends_with('-'), "{y4}");
}

#[test]
fn exact_probabilities_in_text_and_json() {
    let o = sdg(&["winprob", "forgetful", "--policy", "switch"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.contains("cancelled  1/3"), "{}", o.out);
    assert!(o.out.contains("win | game on  1/2"), "{}", o.out);

    let (_, v) = sdg_json(&["winprob", "monty", "--policy", "switch"]);
    assert_eq!(v["win"], "2/3");
    let (_, v) = sdg_json(&["winprob", "monty", "--policy", "stay"]);
    assert_eq!(v["win"], "1/3");
    let (_, v) = sdg_json(&["posterior", "guard-joint", "--obs", "(3,3)"]);
    assert_eq!(v["posterior"][0]["p"], "1/2");
}

#[test]
fn text_and_json_report_identical_rationals() {
    let cases: [&[&str]; 4] = [
        &["likelihood", "monty-biased:3/4", "--obs", "y2"],
        &["posterior", "monty-biased:1/10", "--obs", "y3"],
        &["posterior", "news-promised:A", "--obs", "y3"],
        &["likelihood", "guard-joint", "--obs", "(2,3)"],
    ];
    for args in cases {
        let text = sdg(args).out;
        let (_, v) = sdg_json(args);
        let values: Vec<String> = match &v["likelihood"]["values"] {
            Value::Array(a) => a.iter().map(|x| x.as_str().unwrap().to_string()).collect(),
            _ => v["posterior"]
                .as_array()
                .unwrap()
                .iter()
                .map(|w| w["p"].as_str().unwrap().to_string())
                .collect(),
        };
        let rows: Vec<&str> = text.lines().skip(2).take(values.len()).collect();
        for (row, value) in rows.iter().zip(&values) {
            assert_eq!(row.split_whitespace().last().unwrap(), value, "{args:?}");
        }
    }
}

#[test]
fn every_subcommand_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_sdg(&dir, "coin.sdg", VALID);
    let mut invocations: Vec<Vec<&str>> = vec![
        vec!["decide", "monty", "--obs", "y3", "--initial", "1"],
        vec!["decide", "forgetful", "--obs", "y4"],
        vec!["likelihood", "monty", "--obs", "y1"],
        vec!["likelihood", "forgetful", "--obs", "y4"],
        vec!["posterior", "monty", "--obs", "y2", "--prior", "1/2,1/4,1/4"],
        vec!["winprob", "forgetful", "--policy", "mle"],
        vec!["winprob", "monty", "--policy", "stay"],
        vec!["compare", "monty", "forgetful", "--obs", "y3"],
        vec!["paradox"],
        vec!["paradox", "--strict"],
        vec!["simulate", "forgetful", "--policy", "stay,switch,mle", "--trials", "2000"],
        vec!["check", &file],
        vec!["table", &file],
    ];
    for s in [
        "monty",
        "monty-biased:0",
        "forgetful",
        "guard-single",
        "guard-joint",
        "news",
        "news-promised:AB",
    ] {
        invocations.push(vec!["table", s]);
    }
    for args in &invocations {
        let (code, v) = sdg_json(args);
        assert!(code == EXIT_OK || code == EXIT_UNDEFINED, "{args:?} -> {code}");
        assert_eq!(v["command"], args[0], "{args:?}");
        assert_schema(&v);
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["decide", "nosuch", "--obs", "y1"][..],
        &["decide", "monty", "--obs", "y9"],
        &["decide", "monty", "--obs", "y2", "--initial", "7"],
        &["winprob", "monty", "--policy", "sometimes"],
        &["table", "monty-biased:2"],
        &["frobnicate"],
        &["table"],
    ] {
        let o = sdg(args);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}: {}", o.err);
        assert!(o.out.is_empty(), "{args:?}");
        assert!(!o.err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_goes_to_stdout() {
    let o = sdg(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.contains("news-promised:<set>"));
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_range = write_sdg(
        &dir,
        "range.sdg",
        "scenario t\nparams 1 2\noutcomes a b\nrow a 1 3/2\nrow b 0 0\n",
    );
    let o = sdg(&["check", &bad_range]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.err.contains(":4:"), "{}", o.err);

    let bad_rational = write_sdg(
        &dir,
        "rational.sdg",
        "scenario t\nparams 1\noutcomes a\nrow a 1/0\n",
    );
    let o = sdg(&["check", &bad_rational]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.err.contains(":4:"), "{}", o.err);

    let missing = dir.path().join("missing.sdg");
    let o = sdg(&["check", missing.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_INVALID);

    let o = sdg(&["posterior", "monty", "--obs", "y2", "--prior", "1,1,1"]);
    assert_eq!(o.code, EXIT_INVALID);
}

#[test]
fn zero_evidence_posterior_exits_undefined() {
    let o = sdg(&["posterior", "monty", "--obs", "y1"]);
    assert_eq!(o.code, EXIT_UNDEFINED, "{}", o.err);
}

#[test]
fn sdg_files_are_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_sdg(&dir, "coin.sdg", VALID);
    let o = sdg(&["check", &file]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    let o = sdg(&["decide", &file, "--obs", "t", "--initial", "1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert_eq!(o.out.trim(), "Switch → {2}");
}

#[test]
fn output_flag_writes_file_only() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("table.json");
    let o = sdg(&["--format", "json", "-o", target.to_str().unwrap(), "table", "monty"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["model"]["table"][2], serde_json::json!(["1/2", "1", "0"]));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn simulation_is_reproducible() {
    let args = ["simulate", "monty", "--trials", "20000", "--seed", "7"];
    let a = sdg(&args);
    let b = sdg(&args);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
    let (_, v) = sdg_json(&args);
    for p in v["policies"].as_array().unwrap() {
        assert_eq!(p["win"]["within"], true);
    }
}

#[test]
fn binary_splits_streams_and_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_sdg");
    let ok = Command::new(exe)
        .args(["decide", "monty", "--obs", "y3", "--initial", "1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "Switch → {2}");
    assert!(ok.stderr.is_empty());

    let bad = Command::new(exe).args(["table", "nosuch"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert!(bad.stdout.is_empty());
    assert!(!bad.stderr.is_empty());
}

#[test]
fn schema_rejects_malformed_documents() {
    let (_, mut v) = sdg_json(&["winprob", "monty", "--policy", "stay"]);
    assert!(validator().is_valid(&v));
    v["win"] = Value::from("0.333");
    assert!(!validator().is_valid(&v));
    assert!(!validator().is_valid(&serde_json::json!({"command": "table"})));
    assert!(!validator().is_valid(&serde_json::json!({"command": "nosuch"})));
}

#[test]
fn documented_examples_stay_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let o = sdg(&["check", path.to_str().unwrap()]);
        assert_eq!(o.code, EXIT_OK, "{}: {}", path.display(), o.err);
        seen += 1;
    }
    assert_eq!(seen, 3);
    let monty = dir.join("monty.sdg");
    let o = sdg(&["decide", monty.to_str().unwrap(), "--obs", "y3", "--initial", "1"]);
    assert_eq!(o.out.trim(), "Switch → {2}");
    let o = sdg(&["table", dir.join("news-promised-ab.sdg").to_str().unwrap()]);
    assert!(o.out.contains("θ=3*"));
}

#[test]
fn documented_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            "scenario monty\nparams 1 2 3\noutcomes y1 y2 y3\nrow y2 1/2 0\n",
            "bad.sdg:4:5: row `y2` has 2 probabilities, expected 3",
        ),
        (
            "scenario bad\nparams 1 2\noutcomes a b\nrow a 3/2 1\nrow b 0 0\n",
            "bad.sdg:4:7: entry for θ=1, y=a is 3/2, outside [0, 1]",
        ),
        (
            "scenario bad\nparams 1 2\noutcomes a b\nrow a 1/4 1\nrow b 1/4 0\n",
            "bad.sdg:2:8: column θ=1 sums to 1/2, expected 0 or 1",
        ),
    ];
    for (body, expected) in cases {
        let file = write_sdg(&dir, "bad.sdg", body);
        let o = sdg(&["check", &file]);
        assert_eq!(o.code, EXIT_INVALID);
        assert!(o.err.trim_end().ends_with(expected), "{}", o.err);
    }
}
