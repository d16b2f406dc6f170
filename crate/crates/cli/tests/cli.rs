use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dzeta"))
        .args(args)
        .env_remove("DZETA_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn load(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn assert_valid(schema: &str, instance: &Value) {
    let base = "https://dzeta.invalid/schemas/";
    let mut opts = jsonschema::options();
    for dep in ["common.schema.json", "report.schema.json"] {
        let resource = jsonschema::Resource::from_contents(load(dep)).unwrap();
        opts = opts.with_resource(format!("{base}{dep}"), resource);
    }
    let validator = opts.build(&load(schema)).unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let o = dzeta(args);
    (serde_json::from_str(&stdout(&o)).expect("valid JSON"), code(&o))
}

#[test]
fn eval_double_reduces_to_zeta_three() {
    let o = dzeta(&["eval", "double", "1", "2", "--prec", "50"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("= 1.2020569031595942853"), "{}", stdout(&o));
}

#[test]
fn eval_star() {
    let o = dzeta(&["eval", "star", "2", "2", "--prec", "30"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("1.894065658994492") || stdout(&o).contains("1.894065658994491"));
}

#[test]
fn eval_reg_prints_t_coefficients() {
    let (v, c) = json_of(&["eval", "reg", "2", "1", "stuffle", "--format", "json"]);
    assert_eq!(c, 0);
    assert_valid("eval.schema.json", &v);
    let cs = v["coefficients"].as_array().unwrap();
    assert_eq!(cs[0]["power"], 1);
    assert!(cs[0]["value"].as_str().unwrap().starts_with("1.644934066848"));
    assert_eq!(cs[1]["power"], 0);
    assert!(cs[1]["value"].as_str().unwrap().starts_with("-2.404113806319"));
    let text = stdout(&dzeta(&["eval", "reg", "2", "1"]));
    assert!(text.contains("T^1: 1.644934066848") && text.contains("T^0: -2.404113806319"));
}

#[test]
fn prec_env_var_sets_default() {
    let o = Command::new(env!("CARGO_BIN_EXE_dzeta"))
        .args(["eval", "single", "2", "--format", "json"])
        .env("DZETA_PREC", "20")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["precision"], 20);
    assert_eq!(v["value"], "1.64493406684822643647");
}

#[test]
fn thm1_extended_is_proven_with_certificate() {
    let (v, c) = json_of(&[
        "verify", "thm1", "--m", "2", "--n", "2", "--axioms", "extended", "--format", "json",
    ]);
    assert_eq!(c, 0);
    assert_valid("report.schema.json", &v);
    assert_eq!(v["symbolic"]["status"], "Proven");
    let cert = v["symbolic"]["certificate"].as_array().unwrap();
    assert_eq!(cert.len(), 2);
    assert_eq!(cert[0]["row"], "E(2,2)");
    assert_eq!(cert[0]["coef"], "-1");
    assert_eq!(cert[1]["row"], "S(4)");
    assert_eq!(cert[1]["coef"], "-2");
    assert_eq!(v["numeric"]["passed"], true);
}

#[test]
fn thm1_strict_is_not_in_span() {
    let o = dzeta(&["verify", "thm1", "--m", "2", "--n", "2", "--axioms", "strict"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("NotInSpan"));
    assert!(out.contains("residue: -6*ζ(1,3) + 2*ζ(2,2)"), "{out}");
}

#[test]
fn partial_fraction_prints_both_sides() {
    let o = dzeta(&["verify", "partial-fraction", "--n", "2", "--m", "1", "--x", "1", "--a", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("1/4 = 1/4"));
    let (v, _) = json_of(&[
        "verify", "partial_fraction", "--n", "2", "--m", "1", "--x", "1", "--a", "1", "--format", "json",
    ]);
    assert_valid("report.schema.json", &v);
    assert_eq!(v["exact"]["printed_lhs"], "1/2");
}

#[test]
fn batch_of_main_identities_passes() {
    let (v, c) = json_of(&[
        "verify-all", "--max-weight", "9", "--identities", "thm1,secunda,tertia", "--format", "json", "--no-timings",
    ]);
    assert_eq!(c, 0);
    assert_valid("batch.schema.json", &v);
    assert_eq!(v["failed"], 0);
    assert!(v["total"].as_u64().unwrap() > 40);
    let text = stdout(&dzeta(&["verify-all", "--max-weight", "6", "--identities", "thm1"]));
    assert!(text.lines().next().unwrap().starts_with("identity"));
    assert!(text.lines().last().unwrap().starts_with("total"));
}

#[test]
fn gkz_batch_is_exact_zero() {
    let (v, c) = json_of(&[
        "verify-all", "--max-weight", "10", "--identities", "gkz", "--format", "json", "--mode", "symbolic",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["exact_zero"], v["total"]);
}

#[test]
fn sum_formula_strict_fails() {
    let o = dzeta(&[
        "verify-all", "--max-weight", "8", "--identities", "sum_formula", "--axioms", "strict", "--mode", "symbolic",
    ]);
    assert_eq!(code(&o), 1);
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(last.contains("passed 0") && last.contains("NotInSpan 6"), "{last}");
}

#[test]
fn relations_dumps() {
    let (v, _) = json_of(&["relations", "--weight", "4", "--axioms", "extended", "--format", "json"]);
    assert_valid("relations.schema.json", &v);
    assert_eq!(v["rank"], 2);
    let ids: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["E(2,2)", "S(4)"]);

    let (v, _) = json_of(&["relations", "--weight", "3", "--axioms", "strict", "--format", "json"]);
    assert_eq!(v["rank"], 0);

    let (v, _) = json_of(&["relations", "--weight", "5", "--format", "json", "--print-basis"]);
    assert_valid("relations.schema.json", &v);
    assert!(v["pivots"].as_array().is_some_and(|p| p.len() == 2));
    let text = stdout(&dzeta(&["relations", "--weight", "5"]));
    assert!(text.contains("E(2,3): -ζ(5) + 6*ζ(1,4) + 2*ζ(2,3)"), "{text}");
}

#[test]
fn harmonic_fit_matches_references() {
    let (v, c) = json_of(&["fit", "--kind", "harmonic", "--a", "2", "--max-n", "1000000", "--format", "json"]);
    assert_eq!(c, 0);
    assert_valid("fit.schema.json", &v);
    assert!(v[0]["dev_slope"].as_f64().unwrap() < 1e-4);
    assert!(v[0]["dev_constant"].as_f64().unwrap() < 1e-3);
    assert!((v[0]["reference_constant"].as_f64().unwrap() + 2.0 * 1.2020569031595942).abs() < 1e-12);
}

#[test]
fn harmonic_fit_of_one_has_unit_slope() {
    let (v, _) = json_of(&["fit", "--kind", "harmonic", "--a", "1", "--format", "json"]);
    assert_valid("fit.schema.json", &v);
    assert_eq!(v[0]["depth"], 1);
    assert!((v[0]["slope"].as_f64().unwrap() - 1.0).abs() < 1e-4);
}

#[test]
fn abel_fit_constant() {
    let (v, _) = json_of(&["fit", "--kind", "abel", "--a", "2", "--format", "json"]);
    assert!((v[0]["constant"].as_f64().unwrap() + 2.0 * 1.2020569031595942).abs() < 1e-2);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "thm1", "--m", "2", "--n", "2", "--prec", "10"][..],
        &["verify", "thm1", "--m", "0", "--n", "3"],
        &["verify", "thm1", "--m", "2"],
        &["verify", "no_such_identity"],
        &["eval", "double", "2", "1"],
        &["verify", "thm1", "--m", "2", "--n", "2", "--t-samples", "0,1,1"],
        &["relations"],
        &["verify", "partial_fraction", "--n", "2", "--m", "1"],
    ] {
        assert_eq!(code(&dzeta(args)), 2, "{args:?}");
    }
}

#[test]
fn precision_not_achieved_exits_three() {
    assert_eq!(code(&dzeta(&["eval", "double", "2", "3", "--cutoff", "2"])), 3);
    // takes precedence over an ordinary failure
    let o = dzeta(&["verify", "thm1", "--m", "2", "--n", "3", "--cutoff", "2", "--axioms", "strict"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn output_is_deterministic_without_timings() {
    for format in ["json", "csv"] {
        let args = [
            "verify-all", "--max-weight", "7", "--identities", "thm1,gkz_sub,partial_fraction",
            "--format", format, "--no-timings",
        ];
        let a = dzeta(&args);
        let b = dzeta(&[&args[..], &["--jobs", "1"]].concat());
        assert_eq!(a.stdout, b.stdout, "{format}");
        assert!(!stdout(&a).contains("\"ms\""));
    }
}

#[test]
fn csv_flattens_certificates() {
    let o = dzeta(&["verify", "thm1", "--m", "2", "--n", "2", "--format", "csv", "--no-timings"]);
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let col = headers.iter().position(|h| h == "certificate").unwrap();
    let row = reader.records().next().unwrap().unwrap();
    assert_eq!(&row[col], "E(2,2)*-1;S(4)*-2");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = dzeta(&[
        "verify", "eds", "--m", "1", "--n", "2", "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid("report.schema.json", &v);
    assert_eq!(v["symbolic"]["status"], "ExactZero");
}

#[test]
fn key_numeric_and_weight_only_kinds() {
    let (v, c) = json_of(&["verify", "key_numeric", "--m", "2", "--n", "2", "--format", "json"]);
    assert_eq!(c, 0);
    assert_valid("report.schema.json", &v);
    assert_eq!(v["params"]["A"], 1000);
    let (v, c) = json_of(&["verify", "sum_formula", "--weight", "6", "--format", "json"]);
    assert_eq!(c, 0);
    assert_valid("report.schema.json", &v);
}
