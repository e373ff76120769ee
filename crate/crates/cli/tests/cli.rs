use std::path::Path;
use std::process::{Command, Output};

use hhdeform::algebra::{preset_catalog, PRESET_NAMES};
use hhdeform_cli::format::{parse_algebra, write_algebra};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhdeform"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn hh_presets_and_files_agree() {
    let out = run(&["hh", "--algebra", "preset:dual_numbers", "--degrees", "0..3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["dims"], serde_json::json!([2, 1, 1, 1]));

    let dir = tempfile::tempdir().unwrap();
    let a = preset_catalog("matrix", &[2]).unwrap();
    let path = write(dir.path(), "m2.alg", &write_algebra(&a));
    let out = run(&["hh", "--algebra", &path, "--degrees", "0..2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["dims"], serde_json::json!([1, 0, 0]));

    let field = run(&["hh", "--algebra", "preset:field", "--degrees", "0..2", "--json"]);
    assert_eq!(json(&field)["results"]["dims"], serde_json::json!([1, 0, 0]));
}

#[test]
fn every_catalog_algebra_round_trips() {
    let params = |name: &str| -> Vec<usize> {
        match name {
            "truncated_poly" | "exterior" | "group_algebra" | "matrix" => vec![3],
            "truncated_poly2" => vec![2, 3],
            _ => vec![],
        }
    };
    for name in PRESET_NAMES {
        let a = preset_catalog(name, &params(name)).unwrap();
        let back = parse_algebra(&write_algebra(&a), name).unwrap();
        assert_eq!(back, a, "{name}");
    }
}

#[test]
fn parse_errors_exit_with_input_error_and_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.alg", "hochdef-algebra v1\nname q\nbasis 1\nunit one\n");
    let out = run(&["hh", "--algebra", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("{path}:4:6:")), "{err}");

    let missing = run(&["hh", "--algebra", "/nonexistent/file.alg"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn invalid_algebras_report_a_witness_triple() {
    let dir = tempfile::tempdir().unwrap();
    // x * 1 is missing, so 1 is not a right unit
    let body = "hochdef-algebra v1\nname broken\nbasis 1 x\nunit 1 0\nmul 0 0 0 1\nmul 0 1 1 1\nmul 1 1 1 1\n";
    let out = run(&["hh", "--algebra", &write(dir.path(), "broken.alg", body)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("triple"));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = run(&["selftest", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["selftest", "--scale", "huge"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deformation_files_classes_and_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let trivial = write(
        dir.path(),
        "trivial.def",
        "hochdef-deformation v1\nalgebra preset dual_numbers\nparams t\norder 1\n",
    );
    // x ⋆ x = t x is the coboundary of a map sending x into the unit line
    let gauge = write(
        dir.path(),
        "gauge.def",
        "hochdef-deformation v1\nalgebra preset dual_numbers\nparams t\norder 1\nbeta t 1 1 1 1\n",
    );
    let out = run(&["deform-class", "--deformation", &gauge, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["class"]["zero"], Value::Bool(true));

    let out = run(&["equiv", "--deformation", &trivial, "--deformation", &gauge, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let verdict = &json(&out)["results"]["verdict"];
    assert_eq!(verdict["equivalent"], Value::Bool(true));
    assert!(!verdict["gamma"].as_array().unwrap().is_empty());

    let out = run(&[
        "equiv",
        "--deformation",
        &trivial,
        "--deformation",
        "preset:dual_numbers",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("inequivalent"));

    let out = run(&["equiv", "--deformation", &trivial]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn obstruct_and_formality_on_presets() {
    let out = run(&["obstruct", "--deformation", "preset:clifford", "--order", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let body = json(&out);
    assert_eq!(body["results"]["reached_order"], 3);
    assert!(body["results"]["steps"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["obstructed"] == false));

    let out = run(&["formality", "--deformation", "preset:trivial", "--order", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["class"]["zero"], Value::Bool(true));

    let out = run(&[
        "formality",
        "--deformation",
        "preset:dual_numbers",
        "--order",
        "2",
        "--depth",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn remaining_verbs_pass() {
    for args in [
        vec!["cq", "--deformation", "preset:dual_numbers"],
        vec!["cq", "--algebra", "preset:truncated_poly:3", "--ideal", "x^2"],
        vec!["koszul-check", "--params", "2", "--depth", "3"],
        vec!["r-check", "--params", "2", "--weight", "2"],
        vec!["prop-cp", "--deformation", "preset:clifford"],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("timings"));
    }
}

#[test]
fn reports_are_deterministic_and_keep_timings_out() {
    let args = [
        "formality",
        "--deformation",
        "preset:clifford",
        "--order",
        "2",
        "--json",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("timings"));
    let seeded = run(&[
        "formality",
        "--deformation",
        "preset:clifford",
        "--order",
        "2",
        "--json",
        "--seed",
        "11",
    ]);
    assert_eq!(json(&seeded)["results"]["class"], json(&a)["results"]["class"]);
}

#[test]
fn sample_files_match_the_catalog() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let path = data.join("clifford.def");
    let parsed = hhdeform_cli::commands::load_deformation(path.to_str().unwrap(), None)
        .unwrap()
        .value;
    let preset = hhdeform::deformation::deformation_preset("clifford", 2).unwrap();
    assert_eq!(parsed.corrections(), preset.corrections());
    assert_eq!(parsed.algebra().table(), preset.algebra().table());

    let gauge = data.join("gauge.def");
    let out = run(&["deform-class", "--deformation", gauge.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["class"]["zero"], Value::Bool(true));
}
