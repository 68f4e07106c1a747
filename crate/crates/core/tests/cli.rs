use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use sympres::catalog;

fn sympres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sympres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn emit(dir: &TempDir, name: &str) -> PathBuf {
    let spec = catalog::spec_by_name(name).unwrap();
    write(dir, &format!("{name}.json"), &spec.to_json())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_negation_is_obstructed() {
    let dir = TempDir::new().unwrap();
    let out = sympres(&["analyze", p(&emit(&dir, "negation-4")), "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "no_symplectic_resolution");
    assert_eq!(report["g0_index"], 2);
    assert_eq!(report["z_min_codim"], 4);
}

#[test]
fn analyze_swap_passes() {
    let dir = TempDir::new().unwrap();
    let out = sympres(&["analyze", p(&emit(&dir, "symmetric-2")), "--strata"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["reflection_count"], 1);
    assert_eq!(report["verdict"], "necessary_condition_holds");
    assert_eq!(report["z_min_codim"], Value::Null);
    let raw = String::from_utf8_lossy(&out.stdout);
    let positions: Vec<usize> = [
        "name",
        "dimension",
        "conductor",
        "group_order",
        "reflection_count",
        "reflection_conjugacy_class_count",
        "g0_order",
        "g0_index",
        "verdict",
        "dim2_duval_note",
        "z_min_codim",
        "strata",
    ]
    .iter()
    .map(|k| {
        raw.find(&format!("\"{k}\":"))
            .unwrap_or_else(|| panic!("{k} missing"))
    })
    .collect();
    assert!(
        positions.windows(2).all(|w| w[0] < w[1]),
        "key order {positions:?}"
    );
    assert_eq!(report.as_object().unwrap().len(), positions.len());
    assert_eq!(report["strata"].as_array().unwrap().len(), 2);
}

#[test]
fn analyze_text_output() {
    let dir = TempDir::new().unwrap();
    let out = sympres(&["analyze", p(&emit(&dir, "sl2-cyclic-5")), "--text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("order: 5"));
    assert!(text.contains("verdict: necessary_condition_holds"));
    assert!(text.contains("Du Val"));
}

#[test]
fn infinite_group_hits_order_bound() {
    let dir = TempDir::new().unwrap();
    let shear = write(
        &dir,
        "shear.json",
        r#"{"name": "shear", "dimension": 2, "conductor": 1,
            "symplectic_form": "standard",
            "generators": [[["1", "1"], ["0", "1"]]]}"#,
    );
    let out = sympres(&["analyze", p(&shear), "--max-order", "500"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("500"));
}

#[test]
fn max_order_flag_is_respected() {
    let dir = TempDir::new().unwrap();
    let spec = emit(&dir, "symmetric-4");
    assert_eq!(
        sympres(&["analyze", p(&spec), "--max-order", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sympres(&["analyze", p(&spec), "--max-order", "24"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn invalid_specs_exit_with_diagnostics() {
    let dir = TempDir::new().unwrap();
    let odd = write(
        &dir,
        "odd.json",
        r#"{"name": "odd", "dimension": 3, "conductor": 1, "symplectic_form": "standard",
            "generators": []}"#,
    );
    let out = sympres(&["analyze", p(&odd)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("symplectic_form"), "{}", stderr(&out));

    let short = write(
        &dir,
        "short.json",
        r#"{"name": "short", "dimension": 2, "conductor": 5, "symplectic_form": "standard",
            "generators": [[[{"coeffs": ["1", "0"]}, "0"], ["0", "1"]]]}"#,
    );
    let out = sympres(&["analyze", p(&short)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("generators[0][0][0]"),
        "{}",
        stderr(&out)
    );

    let garbage = write(&dir, "garbage.json", "{ not json");
    assert_eq!(sympres(&["analyze", p(&garbage)]).status.code(), Some(1));

    let missing = dir.path().join("absent.json");
    assert_eq!(sympres(&["analyze", p(&missing)]).status.code(), Some(1));
}

#[test]
fn analyze_requires_a_form() {
    let dir = TempDir::new().unwrap();
    let spec = catalog::permutation_action(3).unwrap();
    let path = write(&dir, "s3.json", &spec.to_json());
    let out = sympres(&["analyze", p(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("double"));
}

#[test]
fn semismall_exit_codes() {
    let dir = TempDir::new().unwrap();
    let spec = emit(&dir, "symmetric-2");
    let good = write(&dir, "good.json", r#"{"fibers": {"0": 0, "1": 1}}"#);
    let bad = write(&dir, "bad.json", r#"{"fibers": {"0": 0, "1": 2}}"#);
    let missing = write(&dir, "missing.json", r#"{"fibers": {"0": 0}}"#);

    let out = sympres(&["semismall", p(&spec), p(&good)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("semismall: yes"));

    let out = sympres(&["semismall", p(&spec), p(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));

    let out = sympres(&["semismall", p(&spec), p(&missing)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("stratum 1"), "{}", stderr(&out));
}

#[test]
fn double_then_analyze() {
    let dir = TempDir::new().unwrap();
    let s3 = write(
        &dir,
        "s3.json",
        &catalog::permutation_action(3).unwrap().to_json(),
    );
    let doubled = dir.path().join("s3-doubled.json");
    let out = sympres(&["double", p(&s3), "-o", p(&doubled)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = sympres(&["analyze", p(&doubled)]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["dimension"], 6);
    assert_eq!(report["group_order"], 6);
    assert_eq!(report["reflection_count"], 3);
}

#[test]
fn double_small_actions() {
    let dir = TempDir::new().unwrap();
    let flip = write(
        &dir,
        "flip.json",
        r#"{"name": "flip", "dimension": 2, "conductor": 1,
            "generators": [[["-1", "0"], ["0", "1"]]]}"#,
    );
    let out = sympres(&["double", p(&flip)]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["dimension"], 4);
    assert_eq!(doc["symplectic_form"], "standard");

    let ident = write(
        &dir,
        "id.json",
        r#"{"name": "id", "dimension": 1, "conductor": 1, "generators": [[["1"]]]}"#,
    );
    let doubled = dir.path().join("id2.json");
    assert_eq!(
        sympres(&["double", p(&ident), "-o", p(&doubled)])
            .status
            .code(),
        Some(0)
    );
    let out = sympres(&["analyze", p(&doubled)]);
    assert_eq!(stdout_json(&out)["group_order"], 1);

    let symplectic = emit(&dir, "symmetric-2");
    assert_eq!(sympres(&["double", p(&symplectic)]).status.code(), Some(1));

    let singular = write(
        &dir,
        "singular.json",
        r#"{"name": "sing", "dimension": 1, "conductor": 1, "generators": [[["0"]]]}"#,
    );
    assert_eq!(sympres(&["double", p(&singular)]).status.code(), Some(1));
}

#[test]
fn catalog_list_and_emit() {
    let out = sympres(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let listing = String::from_utf8(out.stdout).unwrap();
    for name in ["symmetric-3", "weyl-G2", "sl2-icosahedral", "negation-4"] {
        assert!(listing.contains(name), "{name} missing");
    }

    let out = sympres(&["catalog", "emit", "weyl-G2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["dimension"], 4);
    assert_eq!(doc["generators"].as_array().unwrap().len(), 2);

    assert_eq!(
        sympres(&["catalog", "emit", "no-such-group"]).status.code(),
        Some(1)
    );
    assert_eq!(
        sympres(&["catalog", "emit", "symmetric-9"]).status.code(),
        Some(1)
    );
}

#[test]
fn spectrum_of_a_form() {
    let dir = TempDir::new().unwrap();
    let theta = write(
        &dir,
        "theta.json",
        r#"{"theta": [[0, [0, 2], 0, 0], [[0, -2], 0, 0, 0], [0, 0, 0, 3], [0, 0, -3, 0]]}"#,
    );
    let out = sympres(&["spectrum", p(&theta)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = stdout_json(&out);
    let lambdas: Vec<f64> = doc["symplectic_eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(lambdas.len(), 2);
    assert!((lambdas[0] - 2.0).abs() < 1e-12 && (lambdas[1] - 3.0).abs() < 1e-12);
    assert!((doc["pfaffian_abs"].as_f64().unwrap() - 6.0).abs() < 1e-12);

    let symmetric = write(&dir, "sym.json", r#"{"theta": [[0, 1], [1, 0]]}"#);
    assert_eq!(sympres(&["spectrum", p(&symmetric)]).status.code(), Some(1));
}
