use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use spinr::cli::OutputRecord;

const SCHEMA: &str = include_str!("../schema/output.schema.json");

fn spinr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinr"))
        .args(args)
        .env_remove("SPINR_CATALOG")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("spinr-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

fn validate(json: &str) -> OutputRecord {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let v: Value = serde_json::from_str(json).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{json}");
    let rec: OutputRecord = serde_json::from_value(v).unwrap();
    let again: OutputRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
    assert_eq!(again, rec);
    rec
}

const MINI: &str = r#"
version = 1

[[ideal]]
kind = "so(3)"
dim = 3
min_orth_rep_dim = 3
provenance = "test"

[[group]]
name = "SO(3)"
pi1 = { free_rank = 0, torsion = [2] }
generators = ["rot"]
algebra = { ideals = ["so(3)"] }
connected = true
provenance = "test"

[[group]]
name = "K"
pi1 = { free_rank = 0 }
algebra = {}
connected = false
provenance = "test: a disconnected group"

[[space]]
name = "Y"
G = "SO(3)"
H = "K"
n = 3
sigma_pi1_images = []
provenance = "test"

[[space]]
name = "T"
G = "SO(3)"
H = "SO(3)"
n = 5
sigma_pi1_images = [[1]]
provenance = "test: no families are catalogued, so r = 3, 4 stay open"
"#;

#[test]
fn table1_exit_zero_and_deterministic() {
    let a = spinr(&["table1"]);
    let b = spinr(&["table1"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(out.lines().count(), 11);
    assert!(out.contains("| S^n | SO(n+1) | n (n ≠ 4), 3 (n = 4) |"));
    assert!(out.contains("| S^(4n+3) | Sp(n+1)·Sp(1) | 1 (n odd), 3 (n even) |"));
    assert!(out.contains("| S^15 | Spin(9) | 1 |"));
}

#[test]
fn table1_mismatch_exit_one_with_diff() {
    let fx = include_str!("../catalog/table1.toml").replace("display = \"1\"\npattern = \"S6:G2\"\nexpected = [{ value = 1 }]", "display = \"2\"\npattern = \"S6:G2\"\nexpected = [{ value = 2 }]");
    let p = temp_file("fixture.toml", &fx);
    let o = spinr(&["table1", "--fixture", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("- S6:G2: expected 2"), "{}", stderr(&o));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn table1_json_validates() {
    let o = spinr(&["table1", "--format", "json"]);
    let rec = validate(&stdout(&o));
    assert_eq!(rec.rows.len(), 9);
    assert!(rec.rows.iter().all(|r| r.ok));
}

#[test]
fn classify_outputs() {
    let o = spinr(&["classify", "S2:SO(3)", "--r", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rec = validate(&stdout(&o));
    assert_eq!(rec.verdict, "infinite family");
    assert_eq!(rec.classes[0].constraint.as_deref(), Some("s odd"));
    assert!(!rec.citations.is_empty());

    let rec = validate(&stdout(&spinr(&["classify", "S11:U(6)", "--r", "1", "--format", "json"])));
    assert!(rec.classes.is_empty());
    assert_eq!(rec.complete, Some(true));
    assert_eq!(rec.witnesses[0].generator, "det");

    let rec = validate(&stdout(&spinr(&["classify", "S4:SO(5)", "--r", "2", "--format", "json"])));
    assert!(rec.classes.is_empty());
    assert_eq!(rec.trace[0], "so(3)⊕so(3) admits no nontrivial map to so(2)");

    // ASCII dot accepted
    let rec = validate(&stdout(&spinr(&["classify", "S11:Sp(3).U(1)", "--r", "2", "--format", "json"])));
    assert_eq!(rec.classes[0].constraint.as_deref(), Some("s ≡ 2 mod 4"));
}

#[test]
fn spin_type_and_holonomy_outputs() {
    let o = spinr(&["spin-type", "S4:SO(5)"]);
    assert!(stdout(&o).contains("**Result:** 3 (exact)"), "{}", stdout(&o));
    let rec = validate(&stdout(&spinr(&["spin-type", "S8:SO(9)", "--format", "json"])));
    assert_eq!((rec.verdict.as_str(), rec.status.as_deref()), ("8", Some("exact")));

    let rec = validate(&stdout(&spinr(&["holonomy", "Sp(3)·Sp(1)", "--m", "12", "--r", "2", "--format", "json"])));
    assert_eq!(rec.verdict, "no");
    let rec = validate(&stdout(&spinr(&["holonomy", "G2", "--m", "7", "--r", "1", "--format", "json"])));
    assert_eq!(rec.verdict, "yes");
}

#[test]
fn unknown_names_exit_two() {
    let o = spinr(&["classify", "S9:E8", "--r", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("S{n}:SO({n+1})"), "{}", stderr(&o));
    assert_eq!(code(&spinr(&["holonomy", "E8", "--m", "248", "--r", "1"])), 2);
    assert_eq!(code(&spinr(&["classify", "S4:SO(5)"])), 2);
}

#[test]
fn disconnected_isotropy_exit_three() {
    let p = temp_file("disconnected.toml", MINI);
    let o = spinr(&["--catalog", p.to_str().unwrap(), "classify", "Y", "--r", "1"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("not connected"));
}

#[test]
fn bad_catalog_exit_four() {
    let bad = MINI.replace("dim = 3", "dim = 2");
    let p = temp_file("bad.toml", &bad);
    let o = spinr(&["--catalog", p.to_str().unwrap(), "table1"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("catalog line 4"), "{}", stderr(&o));

    let o = Command::new(env!("CARGO_BIN_EXE_spinr"))
        .args(["classify", "S2:SO(3)", "--r", "2"])
        .env("SPINR_CATALOG", &p)
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
}

#[test]
fn strict_rejects_bounded() {
    let p = temp_file("open.toml", MINI);
    let cat = p.to_str().unwrap();
    let o = spinr(&["--catalog", cat, "spin-type", "T", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rec = validate(&stdout(&o));
    assert_eq!((rec.status.as_deref(), rec.bounds), (Some("bounded"), Some([3, 5])));
    assert_eq!(code(&spinr(&["--catalog", cat, "--strict", "spin-type", "T"])), 1);
}
