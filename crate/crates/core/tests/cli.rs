//! End-to-end tests of the `elana` binary: exit codes and the JSON schema.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn elana(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elana"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn validate_valid_document_exits_zero() {
    let out = elana(&["--json", "validate", &fixture("fx-zoo.json")]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["command"], "validate");
    assert_eq!(v["mode"], "strong");
    assert_eq!(v["valid"], true);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn validate_reports_violations_and_exits_one() {
    // A weak-mode document rebuilt as strong violates the cross-domain
    // overlap condition.
    let doc = std::fs::read_to_string(fixture("ce-ctrans-weak-2.json"))
        .unwrap()
        .replace("\"weak\"", "\"strong\"");
    let mut tmp = tempfile::NamedTempFile::new().unwrap();
    tmp.write_all(doc.as_bytes()).unwrap();
    let out = elana(&["--json", "validate", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = json_of(&out);
    assert_eq!(v["valid"], false);
    let conditions: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["condition"].as_str().unwrap())
        .collect();
    assert!(conditions.contains(&"cross-domain-overlap"), "{conditions:?}");
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = elana(&["validate", "/nonexistent.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = elana(&["frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_reports_each_statement() {
    let out = elana(&[
        "--json",
        "check",
        &fixture("fx-zoo.json"),
        &fixture("example-zoo.tbox"),
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["all_hold"], true);
    let stmts = v["statements"].as_array().unwrap();
    assert!(stmts.iter().all(|s| s["holds"] == true));
    assert!(stmts
        .iter()
        .any(|s| s["statement"] == "ana Cat : WildCat :: Dog : Wolf"));
}

#[test]
fn mu_prints_translations_and_agrees_with_naive() {
    let out = elana(&[
        "--json",
        "mu",
        &fixture("fx-zoo.json"),
        "Cat",
        "WildCat",
        "--naive",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["count"], 1);
    assert_eq!(v["translations"][0], "{1->2}");
    assert_eq!(v["naive_agrees"], true);
}

#[test]
fn mu_empty_set_exits_one() {
    let out = elana(&["mu", &fixture("fx-zoo.json"), "Cat", "Young"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn ana_holds_and_fails() {
    let hold = elana(&["ana", &fixture("fx-zoo.json"), "Cat : WildCat :: Dog : Wolf"]);
    assert_eq!(code(&hold), 0);
    let fail = elana(&["ana", &fixture("fx-zoo.json"), "Cat : WildCat :: Young : Adult"]);
    assert_eq!(code(&fail), 1);
}

#[test]
fn ana_strict_detects_mu_mismatch() {
    // The two-element mu(A1, A3) differs from the singleton mu(A4, A6), so
    // the standard assertion holds while the strict one fails.
    let doc = fixture("ce-ctrans-weak-2.json");
    let quad = "A1 : A3 :: A4 : A6";
    assert_eq!(code(&elana(&["ana", &doc, quad])), 0);
    assert_eq!(code(&elana(&["ana", &doc, quad, "--strict"])), 1);
}

#[test]
fn ap_levels() {
    let doc = fixture("ce-desid-1.json");
    let out = elana(&["--json", "ap", &doc, "A1 : A2 :: A3 : A4"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["level"], "features");
    assert_eq!(v["holds"], true);
    let both = elana(&["ap", &doc, "A1 : A2 :: A3 : A4", "--level", "both"]);
    assert_eq!(code(&both), 0);
}

#[test]
fn infer_derives_the_zoo_conclusion() {
    let out = elana(&[
        "--json",
        "infer",
        &fixture("example-zoo.tbox"),
        "--witness",
        &fixture("fx-zoo.json"),
        "--query",
        "ci (and Adult Wolf) <= Dangerous",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["query"]["derived"], true);
    let rules: Vec<&str> = v["derivations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["rule"].as_str().unwrap())
        .collect();
    assert!(rules.contains(&"lift_conjunction"));
    assert!(rules.contains(&"rule_extrapolation"));
}

#[test]
fn infer_underivable_query_exits_one() {
    let out = elana(&[
        "infer",
        &fixture("example-zoo.tbox"),
        "--query",
        "ci Cat <= Dangerous",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn countermodel_found_exits_one_with_document() {
    let mut tbox = tempfile::NamedTempFile::new().unwrap();
    tbox.write_all(b"natural A, B, C, D\nana A : B :: C : D\n").unwrap();
    let out = elana(&[
        "--json",
        "countermodel",
        tbox.path().to_str().unwrap(),
        "--query",
        "ana A : C :: B : D",
        "--max-features",
        "3",
    ]);
    assert_eq!(code(&out), 1);
    let v = json_of(&out);
    assert_eq!(v["found"], true);
    // The emitted document must itself be a valid interpretation.
    let doc: elana::doc::InterpretationDoc =
        serde_json::from_value(v["interpretation"].clone()).unwrap();
    let interp = doc.build().unwrap();
    assert!(interp.validate().is_valid());
}

#[test]
fn countermodel_none_exits_zero() {
    let mut tbox = tempfile::NamedTempFile::new().unwrap();
    tbox.write_all(b"natural A\n").unwrap();
    let out = elana(&[
        "--json",
        "countermodel",
        tbox.path().to_str().unwrap(),
        "--query",
        "ci A <= A",
        "--max-features",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["found"], false);
}

#[test]
fn props_sweep_and_matrix() {
    let out = elana(&["--json", "props", "--seeds", "50"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 12);

    let out = elana(&["--json", "props", "--matrix", "--mode", "weak", "--seeds", "50"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["matrix"]["passed"], true);
    assert_eq!(v["matrix"]["cells"].as_array().unwrap().len(), 13);
}

#[test]
fn props_rejects_unknown_id() {
    let out = elana(&["props", "--prop", "nonsense"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn fixtures_all_pass_and_unknown_id_errors() {
    let out = elana(&["--json", "fixtures"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 12);

    assert_eq!(code(&elana(&["fixtures", "ce-desid-1"])), 0);
    assert_eq!(code(&elana(&["fixtures", "no-such-fixture"])), 2);
}
