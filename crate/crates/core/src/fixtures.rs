//! The bundled fixture corpus: worked examples plus counterexamples that
//! pin down which inference rules fail in which mode.
//!
//! Each fixture is an interpretation document together with an
//! expected-verdict file. Verdict lines read `holds <check>` or
//! `fails <check>`, where a check is a TBox statement (`ci`, `ana`,
//! `sana`, `nonempty`) or a feature-level proportion
//! `ap C1 : C2 :: C3 : C4`.

use crate::concept::Concept;
use crate::doc::InterpretationDoc;
use crate::error::ModelError;
use crate::interp::Interpretation;
use crate::parse::{parse_quad, parse_statement};
use crate::proportions::{ap_concepts, ApLevel};
use crate::tbox::{statement_holds, Statement};

/// One corpus entry: the document and its expected verdicts, embedded.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub id: &'static str,
    pub doc: &'static str,
    pub expect: &'static str,
}

/// The corpus, in a stable order.
pub fn corpus() -> &'static [Fixture] {
    const CORPUS: &[Fixture] = &[
        Fixture {
            id: "fx-zoo",
            doc: include_str!("../../../fixtures/fx-zoo.json"),
            expect: include_str!("../../../fixtures/fx-zoo.expect"),
        },
        Fixture {
            id: "fx-spec",
            doc: include_str!("../../../fixtures/fx-spec.json"),
            expect: include_str!("../../../fixtures/fx-spec.expect"),
        },
        Fixture {
            id: "ce-desid-1",
            doc: include_str!("../../../fixtures/ce-desid-1.json"),
            expect: include_str!("../../../fixtures/ce-desid-1.expect"),
        },
        Fixture {
            id: "ce-desid-2",
            doc: include_str!("../../../fixtures/ce-desid-2.json"),
            expect: include_str!("../../../fixtures/ce-desid-2.expect"),
        },
        Fixture {
            id: "ce-extrap-side",
            doc: include_str!("../../../fixtures/ce-extrap-side.json"),
            expect: include_str!("../../../fixtures/ce-extrap-side.expect"),
        },
        Fixture {
            id: "ce-ctrans-weak-1",
            doc: include_str!("../../../fixtures/ce-ctrans-weak-1.json"),
            expect: include_str!("../../../fixtures/ce-ctrans-weak-1.expect"),
        },
        Fixture {
            id: "ce-ctrans-weak-2",
            doc: include_str!("../../../fixtures/ce-ctrans-weak-2.json"),
            expect: include_str!("../../../fixtures/ce-ctrans-weak-2.expect"),
        },
        Fixture {
            id: "ce-strans-weak",
            doc: include_str!("../../../fixtures/ce-strans-weak.json"),
            expect: include_str!("../../../fixtures/ce-strans-weak.expect"),
        },
        Fixture {
            id: "ce-liftexists-strong",
            doc: include_str!("../../../fixtures/ce-liftexists-strong.json"),
            expect: include_str!("../../../fixtures/ce-liftexists-strong.expect"),
        },
        Fixture {
            id: "ce-liftconj-weak",
            doc: include_str!("../../../fixtures/ce-liftconj-weak.json"),
            expect: include_str!("../../../fixtures/ce-liftconj-weak.expect"),
        },
        Fixture {
            id: "ce-extrap-weak",
            doc: include_str!("../../../fixtures/ce-extrap-weak.json"),
            expect: include_str!("../../../fixtures/ce-extrap-weak.expect"),
        },
        Fixture {
            id: "ce-extrap-weak-strict",
            doc: include_str!("../../../fixtures/ce-extrap-weak-strict.json"),
            expect: include_str!("../../../fixtures/ce-extrap-weak-strict.expect"),
        },
    ];
    CORPUS
}

/// Looks a fixture up by id.
pub fn by_id(id: &str) -> Option<Fixture> {
    corpus().iter().copied().find(|f| f.id == id)
}

/// A check parsed from an expect file.
#[derive(Debug, Clone)]
pub enum Check {
    Statement(Statement),
    Proportion([Concept; 4]),
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Check::Statement(st) => write!(f, "{st}"),
            Check::Proportion([a, b, c, d]) => write!(f, "ap {a} : {b} :: {c} : {d}"),
        }
    }
}

/// One verdict line with its outcome against the fixture interpretation.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: String,
    pub expected: bool,
    pub actual: bool,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

/// The result of running one fixture.
#[derive(Debug, Clone)]
pub struct FixtureReport {
    pub id: String,
    /// Violations reported by the validator, empty for a valid fixture.
    pub validation: Vec<String>,
    pub outcomes: Vec<CheckOutcome>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.validation.is_empty() && self.outcomes.iter().all(|o| o.passed())
    }
}

/// Parses the expect file into expected verdicts.
pub fn parse_expect(
    text: &str,
    interp: &Interpretation,
) -> Result<Vec<(bool, Check)>, ModelError> {
    let decls = interp.decls();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| ModelError::Invalid(format!("expect line {line_no}: {msg}"));
        let (verdict, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad("expected `holds` or `fails` and a check".into()))?;
        let expected = match verdict {
            "holds" => true,
            "fails" => false,
            other => return Err(bad(format!("unknown verdict `{other}`"))),
        };
        let rest = rest.trim_start();
        let check = if let Some(quad_text) = rest.strip_prefix("ap ") {
            Check::Proportion(parse_quad(quad_text, &decls).map_err(|e| bad(e.to_string()))?)
        } else {
            Check::Statement(
                parse_statement(rest, line_no, &decls).map_err(|e| bad(e.to_string()))?,
            )
        };
        out.push((expected, check));
    }
    Ok(out)
}

/// Evaluates a check against the interpretation.
pub fn eval_check(interp: &Interpretation, check: &Check) -> Result<bool, ModelError> {
    match check {
        Check::Statement(st) => statement_holds(interp, st),
        Check::Proportion([a, b, c, d]) => ap_concepts(interp, ApLevel::Features, a, b, c, d),
    }
}

/// Runs a fixture: builds and validates the document in its declared mode,
/// then evaluates every verdict line.
pub fn run(fixture: Fixture) -> Result<FixtureReport, ModelError> {
    let doc = InterpretationDoc::from_json(fixture.doc)?;
    let interp = doc.build()?;
    let validation = interp
        .validate()
        .violations
        .iter()
        .map(|v| v.to_string())
        .collect();
    let mut outcomes = Vec::new();
    for (expected, check) in parse_expect(fixture.expect, &interp)? {
        let actual = eval_check(&interp, &check)?;
        outcomes.push(CheckOutcome { check: check.to_string(), expected, actual });
    }
    Ok(FixtureReport { id: fixture.id.to_string(), validation, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_matches_its_expected_verdicts() {
        for fixture in corpus() {
            let report = run(*fixture).unwrap_or_else(|e| panic!("{}: {e}", fixture.id));
            assert!(
                report.validation.is_empty(),
                "{}: validator rejected the document: {:?}",
                fixture.id,
                report.validation
            );
            for outcome in &report.outcomes {
                assert_eq!(
                    outcome.actual, outcome.expected,
                    "{}: `{}` expected {} but got {}",
                    fixture.id, outcome.check, outcome.expected, outcome.actual
                );
            }
        }
    }

    #[test]
    fn fixture_documents_round_trip() {
        for fixture in corpus() {
            let doc = InterpretationDoc::from_json(fixture.doc).unwrap();
            let interp = doc.build().unwrap();
            let emitted = InterpretationDoc::from_interpretation(&interp);
            let rebuilt = emitted.build().unwrap_or_else(|e| panic!("{}: {e}", fixture.id));
            assert_eq!(
                interp.natural_atoms(),
                rebuilt.natural_atoms(),
                "{}: atoms changed in round trip",
                fixture.id
            );
            assert_eq!(interp.mode(), rebuilt.mode());
        }
    }
}
