//! TBoxes: concept inclusions, analogy assertions and nonemptiness claims,
//! together with satisfaction checking against an interpretation.

use std::fmt;

use crate::concept::Concept;
use crate::error::ModelError;
use crate::interp::Interpretation;
use crate::translations::mu;

/// An analogy assertion C1 : C2 :: D1 : D2, strict (`sana`) or not (`ana`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AnalogyAssertion {
    pub strict: bool,
    pub c1: Concept,
    pub c2: Concept,
    pub d1: Concept,
    pub d2: Concept,
}

impl fmt::Display for AnalogyAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = if self.strict { "sana" } else { "ana" };
        write!(f, "{kw} {} : {} :: {} : {}", self.c1, self.c2, self.d1, self.d2)
    }
}

/// One TBox statement, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Natural(String),
    Intra(String),
    Inclusion(Concept, Concept),
    Analogy(AnalogyAssertion),
    NonEmpty(Concept),
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Natural(a) => write!(f, "natural {a}"),
            Statement::Intra(r) => write!(f, "intra {r}"),
            Statement::Inclusion(c, d) => write!(f, "ci {c} <= {d}"),
            Statement::Analogy(a) => write!(f, "{a}"),
            Statement::NonEmpty(c) => write!(f, "nonempty {c}"),
        }
    }
}

/// A TBox as an ordered list of statements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TBox {
    pub statements: Vec<Statement>,
}

impl TBox {
    pub fn inclusions(&self) -> impl Iterator<Item = (&Concept, &Concept)> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Inclusion(c, d) => Some((c, d)),
            _ => None,
        })
    }

    pub fn assertions(&self) -> impl Iterator<Item = &AnalogyAssertion> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Analogy(a) => Some(a),
            _ => None,
        })
    }

    pub fn nonempty_claims(&self) -> impl Iterator<Item = &Concept> {
        self.statements.iter().filter_map(|s| match s {
            Statement::NonEmpty(c) => Some(c),
            _ => None,
        })
    }
}

/// Whether the interpretation satisfies an analogy assertion. `ana` asks for
/// a common domain translation between the two concept pairs; `sana`
/// additionally requires the two mu sets to be equal. All four concepts must
/// be natural.
pub fn satisfies_assertion(
    interp: &Interpretation,
    assertion: &AnalogyAssertion,
) -> Result<bool, ModelError> {
    let decls = interp.decls();
    for c in [&assertion.c1, &assertion.c2, &assertion.d1, &assertion.d2] {
        c.check_well_formed(&decls)?;
        if !c.is_natural(&decls) {
            return Err(ModelError::AssertionNotNatural(c.to_string()));
        }
    }
    let left = mu(interp, &assertion.c1, &assertion.c2)?;
    let right = mu(interp, &assertion.d1, &assertion.d2)?;
    if assertion.strict {
        Ok(left == right && !left.is_empty())
    } else {
        Ok(left.intersection(&right).next().is_some())
    }
}

/// Result of checking one TBox statement.
#[derive(Debug, Clone)]
pub struct StatementCheck {
    pub statement: String,
    pub holds: bool,
}

/// Whether the interpretation satisfies one statement. Declarations
/// (`natural`, `intra`) are vocabulary and hold if the interpretation
/// defines them; an undefined name is an error.
pub fn statement_holds(interp: &Interpretation, st: &Statement) -> Result<bool, ModelError> {
    let decls = interp.decls();
    match st {
        Statement::Natural(a) => {
            if !decls.natural_atoms.contains(a) {
                return Err(ModelError::UnknownAtom(a.clone()));
            }
            Ok(true)
        }
        Statement::Intra(r) => {
            if !decls.intra_roles.contains(r) {
                return Err(ModelError::NotIntraDomain(r.clone()));
            }
            Ok(true)
        }
        Statement::Inclusion(c, d) => {
            c.check_well_formed(&decls)?;
            d.check_well_formed(&decls)?;
            interp.satisfies_ci(c, d)
        }
        Statement::Analogy(a) => satisfies_assertion(interp, a),
        Statement::NonEmpty(c) => {
            c.check_well_formed(&decls)?;
            Ok(!interp.extension(c)?.is_empty())
        }
    }
}

/// Checks every statement of the TBox against the interpretation.
pub fn check_tbox(interp: &Interpretation, tbox: &TBox) -> Result<Vec<StatementCheck>, ModelError> {
    let mut out = Vec::new();
    for st in &tbox.statements {
        let holds = statement_holds(interp, st)?;
        out.push(StatementCheck { statement: st.to_string(), holds });
    }
    Ok(out)
}
