//! Concept ASTs and the naturalness discipline.
//!
//! Naturalness is relative to a set of declarations: which atoms are natural
//! and which roles are intra-domain. `btw` is only well-formed over natural
//! children, and an existential restriction is natural exactly when its role
//! is intra-domain and its child is natural.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::ModelError;

/// A concept over `top`, `bot`, atoms, conjunction, existential restriction
/// and the in-between constructor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bot,
    Atom(String),
    And(Box<Concept>, Box<Concept>),
    Exists(String, Box<Concept>),
    Between(Box<Concept>, Box<Concept>),
}

impl Concept {
    pub fn atom(name: impl Into<String>) -> Concept {
        Concept::Atom(name.into())
    }

    pub fn and(a: Concept, b: Concept) -> Concept {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn exists(role: impl Into<String>, c: Concept) -> Concept {
        Concept::Exists(role.into(), Box::new(c))
    }

    pub fn between(a: Concept, b: Concept) -> Concept {
        Concept::Between(Box::new(a), Box::new(b))
    }

    /// Whether the concept is natural under the given declarations.
    pub fn is_natural(&self, decls: &Declarations) -> bool {
        match self {
            Concept::Top | Concept::Bot => false,
            Concept::Atom(a) => decls.natural_atoms.contains(a),
            Concept::And(a, b) => a.is_natural(decls) && b.is_natural(decls),
            Concept::Exists(r, c) => decls.intra_roles.contains(r) && c.is_natural(decls),
            Concept::Between(a, b) => a.is_natural(decls) && b.is_natural(decls),
        }
    }

    /// Checks grammar-level well-formedness: `btw` children must be natural.
    /// Returns the first offending subterm.
    pub fn check_well_formed(&self, decls: &Declarations) -> Result<(), ModelError> {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => Ok(()),
            Concept::And(a, b) => {
                a.check_well_formed(decls)?;
                b.check_well_formed(decls)
            }
            Concept::Exists(_, c) => c.check_well_formed(decls),
            Concept::Between(a, b) => {
                for side in [a, b] {
                    side.check_well_formed(decls)?;
                    if !side.is_natural(decls) {
                        return Err(ModelError::BetweenNotNatural(side.to_string()));
                    }
                }
                Ok(())
            }
        }
    }

    /// Conjunction/existential nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => 0,
            Concept::And(a, b) | Concept::Between(a, b) => 1 + a.depth().max(b.depth()),
            Concept::Exists(_, c) => 1 + c.depth(),
        }
    }

    /// All atom names occurring in the concept.
    pub fn atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Concept::Top | Concept::Bot => {}
            Concept::Atom(a) => {
                out.insert(a.clone());
            }
            Concept::And(a, b) | Concept::Between(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
            Concept::Exists(_, c) => c.atoms(out),
        }
    }

    /// All role names occurring in the concept.
    pub fn roles(&self, out: &mut BTreeSet<String>) {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => {}
            Concept::And(a, b) | Concept::Between(a, b) => {
                a.roles(out);
                b.roles(out);
            }
            Concept::Exists(r, c) => {
                out.insert(r.clone());
                c.roles(out);
            }
        }
    }

    /// Renders the concept in the DL-style notation used in reports.
    pub fn pretty(&self) -> String {
        match self {
            Concept::Top => "⊤".to_string(),
            Concept::Bot => "⊥".to_string(),
            Concept::Atom(a) => a.clone(),
            Concept::And(a, b) => format!("({} ⊓ {})", a.pretty(), b.pretty()),
            Concept::Exists(r, c) => format!("∃{}.{}", r, c.pretty()),
            Concept::Between(a, b) => format!("({} ⋈ {})", a.pretty(), b.pretty()),
        }
    }
}

/// S-expression rendering; `parse_concept` round-trips this exactly.
impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => write!(f, "top"),
            Concept::Bot => write!(f, "bot"),
            Concept::Atom(a) => write!(f, "{a}"),
            Concept::And(a, b) => write!(f, "(and {a} {b})"),
            Concept::Exists(r, c) => write!(f, "(some {r} {c})"),
            Concept::Between(a, b) => write!(f, "(btw {a} {b})"),
        }
    }
}

/// Vocabulary declarations: natural atom names and intra-domain role names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Declarations {
    pub natural_atoms: BTreeSet<String>,
    pub intra_roles: BTreeSet<String>,
}

impl Declarations {
    pub fn new(
        natural_atoms: impl IntoIterator<Item = String>,
        intra_roles: impl IntoIterator<Item = String>,
    ) -> Self {
        Declarations {
            natural_atoms: natural_atoms.into_iter().collect(),
            intra_roles: intra_roles.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decls() -> Declarations {
        Declarations::new(
            ["Cat".to_string(), "Dog".to_string()],
            ["specifies".to_string()],
        )
    }

    #[test]
    fn naturalness_of_composites() {
        let d = decls();
        let cat = Concept::atom("Cat");
        let x = Concept::atom("X");
        assert!(cat.is_natural(&d));
        assert!(!x.is_natural(&d));
        assert!(Concept::and(cat.clone(), Concept::atom("Dog")).is_natural(&d));
        assert!(!Concept::and(cat.clone(), x.clone()).is_natural(&d));
        assert!(Concept::exists("specifies", cat.clone()).is_natural(&d));
        assert!(!Concept::exists("owns", cat.clone()).is_natural(&d));
        assert!(!Concept::Top.is_natural(&d));
    }

    #[test]
    fn between_requires_natural_children() {
        let d = decls();
        let good = Concept::between(Concept::atom("Cat"), Concept::atom("Dog"));
        assert!(good.check_well_formed(&d).is_ok());
        let bad = Concept::between(Concept::atom("Cat"), Concept::atom("X"));
        assert!(matches!(
            bad.check_well_formed(&d),
            Err(ModelError::BetweenNotNatural(_))
        ));
    }

    #[test]
    fn display_is_sexpr() {
        let c = Concept::and(
            Concept::atom("Cat"),
            Concept::exists("specifies", Concept::between(Concept::atom("A"), Concept::atom("B"))),
        );
        assert_eq!(c.to_string(), "(and Cat (some specifies (btw A B)))");
    }
}
