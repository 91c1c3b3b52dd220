//! The plausible-inference rule engine: single-step rules derived from the
//! lifting, transitivity, translation, extrapolation and interpolation
//! results, plus a bounded fixpoint closure with provenance.
//!
//! The rule set is sound but deliberately not complete; there is no proof
//! system for the logic, only a collection of closure-friendly entailments.
//! Rules are gated by the interpretation mode: several entailments fail
//! under weak semantics and are never fired there.

use std::collections::BTreeSet;
use std::fmt;

use crate::concept::{Concept, Declarations};
use crate::error::ModelError;
use crate::interp::{Interpretation, Mode};
use crate::tbox::{check_tbox, AnalogyAssertion, Statement, TBox};

/// A fact the engine reasons over.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fact {
    Ci(Concept, Concept),
    Ana(AnalogyAssertion),
    NonEmpty(Concept),
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Ci(c, d) => write!(f, "ci {c} <= {d}"),
            Fact::Ana(a) => write!(f, "{a}"),
            Fact::NonEmpty(c) => write!(f, "nonempty {c}"),
        }
    }
}

/// One derivation step: a conclusion, the rule that produced it, its
/// premises and the nonemptiness side conditions it consumed.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub conclusion: Fact,
    pub rule: &'static str,
    pub premises: Vec<Fact>,
    pub side_conditions: Vec<Concept>,
}

/// Closure parameters.
#[derive(Debug, Clone, Copy)]
pub struct ClosureConfig {
    pub mode: Mode,
    /// Maximum nesting depth of derived concepts.
    pub depth_bound: usize,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        // Conjunction and existential lifting make the fact space grow
        // exponentially with depth; one constructor of derived nesting is
        // enough for the bundled examples and keeps the closure small.
        ClosureConfig { mode: Mode::Strong, depth_bound: 1 }
    }
}

/// Closure output: derivations in derivation order (asserted facts first)
/// and whether the depth bound suppressed any conclusion.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub derivations: Vec<Derivation>,
    pub bound_reached: bool,
}

impl ClosureResult {
    pub fn facts(&self) -> BTreeSet<Fact> {
        self.derivations.iter().map(|d| d.conclusion.clone()).collect()
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.derivations.iter().any(|d| d.conclusion == *fact)
    }

    /// The derivation that first produced a fact.
    pub fn derivation_of(&self, fact: &Fact) -> Option<&Derivation> {
        self.derivations.iter().find(|d| d.conclusion == *fact)
    }
}

/// Collapses duplicated conjuncts so that trivially self-lifted assertions
/// normalize back to their premise.
fn normalize(c: &Concept) -> Concept {
    match c {
        Concept::And(a, b) => {
            let na = normalize(a);
            let nb = normalize(b);
            if na == nb {
                na
            } else {
                Concept::and(na, nb)
            }
        }
        Concept::Exists(r, c) => Concept::exists(r.clone(), normalize(c)),
        Concept::Between(a, b) => Concept::between(normalize(a), normalize(b)),
        other => other.clone(),
    }
}

struct Engine<'a> {
    cfg: ClosureConfig,
    decls: Declarations,
    witness: Option<&'a Interpretation>,
    known: BTreeSet<Fact>,
    derivations: Vec<Derivation>,
    bound_reached: bool,
    nonempty_cache: std::collections::BTreeMap<Concept, bool>,
}

impl<'a> Engine<'a> {
    fn depth_ok(&mut self, fact: &Fact) -> bool {
        let over = match fact {
            Fact::Ci(c, d) => c.depth().max(d.depth()) > self.cfg.depth_bound,
            Fact::Ana(a) => [&a.c1, &a.c2, &a.d1, &a.d2]
                .iter()
                .any(|c| c.depth() > self.cfg.depth_bound),
            Fact::NonEmpty(c) => c.depth() > self.cfg.depth_bound,
        };
        if over {
            self.bound_reached = true;
        }
        !over
    }

    fn add(&mut self, mut d: Derivation) -> bool {
        d.conclusion = match d.conclusion {
            Fact::Ci(c, e) => Fact::Ci(normalize(&c), normalize(&e)),
            Fact::Ana(a) => Fact::Ana(AnalogyAssertion {
                strict: a.strict,
                c1: normalize(&a.c1),
                c2: normalize(&a.c2),
                d1: normalize(&a.d1),
                d2: normalize(&a.d2),
            }),
            Fact::NonEmpty(c) => Fact::NonEmpty(normalize(&c)),
        };
        // Asserted facts are never dropped; the depth bound only limits
        // derived conclusions.
        if d.rule != "asserted" && !self.depth_ok(&d.conclusion) {
            return false;
        }
        if self.known.contains(&d.conclusion) {
            return false;
        }
        self.known.insert(d.conclusion.clone());
        self.derivations.push(d);
        true
    }

    /// Discharges a nonemptiness side condition from asserted facts or from
    /// the witness interpretation.
    fn nonempty(&mut self, c: &Concept) -> Result<bool, ModelError> {
        if self.known.contains(&Fact::NonEmpty(c.clone())) {
            return Ok(true);
        }
        if let Some(&cached) = self.nonempty_cache.get(c) {
            return Ok(cached);
        }
        let answer = match self.witness {
            Some(interp) => !interp.extension(c)?.is_empty(),
            None => false,
        };
        self.nonempty_cache.insert(c.clone(), answer);
        Ok(answer)
    }

    fn anas(&self) -> Vec<AnalogyAssertion> {
        self.known
            .iter()
            .filter_map(|f| match f {
                Fact::Ana(a) => Some(a.clone()),
                _ => None,
            })
            .collect()
    }

    fn cis(&self) -> Vec<(Concept, Concept)> {
        self.known
            .iter()
            .filter_map(|f| match f {
                Fact::Ci(c, d) => Some((c.clone(), d.clone())),
                _ => None,
            })
            .collect()
    }

    fn step(&mut self) -> Result<bool, ModelError> {
        let mut new = false;
        let anas = self.anas();
        let cis = self.cis();
        let strong = self.cfg.mode == Mode::Strong;

        // Weakening: a strict assertion entails the standard one.
        for a in &anas {
            if a.strict {
                let mut weak = a.clone();
                weak.strict = false;
                new |= self.add(Derivation {
                    conclusion: Fact::Ana(weak),
                    rule: "weaken_strict",
                    premises: vec![Fact::Ana(a.clone())],
                    side_conditions: vec![],
                });
            }
        }

        // Symmetry: reverse both pairs; valid in both modes, both flavours.
        for a in &anas {
            let sym = AnalogyAssertion {
                strict: a.strict,
                c1: a.c2.clone(),
                c2: a.c1.clone(),
                d1: a.d2.clone(),
                d2: a.d1.clone(),
            };
            new |= self.add(Derivation {
                conclusion: Fact::Ana(sym),
                rule: "symmetry",
                premises: vec![Fact::Ana(a.clone())],
                side_conditions: vec![],
            });
        }

        // S-transitivity, chaining whole pairs: under weak semantics only
        // strict premises keep this sound.
        for a in &anas {
            for b in &anas {
                if a.strict != b.strict || a.d1 != b.c1 || a.d2 != b.c2 {
                    continue;
                }
                if !strong && !a.strict {
                    continue;
                }
                let conc = AnalogyAssertion {
                    strict: a.strict,
                    c1: a.c1.clone(),
                    c2: a.c2.clone(),
                    d1: b.d1.clone(),
                    d2: b.d2.clone(),
                };
                new |= self.add(Derivation {
                    conclusion: Fact::Ana(conc),
                    rule: "s_transitivity_a",
                    premises: vec![Fact::Ana(a.clone()), Fact::Ana(b.clone())],
                    side_conditions: vec![],
                });
            }
        }

        // S-transitivity, extending both sides: sound in both modes.
        for a in &anas {
            for b in &anas {
                if a.strict != b.strict || a.c2 != b.c1 || a.d2 != b.d1 {
                    continue;
                }
                let conc = AnalogyAssertion {
                    strict: a.strict,
                    c1: a.c1.clone(),
                    c2: b.c2.clone(),
                    d1: a.d1.clone(),
                    d2: b.d2.clone(),
                };
                new |= self.add(Derivation {
                    conclusion: Fact::Ana(conc),
                    rule: "s_transitivity_b",
                    premises: vec![Fact::Ana(a.clone()), Fact::Ana(b.clone())],
                    side_conditions: vec![],
                });
            }
        }

        // C-transitivity: strong mode only; fails under weak semantics for
        // both flavours.
        if strong {
            for a in &anas {
                for b in &anas {
                    if a.strict || b.strict || a.c1 != b.c1 || a.d2 != b.d2 {
                        continue;
                    }
                    let conc = AnalogyAssertion {
                        strict: false,
                        c1: a.c2.clone(),
                        c2: b.c2.clone(),
                        d1: b.d1.clone(),
                        d2: a.d1.clone(),
                    };
                    new |= self.add(Derivation {
                        conclusion: Fact::Ana(conc),
                        rule: "c_transitivity",
                        premises: vec![Fact::Ana(a.clone()), Fact::Ana(b.clone())],
                        side_conditions: vec![],
                    });
                }
            }
        }

        // Conjunction lifting: strong mode only, with four nonemptiness
        // side conditions.
        if strong {
            for a in &anas {
                for b in &anas {
                    if a.strict || b.strict {
                        continue;
                    }
                    let pairs = [
                        Concept::and(a.c1.clone(), b.c1.clone()),
                        Concept::and(a.c2.clone(), b.c2.clone()),
                        Concept::and(a.d1.clone(), b.d1.clone()),
                        Concept::and(a.d2.clone(), b.d2.clone()),
                    ];
                    // Reject over-deep conclusions before the (costly)
                    // nonemptiness side conditions.
                    if pairs.iter().any(|p| normalize(p).depth() > self.cfg.depth_bound) {
                        self.bound_reached = true;
                        continue;
                    }
                    let mut all_nonempty = true;
                    for p in &pairs {
                        if !self.nonempty(p)? {
                            all_nonempty = false;
                            break;
                        }
                    }
                    if !all_nonempty {
                        continue;
                    }
                    let [p1, p2, p3, p4] = pairs;
                    let conc = AnalogyAssertion {
                        strict: false,
                        c1: p1.clone(),
                        c2: p2.clone(),
                        d1: p3.clone(),
                        d2: p4.clone(),
                    };
                    new |= self.add(Derivation {
                        conclusion: Fact::Ana(conc),
                        rule: "lift_conjunction",
                        premises: vec![Fact::Ana(a.clone()), Fact::Ana(b.clone())],
                        side_conditions: vec![p1, p2, p3, p4],
                    });
                }
            }
        }

        // Existential lifting over intra-domain roles: sound in both modes
        // for standard assertions, unsound for strict ones under weak
        // semantics, so it only ever fires on standard premises.
        let intra_roles: Vec<String> = self.decls.intra_roles.iter().cloned().collect();
        for a in &anas {
            if a.strict {
                continue;
            }
            for r in &intra_roles {
                let lifted_all = AnalogyAssertion {
                    strict: false,
                    c1: Concept::exists(r.clone(), a.c1.clone()),
                    c2: Concept::exists(r.clone(), a.c2.clone()),
                    d1: Concept::exists(r.clone(), a.d1.clone()),
                    d2: Concept::exists(r.clone(), a.d2.clone()),
                };
                new |= self.add(Derivation {
                    conclusion: Fact::Ana(lifted_all),
                    rule: "lift_existential",
                    premises: vec![Fact::Ana(a.clone())],
                    side_conditions: vec![],
                });
                let lifted_right = AnalogyAssertion {
                    strict: false,
                    c1: a.c1.clone(),
                    c2: a.c2.clone(),
                    d1: Concept::exists(r.clone(), a.d1.clone()),
                    d2: Concept::exists(r.clone(), a.d2.clone()),
                };
                new |= self.add(Derivation {
                    conclusion: Fact::Ana(lifted_right),
                    rule: "lift_existential",
                    premises: vec![Fact::Ana(a.clone())],
                    side_conditions: vec![],
                });
            }
        }

        // Rule translation: from C1 : D1 :: C2 : D2 and C1 <= C2 conclude
        // D1 <= D2. Sound in both modes.
        let ci_set: BTreeSet<(Concept, Concept)> = cis.iter().cloned().collect();
        for a in &anas {
            if a.strict {
                continue;
            }
            if ci_set.contains(&(a.c1.clone(), a.d1.clone())) {
                new |= self.add(Derivation {
                    conclusion: Fact::Ci(a.c2.clone(), a.d2.clone()),
                    rule: "rule_translation",
                    premises: vec![
                        Fact::Ana(a.clone()),
                        Fact::Ci(a.c1.clone(), a.d1.clone()),
                    ],
                    side_conditions: vec![],
                });
            }
        }

        // Rule extrapolation: strong mode only. Requires both D-side
        // assertions; without the exchanged one the conclusion can fail.
        if strong {
            let ana_set: BTreeSet<AnalogyAssertion> = anas.iter().cloned().collect();
            for a in &anas {
                for b in &anas {
                    if a.strict || b.strict {
                        continue;
                    }
                    let exchanged = AnalogyAssertion {
                        strict: false,
                        c1: b.c1.clone(),
                        c2: b.d1.clone(),
                        d1: b.c2.clone(),
                        d2: b.d2.clone(),
                    };
                    if !ana_set.contains(&exchanged) {
                        continue;
                    }
                    let needed = [
                        (a.c1.clone(), b.c1.clone()),
                        (a.c2.clone(), b.c2.clone()),
                        (a.d1.clone(), b.d1.clone()),
                    ];
                    if needed.iter().any(|p| !ci_set.contains(p)) {
                        continue;
                    }
                    if !self.nonempty(&a.c1)? {
                        continue;
                    }
                    let mut premises = vec![
                        Fact::Ana(a.clone()),
                        Fact::Ana(b.clone()),
                        Fact::Ana(exchanged),
                    ];
                    premises.extend(needed.iter().map(|(c, d)| Fact::Ci(c.clone(), d.clone())));
                    new |= self.add(Derivation {
                        conclusion: Fact::Ci(a.d2.clone(), b.d2.clone()),
                        rule: "rule_extrapolation",
                        premises,
                        side_conditions: vec![a.c1.clone()],
                    });
                }
            }
        }

        // Rule interpolation: from A <= X, B <= X and D <= A btw B with X
        // natural, conclude D <= X. Purely feature-theoretic, both modes.
        for (d, rhs) in &cis {
            let Concept::Between(a, b) = rhs else { continue };
            for (_, x) in &cis {
                if !x.is_natural(&self.decls) {
                    continue;
                }
                let pa = (a.as_ref().clone(), x.clone());
                let pb = (b.as_ref().clone(), x.clone());
                if !ci_set.contains(&pa) || !ci_set.contains(&pb) {
                    continue;
                }
                new |= self.add(Derivation {
                    conclusion: Fact::Ci(d.clone(), x.clone()),
                    rule: "rule_interpolation",
                    premises: vec![
                        Fact::Ci(pa.0.clone(), pa.1.clone()),
                        Fact::Ci(pb.0.clone(), pb.1.clone()),
                        Fact::Ci(d.clone(), rhs.clone()),
                    ],
                    side_conditions: vec![],
                });
            }
        }

        Ok(new)
    }
}

/// Runs the rule engine to a fixpoint over the TBox facts. When a witness
/// interpretation is supplied it must be a model of the TBox; it is then
/// also used to discharge nonemptiness side conditions.
pub fn closure(
    tbox: &TBox,
    witness: Option<&Interpretation>,
    cfg: &ClosureConfig,
) -> Result<ClosureResult, ModelError> {
    if let Some(interp) = witness {
        let checks = check_tbox(interp, tbox)?;
        if let Some(bad) = checks.iter().find(|c| !c.holds) {
            return Err(ModelError::Invalid(format!(
                "witness interpretation does not satisfy `{}`",
                bad.statement
            )));
        }
    }

    let mut decls = Declarations::default();
    for st in &tbox.statements {
        match st {
            Statement::Natural(a) => {
                decls.natural_atoms.insert(a.clone());
            }
            Statement::Intra(r) => {
                decls.intra_roles.insert(r.clone());
            }
            _ => {}
        }
    }
    if let Some(interp) = witness {
        let w = interp.decls();
        decls.natural_atoms.extend(w.natural_atoms);
        decls.intra_roles.extend(w.intra_roles);
    }

    let mut engine = Engine {
        cfg: *cfg,
        decls,
        witness,
        known: BTreeSet::new(),
        derivations: Vec::new(),
        bound_reached: false,
        nonempty_cache: std::collections::BTreeMap::new(),
    };

    for st in &tbox.statements {
        let fact = match st {
            Statement::Inclusion(c, d) => Fact::Ci(c.clone(), d.clone()),
            Statement::Analogy(a) => Fact::Ana(a.clone()),
            Statement::NonEmpty(c) => Fact::NonEmpty(c.clone()),
            Statement::Natural(_) | Statement::Intra(_) => continue,
        };
        engine.add(Derivation {
            conclusion: fact,
            rule: "asserted",
            premises: vec![],
            side_conditions: vec![],
        });
    }

    while engine.step()? {}

    Ok(ClosureResult {
        derivations: engine.derivations,
        bound_reached: engine.bound_reached,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Concept {
        Concept::atom(s)
    }

    fn ana(c1: &str, c2: &str, d1: &str, d2: &str) -> Statement {
        Statement::Analogy(AnalogyAssertion {
            strict: false,
            c1: atom(c1),
            c2: atom(c2),
            d1: atom(d1),
            d2: atom(d2),
        })
    }

    #[test]
    fn empty_tbox_has_empty_closure() {
        let out = closure(&TBox::default(), None, &ClosureConfig::default()).unwrap();
        assert!(out.derivations.is_empty());
        assert!(!out.bound_reached);
    }

    #[test]
    fn translation_fires() {
        let tbox = TBox {
            statements: vec![
                ana("C", "D", "C2", "D2"),
                Statement::Inclusion(atom("C"), atom("C2")),
            ],
        };
        let out = closure(&tbox, None, &ClosureConfig::default()).unwrap();
        assert!(out.contains(&Fact::Ci(atom("D"), atom("D2"))));
        let d = out.derivation_of(&Fact::Ci(atom("D"), atom("D2"))).unwrap();
        assert_eq!(d.rule, "rule_translation");
    }

    #[test]
    fn idempotent_translation_rederives_premise() {
        let tbox = TBox {
            statements: vec![
                ana("C", "C", "D", "D"),
                Statement::Inclusion(atom("C"), atom("D")),
            ],
        };
        let out = closure(&tbox, None, &ClosureConfig::default()).unwrap();
        assert!(out.contains(&Fact::Ci(atom("C"), atom("D"))));
    }

    #[test]
    fn extrapolation_needs_exchanged_assertion() {
        let base = vec![
            ana("C1", "C2", "C3", "C4"),
            ana("D1", "D2", "D3", "D4"),
            Statement::Inclusion(atom("C1"), atom("D1")),
            Statement::Inclusion(atom("C2"), atom("D2")),
            Statement::Inclusion(atom("C3"), atom("D3")),
            Statement::NonEmpty(atom("C1")),
        ];
        let out = closure(&TBox { statements: base.clone() }, None, &ClosureConfig::default())
            .unwrap();
        assert!(!out.contains(&Fact::Ci(atom("C4"), atom("D4"))));

        let mut with_exchange = base;
        with_exchange.push(ana("D1", "D3", "D2", "D4"));
        let out = closure(&TBox { statements: with_exchange }, None, &ClosureConfig::default())
            .unwrap();
        assert!(out.contains(&Fact::Ci(atom("C4"), atom("D4"))));
        let d = out.derivation_of(&Fact::Ci(atom("C4"), atom("D4"))).unwrap();
        assert_eq!(d.rule, "rule_extrapolation");
        assert_eq!(d.side_conditions, vec![atom("C1")]);
    }

    #[test]
    fn extrapolation_is_gated_off_in_weak_mode() {
        let tbox = TBox {
            statements: vec![
                ana("C1", "C2", "C3", "C4"),
                ana("D1", "D2", "D3", "D4"),
                ana("D1", "D3", "D2", "D4"),
                Statement::Inclusion(atom("C1"), atom("D1")),
                Statement::Inclusion(atom("C2"), atom("D2")),
                Statement::Inclusion(atom("C3"), atom("D3")),
                Statement::NonEmpty(atom("C1")),
            ],
        };
        let cfg = ClosureConfig { mode: Mode::Weak, depth_bound: 3 };
        let out = closure(&tbox, None, &cfg).unwrap();
        assert!(!out.contains(&Fact::Ci(atom("C4"), atom("D4"))));
    }

    #[test]
    fn interpolation_fires_for_natural_target() {
        let tbox = TBox {
            statements: vec![
                Statement::Natural("X".into()),
                Statement::Inclusion(atom("A"), atom("X")),
                Statement::Inclusion(atom("B"), atom("X")),
                Statement::Inclusion(atom("D"), Concept::between(atom("A"), atom("B"))),
            ],
        };
        let out = closure(&tbox, None, &ClosureConfig::default()).unwrap();
        assert!(out.contains(&Fact::Ci(atom("D"), atom("X"))));
        let d = out.derivation_of(&Fact::Ci(atom("D"), atom("X"))).unwrap();
        assert_eq!(d.rule, "rule_interpolation");
    }

    #[test]
    fn self_lift_normalizes_to_premise() {
        let tbox = TBox {
            statements: vec![
                ana("C", "C", "D", "D"),
                Statement::NonEmpty(atom("C")),
                Statement::NonEmpty(atom("D")),
            ],
        };
        let out = closure(&tbox, None, &ClosureConfig::default()).unwrap();
        // lifting the assertion with itself must not create (C and C) facts
        for d in &out.derivations {
            if let Fact::Ana(a) = &d.conclusion {
                assert!(!matches!(a.c1, Concept::And(..)), "unnormalized {}", a);
            }
        }
    }

    #[test]
    fn depth_bound_is_reported() {
        let tbox = TBox {
            statements: vec![Statement::Intra("r".into()), ana("C", "D", "E", "F")],
        };
        let cfg = ClosureConfig { mode: Mode::Strong, depth_bound: 2 };
        let out = closure(&tbox, None, &cfg).unwrap();
        assert!(out.bound_reached);
        let max_depth = out
            .derivations
            .iter()
            .filter_map(|d| match &d.conclusion {
                Fact::Ana(a) => Some(a.d2.depth()),
                _ => None,
            })
            .max()
            .unwrap();
        assert_eq!(max_depth, 2);
    }

    #[test]
    fn s_transitivity_chains() {
        let tbox = TBox {
            statements: vec![ana("C", "C", "D", "D"), ana("D", "D", "E", "E")],
        };
        let out = closure(&tbox, None, &ClosureConfig::default()).unwrap();
        let expected = Fact::Ana(AnalogyAssertion {
            strict: false,
            c1: atom("C"),
            c2: atom("C"),
            d1: atom("E"),
            d2: atom("E"),
        });
        assert!(out.contains(&expected));
    }
}
