//! Domain constrained interpretations: canonical individuals, concept
//! evaluation and the structural validity checks.
//!
//! The individual universe is canonical: exactly one individual per
//! consistent feature set, plus optional named extras. This is the smallest
//! structure witnessing every consistent feature set and makes evaluation
//! deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::analogy::AnalogyStructure;
use crate::concept::{Concept, Declarations};
use crate::error::ModelError;
use crate::features::{FeatureSet, FeatureSpace};

/// Strong interpretations forbid mixing features of distinct analogous domains; weak ones
/// drop it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strong,
    Weak,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Strong => write!(f, "strong"),
            Mode::Weak => write!(f, "weak"),
        }
    }
}

/// How a kappa table was supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaMode {
    Tabular,
    Additive,
}

/// Input form of a kappa table.
#[derive(Debug, Clone)]
pub enum KappaSpec {
    /// Explicit map over the domain-local consistent sets.
    Tabular(BTreeMap<FeatureSet, FeatureSet>),
    /// Per-feature images; kappa(F) is the union of the singleton images.
    Additive(BTreeMap<usize, FeatureSet>),
}

/// The feature-level map kappa_r of an intra-domain role, expanded to a
/// table over the domain-local consistent sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaTable {
    mode: KappaMode,
    table: BTreeMap<FeatureSet, FeatureSet>,
}

impl KappaTable {
    pub fn from_spec(space: &FeatureSpace, spec: KappaSpec) -> KappaTable {
        match spec {
            KappaSpec::Tabular(table) => KappaTable { mode: KappaMode::Tabular, table },
            KappaSpec::Additive(per_feature) => {
                let mut table = BTreeMap::new();
                for i in 0..space.num_domains() {
                    for f in space.consistent_sets_in_domain(i) {
                        let image = f
                            .iter()
                            .filter_map(|idx| per_feature.get(&idx).copied())
                            .fold(FeatureSet::EMPTY, FeatureSet::union);
                        table.insert(f, image);
                    }
                }
                KappaTable { mode: KappaMode::Additive, table }
            }
        }
    }

    pub fn mode(&self) -> KappaMode {
        self.mode
    }

    pub fn table(&self) -> &BTreeMap<FeatureSet, FeatureSet> {
        &self.table
    }

    /// kappa(F), evaluated per domain and unioned (cross-domain additivity). A
    /// per-domain part without a table entry maps to the whole block, so
    /// concepts with phi = F-universe stay empty under existential
    /// restriction.
    pub fn eval(&self, space: &FeatureSpace, set: FeatureSet) -> FeatureSet {
        let mut out = FeatureSet::EMPTY;
        for i in 0..space.num_domains() {
            let part = set.intersection(space.domain(i));
            if part.is_empty() {
                continue;
            }
            let image = self.table.get(&part).copied().unwrap_or(space.domain(i));
            out = out.union(image);
        }
        out
    }
}

/// A reference to an individual in interpretation input: either the
/// canonical individual of a consistent feature set, or a named extra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum IndividualRef {
    Canonical(FeatureSet),
    Named(String),
}

/// Everything needed to build an [`Interpretation`].
#[derive(Debug, Clone)]
pub struct InterpretationData {
    pub space: FeatureSpace,
    pub analogy: AnalogyStructure,
    pub mode: Mode,
    pub extras: Vec<(String, FeatureSet)>,
    pub natural_atoms: BTreeMap<String, FeatureSet>,
    pub plain_atoms: BTreeMap<String, Vec<IndividualRef>>,
    pub roles: BTreeMap<String, Vec<(IndividualRef, IndividualRef)>>,
    pub kappa: BTreeMap<String, KappaSpec>,
}

/// One individual: an optional name (extras only) and its feature set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub name: Option<String>,
    pub pi: FeatureSet,
}

/// A fully built interpretation. Immutable after construction; every
/// operation is side-effect free.
#[derive(Debug, Clone)]
pub struct Interpretation {
    space: FeatureSpace,
    analogy: AnalogyStructure,
    mode: Mode,
    individuals: Vec<Individual>,
    natural_atoms: BTreeMap<String, FeatureSet>,
    plain_atoms: BTreeMap<String, BTreeSet<usize>>,
    roles: BTreeMap<String, BTreeSet<(usize, usize)>>,
    kappa: BTreeMap<String, KappaTable>,
}

impl Interpretation {
    pub fn build(data: InterpretationData) -> Result<Interpretation, ModelError> {
        let InterpretationData { space, analogy, mode, extras, natural_atoms, plain_atoms, roles, kappa } =
            data;

        for name in natural_atoms.keys() {
            if plain_atoms.contains_key(name) {
                return Err(ModelError::AtomBothNaturalAndPlain(name.clone()));
            }
        }

        // Canonical individuals first, in increasing bitmask order, then
        // named extras in input order.
        let mut individuals: Vec<Individual> = space
            .consistent_sets()
            .into_iter()
            .map(|f| Individual { name: None, pi: f })
            .collect();
        let canonical: BTreeMap<FeatureSet, usize> =
            individuals.iter().enumerate().map(|(i, d)| (d.pi, i)).collect();
        let mut named: BTreeMap<String, usize> = BTreeMap::new();
        for (name, pi) in extras {
            let id = individuals.len();
            if named.insert(name.clone(), id).is_some() {
                return Err(ModelError::Invalid(format!("duplicate extra individual `{name}`")));
            }
            individuals.push(Individual { name: Some(name), pi });
        }

        let resolve = |r: &IndividualRef| -> Result<usize, ModelError> {
            match r {
                IndividualRef::Canonical(f) => canonical
                    .get(f)
                    .copied()
                    .ok_or_else(|| ModelError::UnknownIndividual(space.display(*f))),
                IndividualRef::Named(n) => named
                    .get(n)
                    .copied()
                    .ok_or_else(|| ModelError::UnknownIndividual(n.clone())),
            }
        };

        let mut plain: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for (name, refs) in &plain_atoms {
            let ids = refs.iter().map(&resolve).collect::<Result<_, _>>()?;
            plain.insert(name.clone(), ids);
        }
        let mut role_rel: BTreeMap<String, BTreeSet<(usize, usize)>> = BTreeMap::new();
        for (name, pairs) in &roles {
            if kappa.contains_key(name) {
                return Err(ModelError::Invalid(format!(
                    "role `{name}` cannot carry both a pair relation and a kappa table"
                )));
            }
            let ids = pairs
                .iter()
                .map(|(a, b)| Ok((resolve(a)?, resolve(b)?)))
                .collect::<Result<_, ModelError>>()?;
            role_rel.insert(name.clone(), ids);
        }
        let kappa = kappa
            .into_iter()
            .map(|(name, spec)| {
                let table = KappaTable::from_spec(&space, spec);
                (name, table)
            })
            .collect();

        Ok(Interpretation {
            space,
            analogy,
            mode,
            individuals,
            natural_atoms,
            plain_atoms: plain,
            roles: role_rel,
            kappa,
        })
    }

    pub fn space(&self) -> &FeatureSpace {
        &self.space
    }

    pub fn analogy(&self) -> &AnalogyStructure {
        &self.analogy
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn pi(&self, id: usize) -> FeatureSet {
        self.individuals[id].pi
    }

    pub fn natural_atoms(&self) -> &BTreeMap<String, FeatureSet> {
        &self.natural_atoms
    }

    pub fn kappa_tables(&self) -> &BTreeMap<String, KappaTable> {
        &self.kappa
    }

    pub fn plain_atom_extensions(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.plain_atoms
    }

    pub fn role_relations(&self) -> &BTreeMap<String, BTreeSet<(usize, usize)>> {
        &self.roles
    }

    /// Declarations induced by the interpretation's vocabulary.
    pub fn decls(&self) -> Declarations {
        Declarations::new(
            self.natural_atoms.keys().cloned(),
            self.kappa.keys().cloned(),
        )
    }

    /// The individuals whose feature set includes `set`.
    fn upset(&self, set: FeatureSet) -> BTreeSet<usize> {
        self.individuals
            .iter()
            .enumerate()
            .filter(|(_, d)| set.is_subset(d.pi))
            .map(|(i, _)| i)
            .collect()
    }

    /// The extension of a concept, as a set of individual ids.
    pub fn extension(&self, concept: &Concept) -> Result<BTreeSet<usize>, ModelError> {
        match concept {
            Concept::Top => Ok((0..self.individuals.len()).collect()),
            Concept::Bot => Ok(BTreeSet::new()),
            Concept::Atom(name) => {
                if let Some(&phi) = self.natural_atoms.get(name) {
                    Ok(self.upset(phi))
                } else if let Some(ext) = self.plain_atoms.get(name) {
                    Ok(ext.clone())
                } else {
                    Err(ModelError::UnknownAtom(name.clone()))
                }
            }
            Concept::And(a, b) => {
                let ea = self.extension(a)?;
                let eb = self.extension(b)?;
                Ok(ea.intersection(&eb).copied().collect())
            }
            Concept::Between(a, b) => {
                let decls = self.decls();
                concept.check_well_formed(&decls)?;
                let common = self.phi(a)?.intersection(self.phi(b)?);
                Ok(self.upset(common))
            }
            Concept::Exists(role, child) => {
                if let Some(table) = self.kappa.get(role) {
                    let needed = table.eval(&self.space, self.phi(child)?);
                    Ok(self.upset(needed))
                } else if let Some(pairs) = self.roles.get(role) {
                    let targets = self.extension(child)?;
                    Ok(pairs
                        .iter()
                        .filter(|(_, e)| targets.contains(e))
                        .map(|(d, _)| *d)
                        .collect())
                } else {
                    Err(ModelError::UnknownRole(role.clone()))
                }
            }
        }
    }

    /// phi(C): the features common to all members of the extension; the full
    /// universe when the extension is empty.
    pub fn phi(&self, concept: &Concept) -> Result<FeatureSet, ModelError> {
        let ext = self.extension(concept)?;
        Ok(ext
            .iter()
            .map(|&d| self.individuals[d].pi)
            .fold(self.space.universe(), FeatureSet::intersection))
    }

    /// delta(C): the domains phi(C) touches (zero-based indices).
    pub fn delta(&self, concept: &Concept) -> Result<BTreeSet<usize>, ModelError> {
        let phi = self.phi(concept)?;
        Ok((0..self.space.num_domains())
            .filter(|&i| !self.space.domain(i).intersection(phi).is_empty())
            .collect())
    }

    /// Whether the interpretation satisfies C `<=` D.
    pub fn satisfies_ci(&self, lhs: &Concept, rhs: &Concept) -> Result<bool, ModelError> {
        let el = self.extension(lhs)?;
        let er = self.extension(rhs)?;
        Ok(el.is_subset(&er))
    }

    /// Runs the structural validator. Violations are report
    /// entries, not faults.
    pub fn validate(&self) -> ValidityReport {
        let mut violations = Vec::new();
        let sp = &self.space;

        // No individual witnesses a forbidden set.
        for (id, d) in self.individuals.iter().enumerate() {
            for x in sp.forbidden() {
                if x.is_subset(d.pi) {
                    violations.push(Violation {
                        condition: ConditionId::ForbiddenWitnessed,
                        message: format!(
                            "individual {} has pi = {} which includes forbidden {}",
                            self.individual_label(id),
                            sp.display(d.pi),
                            sp.display(*x)
                        ),
                    });
                }
            }
        }

        // Every consistent set is witnessed.
        let witnessed: BTreeSet<FeatureSet> = self.individuals.iter().map(|d| d.pi).collect();
        for f in sp.consistent_sets() {
            if !witnessed.contains(&f) {
                violations.push(Violation {
                    condition: ConditionId::MissingWitness,
                    message: format!("consistent set {} has no witness", sp.display(f)),
                });
            }
        }

        // Identity, inversion, composition of sigma.
        // The analogy structure is closed at construction time; re-check so
        // the report stands on its own.
        for (s, t) in self.analogy.proper_pairs() {
            for f in sp.domain(s).iter() {
                let g = self.analogy.apply_feature(s, t, f);
                if self.analogy.apply_feature(t, s, g) != f {
                    violations.push(Violation {
                        condition: ConditionId::SigmaCoherence,
                        message: format!(
                            "sigma({t},{s}) is not the inverse of sigma({s},{t}) at {}",
                            sp.feature_name(f)
                        ),
                    });
                }
            }
        }

        // Sigma maps consistent sets to consistent sets.
        for i in 0..sp.num_domains() {
            for j in self.analogy.classmates(i) {
                for f in sp.consistent_sets_in_domain(i) {
                    let image = self.analogy.apply(i, j, f);
                    if !sp.is_consistent(image) {
                        violations.push(Violation {
                            condition: ConditionId::SigmaConsistency,
                            message: format!(
                                "sigma({i},{j}) maps consistent {} to forbidden {}",
                                sp.display(f),
                                sp.display(image)
                            ),
                        });
                    }
                }
            }
        }

        // Strong mode only: features from distinct
        // analogous domains are mutually forbidden.
        if self.mode == Mode::Strong {
            for i in 0..sp.num_domains() {
                for j in self.analogy.classmates(i) {
                    if j <= i {
                        continue;
                    }
                    for f in sp.domain(i).iter() {
                        for g in sp.domain(j).iter() {
                            let mut pair = FeatureSet::EMPTY;
                            pair.insert(f);
                            pair.insert(g);
                            if sp.is_consistent(pair) {
                                violations.push(Violation {
                                    condition: ConditionId::CrossDomainOverlap,
                                    message: format!(
                                        "{{{}, {}}} must be forbidden: domains {i} and {j} are analogous",
                                        sp.feature_name(f),
                                        sp.feature_name(g)
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }

        // Every declared natural atom must be fully specified by its features.
        for (name, &phi) in &self.natural_atoms {
            let atom = Concept::atom(name.clone());
            let ext = self.extension(&atom).expect("declared atom");
            let expected = self.upset(self.phi(&atom).expect("declared atom"));
            if ext != expected {
                violations.push(Violation {
                    condition: ConditionId::AtomNotNatural,
                    message: format!(
                        "natural atom {name} with features {} is not fully specified by them",
                        sp.display(phi)
                    ),
                });
            }
        }

        // Structural checks for every kappa table.
        for (role, table) in &self.kappa {
            self.validate_kappa(role, table, &mut violations);
        }

        ValidityReport { mode: self.mode, violations }
    }

    fn validate_kappa(&self, role: &str, table: &KappaTable, violations: &mut Vec<Violation>) {
        let sp = &self.space;
        for i in 0..sp.num_domains() {
            for f in sp.consistent_sets_in_domain(i) {
                if f.is_empty() {
                    continue;
                }
                match table.table().get(&f) {
                    None => violations.push(Violation {
                        condition: ConditionId::KappaMissingEntry,
                        message: format!(
                            "kappa table for `{role}` has no entry for {} in domain {i}",
                            sp.display(f)
                        ),
                    }),
                    Some(image) => {
                        if !image.is_subset(sp.domain(i)) {
                            violations.push(Violation {
                                condition: ConditionId::KappaOutsideDomain,
                                message: format!(
                                    "kappa_{role}({}) = {} leaves domain {i}",
                                    sp.display(f),
                                    sp.display(*image)
                                ),
                            });
                        }
                        if image.is_empty() {
                            violations.push(Violation {
                                condition: ConditionId::KappaEmptyImage,
                                message: format!(
                                    "kappa_{role}({}) is empty for a nonempty consistent set",
                                    sp.display(f)
                                ),
                            });
                        }
                    }
                }
            }
        }
        // Entries for the empty set, if present, must be empty (forced by
        // condition 2 across all domains).
        if let Some(image) = table.table().get(&FeatureSet::EMPTY) {
            if !image.is_empty() {
                violations.push(Violation {
                    condition: ConditionId::KappaOutsideDomain,
                    message: format!("kappa_{role}(∅) must be empty"),
                });
            }
        }
        // Condition 3: kappa commutes with the bijections.
        for i in 0..sp.num_domains() {
            for j in self.analogy.classmates(i) {
                for f in sp.consistent_sets_in_domain(i) {
                    let image = table.eval(sp, f);
                    let mapped_set = self.analogy.apply(i, j, f);
                    if !sp.is_consistent(mapped_set) {
                        continue; // the sigma-consistency check reports this
                    }
                    let lhs = table.eval(sp, mapped_set);
                    let rhs = self.analogy.apply(i, j, image);
                    if lhs != rhs {
                        violations.push(Violation {
                            condition: ConditionId::KappaEquivariance,
                            message: format!(
                                "kappa_{role} does not commute with sigma({i},{j}) on {}: {} vs {}",
                                sp.display(f),
                                sp.display(lhs),
                                sp.display(rhs)
                            ),
                        });
                    }
                }
            }
        }
    }

    fn individual_label(&self, id: usize) -> String {
        match &self.individuals[id].name {
            Some(n) => n.clone(),
            None => self.space.display(self.individuals[id].pi),
        }
    }
}

/// Which condition a violation falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionId {
    ForbiddenWitnessed,
    MissingWitness,
    SigmaCoherence,
    SigmaConsistency,
    CrossDomainOverlap,
    AtomNotNatural,
    KappaMissingEntry,
    KappaOutsideDomain,
    KappaEquivariance,
    KappaEmptyImage,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConditionId::ForbiddenWitnessed => "forbidden-witnessed",
            ConditionId::MissingWitness => "missing-witness",
            ConditionId::SigmaCoherence => "sigma-coherence",
            ConditionId::SigmaConsistency => "sigma-consistency",
            ConditionId::CrossDomainOverlap => "cross-domain-overlap",
            ConditionId::AtomNotNatural => "atom-not-natural",
            ConditionId::KappaMissingEntry => "kappa-missing-entry",
            ConditionId::KappaOutsideDomain => "kappa-outside-domain",
            ConditionId::KappaEquivariance => "kappa-equivariance",
            ConditionId::KappaEmptyImage => "kappa-empty-image",
        };
        write!(f, "{s}")
    }
}

/// A single validator finding with a human-readable witness.
#[derive(Debug, Clone)]
pub struct Violation {
    pub condition: ConditionId,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.condition, self.message)
    }
}

/// The validator's output: all violations found, in deterministic order.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    pub mode: Mode,
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated_conditions(&self) -> BTreeSet<String> {
        self.violations.iter().map(|v| v.condition.to_string()).collect()
    }
}
