//! Bounded countermodel search: exhaustively enumerates small
//! interpretations and returns the first one that models the TBox but
//! falsifies the query.
//!
//! The enumeration covers feature counts up to the bound, integer
//! partitions into domains, analogy relations over equal-sized domains,
//! atom feature sets, and kappa tables when the query mentions roles.
//! Bijections are fixed to the by-position matching and the forbidden
//! family to the minimal one for the mode; both are canonical up to
//! feature renaming, which all checked properties are invariant under.
//! "No countermodel within bounds" is NOT entailment: larger models may
//! still refute the query.

use std::collections::{BTreeMap, BTreeSet};

use crate::analogy::{AnalogyStructure, Bijection};
use crate::error::ModelError;
use crate::features::{FeatureSet, FeatureSpace};
use crate::interp::{Interpretation, InterpretationData, KappaSpec, Mode};
use crate::tbox::{statement_holds, Statement, TBox};

/// Hard cap on the feature bound; enumeration is doubly exponential.
pub const FEATURE_CAP: usize = 6;
/// Hard cap on distinct atoms in the TBox plus query.
pub const ATOM_CAP: usize = 4;

/// Search bounds.
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub max_features: usize,
    pub max_atoms: usize,
    pub mode: Mode,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_features: 6, max_atoms: 4, mode: Mode::Strong }
    }
}

/// Search result. `NoneWithinBounds` is three-valued output: the query is
/// entailed by the TBox over all interpretations within the bounds only.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Counterexample(Box<Interpretation>),
    NoneWithinBounds,
}

/// Searches for an interpretation that models `tbox` but falsifies `query`.
pub fn countermodel_search(
    tbox: &TBox,
    query: &Statement,
    bounds: &Bounds,
) -> Result<SearchOutcome, ModelError> {
    if bounds.max_features > FEATURE_CAP {
        return Err(ModelError::Invalid(format!(
            "max_features {} exceeds the hard cap {FEATURE_CAP}",
            bounds.max_features
        )));
    }
    if bounds.max_atoms > ATOM_CAP {
        return Err(ModelError::Invalid(format!(
            "max_atoms {} exceeds the hard cap {ATOM_CAP}",
            bounds.max_atoms
        )));
    }

    // Vocabulary: every atom is natural, every role intra-domain.
    let mut atoms: BTreeSet<String> = BTreeSet::new();
    let mut roles: BTreeSet<String> = BTreeSet::new();
    let mut scan = |st: &Statement| match st {
        Statement::Natural(a) => {
            atoms.insert(a.clone());
        }
        Statement::Intra(r) => {
            roles.insert(r.clone());
        }
        Statement::Inclusion(c, d) => {
            c.atoms(&mut atoms);
            d.atoms(&mut atoms);
            c.roles(&mut roles);
            d.roles(&mut roles);
        }
        Statement::Analogy(a) => {
            for c in [&a.c1, &a.c2, &a.d1, &a.d2] {
                c.atoms(&mut atoms);
                c.roles(&mut roles);
            }
        }
        Statement::NonEmpty(c) => {
            c.atoms(&mut atoms);
            c.roles(&mut roles);
        }
    };
    for st in &tbox.statements {
        scan(st);
    }
    scan(query);
    if atoms.len() > bounds.max_atoms {
        return Err(ModelError::Invalid(format!(
            "{} distinct atoms exceed max_atoms {}",
            atoms.len(),
            bounds.max_atoms
        )));
    }
    let atoms: Vec<String> = atoms.into_iter().collect();

    for n in 1..=bounds.max_features {
        for sizes in integer_partitions(n) {
            for classes in analogy_relations(&sizes) {
                if let Some(found) =
                    search_structure(tbox, query, bounds, n, &sizes, &classes, &atoms, &roles)?
                {
                    return Ok(SearchOutcome::Counterexample(Box::new(found)));
                }
            }
        }
    }
    Ok(SearchOutcome::NoneWithinBounds)
}

#[allow(clippy::too_many_arguments)]
fn search_structure(
    tbox: &TBox,
    query: &Statement,
    bounds: &Bounds,
    n: usize,
    sizes: &[usize],
    classes: &[Vec<usize>],
    atoms: &[String],
    roles: &BTreeSet<String>,
) -> Result<Option<Interpretation>, ModelError> {
    let names: Vec<String> = (1..=n).map(|i| format!("f{i}")).collect();
    let mut partition: Vec<Vec<String>> = Vec::new();
    let mut start = 0;
    for &size in sizes {
        partition.push(names[start..start + size].to_vec());
        start += size;
    }
    let mut forbidden: Vec<Vec<String>> = Vec::new();
    if bounds.mode == Mode::Strong {
        for class in classes {
            for (a, &i) in class.iter().enumerate() {
                for &j in &class[a + 1..] {
                    for f in &partition[i] {
                        for g in &partition[j] {
                            forbidden.push(vec![f.clone(), g.clone()]);
                        }
                    }
                }
            }
        }
    }
    let space = FeatureSpace::new(names, partition, forbidden)?;

    let mut generators = Vec::new();
    let mut given: BTreeMap<(usize, usize), Bijection> = BTreeMap::new();
    for class in classes {
        let rep = class[0];
        for &m in &class[1..] {
            let bij: Bijection = space.domain(rep).iter().zip(space.domain(m).iter()).collect();
            generators.push((rep, m));
            given.insert((rep, m), bij);
        }
    }
    let analogy = AnalogyStructure::new(&space, &generators, given)?;

    let kappa_choices = kappa_options(&space, &analogy, classes, roles)?;
    let num_subsets: u64 = 1 << n;

    for kappa in &kappa_choices {
        // Odometer over one feature subset per atom.
        let mut counters: Vec<u64> = vec![0; atoms.len()];
        loop {
            let natural_atoms: BTreeMap<String, FeatureSet> = atoms
                .iter()
                .zip(&counters)
                .map(|(a, &c)| (a.clone(), FeatureSet(c as u32)))
                .collect();
            let interp = Interpretation::build(InterpretationData {
                space: space.clone(),
                analogy: analogy.clone(),
                mode: bounds.mode,
                extras: Vec::new(),
                natural_atoms,
                plain_atoms: BTreeMap::new(),
                roles: BTreeMap::new(),
                kappa: kappa.clone(),
            })?;
            if is_countermodel(&interp, tbox, query)? {
                return Ok(Some(interp));
            }
            // Advance the odometer.
            let mut i = 0;
            loop {
                if i == counters.len() {
                    return Ok(None) as Result<Option<Interpretation>, ModelError>;
                }
                counters[i] += 1;
                if counters[i] < num_subsets {
                    break;
                }
                counters[i] = 0;
                i += 1;
            }
        }
    }
    Ok(None)
}

fn is_countermodel(
    interp: &Interpretation,
    tbox: &TBox,
    query: &Statement,
) -> Result<bool, ModelError> {
    for st in &tbox.statements {
        if !statement_holds(interp, st)? {
            return Ok(false);
        }
    }
    if statement_holds(interp, query)? {
        return Ok(false);
    }
    // Re-check structural validity before reporting, defensively.
    Ok(interp.validate().is_valid())
}

/// Kappa tables to try: the cartesian product over roles of all additive
/// per-feature maps on class representatives, propagated to classmates.
/// Returns one empty choice when there are no roles.
fn kappa_options(
    space: &FeatureSpace,
    analogy: &AnalogyStructure,
    classes: &[Vec<usize>],
    roles: &BTreeSet<String>,
) -> Result<Vec<BTreeMap<String, KappaSpec>>, ModelError> {
    if roles.is_empty() {
        return Ok(vec![BTreeMap::new()]);
    }
    // Per-feature image slots on representatives, in a fixed order.
    let mut slots: Vec<(usize, usize, Vec<FeatureSet>)> = Vec::new(); // (rep, feature, choices)
    let mut per_role: u64 = 1;
    for class in classes {
        let rep = class[0];
        let dom = space.domain(rep);
        for f in dom.iter() {
            let choices: Vec<FeatureSet> =
                dom.subsets().filter(|s| !s.is_empty()).collect();
            per_role = per_role.saturating_mul(choices.len() as u64);
            slots.push((rep, f, choices));
        }
    }
    let total = per_role.saturating_pow(roles.len() as u32);
    if total > 4096 {
        return Err(ModelError::Invalid(format!(
            "kappa enumeration needs {total} candidates; shrink the bounds"
        )));
    }

    let mut single: Vec<BTreeMap<usize, FeatureSet>> = vec![BTreeMap::new()];
    for (rep, f, choices) in &slots {
        let mut next = Vec::new();
        for assignment in &single {
            for &image in choices {
                let mut a = assignment.clone();
                a.insert(*f, image);
                // Propagate to classmates through the bijections.
                for class in classes {
                    if class[0] != *rep {
                        continue;
                    }
                    for &m in &class[1..] {
                        a.insert(
                            analogy.apply_feature(*rep, m, *f),
                            analogy.apply(*rep, m, image),
                        );
                    }
                }
                next.push(a);
            }
        }
        single = next;
    }

    let mut out: Vec<BTreeMap<String, KappaSpec>> = vec![BTreeMap::new()];
    for role in roles {
        let mut next = Vec::new();
        for combo in &out {
            for assignment in &single {
                let mut c = combo.clone();
                c.insert(role.clone(), KappaSpec::Additive(assignment.clone()));
                next.push(c);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Nonincreasing integer partitions of n.
fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All analogy relations: a product of set partitions over each group of
/// equal-sized domains. Classes are returned with members sorted.
fn analogy_relations(sizes: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut by_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &s) in sizes.iter().enumerate() {
        by_size.entry(s).or_default().push(i);
    }
    let mut combos: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for group in by_size.values() {
        let parts = set_partitions(group);
        let mut next = Vec::new();
        for combo in &combos {
            for p in &parts {
                let mut c = combo.clone();
                c.extend(p.iter().cloned());
                next.push(c);
            }
        }
        combos = next;
    }
    combos
}

/// All partitions of the item list into nonempty blocks.
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for &item in items {
        let mut next = Vec::new();
        for partial in &out {
            for b in 0..partial.len() {
                let mut p = partial.clone();
                p[b].push(item);
                next.push(p);
            }
            let mut p = partial.clone();
            p.push(vec![item]);
            next.push(p);
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tbox;

    #[test]
    fn partition_helpers() {
        assert_eq!(integer_partitions(4).len(), 5);
        assert_eq!(set_partitions(&[0, 1, 2]).len(), 5);
    }

    #[test]
    fn trivial_query_has_no_countermodel() {
        let tbox = TBox::default();
        let query = parse_tbox("natural A\nci A <= A\n")
            .unwrap()
            .statements
            .pop()
            .unwrap();
        let bounds = Bounds { max_features: 3, max_atoms: 1, mode: Mode::Strong };
        let outcome = countermodel_search(&tbox, &query, &bounds).unwrap();
        assert!(matches!(outcome, SearchOutcome::NoneWithinBounds));
    }
}
