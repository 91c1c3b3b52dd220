//! Domain translations sigma_U and the mu operator between concepts.
//!
//! A domain translation is a set of source/target domain pairs with distinct
//! sources, distinct targets and source different from target in every pair.
//! Features in a source domain are mapped by the corresponding bijection;
//! all other features are fixed.

use std::collections::BTreeSet;

use crate::concept::Concept;
use crate::error::ModelError;
use crate::features::FeatureSet;
use crate::interp::Interpretation;

/// A domain translation U, stored as ordered (source, target) pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct DomainTranslation {
    pairs: Vec<(usize, usize)>,
}

impl DomainTranslation {
    /// The empty translation, which fixes every feature.
    pub fn empty() -> Self {
        DomainTranslation::default()
    }

    /// Builds a translation, checking that sources are distinct, targets are
    /// distinct and no pair maps a domain to itself.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ModelError> {
        let mut sorted: Vec<(usize, usize)> = pairs.into_iter().collect();
        sorted.sort_unstable();
        sorted.dedup();
        let sources: BTreeSet<usize> = sorted.iter().map(|&(s, _)| s).collect();
        let targets: BTreeSet<usize> = sorted.iter().map(|&(_, t)| t).collect();
        if sources.len() != sorted.len() || targets.len() != sorted.len() {
            return Err(ModelError::TranslationNotInjective);
        }
        if sorted.iter().any(|&(s, t)| s == t) {
            return Err(ModelError::TranslationNotInjective);
        }
        Ok(DomainTranslation { pairs: sorted })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// src(U).
    pub fn sources(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(s, _)| s).collect()
    }

    /// tgt(U).
    pub fn targets(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(_, t)| t).collect()
    }

    /// U with every pair reversed; sigma of the result inverts sigma_U.
    pub fn invert(&self) -> DomainTranslation {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(s, t)| (t, s)).collect();
        pairs.sort_unstable();
        DomainTranslation { pairs }
    }

    /// The composition U (+) V: chained pairs that do not collapse to the
    /// identity, pairs of U whose target is not consumed by V, and pairs of
    /// V whose source is not produced by U.
    pub fn compose(&self, other: &DomainTranslation) -> Result<DomainTranslation, ModelError> {
        let src_v = other.sources();
        let tgt_u = self.targets();
        let mut pairs = Vec::new();
        for &(i, j) in &self.pairs {
            for &(j2, k) in &other.pairs {
                if j == j2 && i != k {
                    pairs.push((i, k));
                }
            }
        }
        for &(i, j) in &self.pairs {
            if !src_v.contains(&j) {
                pairs.push((i, j));
            }
        }
        for &(j, k) in &other.pairs {
            if !tgt_u.contains(&j) {
                pairs.push((j, k));
            }
        }
        DomainTranslation::new(pairs)
    }

    /// Applies sigma_U to a feature set, using the interpretation's
    /// bijections. Every pair must lie in the analogy relation.
    pub fn apply(&self, interp: &Interpretation, set: FeatureSet) -> Result<FeatureSet, ModelError> {
        let sp = interp.space();
        let mut out = FeatureSet::EMPTY;
        let mut moved = FeatureSet::EMPTY;
        for &(s, t) in &self.pairs {
            if !interp.analogy().related(s, t) {
                return Err(ModelError::TranslationOutsideRelation(s, t));
            }
            let part = set.intersection(sp.domain(s));
            moved = moved.union(part);
            out = out.union(interp.analogy().apply(s, t, part));
        }
        Ok(out.union(set.difference(moved)))
    }

    /// Renders the translation as `{1->3, 2->4}` with one-based domains.
    pub fn display(&self) -> String {
        let body = self
            .pairs
            .iter()
            .map(|&(s, t)| format!("{}->{}", s + 1, t + 1))
            .collect::<Vec<_>>()
            .join(", ");
        format!("{{{body}}}")
    }
}

/// mu(C, D): every domain translation sigma_U with sigma_U(phi(C)) = phi(D),
/// src(U) within delta(C), and targets disjoint from the untranslated part
/// of delta(C).
pub fn mu(
    interp: &Interpretation,
    c: &Concept,
    d: &Concept,
) -> Result<BTreeSet<DomainTranslation>, ModelError> {
    let phi_c = interp.phi(c)?;
    let phi_d = interp.phi(d)?;
    let delta_c: Vec<usize> = interp.delta(c)?.into_iter().collect();

    let mut out = BTreeSet::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    enumerate(interp, &delta_c, 0, &mut pairs, &mut out, phi_c, phi_d)?;
    Ok(out)
}

fn enumerate(
    interp: &Interpretation,
    delta_c: &[usize],
    idx: usize,
    pairs: &mut Vec<(usize, usize)>,
    out: &mut BTreeSet<DomainTranslation>,
    phi_c: FeatureSet,
    phi_d: FeatureSet,
) -> Result<(), ModelError> {
    if idx == delta_c.len() {
        let u = DomainTranslation::new(pairs.iter().copied())?;
        let sources = u.sources();
        let untranslated: BTreeSet<usize> =
            delta_c.iter().copied().filter(|s| !sources.contains(s)).collect();
        if u.targets().iter().any(|t| untranslated.contains(t)) {
            return Ok(());
        }
        if u.apply(interp, phi_c)? == phi_d {
            out.insert(u);
        }
        return Ok(());
    }
    let s = delta_c[idx];
    // Leave domain s untranslated.
    enumerate(interp, delta_c, idx + 1, pairs, out, phi_c, phi_d)?;
    // Or translate it to any distinct classmate not already targeted.
    for t in interp.analogy().classmates(s) {
        if pairs.iter().any(|&(_, t2)| t2 == t) {
            continue;
        }
        pairs.push((s, t));
        enumerate(interp, delta_c, idx + 1, pairs, out, phi_c, phi_d)?;
        pairs.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rejects_duplicates_and_identity() {
        assert!(DomainTranslation::new([(0, 1), (0, 2)]).is_err());
        assert!(DomainTranslation::new([(0, 2), (1, 2)]).is_err());
        assert!(DomainTranslation::new([(1, 1)]).is_err());
        assert!(DomainTranslation::new([(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn inversion_swaps_pairs() {
        let u = DomainTranslation::new([(0, 2), (1, 3)]).unwrap();
        let v = u.invert();
        assert_eq!(v.pairs(), &[(2, 0), (3, 1)]);
        assert_eq!(v.invert(), u);
    }

    #[test]
    fn composition_chains_and_drops_identity() {
        let u = DomainTranslation::new([(0, 1)]).unwrap();
        let v = DomainTranslation::new([(1, 0)]).unwrap();
        // (0,1) then (1,0) collapses to identity on 0: empty translation.
        assert!(u.compose(&v).unwrap().is_empty());

        let u = DomainTranslation::new([(0, 1)]).unwrap();
        let v = DomainTranslation::new([(1, 2)]).unwrap();
        assert_eq!(u.compose(&v).unwrap().pairs(), &[(0, 2)]);

        // Unconsumed pairs on either side survive.
        let u = DomainTranslation::new([(0, 1), (2, 3)]).unwrap();
        let v = DomainTranslation::new([(1, 0)]).unwrap();
        assert_eq!(u.compose(&v).unwrap().pairs(), &[(2, 3)]);
    }
}
