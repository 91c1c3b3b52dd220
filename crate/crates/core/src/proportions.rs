//! Analogical proportions between sets and between concepts.
//!
//! `a : b :: c : d` holds when a and b differ exactly as c and d do. Two
//! equivalent formulations are provided: via set differences and via the
//! intersection/union characterisation. For natural concepts the proportion
//! can also be stated as four concept inclusions.

use std::collections::BTreeSet;

use crate::concept::Concept;
use crate::error::ModelError;
use crate::features::FeatureSet;
use crate::interp::Interpretation;

/// The difference-based definition over feature sets.
pub fn ap_feature_sets(a: FeatureSet, b: FeatureSet, c: FeatureSet, d: FeatureSet) -> bool {
    a.difference(b) == c.difference(d) && b.difference(a) == d.difference(c)
}

/// The intersection/union characterisation over feature sets; equivalent to
/// [`ap_feature_sets`].
pub fn ap_feature_sets_alt(a: FeatureSet, b: FeatureSet, c: FeatureSet, d: FeatureSet) -> bool {
    a.intersection(d) == b.intersection(c) && a.union(d) == b.union(c)
}

/// The difference-based definition over arbitrary index sets.
pub fn ap_index_sets(
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
    c: &BTreeSet<usize>,
    d: &BTreeSet<usize>,
) -> bool {
    let diff = |x: &BTreeSet<usize>, y: &BTreeSet<usize>| -> BTreeSet<usize> {
        x.difference(y).copied().collect()
    };
    diff(a, b) == diff(c, d) && diff(b, a) == diff(d, c)
}

/// Which carrier the proportion between concepts is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApLevel {
    /// Over the concept extensions.
    Extensions,
    /// Over the feature sets phi(C).
    Features,
    /// Both at once.
    Both,
}

/// Evaluates `a : b :: c : d` between concepts at the requested level.
pub fn ap_concepts(
    interp: &Interpretation,
    level: ApLevel,
    a: &Concept,
    b: &Concept,
    c: &Concept,
    d: &Concept,
) -> Result<bool, ModelError> {
    let on_ext = || -> Result<bool, ModelError> {
        Ok(ap_index_sets(
            &interp.extension(a)?,
            &interp.extension(b)?,
            &interp.extension(c)?,
            &interp.extension(d)?,
        ))
    };
    let on_phi = || -> Result<bool, ModelError> {
        Ok(ap_feature_sets(interp.phi(a)?, interp.phi(b)?, interp.phi(c)?, interp.phi(d)?))
    };
    match level {
        ApLevel::Extensions => on_ext(),
        ApLevel::Features => on_phi(),
        ApLevel::Both => Ok(on_ext()? && on_phi()?),
    }
}

/// The four concept inclusions that encode the feature-level proportion for
/// natural concepts: conjunctions and in-between combinations must coincide
/// across the two pairs.
pub fn ap_as_cis(a: &Concept, b: &Concept, c: &Concept, d: &Concept) -> [(Concept, Concept); 4] {
    let ad = Concept::and(a.clone(), d.clone());
    let bc = Concept::and(b.clone(), c.clone());
    let ad_btw = Concept::between(a.clone(), d.clone());
    let bc_btw = Concept::between(b.clone(), c.clone());
    [
        (ad.clone(), bc.clone()),
        (bc, ad),
        (ad_btw.clone(), bc_btw.clone()),
        (bc_btw, ad_btw),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflexivity_and_symmetry_on_sets() {
        let a = FeatureSet(0b0011);
        let b = FeatureSet(0b0110);
        assert!(ap_feature_sets(a, b, a, b));
        let c = FeatureSet(0b1001);
        let d = FeatureSet(0b1100);
        assert_eq!(ap_feature_sets(a, b, c, d), ap_feature_sets(c, d, a, b));
    }

    #[test]
    fn difference_and_lattice_forms_agree() {
        for bits in 0u32..(1 << 12) {
            let a = FeatureSet(bits & 0b111);
            let b = FeatureSet((bits >> 3) & 0b111);
            let c = FeatureSet((bits >> 6) & 0b111);
            let d = FeatureSet((bits >> 9) & 0b111);
            assert_eq!(
                ap_feature_sets(a, b, c, d),
                ap_feature_sets_alt(a, b, c, d),
                "mismatch at {a} {b} {c} {d}"
            );
        }
    }

    #[test]
    fn exchange_of_means() {
        for bits in 0u32..(1 << 8) {
            let a = FeatureSet(bits & 0b11);
            let b = FeatureSet((bits >> 2) & 0b11);
            let c = FeatureSet((bits >> 4) & 0b11);
            let d = FeatureSet((bits >> 6) & 0b11);
            assert_eq!(ap_feature_sets(a, b, c, d), ap_feature_sets(a, c, b, d));
        }
    }
}
