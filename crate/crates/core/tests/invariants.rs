//! Property-based invariants over the core algebra.

use proptest::prelude::*;

use elana::concept::Concept;
use elana::features::FeatureSet;
use elana::interp::Mode;
use elana::oracle::gen::{gen_interpretation, GenParams};
use elana::oracle::mu_naive;
use elana::proportions::{ap_feature_sets, ap_feature_sets_alt};
use elana::translations::mu;

proptest! {
    /// The difference form and the lattice form of the proportion agree on
    /// arbitrary 20-bit feature sets.
    #[test]
    fn ap_forms_agree(a in 0u32..(1 << 20), b in 0u32..(1 << 20),
                      c in 0u32..(1 << 20), d in 0u32..(1 << 20)) {
        let (a, b, c, d) = (FeatureSet(a), FeatureSet(b), FeatureSet(c), FeatureSet(d));
        prop_assert_eq!(ap_feature_sets(a, b, c, d), ap_feature_sets_alt(a, b, c, d));
    }

    /// Axioms of the proportion: reflexivity, symmetry, exchange of means.
    #[test]
    fn ap_axioms(a in 0u32..(1 << 16), b in 0u32..(1 << 16),
                 c in 0u32..(1 << 16), d in 0u32..(1 << 16)) {
        let (a, b, c, d) = (FeatureSet(a), FeatureSet(b), FeatureSet(c), FeatureSet(d));
        prop_assert!(ap_feature_sets(a, b, a, b));
        prop_assert_eq!(ap_feature_sets(a, b, c, d), ap_feature_sets(c, d, a, b));
        prop_assert_eq!(ap_feature_sets(a, b, c, d), ap_feature_sets(a, c, b, d));
    }

    /// The pruned translation-set computation agrees with brute force, and
    /// inversion is involutive on the computed sets.
    #[test]
    fn mu_matches_naive_and_inverts(seed in 0u64..512, strong in any::<bool>()) {
        let params = GenParams {
            mode: if strong { Mode::Strong } else { Mode::Weak },
            ..GenParams::default()
        };
        let interp = gen_interpretation(&params, seed).unwrap();
        let names: Vec<&String> = interp.natural_atoms().keys().collect();
        let c = Concept::atom(names[seed as usize % names.len()].clone());
        let d = Concept::atom(names[(seed as usize / 2) % names.len()].clone());
        let fast = mu(&interp, &c, &d).unwrap();
        prop_assert_eq!(&fast, &mu_naive(&interp, &c, &d).unwrap());
        let back = mu(&interp, &d, &c).unwrap();
        let inverted: std::collections::BTreeSet<_> =
            back.iter().map(|u| u.invert()).collect();
        prop_assert_eq!(fast, inverted);
    }
}
