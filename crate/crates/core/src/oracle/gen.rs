//! Seeded random generation of valid interpretations.
//!
//! The procedure draws a partition, an analogy relation over equal-sized
//! domains, spanning bijections, a forbidden family (with the mandatory
//! entries for the requested mode), natural atoms, and optionally a kappa
//! table, then repairs the forbidden family until the bijections map
//! consistent sets to consistent sets. Deterministic per seed.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::analogy::{AnalogyStructure, Bijection};
use crate::error::ModelError;
use crate::features::{FeatureSet, FeatureSpace};
use crate::interp::{Interpretation, InterpretationData, KappaSpec, Mode};

/// Hard cap on the feature count; the consistent-set family is exponential
/// in it.
pub const HARD_FEATURE_CAP: usize = 10;

/// Generation knobs.
#[derive(Debug, Clone)]
pub struct GenParams {
    pub max_features: usize,
    pub max_domains: usize,
    pub max_atoms: usize,
    pub mode: Mode,
    /// Equip roughly half the samples with an intra-domain role `r`.
    pub with_kappa: bool,
    /// Draw extra random forbidden sets beyond the mandatory ones.
    pub extra_forbidden: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_features: 8,
            max_domains: 4,
            max_atoms: 6,
            mode: Mode::Strong,
            with_kappa: true,
            extra_forbidden: true,
        }
    }
}

/// Draws an interpretation that passes the validator in the requested mode.
pub fn gen_interpretation(params: &GenParams, seed: u64) -> Result<Interpretation, ModelError> {
    if params.max_features > HARD_FEATURE_CAP {
        return Err(ModelError::Invalid(format!(
            "max_features {} exceeds the hard cap {HARD_FEATURE_CAP}",
            params.max_features
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let interp = draw(params, &mut rng)?;
        if interp.validate().is_valid() {
            return Ok(interp);
        }
    }
    Err(ModelError::Invalid(format!(
        "seed {seed}: no valid interpretation after 32 attempts"
    )))
}

fn draw(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Interpretation, ModelError> {
    let n = rng.gen_range(2..=params.max_features.max(2));
    let k = rng.gen_range(1..=params.max_domains.min(n).max(1));
    let names: Vec<String> = (1..=n).map(|i| format!("f{i}")).collect();

    // Random composition of n features into k contiguous nonempty domains.
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    cuts.truncate(k - 1);
    cuts.sort_unstable();
    cuts.push(n);
    let mut partition: Vec<Vec<String>> = Vec::new();
    let mut start = 0;
    for &end in &cuts {
        partition.push(names[start..end].to_vec());
        start = end;
    }

    // Analogous classes among equal-sized domains.
    let mut by_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, block) in partition.iter().enumerate() {
        by_size.entry(block.len()).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for domains in by_size.values() {
        let mut open: Vec<usize> = Vec::new();
        for &d in domains {
            if !open.is_empty() && rng.gen_bool(0.6) {
                let c = open[rng.gen_range(0..open.len())];
                classes[c].push(d);
            } else {
                classes.push(vec![d]);
                open.push(classes.len() - 1);
            }
        }
    }

    // Forbidden family: cross-domain pairs for analogous domains in strong
    // mode, plus optional random extras. The full universe is implicit.
    let mut forbidden: Vec<Vec<String>> = Vec::new();
    if params.mode == Mode::Strong {
        for class in &classes {
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
    if params.extra_forbidden && rng.gen_bool(0.5) && n >= 2 {
        for _ in 0..rng.gen_range(1..=2) {
            let size = rng.gen_range(2..=3.min(n));
            let mut pick = names.clone();
            pick.shuffle(rng);
            pick.truncate(size);
            forbidden.push(pick);
        }
    }

    let mut space = FeatureSpace::new(names, partition, forbidden)?;

    // Spanning bijections: class representative to each other member, by a
    // random matching of the member's features.
    let mut generators = Vec::new();
    let mut given: BTreeMap<(usize, usize), Bijection> = BTreeMap::new();
    for class in &classes {
        let rep = class[0];
        for &m in &class[1..] {
            let src: Vec<usize> = space.domain(rep).iter().collect();
            let mut dst: Vec<usize> = space.domain(m).iter().collect();
            dst.shuffle(rng);
            generators.push((rep, m));
            given.insert((rep, m), src.into_iter().zip(dst).collect());
        }
    }
    let analogy = AnalogyStructure::new(&space, &generators, given)?;

    // Repair: forbid any per-domain consistent set whose bijection image is
    // inconsistent, to a fixpoint.
    loop {
        let mut grown = false;
        for i in 0..space.num_domains() {
            for j in analogy.classmates(i) {
                for f in space.consistent_sets_in_domain(i) {
                    if !space.is_consistent(analogy.apply(i, j, f)) {
                        space.forbid(f);
                        grown = true;
                    }
                }
            }
        }
        if !grown {
            break;
        }
    }

    // Natural atoms: mostly consistent feature sets; some atoms come in
    // translated pairs so analogy assertions are satisfiable nontrivially.
    let consistent = space.consistent_sets();
    let pairs = analogy.proper_pairs();
    let target = rng.gen_range(2..=params.max_atoms.max(2));
    let mut natural_atoms: BTreeMap<String, FeatureSet> = BTreeMap::new();
    let mut i = 0;
    while natural_atoms.len() < target {
        i += 1;
        let phi = if rng.gen_bool(0.85) || consistent.is_empty() {
            *consistent.choose(rng).unwrap_or(&FeatureSet::EMPTY)
        } else {
            FeatureSet((rng.gen_range(0..(1u64 << n)) as u32) & space.universe().0)
        };
        natural_atoms.insert(format!("N{i}"), phi);
        if natural_atoms.len() < target && !pairs.is_empty() && rng.gen_bool(0.5) {
            let &(s, t) = pairs.choose(rng).expect("nonempty");
            let moved = analogy.apply(s, t, phi.intersection(space.domain(s)));
            let image = moved.union(phi.difference(space.domain(s)));
            natural_atoms.insert(format!("M{i}"), image);
        }
    }

    // Optional kappa table for a role `r`: random per-feature images on each
    // class representative, propagated to classmates through the bijections.
    let mut kappa = BTreeMap::new();
    if params.with_kappa && rng.gen_bool(0.5) {
        let mut per_feature: BTreeMap<usize, FeatureSet> = BTreeMap::new();
        for class in &classes {
            let rep = class[0];
            let dom = space.domain(rep);
            for f in dom.iter() {
                let image = loop {
                    let raw = FeatureSet((rng.gen_range(0..(1u64 << n)) as u32) & dom.0);
                    if !raw.is_empty() {
                        break raw;
                    }
                };
                per_feature.insert(f, image);
                for &m in &class[1..] {
                    per_feature.insert(
                        analogy.apply_feature(rep, m, f),
                        analogy.apply(rep, m, image),
                    );
                }
            }
        }
        kappa.insert("r".to_string(), KappaSpec::Additive(per_feature));
    }

    Interpretation::build(InterpretationData {
        space,
        analogy,
        mode: params.mode,
        extras: Vec::new(),
        natural_atoms,
        plain_atoms: BTreeMap::new(),
        roles: BTreeMap::new(),
        kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::InterpretationDoc;

    #[test]
    fn deterministic_per_seed() {
        let params = GenParams::default();
        for seed in 0..10 {
            let a = gen_interpretation(&params, seed).unwrap();
            let b = gen_interpretation(&params, seed).unwrap();
            assert_eq!(
                InterpretationDoc::from_interpretation(&a).to_json(),
                InterpretationDoc::from_interpretation(&b).to_json()
            );
        }
    }

    #[test]
    fn generated_interpretations_validate() {
        for mode in [Mode::Strong, Mode::Weak] {
            let params = GenParams { mode, ..GenParams::default() };
            for seed in 0..50 {
                let interp = gen_interpretation(&params, seed).unwrap();
                assert!(interp.validate().is_valid(), "seed {seed} in {mode} mode");
            }
        }
    }

    #[test]
    fn weak_mode_produces_cross_domain_overlaps() {
        // Some weak samples must violate the strong-only condition, showing
        // the weak generator explores the strictly larger space.
        let params = GenParams { mode: Mode::Weak, ..GenParams::default() };
        let mut found = false;
        for seed in 0..100 {
            let interp = gen_interpretation(&params, seed).unwrap();
            let doc = InterpretationDoc::from_interpretation(&interp);
            let mut strong_doc = doc.clone();
            strong_doc.mode = Mode::Strong;
            if let Ok(strong) = strong_doc.build() {
                let report = strong.validate();
                if report.violated_conditions().contains("cross-domain-overlap") {
                    found = true;
                    break;
                }
            }
        }
        assert!(found, "no weak sample with a cross-domain overlap in 100 seeds");
    }
}
