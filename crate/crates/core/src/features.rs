//! Feature universes, domain partitions and forbidden feature combinations.
//!
//! A [`FeatureSpace`] fixes the finite feature universe, its partition into
//! thematic domains and the family of forbidden feature combinations. Feature
//! sets are bitmasks over the universe, so the consistent family can be
//! enumerated exhaustively for the small universes this crate targets.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::ModelError;

/// Hard cap on the universe size; the consistent family is enumerated as all
/// 2^n subsets, so this must stay small.
pub const MAX_FEATURES: usize = 20;

/// A subset of the feature universe, as a bitmask over feature indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FeatureSet(pub u32);

impl FeatureSet {
    pub const EMPTY: FeatureSet = FeatureSet(0);

    pub fn singleton(idx: usize) -> Self {
        FeatureSet(1 << idx)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, idx: usize) -> bool {
        self.0 & (1 << idx) != 0
    }

    pub fn is_subset(self, other: FeatureSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: FeatureSet) -> FeatureSet {
        FeatureSet(self.0 | other.0)
    }

    pub fn intersection(self, other: FeatureSet) -> FeatureSet {
        FeatureSet(self.0 & other.0)
    }

    pub fn difference(self, other: FeatureSet) -> FeatureSet {
        FeatureSet(self.0 & !other.0)
    }

    pub fn insert(&mut self, idx: usize) {
        self.0 |= 1 << idx;
    }

    /// Iterates over member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let idx = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(idx)
            }
        })
    }

    /// All subsets of `self`, the empty set first, `self` last.
    pub fn subsets(self) -> impl Iterator<Item = FeatureSet> {
        let mask = self.0;
        let mut cur: u32 = 0;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = FeatureSet(cur);
            if cur == mask {
                done = true;
            } else {
                cur = (cur.wrapping_sub(mask)) & mask;
            }
            Some(out)
        })
    }
}

/// The feature universe with its domain partition and forbidden combinations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpace {
    /// Feature identifiers; the position of a name is its bit index.
    names: Vec<String>,
    /// One feature set per domain; disjoint, nonempty, covering the universe.
    partition: Vec<FeatureSet>,
    /// Forbidden combinations, always containing the full universe.
    forbidden: BTreeSet<FeatureSet>,
    /// Whether the full universe had to be auto-inserted into `forbidden`.
    full_universe_inserted: bool,
}

impl FeatureSpace {
    /// Builds a space from feature names, a partition given as name lists and
    /// forbidden sets given as name lists. The full universe is added to the
    /// forbidden family if absent.
    pub fn new(
        names: Vec<String>,
        partition: Vec<Vec<String>>,
        forbidden: Vec<Vec<String>>,
    ) -> Result<Self, ModelError> {
        if names.is_empty() {
            return Err(ModelError::EmptyUniverse);
        }
        if names.len() > MAX_FEATURES {
            return Err(ModelError::TooManyFeatures(names.len()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(ModelError::DuplicateFeature(n.clone()));
            }
        }
        let mut space = FeatureSpace {
            names,
            partition: Vec::new(),
            forbidden: BTreeSet::new(),
            full_universe_inserted: false,
        };
        let mut covered = FeatureSet::EMPTY;
        for block in &partition {
            if block.is_empty() {
                return Err(ModelError::EmptyPartitionBlock);
            }
            let set = space.set_from_names(block)?;
            if !set.intersection(covered).is_empty() {
                return Err(ModelError::OverlappingPartition);
            }
            covered = covered.union(set);
            space.partition.push(set);
        }
        if covered != space.universe() {
            return Err(ModelError::PartitionDoesNotCover);
        }
        for x in &forbidden {
            let set = space.set_from_names(x)?;
            space.forbidden.insert(set);
        }
        if !space.forbidden.contains(&space.universe()) {
            space.forbidden.insert(space.universe());
            space.full_universe_inserted = true;
        }
        Ok(space)
    }

    pub fn set_from_names(&self, names: &[String]) -> Result<FeatureSet, ModelError> {
        let mut set = FeatureSet::EMPTY;
        for n in names {
            set.insert(self.feature_index(n)?);
        }
        Ok(set)
    }

    pub fn feature_index(&self, name: &str) -> Result<usize, ModelError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ModelError::UnknownFeature(name.to_string()))
    }

    pub fn feature_name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn names_of(&self, set: FeatureSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }

    /// The full universe as a feature set.
    pub fn universe(&self) -> FeatureSet {
        FeatureSet((1u32 << self.names.len()) - 1)
    }

    pub fn num_features(&self) -> usize {
        self.names.len()
    }

    /// Number of domains k.
    pub fn num_domains(&self) -> usize {
        self.partition.len()
    }

    /// The feature set of domain `i` (zero-based).
    pub fn domain(&self, i: usize) -> FeatureSet {
        self.partition[i]
    }

    pub fn domains(&self) -> &[FeatureSet] {
        &self.partition
    }

    /// The domain index a feature belongs to.
    pub fn domain_of(&self, feature_idx: usize) -> usize {
        self.partition
            .iter()
            .position(|b| b.contains(feature_idx))
            .expect("partition covers the universe")
    }

    pub fn forbidden(&self) -> &BTreeSet<FeatureSet> {
        &self.forbidden
    }

    pub fn full_universe_inserted(&self) -> bool {
        self.full_universe_inserted
    }

    /// Adds a forbidden combination after construction.
    pub fn forbid(&mut self, set: FeatureSet) {
        self.forbidden.insert(set);
    }

    /// Whether `set` contains no forbidden combination.
    pub fn is_consistent(&self, set: FeatureSet) -> bool {
        self.forbidden.iter().all(|x| !x.is_subset(set))
    }

    /// The consistent family, in increasing bitmask order.
    pub fn consistent_sets(&self) -> Vec<FeatureSet> {
        self.universe()
            .subsets()
            .filter(|f| self.is_consistent(*f))
            .collect()
    }

    /// The members of the consistent family contained in domain `i`.
    pub fn consistent_sets_in_domain(&self, i: usize) -> Vec<FeatureSet> {
        self.partition[i]
            .subsets()
            .filter(|f| self.is_consistent(*f))
            .collect()
    }
}

impl FeatureSpace {
    /// Renders a feature set as `{a, b}` using feature names.
    pub fn display(&self, set: FeatureSet) -> String {
        let mut s = String::from("{");
        let mut first = true;
        for idx in set.iter() {
            if !first {
                s.push_str(", ");
            }
            s.push_str(&self.names[idx]);
            first = false;
        }
        s.push('}');
        s
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0b{:b}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn space_abc() -> FeatureSpace {
        FeatureSpace::new(
            names(&["a", "b", "c"]),
            vec![names(&["a", "b"]), names(&["c"])],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn universe_is_auto_forbidden() {
        let sp = space_abc();
        assert!(sp.full_universe_inserted());
        assert!(!sp.is_consistent(sp.universe()));
        assert!(sp.is_consistent(FeatureSet::EMPTY));
    }

    #[test]
    fn consistency_rejects_supersets_of_forbidden() {
        let mut sp = space_abc();
        let ab = sp.set_from_names(&names(&["a", "b"])).unwrap();
        sp.forbid(ab);
        assert!(!sp.is_consistent(ab));
        let a = sp.set_from_names(&names(&["a"])).unwrap();
        assert!(sp.is_consistent(a));
        // every superset of a forbidden set is inconsistent
        assert!(!sp.is_consistent(sp.universe()));
    }

    #[test]
    fn consistent_family_is_downward_closed() {
        let mut sp = space_abc();
        sp.forbid(sp.set_from_names(&names(&["b", "c"])).unwrap());
        for f in sp.consistent_sets() {
            for g in f.subsets() {
                assert!(sp.is_consistent(g), "subset {g} of consistent {f} must be consistent");
            }
        }
    }

    #[test]
    fn partition_validation() {
        assert!(FeatureSpace::new(
            names(&["a", "b"]),
            vec![names(&["a"]), names(&["a", "b"])],
            vec![],
        )
        .is_err());
        assert!(FeatureSpace::new(names(&["a", "b"]), vec![names(&["a"])], vec![]).is_err());
        assert!(FeatureSpace::new(names(&["a"]), vec![names(&["a"]), vec![]], vec![]).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        let s = FeatureSet(0b101);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(
            subs,
            vec![FeatureSet(0), FeatureSet(0b1), FeatureSet(0b100), FeatureSet(0b101)]
        );
    }

    #[test]
    fn unknown_feature_is_an_error() {
        let sp = space_abc();
        assert!(matches!(
            sp.set_from_names(&names(&["z"])),
            Err(ModelError::UnknownFeature(_))
        ));
    }
}
