//! The analogy structure: an equivalence relation over domain indices plus a
//! coherent family of bijections between analogous domains.
//!
//! Bijections are supplied on a spanning set of pairs per equivalence class
//! and completed via inversion and composition; a completion conflict is a
//! construction error, never a silent overwrite.

use std::collections::{BTreeMap, VecDeque};

use crate::error::ModelError;
use crate::features::{FeatureSet, FeatureSpace};

/// A single bijection between two domains, as a feature-index map.
pub type Bijection = BTreeMap<usize, usize>;

/// Equivalence relation `~` over domain indices with the bijection family S.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalogyStructure {
    num_domains: usize,
    /// Class representative per domain (closed union-find).
    class: Vec<usize>,
    /// One bijection per ordered pair (s, t) in `~`, including identities.
    sigma: BTreeMap<(usize, usize), Bijection>,
}

impl AnalogyStructure {
    /// The trivial structure where every domain is only analogous to itself.
    pub fn discrete(space: &FeatureSpace) -> Self {
        Self::new(space, &[], BTreeMap::new()).expect("discrete structure is always coherent")
    }

    /// Builds and closes the structure from generator pairs and spanning
    /// bijections. Generator pairs and bijection keys use zero-based domain
    /// indices.
    pub fn new(
        space: &FeatureSpace,
        generators: &[(usize, usize)],
        given: BTreeMap<(usize, usize), Bijection>,
    ) -> Result<Self, ModelError> {
        let k = space.num_domains();
        let mut class: Vec<usize> = (0..k).collect();
        fn find(class: &mut Vec<usize>, mut i: usize) -> usize {
            while class[i] != i {
                class[i] = class[class[i]];
                i = class[i];
            }
            i
        }
        for &(s, t) in generators {
            if s >= k || t >= k {
                return Err(ModelError::DomainOutOfRange(s.max(t), k));
            }
            let (rs, rt) = (find(&mut class, s), find(&mut class, t));
            if rs != rt {
                class[rs.max(rt)] = rs.min(rt);
            }
        }
        for i in 0..k {
            let r = find(&mut class, i);
            class[i] = r;
        }

        // Equal block sizes within a class are forced by bijectivity.
        for i in 0..k {
            for j in 0..k {
                if class[i] == class[j] && space.domain(i).len() != space.domain(j).len() {
                    return Err(ModelError::UnequalDomainSizes(i, j));
                }
            }
        }

        // Seed the edge set with the given bijections and their inverses.
        let mut edges: BTreeMap<(usize, usize), Bijection> = BTreeMap::new();
        for ((s, t), map) in &given {
            if *s >= k || *t >= k {
                return Err(ModelError::DomainOutOfRange((*s).max(*t), k));
            }
            if class[*s] != class[*t] {
                return Err(ModelError::BijectionOutsideRelation(*s, *t));
            }
            check_total_bijection(space, *s, *t, map)?;
            insert_checked(&mut edges, (*s, *t), map.clone())?;
            let inv: Bijection = map.iter().map(|(a, b)| (*b, *a)).collect();
            insert_checked(&mut edges, (*t, *s), inv)?;
        }
        for i in 0..k {
            let id: Bijection = space.domain(i).iter().map(|f| (f, f)).collect();
            insert_checked(&mut edges, (i, i), id)?;
        }

        // Complete via breadth-first composition from every domain.
        let mut sigma: BTreeMap<(usize, usize), Bijection> = BTreeMap::new();
        for s in 0..k {
            let mut reached: BTreeMap<usize, Bijection> = BTreeMap::new();
            reached.insert(s, edges[&(s, s)].clone());
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let here = reached[&u].clone();
                for ((a, b), step) in &edges {
                    if *a != u || reached.contains_key(b) {
                        continue;
                    }
                    let composed: Bijection =
                        here.iter().map(|(f, g)| (*f, step[g])).collect();
                    reached.insert(*b, composed);
                    queue.push_back(*b);
                }
            }
            for t in 0..k {
                if class[t] != class[s] {
                    continue;
                }
                let map = reached
                    .remove(&t)
                    .ok_or(ModelError::MissingBijection(s, t))?;
                sigma.insert((s, t), map);
            }
        }

        // Coherence: every supplied edge must agree with the closure, which
        // gives identity, inversion and composition (sigma coherence) at
        // once.
        for ((a, b), map) in &edges {
            if sigma.get(&(*a, *b)) != Some(map) {
                return Err(ModelError::BijectionConflict(*a, *b));
            }
        }
        for s in 0..k {
            for t in 0..k {
                if class[s] != class[t] {
                    continue;
                }
                for u in 0..k {
                    if class[u] != class[s] {
                        continue;
                    }
                    let st = &sigma[&(s, t)];
                    let tu = &sigma[&(t, u)];
                    let su = &sigma[&(s, u)];
                    let ok = st.iter().all(|(f, g)| su[f] == tu[g]);
                    if !ok {
                        return Err(ModelError::BijectionConflict(s, u));
                    }
                }
            }
        }

        Ok(AnalogyStructure { num_domains: k, class, sigma })
    }

    pub fn num_domains(&self) -> usize {
        self.num_domains
    }

    /// Whether (i, j) is in `~`.
    pub fn related(&self, i: usize, j: usize) -> bool {
        i < self.num_domains && j < self.num_domains && self.class[i] == self.class[j]
    }

    /// All ordered pairs (s, t) in `~` with s != t.
    pub fn proper_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.num_domains {
            for t in 0..self.num_domains {
                if s != t && self.class[s] == self.class[t] {
                    out.push((s, t));
                }
            }
        }
        out
    }

    /// The `~`-classmates of domain `i` other than `i` itself.
    pub fn classmates(&self, i: usize) -> Vec<usize> {
        (0..self.num_domains)
            .filter(|&j| j != i && self.class[j] == self.class[i])
            .collect()
    }

    pub fn bijection(&self, s: usize, t: usize) -> Option<&Bijection> {
        self.sigma.get(&(s, t))
    }

    /// Applies sigma_(s,t) to a feature set contained in domain s.
    pub fn apply(&self, s: usize, t: usize, set: FeatureSet) -> FeatureSet {
        let map = &self.sigma[&(s, t)];
        let mut out = FeatureSet::EMPTY;
        for f in set.iter() {
            out.insert(map[&f]);
        }
        out
    }

    /// Maps a single feature from domain s to domain t.
    pub fn apply_feature(&self, s: usize, t: usize, f: usize) -> usize {
        self.sigma[&(s, t)][&f]
    }

    /// The generator pairs of `~` restricted to distinct representatives, for
    /// serialization: one pair per class edge in a deterministic order.
    pub fn spanning_generators(&self) -> Vec<(usize, usize)> {
        (0..self.num_domains)
            .filter(|&i| self.class[i] != i)
            .map(|i| (self.class[i], i))
            .collect()
    }
}

fn check_total_bijection(
    space: &FeatureSpace,
    s: usize,
    t: usize,
    map: &Bijection,
) -> Result<(), ModelError> {
    let src = space.domain(s);
    let tgt = space.domain(t);
    if map.len() != src.len() {
        return Err(ModelError::NotABijection(s, t));
    }
    let mut image = FeatureSet::EMPTY;
    for (f, g) in map {
        if !src.contains(*f) || !tgt.contains(*g) {
            return Err(ModelError::NotABijection(s, t));
        }
        image.insert(*g);
    }
    if image != tgt {
        return Err(ModelError::NotABijection(s, t));
    }
    Ok(())
}

fn insert_checked(
    edges: &mut BTreeMap<(usize, usize), Bijection>,
    key: (usize, usize),
    map: Bijection,
) -> Result<(), ModelError> {
    match edges.get(&key) {
        Some(existing) if *existing != map => Err(ModelError::BijectionConflict(key.0, key.1)),
        Some(_) => Ok(()),
        None => {
            edges.insert(key, map);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn space4() -> FeatureSpace {
        // two domains of two features, two singleton domains
        FeatureSpace::new(
            names(&["c", "d", "c2", "d2", "y", "a"]),
            vec![
                names(&["c", "d"]),
                names(&["c2", "d2"]),
                names(&["y"]),
                names(&["a"]),
            ],
            vec![],
        )
        .unwrap()
    }

    fn bij(space: &FeatureSpace, pairs: &[(&str, &str)]) -> Bijection {
        pairs
            .iter()
            .map(|(a, b)| {
                (space.feature_index(a).unwrap(), space.feature_index(b).unwrap())
            })
            .collect()
    }

    #[test]
    fn closure_completes_inverse_and_identity() {
        let sp = space4();
        let mut given = BTreeMap::new();
        given.insert((0, 1), bij(&sp, &[("c", "c2"), ("d", "d2")]));
        given.insert((2, 3), bij(&sp, &[("y", "a")]));
        let ana = AnalogyStructure::new(&sp, &[(0, 1), (2, 3)], given).unwrap();
        assert!(ana.related(0, 1));
        assert!(!ana.related(0, 2));
        let c = FeatureSet::singleton(sp.feature_index("c").unwrap());
        let c2 = FeatureSet::singleton(sp.feature_index("c2").unwrap());
        assert_eq!(ana.apply(0, 1, c), c2);
        assert_eq!(ana.apply(1, 0, c2), c);
        assert_eq!(ana.apply(0, 0, c), c);
    }

    #[test]
    fn conflicting_bijections_are_rejected() {
        let sp = space4();
        let mut given = BTreeMap::new();
        given.insert((0, 1), bij(&sp, &[("c", "c2"), ("d", "d2")]));
        given.insert((1, 0), bij(&sp, &[("c2", "d"), ("d2", "c")]));
        let err = AnalogyStructure::new(&sp, &[(0, 1)], given).unwrap_err();
        assert!(matches!(err, ModelError::BijectionConflict(..)));
    }

    #[test]
    fn missing_spanning_bijection_is_an_error() {
        let sp = space4();
        let err = AnalogyStructure::new(&sp, &[(0, 1)], BTreeMap::new()).unwrap_err();
        assert!(matches!(err, ModelError::MissingBijection(..)));
    }

    #[test]
    fn unequal_class_sizes_are_rejected() {
        let sp = space4();
        let err = AnalogyStructure::new(&sp, &[(0, 2)], BTreeMap::new()).unwrap_err();
        assert!(matches!(err, ModelError::UnequalDomainSizes(..)));
    }

    #[test]
    fn non_bijective_map_is_rejected() {
        let sp = space4();
        let mut given = BTreeMap::new();
        given.insert((0, 1), bij(&sp, &[("c", "c2"), ("d", "c2")]));
        let err = AnalogyStructure::new(&sp, &[(0, 1)], given).unwrap_err();
        assert!(matches!(err, ModelError::NotABijection(..)));
    }
}
