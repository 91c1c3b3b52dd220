//! Brute-force ground truth: random interpretation generation, independent
//! re-implementations of core operations, proposition sweeps, the
//! mode-divergence matrix, and bounded countermodel search.

pub mod gen;
pub mod matrix;
pub mod props;
pub mod search;

use std::collections::BTreeSet;

use crate::concept::Concept;
use crate::error::ModelError;
use crate::interp::Interpretation;
use crate::translations::DomainTranslation;

/// Naive mu: enumerates every subset of the proper pairs of `~` and keeps
/// the ones that form a domain translation witnessing phi(C) -> phi(D).
/// Exponential in the number of analogous domain pairs; used only to
/// cross-check the structured enumeration.
pub fn mu_naive(
    interp: &Interpretation,
    c: &Concept,
    d: &Concept,
) -> Result<BTreeSet<DomainTranslation>, ModelError> {
    let phi_c = interp.phi(c)?;
    let phi_d = interp.phi(d)?;
    let delta_c = interp.delta(c)?;
    let pairs = interp.analogy().proper_pairs();
    let mut out = BTreeSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        let chosen: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        let Ok(u) = DomainTranslation::new(chosen) else {
            continue; // repeated source or target: not a translation
        };
        let sources = u.sources();
        if !sources.iter().all(|s| delta_c.contains(s)) {
            continue;
        }
        if u.targets().iter().any(|t| delta_c.contains(t) && !sources.contains(t)) {
            continue;
        }
        if u.apply(interp, phi_c)? == phi_d {
            out.insert(u);
        }
    }
    Ok(out)
}
