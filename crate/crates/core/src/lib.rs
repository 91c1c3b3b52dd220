//! A reasoning workbench for a lightweight description logic with analogy
//! assertions over feature-enriched, domain-partitioned interpretations.
//!
//! The crate builds finite interpretations from documents, evaluates
//! concepts and analogy assertions, applies a fixed set of inference rules,
//! and searches for small countermodels of candidate rules.

pub mod analogy;
pub mod concept;
pub mod doc;
pub mod error;
pub mod features;
pub mod fixtures;
pub mod inference;
pub mod interp;
pub mod oracle;
pub mod parse;
pub mod proportions;
pub mod tbox;
pub mod translations;
