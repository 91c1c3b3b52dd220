//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while constructing or evaluating semantic structures.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("the feature universe must be nonempty")]
    EmptyUniverse,
    #[error("too many features: {0} (the consistent family is enumerated exhaustively)")]
    TooManyFeatures(usize),
    #[error("duplicate feature identifier `{0}`")]
    DuplicateFeature(String),
    #[error("unknown feature identifier `{0}`")]
    UnknownFeature(String),
    #[error("partition blocks must be nonempty")]
    EmptyPartitionBlock,
    #[error("partition blocks overlap")]
    OverlappingPartition,
    #[error("partition does not cover the feature universe")]
    PartitionDoesNotCover,
    #[error("domain index {0} out of range (have {1} domains)")]
    DomainOutOfRange(usize, usize),
    #[error("bijection for ({0}, {1}) is not a total bijection between the two domains")]
    NotABijection(usize, usize),
    #[error("domains {0} and {1} are analogous but have different sizes")]
    UnequalDomainSizes(usize, usize),
    #[error("no bijection reachable for analogous pair ({0}, {1})")]
    MissingBijection(usize, usize),
    #[error("conflicting bijections derived for pair ({0}, {1})")]
    BijectionConflict(usize, usize),
    #[error("bijection given for pair ({0}, {1}) which is not in the analogy relation")]
    BijectionOutsideRelation(usize, usize),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown role `{0}`")]
    UnknownRole(String),
    #[error("atom `{0}` declared both natural and plain")]
    AtomBothNaturalAndPlain(String),
    #[error("`btw` requires natural children; `{0}` is not natural")]
    BetweenNotNatural(String),
    #[error("analogy assertions require natural concepts; `{0}` is not natural")]
    AssertionNotNatural(String),
    #[error("role `{0}` is not intra-domain")]
    NotIntraDomain(String),
    #[error("kappa table for role `{0}` is missing an entry for {1}")]
    KappaMissingEntry(String, String),
    #[error("unknown individual {0}")]
    UnknownIndividual(String),
    #[error("domain translation has repeated sources or targets")]
    TranslationNotInjective,
    #[error("domain translation pair ({0}, {1}) is not in the analogy relation")]
    TranslationOutsideRelation(usize, usize),
    #[error("{0}")]
    Invalid(String),
}

/// Errors raised by the text parsers, with 1-based line/column positions.
#[derive(Debug, Error)]
#[error("parse error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}
