//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed category: law `{law}` violated by {witness}")]
    MalformedCategory { law: String, witness: String },

    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),

    #[error("cone legs do not commute with the diagram: {0}")]
    NotACone(String),

    #[error("limit carrier is empty")]
    EmptyLimit,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("measure base mismatch: {0}")]
    BaseMismatch(String),

    #[error("polyhedron is unbounded")]
    UnboundedPolyhedron,

    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),

    #[error("tuple is not morphism-compatible: {0}")]
    IncompatibleTuple(String),

    #[error("no coupling with the requested marginals exists")]
    EmptyCorrespondence,

    #[error("no compatible perturbation found: {0}")]
    NoPerturbationFound(String),

    #[error("point or set lies outside the limit carrier: {0}")]
    NotInLimit(String),

    #[error("open lift failed: {0}")]
    LiftFailed(String),

    #[error("surjectivity witness is empty")]
    EmptyWitness,

    #[error("witness projection differs from target at object `{object}`: {detail}")]
    WitnessProjectionMismatch { object: String, detail: String },

    #[error("functor `{functor}` is not applicable: {reason}")]
    InapplicableFunctor { functor: String, reason: String },

    #[error("cannot parse rational literal `{0}`")]
    ParseRational(String),

    #[error("diagram file error: {0}")]
    DiagramFile(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
