use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopoError {
    #[error("point `{0}` is not contained in its own minimal neighborhood")]
    MissingSelf(String),
    #[error("`{inner}` lies in the minimal neighborhood of `{outer}` but its own neighborhood is not contained in it")]
    CoherenceViolation { outer: String, inner: String },
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point `{0}` is declared twice")]
    DuplicatePoint(String),
    #[error("point `{0}` has no minimal neighborhood")]
    MissingNeighborhood(String),
    #[error("{n} points exceed the cap of {cap}")]
    TooManyPoints { n: usize, cap: usize },
    #[error("open-set family is not a topology: {0}")]
    NotATopology(String),
    #[error("point set is not a subset of the space")]
    ForeignSet,
    #[error("map domain or codomain does not match")]
    DomainMismatch,
    #[error("map is not a bijection")]
    BijectivityError,
    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("decomposition leaves a non-empty residue {0}")]
    ResidueNonEmpty(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = TopoError> = std::result::Result<T, E>;

impl From<serde_json::Error> for TopoError {
    fn from(e: serde_json::Error) -> Self {
        TopoError::Input(e.to_string())
    }
}
