use thiserror::Error;

/// Errors produced by the group, subgroup, coset and group-algebra routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element {element} does not belong to the {family} family")]
    FamilyMismatch { family: &'static str, element: String },
    #[error("element {0} is not in normal form")]
    NotNormalForm(String),
    #[error("enumeration exceeded the element cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("unsupported subgroup/group pairing: {0}")]
    Unsupported(String),
    #[error("coset representatives do not cover H: {0}")]
    CosetCover(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("decision procedures disagree on {element}: {detail}")]
    Disagreement { element: String, detail: String },
    #[error("numerical splitting failed after {attempts} attempts: {detail}")]
    Splitting { attempts: u32, detail: String },
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("invalid definition: {0}")]
    Definition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
