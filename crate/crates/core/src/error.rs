use thiserror::Error;

use crate::semiring::FamilyId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("family mismatch: {left} vs {right}")]
    FamilyMismatch { left: FamilyId, right: FamilyId },

    #[error("invalid label `{label}`: {reason}")]
    InvalidLabel { label: String, reason: String },

    #[error("invalid element expression `{0}`")]
    InvalidElement(String),

    #[error("invalid parameter `{text}`: {reason}")]
    InvalidParam { text: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    InvalidInput(String),

    #[error("target not reached within budget {budget}")]
    BudgetExhausted { budget: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("inconsistent parameter lists: {0}")]
    InconsistentLists(String),

    #[error("unbalanced parameter list: sum q^2 = {plus}, sum q^-2 = {minus}")]
    Unbalanced { plus: f64, minus: f64 },

    #[error("not enough terms: need {needed}, got {got}")]
    NotEnoughTerms { needed: usize, got: usize },

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
