use thiserror::Error;

use crate::word::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the empty word has no coefficient in this context")]
    EmptyWord,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial has a constant term")]
    ConstantTerm,
    #[error("substitution image is not a homogeneous linear form: {0}")]
    NotLinear(String),
    #[error("word {0} does not end in y")]
    NotYEnding(Word),
    #[error("degree {degree} out of range [{min}, {max}]")]
    DegreeOutOfRange { degree: usize, min: usize, max: usize },
    #[error("polynomial is not a Lie element; residual {residual}")]
    NotLie { residual: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inexact division: remainder {0}")]
    InexactDivision(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
