//! Persistence, prompts, scoring and statistics.

pub mod dataset;
pub mod eval;
pub mod pipeline;
pub mod prompt;
pub mod stats;
pub mod validate;

use thiserror::Error;

use crate::domain::DomainError;
use crate::dsl::DslError;
use crate::forge::ForgeError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error("line {line}: unknown label `{label}`")]
    UnknownLabel { line: usize, label: String },
    #[error("instance ids do not line up: {0}")]
    IdMismatch(String),
}
