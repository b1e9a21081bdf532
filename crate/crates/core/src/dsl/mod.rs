//! The constraint language of environment files and the question
//! logical-form language, both a small fragment of answer set programming.

pub mod asp;
mod constraint;
mod question;

pub use constraint::{
    parse_constraint, parse_environment, render_constraint_asp, render_constraint_nl,
    ConstraintInstance, Environment, LineSpan, GENERIC_RULES, GENERIC_RULES_NL,
};
pub use question::{parse_question, QAtom, QVar, QuestionForm};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: unknown attribute `{name}`")]
    UnknownAttribute { line: usize, name: String },
    #[error("line {line}: `{value}` is not a value of `{attribute}`")]
    UnknownValue {
        line: usize,
        attribute: String,
        value: String,
    },
    #[error("line {line}: region {region} out of range (expected 0..=3)")]
    RegionOutOfRange { line: usize, region: i64 },
    #[error("line {line}: template arity mismatch: {message}")]
    TemplateMismatch { line: usize, message: String },
    #[error("line {line}: unrecognized rule `{rule}`")]
    UnrecognizedRule { line: usize, rule: String },
    #[error("line {line}: object count declared twice")]
    DuplicateObjectCount { line: usize },
    #[error("expected exactly one statement, found {0}")]
    StatementCount(usize),
    #[error("question has no atom binding the answer variable")]
    NoQueryAtom,
    #[error("answer variable used outside a single property position")]
    QueryVariableMisuse,
    #[error("the queried attribute `{0}` is also fixed on the queried object")]
    QueryAttributeBound(String),
    #[error("unknown predicate `{0}` in question")]
    UnknownPredicate(String),
    #[error("malformed question: {0}")]
    MalformedQuestion(String),
}
