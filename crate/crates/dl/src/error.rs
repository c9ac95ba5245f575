use thiserror::Error;

/// Failure while reading the ontology text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unsupported construct `{feature}` (outside the supported ALCOQ fragment)")]
    Unsupported { line: usize, feature: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    /// The tableau grew past the configured node budget. The answer is
    /// unknown; callers must not treat this as either outcome.
    #[error("tableau node budget of {budget} exceeded")]
    ResourceLimit { budget: usize },
}
