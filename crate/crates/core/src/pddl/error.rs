use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: unsupported PDDL feature `{feature}`")]
    Unsupported { line: usize, feature: String },
    #[error("unknown predicate `{name}`")]
    UnknownPredicate { name: String },
    #[error("unknown object `{name}`")]
    UnknownObject { name: String },
    #[error("predicate `{predicate}` has arity {expected}, used with {found} arguments")]
    ArityMismatch { predicate: String, expected: usize, found: usize },
    #[error("predicate `{name}` declared twice")]
    DuplicatePredicate { name: String },
    #[error("action `{name}` declared twice")]
    DuplicateAction { name: String },
    #[error("action `{action}` has an effect on derived predicate `{predicate}`")]
    EffectOnDerivedPredicate { action: String, predicate: String },
    #[error("derived predicate `{predicate}` occurs negatively in a rule body")]
    NegativeDerivedOccurrence { predicate: String },
    #[error("initial state contains derived atom over `{predicate}`")]
    DerivedAtomInInit { predicate: String },
    #[error("variable `?{var}` is not bound in {context}")]
    UnboundVariable { var: String, context: String },
    #[error("rule head `{head}` must have distinct variables or constants as arguments")]
    MalformedRuleHead { head: String },
    #[error("binding does not cover parameter `?{var}`")]
    PartialBinding { var: String },
    #[error("problem is for domain `{found}`, expected `{expected}`")]
    DomainMismatch { expected: String, found: String },
}
