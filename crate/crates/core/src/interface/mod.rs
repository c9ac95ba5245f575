//! The link between the planning and the ontology side: the fluent
//! interface, query specifications and the assembled ontology-mediated
//! specification.

mod fluent;
mod om;
mod query;

pub use fluent::FluentInterface;
pub use om::{GuardedAssignment, LoadError, OmSpec};
pub use query::{parse_query_interface, Assignment, QuerySpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterfaceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{name}` is mapped twice")]
    DuplicateMapping { line: usize, name: String },
    #[error("line {line}: `{iri}` is already the image of another symbol")]
    InverseFunctionalityViolation { line: usize, iri: String },
    #[error("line {line}: predicate `{predicate}` has arity {arity}; only unary and binary predicates can be mapped")]
    ArityNotMappable {
        line: usize,
        predicate: String,
        arity: usize,
    },
    #[error("line {line}: variable ?{var} is not declared in VARIABLES")]
    UndeclaredQueryVariable { line: usize, var: String },
    #[error("query `{predicate}`: variable ?{var} has no type specification")]
    MissingTypeSpecification { predicate: String, var: String },
    #[error("query predicate `{predicate}` is specified twice")]
    DuplicateQuery { predicate: String },
    #[error("query predicate `{predicate}` is not declared in the domain")]
    UndeclaredQueryPredicate { predicate: String },
    #[error("query predicate `{predicate}` has arity {declared} but {variables} query variables")]
    QueryArityMismatch {
        predicate: String,
        declared: usize,
        variables: usize,
    },
    #[error("query predicate `{predicate}` also heads a derivation rule")]
    QueryPredicateIsDerived { predicate: String },
    #[error("query predicate `{predicate}` occurs in an effect of `{action}`")]
    QueryPredicateInEffect { predicate: String, action: String },
    #[error("mapped object `{object}` does not occur in the planning specification")]
    UnknownMappedObject { object: String },
    #[error("mapped predicate `{predicate}` is not declared in the domain")]
    UnknownMappedPredicate { predicate: String },
    #[error("predicate `{predicate}` has arity {declared} but is mapped with arity {mapped}")]
    MappedArityMismatch {
        predicate: String,
        declared: usize,
        mapped: usize,
    },
    #[error("query predicate `{predicate}` cannot be mapped by the fluent interface")]
    QueryPredicateMapped { predicate: String },
}
