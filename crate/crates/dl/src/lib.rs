//! Description-logic support for ontology-mediated planning.
//!
//! The crate covers an ALCOQ-style fragment: named classes, ⊤/⊥, the boolean
//! connectives, existential and universal restrictions, qualified number
//! restrictions and single-individual nominals, together with class and
//! property assertions, individual inequality and class disjointness.
//! Reasoning is done by a tableau procedure with subset blocking, merging for
//! at-most restrictions and explicit inequality constraints.

mod error;
#[cfg(feature = "oracle")]
pub mod finite_model;
mod expr;
mod ontology;
mod parse;
mod tableau;

pub use error::{ParseError, ReasonerError};
pub use expr::{Axiom, ClassExpr, Entailment};
pub use ontology::Ontology;
pub use parse::{parse_axiom, parse_class_expr, parse_ontology};
pub use tableau::{Reasoner, ReasonerConfig, DEFAULT_NODE_BUDGET};
