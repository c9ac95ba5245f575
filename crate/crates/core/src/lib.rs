//! Ontology-mediated planning.
//!
//! A planning specification is paired with a static description-logic
//! ontology through a fluent interface (planning objects and predicates to
//! individuals, classes and properties) and a query interface (query
//! predicates whose truth is decided by entailment). [`compile`] turns such a
//! specification into plain PDDL with derivation rules, [`planner`] solves the
//! result, and [`oracle`] implements the direct semantics used to check both.

pub mod compile;
pub mod fixtures;
pub mod interface;
pub mod justify;
pub mod oracle;
pub mod pddl;
pub mod planner;
