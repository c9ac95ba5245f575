//! PDDL data model, reader, writer and reference semantics for the supported
//! subset: STRIPS with negative, disjunctive and quantified preconditions,
//! equality and derived predicates.

mod check;
mod emit;
mod error;
mod model;
mod parse;
mod semantics;

pub use check::check_spec;
pub use emit::{emit_domain, emit_plan, emit_problem};
pub use error::PddlError;
pub use model::*;
pub use parse::{parse_domain, parse_ground_atom, parse_plan, parse_problem, parse_spec};
pub use semantics::{
    apply_action, derivation_closure, eval, for_each_tuple, ground_action, ground_step, is_applicable, validate_plan,
    PlanFailure, PlanVerdict,
};
