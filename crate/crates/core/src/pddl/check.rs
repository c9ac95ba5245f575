//! Well-formedness checks run after parsing (and on generated specs).

use std::collections::{BTreeMap, BTreeSet};

use super::error::PddlError;
use super::model::*;

fn check_atom(
    a: &Atom,
    predicates: &BTreeMap<&str, &PredicateDecl>,
    objects: &BTreeSet<&str>,
    free: &BTreeSet<String>,
    context: &str,
) -> Result<(), PddlError> {
    let decl = predicates.get(a.predicate.as_str()).ok_or_else(|| PddlError::UnknownPredicate {
        name: a.predicate.clone(),
    })?;
    if decl.arity != a.args.len() {
        return Err(PddlError::ArityMismatch {
            predicate: a.predicate.clone(),
            expected: decl.arity,
            found: a.args.len(),
        });
    }
    for t in &a.args {
        check_term(t, objects, free, context)?;
    }
    Ok(())
}

fn check_term(t: &Term, objects: &BTreeSet<&str>, free: &BTreeSet<String>, context: &str) -> Result<(), PddlError> {
    match t {
        Term::Const(c) if !objects.contains(c.as_str()) => Err(PddlError::UnknownObject { name: c.clone() }),
        Term::Var(v) if !free.contains(v) => Err(PddlError::UnboundVariable {
            var: v.clone(),
            context: context.to_string(),
        }),
        _ => Ok(()),
    }
}

fn check_formula(
    f: &Formula,
    predicates: &BTreeMap<&str, &PredicateDecl>,
    objects: &BTreeSet<&str>,
    free: &mut BTreeSet<String>,
    context: &str,
) -> Result<(), PddlError> {
    match f {
        Formula::Atom(a) => check_atom(a, predicates, objects, free, context),
        Formula::Eq(a, b) => {
            check_term(a, objects, free, context)?;
            check_term(b, objects, free, context)
        }
        Formula::Not(g) => check_formula(g, predicates, objects, free, context),
        Formula::And(gs) | Formula::Or(gs) => gs
            .iter()
            .try_for_each(|g| check_formula(g, predicates, objects, free, context)),
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let added: Vec<String> = vs.iter().filter(|v| free.insert((*v).clone())).cloned().collect();
            let r = check_formula(g, predicates, objects, free, context);
            for v in added {
                free.remove(&v);
            }
            r
        }
    }
}

fn predicate_map(domain: &Domain) -> BTreeMap<&str, &PredicateDecl> {
    domain.predicates.iter().map(|p| (p.name.as_str(), p)).collect()
}

pub(crate) fn check_domain(domain: &Domain) -> Result<(), PddlError> {
    let mut seen = BTreeSet::new();
    for p in &domain.predicates {
        if !seen.insert(p.name.as_str()) {
            return Err(PddlError::DuplicatePredicate { name: p.name.clone() });
        }
    }
    let mut seen = BTreeSet::new();
    for a in &domain.actions {
        if !seen.insert(a.name.as_str()) {
            return Err(PddlError::DuplicateAction { name: a.name.clone() });
        }
    }
    let preds = predicate_map(domain);
    let constants: BTreeSet<&str> = domain.constants.iter().map(String::as_str).collect();

    for a in &domain.actions {
        let context = format!("action `{}`", a.name);
        let mut free: BTreeSet<String> = a.params.iter().cloned().collect();
        check_formula(&a.pre, &preds, &constants, &mut free, &context)?;
        for e in a.add.iter().chain(&a.del) {
            check_atom(e, &preds, &constants, &free, &context)?;
            if preds[e.predicate.as_str()].kind != PredicateKind::Base {
                return Err(PddlError::EffectOnDerivedPredicate {
                    action: a.name.clone(),
                    predicate: e.predicate.clone(),
                });
            }
        }
    }

    for r in &domain.rules {
        let mut head_vars = BTreeSet::new();
        for t in &r.head.args {
            if let Term::Var(v) = t {
                if !head_vars.insert(v.clone()) {
                    return Err(PddlError::MalformedRuleHead {
                        head: r.head.to_string(),
                    });
                }
            }
        }
        let context = format!("rule for `{}`", r.head);
        check_atom(&r.head, &preds, &constants, &head_vars, &context)?;
        check_formula(&r.body, &preds, &constants, &mut head_vars, &context)?;
        let mut negative = None;
        r.body.visit_atoms(&mut |atom, positive| {
            if !positive && negative.is_none() && preds[atom.predicate.as_str()].kind == PredicateKind::Derived {
                negative = Some(atom.predicate.clone());
            }
        });
        if let Some(predicate) = negative {
            return Err(PddlError::NegativeDerivedOccurrence { predicate });
        }
    }
    Ok(())
}

pub(crate) fn check_problem(domain: &Domain, problem: &Problem) -> Result<(), PddlError> {
    let preds = predicate_map(domain);
    let objects: BTreeSet<&str> = domain
        .constants
        .iter()
        .chain(&problem.objects)
        .map(String::as_str)
        .collect();
    let none = BTreeSet::new();
    for g in &problem.init {
        check_atom(&Atom::from(g), &preds, &objects, &none, "the initial state")?;
        if preds[g.predicate.as_str()].kind == PredicateKind::Derived {
            return Err(PddlError::DerivedAtomInInit {
                predicate: g.predicate.clone(),
            });
        }
    }
    check_formula(&problem.goal, &preds, &objects, &mut BTreeSet::new(), "the goal")
}

/// Re-runs all checks on an assembled specification.
pub fn check_spec(spec: &PlanningSpec) -> Result<(), PddlError> {
    check_domain(&spec.domain)?;
    check_problem(&spec.domain, &spec.problem)
}
