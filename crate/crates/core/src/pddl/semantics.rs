//! Reference semantics over explicit atom sets: grounding, derivation
//! closure, applicability, action application and plan replay.
//!
//! This is the straightforward reading of the definitions and is used by the
//! oracle and the tests; the planner has its own grounded, indexed
//! implementation.

use std::collections::BTreeMap;
use std::fmt;

use super::error::PddlError;
use super::model::*;

/// Truth of `f` under `env` with quantifiers ranging over `objects`.
/// `holds` decides (already ground) atoms.
pub fn eval(
    f: &Formula,
    env: &mut BTreeMap<String, String>,
    objects: &[String],
    holds: &dyn Fn(&GroundAtom) -> bool,
) -> bool {
    let value = |t: &Term, env: &BTreeMap<String, String>| -> Option<String> {
        match t {
            Term::Const(c) => Some(c.clone()),
            Term::Var(v) => env.get(v).cloned(),
        }
    };
    match f {
        Formula::Atom(a) => a.ground(env).is_some_and(|g| holds(&g)),
        Formula::Eq(a, b) => value(a, env) == value(b, env),
        Formula::Not(g) => !eval(g, env, objects, holds),
        Formula::And(gs) => gs.iter().all(|g| eval(g, env, objects, holds)),
        Formula::Or(gs) => gs.iter().any(|g| eval(g, env, objects, holds)),
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let exists = matches!(f, Formula::Exists(..));
            let saved: Vec<Option<String>> = vs.iter().map(|v| env.get(v).cloned()).collect();
            let mut result = !exists;
            for_each_tuple(objects, vs.len(), &mut |tuple| {
                for (v, o) in vs.iter().zip(tuple) {
                    env.insert(v.clone(), o.clone());
                }
                let r = eval(g, env, objects, holds);
                if r == exists {
                    result = exists;
                    false
                } else {
                    true
                }
            });
            for (v, old) in vs.iter().zip(saved) {
                match old {
                    Some(o) => env.insert(v.clone(), o),
                    None => env.remove(v),
                };
            }
            result
        }
    }
}

/// Calls `visit` for every tuple in `objects^n` in lexicographic order until
/// it returns `false`.
pub fn for_each_tuple(objects: &[String], n: usize, visit: &mut dyn FnMut(&[String]) -> bool) {
    fn go(objects: &[String], n: usize, cur: &mut Vec<String>, visit: &mut dyn FnMut(&[String]) -> bool) -> bool {
        if cur.len() == n {
            return visit(cur);
        }
        for o in objects {
            cur.push(o.clone());
            let cont = go(objects, n, cur, visit);
            cur.pop();
            if !cont {
                return false;
            }
        }
        true
    }
    go(objects, n, &mut Vec::with_capacity(n), visit);
}

pub fn ground_action(schema: &ActionSchema, binding: &BTreeMap<String, String>) -> Result<GroundAction, PddlError> {
    let args = schema
        .params
        .iter()
        .map(|v| binding.get(v).cloned().ok_or_else(|| PddlError::PartialBinding { var: v.clone() }))
        .collect::<Result<Vec<_>, _>>()?;
    let ground = |atoms: &[Atom]| -> Vec<GroundAtom> {
        atoms
            .iter()
            .map(|a| a.ground(binding).expect("effect variables are parameters"))
            .collect()
    };
    Ok(GroundAction {
        name: schema.name.clone(),
        args,
        pre: schema.pre.substitute(binding),
        add: ground(&schema.add),
        del: ground(&schema.del),
    })
}

/// Grounds a plan step against the domain, checking the action name, arity
/// and objects.
pub fn ground_step(spec: &PlanningSpec, step: &PlanStep) -> Result<GroundAction, PlanFailure> {
    let schema = spec
        .domain
        .action(&step.action)
        .ok_or_else(|| PlanFailure::UnknownAction(step.action.clone()))?;
    if schema.params.len() != step.args.len() {
        return Err(PlanFailure::WrongArity {
            expected: schema.params.len(),
            found: step.args.len(),
        });
    }
    let objects = spec.objects();
    if let Some(bad) = step.args.iter().find(|a| !objects.contains(a)) {
        return Err(PlanFailure::UnknownObject(bad.clone()));
    }
    let binding = schema.params.iter().cloned().zip(step.args.iter().cloned()).collect();
    Ok(ground_action(schema, &binding).expect("binding is total"))
}

/// `𝒟(s)`: the least superset of `s` closed under the rules.
pub fn derivation_closure(s: &State, rules: &[DerivationRule], objects: &[String]) -> State {
    let mut cur = s.clone();
    loop {
        let mut new = Vec::new();
        for r in rules {
            let vars: Vec<String> = {
                let mut seen = Vec::new();
                for t in &r.head.args {
                    if let Term::Var(v) = t {
                        if !seen.contains(v) {
                            seen.push(v.clone());
                        }
                    }
                }
                seen
            };
            for_each_tuple(objects, vars.len(), &mut |tuple| {
                let mut env: BTreeMap<String, String> = vars.iter().cloned().zip(tuple.iter().cloned()).collect();
                let head = r.head.ground(&env).expect("head variables are bound");
                if !cur.contains(&head) && eval(&r.body, &mut env, objects, &|a| cur.contains(a)) {
                    new.push(head);
                }
                true
            });
        }
        if new.is_empty() {
            return cur;
        }
        cur.extend(new);
    }
}

/// Whether `pre` holds in `𝒟(s)` (closed world).
pub fn is_applicable(a: &GroundAction, s: &State, rules: &[DerivationRule], objects: &[String]) -> bool {
    let closed = derivation_closure(s, rules, objects);
    eval(&a.pre, &mut BTreeMap::new(), objects, &|g| closed.contains(g))
}

/// `(s \ del) ∪ add`.
pub fn apply_action(a: &GroundAction, s: &State) -> State {
    let mut out = s.clone();
    for d in &a.del {
        out.remove(d);
    }
    out.extend(a.add.iter().cloned());
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanFailure {
    UnknownAction(String),
    WrongArity { expected: usize, found: usize },
    UnknownObject(String),
    NotApplicable,
    GoalNotSatisfied,
}

impl fmt::Display for PlanFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanFailure::UnknownAction(a) => write!(f, "unknown action `{a}`"),
            PlanFailure::WrongArity { expected, found } => {
                write!(f, "expected {expected} arguments, found {found}")
            }
            PlanFailure::UnknownObject(o) => write!(f, "unknown object `{o}`"),
            PlanFailure::NotApplicable => f.write_str("precondition does not hold"),
            PlanFailure::GoalNotSatisfied => f.write_str("goal does not hold in the final state"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanVerdict {
    Valid,
    /// `step` is the index of the failing action, or the plan length for a
    /// goal failure.
    Invalid { step: usize, reason: PlanFailure },
}

impl PlanVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PlanVerdict::Valid)
    }
}

pub fn validate_plan(spec: &PlanningSpec, plan: &[PlanStep]) -> PlanVerdict {
    let objects = spec.objects();
    let rules = &spec.domain.rules;
    let mut s = spec.problem.init.clone();
    for (i, step) in plan.iter().enumerate() {
        let a = match ground_step(spec, step) {
            Ok(a) => a,
            Err(reason) => return PlanVerdict::Invalid { step: i, reason },
        };
        if !is_applicable(&a, &s, rules, &objects) {
            return PlanVerdict::Invalid {
                step: i,
                reason: PlanFailure::NotApplicable,
            };
        }
        s = apply_action(&a, &s);
    }
    let closed = derivation_closure(&s, rules, &objects);
    if eval(&spec.problem.goal, &mut BTreeMap::new(), &objects, &|g| closed.contains(g)) {
        PlanVerdict::Valid
    } else {
        PlanVerdict::Invalid {
            step: plan.len(),
            reason: PlanFailure::GoalNotSatisfied,
        }
    }
}
