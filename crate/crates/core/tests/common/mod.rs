//! Helpers shared by the integration tests.

#![allow(dead_code)]

pub mod reasoner_cases;

use std::collections::{BTreeMap, HashSet, VecDeque};

use omplan_core::pddl::{apply_action, derivation_closure, eval, for_each_tuple, ground_action, GroundAction, PlanningSpec, State};

/// Every ground action of `spec`, with no pruning.
pub fn all_ground_actions(spec: &PlanningSpec) -> Vec<GroundAction> {
    let objects = spec.objects();
    let mut out = Vec::new();
    for schema in &spec.domain.actions {
        for_each_tuple(&objects, schema.params.len(), &mut |tuple| {
            let binding = schema.params.iter().cloned().zip(tuple.iter().cloned()).collect();
            out.push(ground_action(schema, &binding).expect("binding is total"));
            true
        });
    }
    out
}

pub enum Bfs {
    Length(usize),
    Unreachable,
    TooLarge,
}

/// Shortest plan length by plain breadth-first search over sets of atoms,
/// evaluated directly on the PDDL semantics.
pub fn bfs_optimum(spec: &PlanningSpec, max_states: usize) -> Bfs {
    let objects = spec.objects();
    let rules = &spec.domain.rules;
    let actions = all_ground_actions(spec);
    let start = spec.problem.init.clone();
    let mut seen: HashSet<State> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((s, depth)) = queue.pop_front() {
        let closed = derivation_closure(&s, rules, &objects);
        let holds = |g: &_| closed.contains(g);
        if eval(&spec.problem.goal, &mut BTreeMap::new(), &objects, &holds) {
            return Bfs::Length(depth);
        }
        for a in &actions {
            if !eval(&a.pre, &mut BTreeMap::new(), &objects, &holds) {
                continue;
            }
            let next = apply_action(a, &s);
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= max_states {
                return Bfs::TooLarge;
            }
            seen.insert(next.clone());
            queue.push_back((next, depth + 1));
        }
    }
    Bfs::Unreachable
}
