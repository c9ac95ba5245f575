//! Forward state-space search over a grounded specification with derivation
//! rules.
//!
//! Search is A* with a pluggable [`Heuristic`]; the default is blind, which
//! makes it uniform-cost search (breadth-first for unit costs). Ties on `f`
//! are broken first-in first-out and successors are generated in (action
//! name, arguments) order, so results are deterministic.

mod task;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::time::{Duration, Instant};

use serde::Serialize;

pub use task::{grounded_actions, Cond, Task, TaskAction, TaskRule};

use crate::pddl::{Plan, PlanningSpec};

pub trait Heuristic {
    /// A lower bound on the remaining cost from `state`, given its closure.
    fn estimate(&self, task: &Task, state: &[u32]) -> u64;
}

/// `h = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Blind;

impl Heuristic for Blind {
    fn estimate(&self, _: &Task, _: &[u32]) -> u64 {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of stored search nodes; this also bounds memory.
    pub max_nodes: usize,
    pub time_limit: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_nodes: 5_000_000,
            time_limit: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub ground_actions: usize,
    pub ground_rules: usize,
    pub expanded: usize,
    pub generated: usize,
    pub stored: usize,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Nodes,
    Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Plan(Plan),
    /// The whole reachable state space was explored.
    Unsolvable,
    ResourceLimit(Limit),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

struct Node {
    state: Vec<u32>,
    parent: Option<(usize, usize)>,
    g: u64,
}

pub fn solve(spec: &PlanningSpec, limits: &Limits) -> Solution {
    solve_task(&Task::ground(spec), limits, &Blind)
}

pub fn solve_task(task: &Task, limits: &Limits, heuristic: &dyn Heuristic) -> Solution {
    let start = Instant::now();
    let mut stats = SearchStats {
        ground_actions: task.actions.len(),
        ground_rules: task.rules.len(),
        ..SearchStats::default()
    };
    let finish = |outcome, mut stats: SearchStats, nodes: usize| {
        stats.stored = nodes;
        stats.elapsed_ms = start.elapsed().as_millis();
        Solution { outcome, stats }
    };

    let mut nodes = vec![Node {
        state: task.init.clone(),
        parent: None,
        g: 0,
    }];
    let mut best: HashMap<Vec<u32>, u64> = HashMap::from([(task.init.clone(), 0)]);
    let mut open = BinaryHeap::new();
    let mut counter = 0u64;
    open.push(Reverse((heuristic.estimate(task, &task.init), counter, 0usize)));

    while let Some(Reverse((_, _, id))) = open.pop() {
        if best.get(&nodes[id].state).is_some_and(|&g| g < nodes[id].g) {
            continue;
        }
        if limits.time_limit.is_some_and(|t| start.elapsed() > t) {
            return finish(Outcome::ResourceLimit(Limit::Time), stats, nodes.len());
        }
        stats.expanded += 1;
        let truth = task.closure(&nodes[id].state);
        if task.goal.holds(&truth) {
            let mut plan = Vec::new();
            let mut cur = id;
            while let Some((parent, action)) = nodes[cur].parent {
                let a = &task.actions[action];
                plan.push(crate::pddl::PlanStep {
                    action: a.name.clone(),
                    args: a.args.clone(),
                });
                cur = parent;
            }
            plan.reverse();
            return finish(Outcome::Plan(plan), stats, nodes.len());
        }
        let g = nodes[id].g + 1;
        for (ai, a) in task.actions.iter().enumerate() {
            if !a.pre.holds(&truth) {
                continue;
            }
            stats.generated += 1;
            let next = task.apply(a, &nodes[id].state);
            if best.get(&next).is_some_and(|&old| old <= g) {
                continue;
            }
            if nodes.len() >= limits.max_nodes {
                return finish(Outcome::ResourceLimit(Limit::Nodes), stats, nodes.len());
            }
            let h = heuristic.estimate(task, &next);
            best.insert(next.clone(), g);
            nodes.push(Node {
                state: next,
                parent: Some((id, ai)),
                g,
            });
            counter += 1;
            open.push(Reverse((g + h, counter, nodes.len() - 1)));
        }
    }
    finish(Outcome::Unsolvable, stats, nodes.len())
}
