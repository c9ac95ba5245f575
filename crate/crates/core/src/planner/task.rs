//! Grounded, indexed form of a planning specification.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::pddl::{for_each_tuple, Formula, GroundAction, GroundAtom, PlanningSpec, PredicateKind, State, Term};

/// A ground formula over interned atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    True,
    False,
    Atom(u32),
    Not(Box<Cond>),
    And(Vec<Cond>),
    Or(Vec<Cond>),
}

impl Cond {
    pub fn holds(&self, truth: &FixedBitSet) -> bool {
        match self {
            Cond::True => true,
            Cond::False => false,
            Cond::Atom(a) => truth.contains(*a as usize),
            Cond::Not(c) => !c.holds(truth),
            Cond::And(cs) => cs.iter().all(|c| c.holds(truth)),
            Cond::Or(cs) => cs.iter().any(|c| c.holds(truth)),
        }
    }

    fn not(c: Cond) -> Cond {
        match c {
            Cond::True => Cond::False,
            Cond::False => Cond::True,
            Cond::Not(inner) => *inner,
            other => Cond::Not(Box::new(other)),
        }
    }

    fn and(cs: Vec<Cond>) -> Cond {
        let mut out = Vec::new();
        for c in cs {
            match c {
                Cond::True => {}
                Cond::False => return Cond::False,
                Cond::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Cond::True,
            1 => out.pop().expect("one element"),
            _ => Cond::And(out),
        }
    }

    fn or(cs: Vec<Cond>) -> Cond {
        let mut out = Vec::new();
        for c in cs {
            match c {
                Cond::False => {}
                Cond::True => return Cond::True,
                Cond::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Cond::False,
            1 => out.pop().expect("one element"),
            _ => Cond::Or(out),
        }
    }

    /// Replaces atoms for which `fixed` gives a value and re-simplifies.
    fn fix(&self, fixed: &dyn Fn(u32) -> Option<bool>) -> Cond {
        match self {
            Cond::True | Cond::False => self.clone(),
            Cond::Atom(a) => match fixed(*a) {
                Some(true) => Cond::True,
                Some(false) => Cond::False,
                None => self.clone(),
            },
            Cond::Not(c) => Cond::not(c.fix(fixed)),
            Cond::And(cs) => Cond::and(cs.iter().map(|c| c.fix(fixed)).collect()),
            Cond::Or(cs) => Cond::or(cs.iter().map(|c| c.fix(fixed)).collect()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TaskAction {
    pub name: String,
    pub args: Vec<String>,
    pub pre: Cond,
    pub add: Vec<u32>,
    pub del: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct TaskRule {
    pub head: u32,
    pub body: Cond,
}

/// A grounded task. Atoms are interned; a state is the sorted list of its
/// true base atoms.
#[derive(Debug, Clone)]
pub struct Task {
    pub atoms: Vec<GroundAtom>,
    pub actions: Vec<TaskAction>,
    /// Ground rules, in dependency-friendly order (as written).
    pub rules: Vec<TaskRule>,
    pub init: Vec<u32>,
    pub goal: Cond,
}

struct Interner {
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, u32>,
}

impl Interner {
    fn id(&mut self, g: GroundAtom) -> u32 {
        if let Some(&i) = self.index.get(&g) {
            return i;
        }
        let i = self.atoms.len() as u32;
        self.atoms.push(g.clone());
        self.index.insert(g, i);
        i
    }
}

fn ground_formula(f: &Formula, env: &mut BTreeMap<String, String>, objects: &[String], atoms: &mut Interner) -> Cond {
    let value = |t: &Term, env: &BTreeMap<String, String>| match t {
        Term::Const(c) => c.clone(),
        Term::Var(v) => env.get(v).cloned().expect("formulas are checked for free variables"),
    };
    match f {
        Formula::Atom(a) => Cond::Atom(atoms.id(a.ground(env).expect("formulas are checked for free variables"))),
        Formula::Eq(a, b) => {
            if value(a, env) == value(b, env) {
                Cond::True
            } else {
                Cond::False
            }
        }
        Formula::Not(g) => Cond::not(ground_formula(g, env, objects, atoms)),
        Formula::And(gs) => Cond::and(gs.iter().map(|g| ground_formula(g, env, objects, atoms)).collect()),
        Formula::Or(gs) => Cond::or(gs.iter().map(|g| ground_formula(g, env, objects, atoms)).collect()),
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let saved: Vec<Option<String>> = vs.iter().map(|v| env.get(v).cloned()).collect();
            let mut parts = Vec::new();
            for_each_tuple(objects, vs.len(), &mut |tuple| {
                for (v, o) in vs.iter().zip(tuple) {
                    env.insert(v.clone(), o.clone());
                }
                parts.push(ground_formula(g, env, objects, atoms));
                true
            });
            for (v, old) in vs.iter().zip(saved) {
                match old {
                    Some(o) => env.insert(v.clone(), o),
                    None => env.remove(v),
                };
            }
            if matches!(f, Formula::Exists(..)) {
                Cond::or(parts)
            } else {
                Cond::and(parts)
            }
        }
    }
}

impl Task {
    /// Grounds every schema and rule over the objects and simplifies with
    /// what is known statically: base atoms outside the delete-relaxed
    /// reachable set are false, initially true atoms that no action deletes
    /// are true, and derived atoms without a satisfiable rule are false.
    /// Actions and rules whose condition becomes false are dropped.
    pub fn ground(spec: &PlanningSpec) -> Task {
        let objects = spec.objects();
        let domain = &spec.domain;
        let mut interner = Interner {
            atoms: Vec::new(),
            index: HashMap::new(),
        };
        let init: BTreeSet<u32> = spec.problem.init.iter().map(|g| interner.id(g.clone())).collect();

        let mut schemas: Vec<_> = domain.actions.iter().collect();
        schemas.sort_by(|a, b| a.name.cmp(&b.name));
        let mut actions = Vec::new();
        for schema in &schemas {
            for_each_tuple(&objects, schema.params.len(), &mut |tuple| {
                let mut env: BTreeMap<String, String> =
                    schema.params.iter().cloned().zip(tuple.iter().cloned()).collect();
                let pre = ground_formula(&schema.pre, &mut env, &objects, &mut interner);
                let mut eff = |atoms: &[crate::pddl::Atom]| -> Vec<u32> {
                    let mut ids: Vec<u32> = atoms
                        .iter()
                        .map(|a| interner.id(a.ground(&env).expect("effect variables are parameters")))
                        .collect();
                    ids.sort_unstable();
                    ids.dedup();
                    ids
                };
                let add = eff(&schema.add);
                let del = eff(&schema.del);
                actions.push(TaskAction {
                    name: schema.name.clone(),
                    args: tuple.to_vec(),
                    pre,
                    add,
                    del,
                });
                true
            });
        }

        let mut rules = Vec::new();
        for r in &domain.rules {
            let vars: Vec<String> = r
                .head
                .args
                .iter()
                .filter_map(|t| match t {
                    Term::Var(v) => Some(v.clone()),
                    Term::Const(_) => None,
                })
                .collect();
            for_each_tuple(&objects, vars.len(), &mut |tuple| {
                let mut env: BTreeMap<String, String> = vars.iter().cloned().zip(tuple.iter().cloned()).collect();
                let head = interner.id(r.head.ground(&env).expect("head variables are bound"));
                let body = ground_formula(&r.body, &mut env, &objects, &mut interner);
                rules.push(TaskRule { head, body });
                true
            });
        }
        let goal = ground_formula(&spec.problem.goal, &mut BTreeMap::new(), &objects, &mut interner);

        let n = interner.atoms.len();
        let atoms = interner.atoms;
        let is_derived: Vec<bool> = atoms
            .iter()
            .map(|g| domain.predicate(&g.predicate).is_some_and(|p| p.kind != PredicateKind::Base))
            .collect();

        // Relaxed reachability: base atoms that some sequence of actions
        // can make true if deletes are ignored. Atoms outside that set are
        // false in every reachable state; initially true atoms that no
        // action deletes are always true.
        let mut deleted = FixedBitSet::with_capacity(n);
        for a in &actions {
            a.del.iter().for_each(|&i| deleted.insert(i as usize));
        }
        let mut reached = FixedBitSet::with_capacity(n);
        init.iter().for_each(|&i| reached.insert(i as usize));
        let mut possible = FixedBitSet::with_capacity(n);
        loop {
            // Derived atoms that may become true: least fixpoint, which is
            // sound because derived atoms occur only positively in bodies.
            loop {
                let fixed = |i: u32| static_value(i as usize, &is_derived, &possible, &reached, &deleted, &init);
                let mut next = possible.clone();
                for r in &rules {
                    if !next.contains(r.head as usize) && r.body.fix(&fixed) != Cond::False {
                        next.insert(r.head as usize);
                    }
                }
                if next == possible {
                    break;
                }
                possible = next;
            }
            let fixed = |i: u32| static_value(i as usize, &is_derived, &possible, &reached, &deleted, &init);
            let mut next = reached.clone();
            for a in &actions {
                if a.add.iter().any(|&i| !next.contains(i as usize)) && a.pre.fix(&fixed) != Cond::False {
                    a.add.iter().for_each(|&i| next.insert(i as usize));
                }
            }
            if next == reached {
                break;
            }
            reached = next;
        }
        let fixed = |i: u32| static_value(i as usize, &is_derived, &possible, &reached, &deleted, &init);
        let rules: Vec<TaskRule> = rules
            .into_iter()
            .map(|r| TaskRule {
                head: r.head,
                body: r.body.fix(&fixed),
            })
            .filter(|r| r.body != Cond::False)
            .collect();
        let actions: Vec<TaskAction> = actions
            .into_iter()
            .map(|a| TaskAction {
                pre: a.pre.fix(&fixed),
                ..a
            })
            .filter(|a| a.pre != Cond::False)
            .collect();
        let goal = goal.fix(&fixed);
        let init = init.into_iter().collect();
        Task {
            atoms,
            actions,
            rules,
            init,
            goal,
        }
    }

    /// `𝒟(s)` as a truth vector over all atoms.
    pub fn closure(&self, state: &[u32]) -> FixedBitSet {
        let mut truth = FixedBitSet::with_capacity(self.atoms.len());
        for &a in state {
            truth.insert(a as usize);
        }
        loop {
            let mut changed = false;
            for r in &self.rules {
                if !truth.contains(r.head as usize) && r.body.holds(&truth) {
                    truth.insert(r.head as usize);
                    changed = true;
                }
            }
            if !changed {
                return truth;
            }
        }
    }

    /// `(s \ del) ∪ add`, kept sorted.
    pub fn apply(&self, action: &TaskAction, state: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = state.iter().copied().filter(|a| action.del.binary_search(a).is_err()).collect();
        out.extend(action.add.iter().copied());
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn state_atoms(&self, state: &[u32]) -> State {
        state.iter().map(|&a| self.atoms[a as usize].clone()).collect()
    }
}

fn static_value(
    i: usize,
    is_derived: &[bool],
    possible: &FixedBitSet,
    reached: &FixedBitSet,
    deleted: &FixedBitSet,
    init: &BTreeSet<u32>,
) -> Option<bool> {
    if is_derived[i] {
        return (!possible.contains(i)).then_some(false);
    }
    if !reached.contains(i) {
        return Some(false);
    }
    (init.contains(&(i as u32)) && !deleted.contains(i)).then_some(true)
}

/// Every ground action that survives static simplification, in (name,
/// arguments) order. Preconditions are the original instantiated formulas.
pub fn grounded_actions(spec: &PlanningSpec) -> Vec<GroundAction> {
    let task = Task::ground(spec);
    task.actions
        .iter()
        .map(|a| {
            let schema = spec.domain.action(&a.name).expect("schema exists");
            let binding = schema.params.iter().cloned().zip(a.args.iter().cloned()).collect();
            crate::pddl::ground_action(schema, &binding).expect("binding is total")
        })
        .collect()
}
