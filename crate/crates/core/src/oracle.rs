//! Direct semantics of ontology-mediated specifications: ontology-enhanced
//! states, their compatibility conditions, action application and plan
//! validation, all computed with the reasoner in the loop.
//!
//! This is deliberately the plain reading of the definitions. It is slow and
//! serves as the reference that compiled specifications are checked
//! against.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use omplan_dl::{Axiom, Entailment, Reasoner, ReasonerError};

use crate::interface::OmSpec;
use crate::pddl::{
    apply_action, derivation_closure, eval, for_each_tuple, ground_action, ground_step, GroundAction, GroundAtom,
    Plan, PlanFailure, PlanVerdict, State,
};

/// `q = ⟨P_q, O_q⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmState {
    /// Planner perspective.
    pub atoms: State,
    /// Ontology perspective, sorted.
    pub axioms: Vec<Axiom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    /// Only declared predicates over known objects.
    Vocabulary,
    /// The static ontology is included.
    StaticOntology,
    /// Mapped atoms of the closure are present as axioms.
    MappedAtoms,
    /// No other axioms.
    NoExtraAxioms,
    /// Query atoms are exactly the entailed ones.
    QueryAtoms,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compatibility {
    Compatible,
    Violated { condition: Condition, witness: String },
}

impl fmt::Display for Compatibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Compatibility::Compatible => f.write_str("compatible"),
            Compatibility::Violated { condition, witness } => write!(f, "violates {condition:?}: {witness}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error("action {0} is not applicable")]
    NotApplicable(String),
    #[error("state limit of {0} exceeded")]
    StateLimit(usize),
}

/// The reasoner-in-the-loop executor for one specification.
pub struct Oracle<'a> {
    om: &'a OmSpec,
    reasoner: Reasoner,
    objects: Vec<String>,
    /// Each guarded query atom with the entailments that make it true.
    guarded: Vec<(GroundAtom, Vec<Entailment>)>,
}

impl<'a> Oracle<'a> {
    pub fn new(om: &'a OmSpec) -> Result<Self, ReasonerError> {
        Self::with_reasoner(om, Reasoner::default())
    }

    pub fn with_reasoner(om: &'a OmSpec, reasoner: Reasoner) -> Result<Self, ReasonerError> {
        let mut guarded = Vec::new();
        for s in om.queries() {
            for ga in om.guarded_assignments(s, &reasoner)? {
                let targets = s
                    .instantiate(&ga.theta)
                    .iter()
                    .map(|ax| Entailment::from_axiom(ax).expect("query templates are assertions"))
                    .collect();
                let atom = GroundAtom {
                    predicate: s.predicate.clone(),
                    args: ga.objects,
                };
                guarded.push((atom, targets));
            }
        }
        Ok(Self {
            om,
            reasoner,
            objects: om.planning().objects(),
            guarded,
        })
    }

    pub fn reasoner(&self) -> &Reasoner {
        &self.reasoner
    }

    fn closure(&self, atoms: &State) -> State {
        derivation_closure(atoms, &self.om.planning().domain.rules, &self.objects)
    }

    fn mapped(&self, closed: &State) -> Vec<Axiom> {
        let mut axioms: BTreeSet<Axiom> = self.om.ontology().axioms().iter().cloned().collect();
        axioms.extend(closed.iter().filter_map(|g| self.om.fluents().map_atom(g)));
        axioms.into_iter().collect()
    }

    /// Query atoms that `axioms` entails, over the guarded assignments.
    fn entailed_queries(&self, axioms: &[Axiom]) -> Result<State, ReasonerError> {
        let consistent = self.reasoner.is_consistent_axioms(axioms)?;
        let mut out = State::new();
        for (atom, targets) in &self.guarded {
            let mut holds = true;
            if consistent {
                for e in targets {
                    if !self.reasoner.entails_axioms(axioms, e)? {
                        holds = false;
                        break;
                    }
                }
            }
            if holds {
                out.insert(atom.clone());
            }
        }
        Ok(out)
    }

    /// `ext(P)`: drop query atoms, map the closure of the rest into the
    /// ontology, then add every query atom the result entails.
    pub fn extend(&self, atoms: &State) -> Result<OmState, ReasonerError> {
        let base: State = atoms.iter().filter(|g| !self.om.is_query(&g.predicate)).cloned().collect();
        let axioms = self.mapped(&self.closure(&base));
        let mut atoms = base;
        atoms.extend(self.entailed_queries(&axioms)?);
        Ok(OmState { atoms, axioms })
    }

    /// Whether the ontology perspective of `q` is inconsistent.
    pub fn is_inconsistent(&self, q: &OmState) -> Result<bool, ReasonerError> {
        Ok(!self.reasoner.is_consistent_axioms(&q.axioms)?)
    }

    pub fn check_compatibility(&self, q: &OmState) -> Result<Compatibility, ReasonerError> {
        let violated = |condition, witness: String| Ok(Compatibility::Violated { condition, witness });
        let domain = &self.om.planning().domain;
        for g in &q.atoms {
            let declared = domain.predicate(&g.predicate).is_some_and(|p| p.arity == g.args.len());
            if !declared || g.args.iter().any(|a| self.objects.binary_search(a).is_err()) {
                return violated(Condition::Vocabulary, g.to_string());
            }
        }
        let have: BTreeSet<&Axiom> = q.axioms.iter().collect();
        if let Some(ax) = self.om.ontology().axioms().iter().find(|a| !have.contains(a)) {
            return violated(Condition::StaticOntology, ax.to_string());
        }
        let required = self.mapped(&self.closure(&q.atoms));
        let required_set: BTreeSet<&Axiom> = required.iter().collect();
        if let Some(ax) = required.iter().find(|a| !have.contains(a)) {
            return violated(Condition::MappedAtoms, ax.to_string());
        }
        if let Some(ax) = q.axioms.iter().find(|a| !required_set.contains(a)) {
            return violated(Condition::NoExtraAxioms, ax.to_string());
        }
        let expected = self.entailed_queries(&q.axioms)?;
        let present: State = q.atoms.iter().filter(|g| self.om.is_query(&g.predicate)).cloned().collect();
        if let Some(g) = expected.symmetric_difference(&present).next() {
            let what = if expected.contains(g) { "missing" } else { "not entailed" };
            return violated(Condition::QueryAtoms, format!("{g} {what}"));
        }
        Ok(Compatibility::Compatible)
    }

    /// `𝒟(P_q) ⊨ pre`.
    pub fn is_applicable(&self, q: &OmState, action: &GroundAction) -> bool {
        let closed = self.closure(&q.atoms);
        eval(&action.pre, &mut BTreeMap::new(), &self.objects, &|g| closed.contains(g))
    }

    /// `q(a) = ext(P_q(a))`.
    pub fn apply(&self, q: &OmState, action: &GroundAction) -> Result<OmState, OracleError> {
        if !self.is_applicable(q, action) {
            return Err(OracleError::NotApplicable(action.to_string()));
        }
        Ok(self.extend(&apply_action(action, &q.atoms))?)
    }

    pub fn initial(&self) -> Result<OmState, ReasonerError> {
        self.extend(&self.om.planning().problem.init)
    }

    pub fn goal_holds(&self, q: &OmState) -> bool {
        let closed = self.closure(&q.atoms);
        eval(&self.om.planning().problem.goal, &mut BTreeMap::new(), &self.objects, &|g| {
            closed.contains(g)
        })
    }

    /// Replays a plan on ontology-enhanced states. States whose ontology
    /// perspective is inconsistent are allowed along the way.
    pub fn validate_plan(&self, plan: &[crate::pddl::PlanStep]) -> Result<PlanVerdict, ReasonerError> {
        let spec = self.om.planning();
        let mut q = self.initial()?;
        for (i, step) in plan.iter().enumerate() {
            let a = match ground_step(spec, step) {
                Ok(a) => a,
                Err(reason) => return Ok(PlanVerdict::Invalid { step: i, reason }),
            };
            if !self.is_applicable(&q, &a) {
                return Ok(PlanVerdict::Invalid {
                    step: i,
                    reason: PlanFailure::NotApplicable,
                });
            }
            q = self.extend(&apply_action(&a, &q.atoms))?;
        }
        Ok(if self.goal_holds(&q) {
            PlanVerdict::Valid
        } else {
            PlanVerdict::Invalid {
                step: plan.len(),
                reason: PlanFailure::GoalNotSatisfied,
            }
        })
    }

    /// Every ground action over the objects, in (name, arguments) order.
    pub fn ground_actions(&self) -> Vec<GroundAction> {
        let mut out = Vec::new();
        let mut schemas: Vec<_> = self.om.planning().domain.actions.iter().collect();
        schemas.sort_by(|a, b| a.name.cmp(&b.name));
        for schema in schemas {
            for_each_tuple(&self.objects, schema.params.len(), &mut |tuple| {
                let binding = schema.params.iter().cloned().zip(tuple.iter().cloned()).collect();
                out.push(ground_action(schema, &binding).expect("binding is total"));
                true
            });
        }
        out
    }

    /// Breadth-first search over ontology-enhanced states: a shortest plan,
    /// `None` if the goal is unreachable, or an error after `max_states`
    /// distinct states.
    pub fn shortest_plan(&self, max_states: usize) -> Result<Option<Plan>, OracleError> {
        let actions = self.ground_actions();
        let start = self.initial()?;
        let mut parent: HashMap<State, Option<(State, usize)>> = HashMap::new();
        parent.insert(start.atoms.clone(), None);
        let mut queue = VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            if self.goal_holds(&q) {
                let mut plan = Vec::new();
                let mut cur = q.atoms;
                while let Some(Some((prev, a))) = parent.get(&cur) {
                    plan.push(actions[*a].step());
                    cur = prev.clone();
                }
                plan.reverse();
                return Ok(Some(plan));
            }
            let closed = self.closure(&q.atoms);
            for (i, a) in actions.iter().enumerate() {
                if !eval(&a.pre, &mut BTreeMap::new(), &self.objects, &|g| closed.contains(g)) {
                    continue;
                }
                let succ = self.extend(&apply_action(a, &q.atoms))?;
                if parent.contains_key(&succ.atoms) {
                    continue;
                }
                if parent.len() >= max_states {
                    return Err(OracleError::StateLimit(max_states));
                }
                parent.insert(succ.atoms.clone(), Some((q.atoms.clone(), i)));
                queue.push_back(succ);
            }
        }
        Ok(None)
    }
}
