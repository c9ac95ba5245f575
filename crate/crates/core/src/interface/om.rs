use std::collections::{BTreeMap, BTreeSet};

use omplan_dl::{parse_ontology, Ontology, Reasoner, ReasonerError};

use super::{parse_query_interface, Assignment, FluentInterface, InterfaceError, QuerySpec};
use crate::pddl::{parse_spec, PddlError, PlanningSpec, PredicateKind};

/// An ontology-mediated planning specification: the PDDL part, the static
/// ontology, the fluent interface and the query specifications.
///
/// Construction validates the interface against the PDDL part and marks the
/// query predicates with [`PredicateKind::Query`].
#[derive(Debug, Clone)]
pub struct OmSpec {
    planning: PlanningSpec,
    ontology: Ontology,
    fluents: FluentInterface,
    queries: Vec<QuerySpec>,
}

/// A legal assignment that passes the `F⁻` guard, together with the
/// planning objects it names (in variable order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedAssignment {
    pub theta: Assignment,
    pub objects: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("PDDL: {0}")]
    Pddl(#[from] PddlError),
    #[error("ontology: {0}")]
    Ontology(#[from] omplan_dl::ParseError),
    #[error("interface: {0}")]
    Interface(#[from] InterfaceError),
}

impl OmSpec {
    pub fn new(
        mut planning: PlanningSpec,
        ontology: Ontology,
        fluents: FluentInterface,
        queries: Vec<QuerySpec>,
    ) -> Result<Self, InterfaceError> {
        let domain = &mut planning.domain;
        let mut seen = BTreeSet::new();
        for q in &queries {
            if !seen.insert(q.predicate.as_str()) {
                return Err(InterfaceError::DuplicateQuery {
                    predicate: q.predicate.clone(),
                });
            }
            let decl = domain
                .predicates
                .iter_mut()
                .find(|p| p.name == q.predicate)
                .ok_or_else(|| InterfaceError::UndeclaredQueryPredicate {
                    predicate: q.predicate.clone(),
                })?;
            if decl.arity != q.arity() {
                return Err(InterfaceError::QueryArityMismatch {
                    predicate: q.predicate.clone(),
                    declared: decl.arity,
                    variables: q.arity(),
                });
            }
            if decl.kind != PredicateKind::Base {
                return Err(InterfaceError::QueryPredicateIsDerived {
                    predicate: q.predicate.clone(),
                });
            }
            decl.kind = PredicateKind::Query;
            if let Some(a) = domain
                .actions
                .iter()
                .find(|a| a.add.iter().chain(&a.del).any(|e| e.predicate == q.predicate))
            {
                return Err(InterfaceError::QueryPredicateInEffect {
                    predicate: q.predicate.clone(),
                    action: a.name.clone(),
                });
            }
        }
        let objects = planning.objects();
        for (o, _) in fluents.objects() {
            if !objects.iter().any(|x| x == o) {
                return Err(InterfaceError::UnknownMappedObject { object: o.to_string() });
            }
        }
        for (p, arity, _) in fluents.predicates() {
            let decl = planning
                .domain
                .predicate(p)
                .ok_or_else(|| InterfaceError::UnknownMappedPredicate { predicate: p.to_string() })?;
            if decl.arity != arity {
                return Err(InterfaceError::MappedArityMismatch {
                    predicate: p.to_string(),
                    declared: decl.arity,
                    mapped: arity,
                });
            }
            if decl.kind == PredicateKind::Query {
                return Err(InterfaceError::QueryPredicateMapped { predicate: p.to_string() });
            }
        }
        Ok(Self {
            planning,
            ontology,
            fluents,
            queries,
        })
    }

    /// Parses and assembles the five inputs.
    pub fn from_texts(
        domain: &str,
        problem: &str,
        ontology: &str,
        fluents: &str,
        queries: &str,
    ) -> Result<Self, LoadError> {
        let planning = parse_spec(domain, problem)?;
        let ontology = parse_ontology(ontology)?;
        let fluents = FluentInterface::parse(fluents)?;
        let queries = parse_query_interface(queries)?;
        Ok(Self::new(planning, ontology, fluents, queries)?)
    }

    /// Adds pairwise inequality between the individuals of the static
    /// ontology.
    pub fn with_unique_names(mut self) -> Self {
        self.ontology = self.ontology.with_unique_names();
        self
    }

    pub fn planning(&self) -> &PlanningSpec {
        &self.planning
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn fluents(&self) -> &FluentInterface {
        &self.fluents
    }

    pub fn queries(&self) -> &[QuerySpec] {
        &self.queries
    }

    pub fn query(&self, predicate: &str) -> Option<&QuerySpec> {
        self.queries.iter().find(|q| q.predicate == predicate)
    }

    pub fn is_query(&self, predicate: &str) -> bool {
        self.query(predicate).is_some()
    }

    /// `Θ(S, O)` restricted to assignments whose every individual has an
    /// `F⁻` image.
    pub fn guarded_assignments(&self, spec: &QuerySpec, reasoner: &Reasoner) -> Result<Vec<GuardedAssignment>, ReasonerError> {
        Ok(spec
            .legal_assignments(&self.ontology, reasoner)?
            .into_iter()
            .filter_map(|theta| {
                let objects = spec
                    .vars
                    .iter()
                    .map(|v| self.fluents.object_of(&theta[v]).map(str::to_string))
                    .collect::<Option<Vec<_>>>()?;
                Some(GuardedAssignment { theta, objects })
            })
            .collect())
    }

    /// Warnings about inputs whose meaning is ambiguous: mapped derived
    /// predicates whose rules depend on a query predicate (the mapped closure
    /// is then taken over the query-free part of the state).
    pub fn diagnostics(&self) -> Vec<String> {
        let domain = &self.planning.domain;
        let mut deps: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for r in &domain.rules {
            let entry = deps.entry(r.head.predicate.as_str()).or_default();
            r.body.visit_atoms(&mut |a, _| {
                entry.insert(a.predicate.as_str());
            });
        }
        let mut out = Vec::new();
        for (p, _, _) in self.fluents.predicates() {
            if domain.predicate(p).map(|d| d.kind) != Some(PredicateKind::Derived) {
                continue;
            }
            let mut stack = vec![p];
            let mut seen = BTreeSet::new();
            let mut hit = None;
            while let Some(x) = stack.pop() {
                if !seen.insert(x) {
                    continue;
                }
                if self.is_query(x) {
                    hit = Some(x);
                    break;
                }
                stack.extend(deps.get(x).into_iter().flatten().copied());
            }
            if let Some(q) = hit {
                out.push(format!(
                    "mapped derived predicate `{p}` depends on query predicate `{q}`; \
                     its ontology image is computed without query atoms"
                ));
            }
        }
        out
    }
}
