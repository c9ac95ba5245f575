//! Compilation of an ontology-mediated specification into plain PDDL with
//! derivation rules.
//!
//! The fluent set `𝐅` is the image of every ground atom over mapped
//! predicates and objects. From `Just_⊥` we build
//!
//! ```text
//! inconsistent ← ⋁_{J ∈ Just_⊥} ⋀ F⁻(J)
//! ```
//!
//! and for every query specification `S` and every legal assignment `θ`
//! whose individuals all have planning names
//!
//! ```text
//! p_S(F⁻(θ(x₁)), …) ← inconsistent ∨ ⋀_{α ∈ θ(Q_S)} ⋁_{J ∈ Just_α} ⋀ F⁻(J)
//! ```
//!
//! With a single query axiom the inner disjunction is spliced into the outer
//! one, which gives the rule its flat DNF shape. The lifted form instead
//! emits one rule per query predicate with equality guards `?xᵢ = c`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use omplan_dl::{Axiom, Entailment, Reasoner, ReasonerConfig, ReasonerError};
use serde::Serialize;

use crate::interface::{FluentInterface, OmSpec};
use crate::justify::{Justification, Justifier, JustifyConfig, JustifyError};
use crate::pddl::{
    check_spec, Atom, DerivationRule, Formula, GroundAtom, PddlError, PlanningSpec, PredicateDecl, PredicateKind, Term,
};

pub const INCONSISTENT: &str = "inconsistent";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    /// Conjoin `(not (inconsistent))` to every action precondition.
    pub block_inconsistent: bool,
    /// Remove subsumed disjuncts and disjuncts that already imply
    /// `inconsistent`.
    pub simplify: bool,
    /// One variable-headed rule per query predicate with equality guards
    /// instead of one ground rule per assignment.
    pub lifted: bool,
    /// Threads for justification search.
    pub jobs: usize,
    pub justify: JustifyConfig,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            block_inconsistent: false,
            simplify: false,
            lifted: false,
            jobs: 1,
            justify: JustifyConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Justify(#[from] JustifyError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error("the domain already declares a predicate named `{name}`")]
    NameClash { name: String },
    #[error("compiled specification is not well-formed: {0}")]
    Invalid(#[from] PddlError),
}

/// Counters describing one compilation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CompileReport {
    pub fluents: usize,
    pub inconsistency_justifications: usize,
    pub query_axioms: usize,
    pub query_justifications: usize,
    pub guarded_assignments: usize,
    pub rules: usize,
    pub entailment_queries: u64,
    pub reasoner_calls: u64,
    pub hst_nodes: u64,
    pub wall_time_ms: u128,
}

impl CompileReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// The justifications behind one ground query atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryExplanation {
    pub atom: GroundAtom,
    /// Each instantiated query axiom with its `Just_α`.
    pub axioms: Vec<(Axiom, Vec<Justification>)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Explanation {
    pub just_bottom: Vec<Justification>,
    pub queries: Vec<QueryExplanation>,
}

#[derive(Debug, Clone)]
pub struct CompiledSpec {
    pub spec: PlanningSpec,
    pub query_predicates: Vec<String>,
    pub explanation: Explanation,
    pub report: CompileReport,
}

fn atom_of(f: &FluentInterface, axiom: &Axiom) -> Formula {
    let g = f.unmap_axiom(axiom).expect("every fluent has a planning preimage");
    Formula::Atom(Atom::from(&g))
}

fn conjunction(f: &FluentInterface, j: &Justification) -> Formula {
    Formula::And(j.iter().map(|a| atom_of(f, a)).collect())
}

fn inconsistent_atom() -> Formula {
    Formula::atom(INCONSISTENT, vec![])
}

/// Positive DNF as a list of literal sets.
type Dnf = Vec<BTreeSet<Formula>>;

fn minimise(mut dnf: Dnf, bottom: &Dnf) -> Dnf {
    dnf.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    dnf.dedup();
    let mut out: Dnf = Vec::new();
    for d in dnf {
        if out.iter().chain(bottom).any(|k| k.is_subset(&d)) {
            continue;
        }
        out.push(d);
    }
    out
}

/// `⋀_α ⋁_{J ∈ Just_α} ⋀ F⁻(J)` as a list of disjuncts.
fn assignment_core(f: &FluentInterface, per_axiom: &[&Vec<Justification>], simplify: bool, bottom: &Dnf) -> Vec<Formula> {
    if simplify {
        let mut dnf: Dnf = vec![BTreeSet::new()];
        for js in per_axiom {
            let mut next = Dnf::new();
            for d in &dnf {
                for j in js.iter() {
                    let mut e = d.clone();
                    e.extend(j.iter().map(|a| atom_of(f, a)));
                    next.push(e);
                }
            }
            dnf = minimise(next, bottom);
        }
        return dnf.into_iter().map(|d| Formula::And(d.into_iter().collect())).collect();
    }
    match per_axiom {
        [js] => js.iter().map(|j| conjunction(f, j)).collect(),
        _ => vec![Formula::And(
            per_axiom
                .iter()
                .map(|js| Formula::Or(js.iter().map(|j| conjunction(f, j)).collect()))
                .collect(),
        )],
    }
}

fn add_requirement(reqs: &mut Vec<String>, r: &str) {
    if !reqs.iter().any(|x| x == r) {
        reqs.push(r.to_string());
    }
}

pub fn compile(om: &OmSpec, opts: &CompileOptions) -> Result<CompiledSpec, CompileError> {
    let start = Instant::now();
    let planning = om.planning();
    if planning.domain.predicate(INCONSISTENT).is_some() {
        return Err(CompileError::NameClash {
            name: INCONSISTENT.to_string(),
        });
    }
    let f = om.fluents();
    let instances = Reasoner::new(ReasonerConfig {
        memoize: true,
        ..opts.justify.reasoner
    });
    let justifier = Justifier::new(om.ontology().axioms().to_vec(), f.fluents(), opts.justify);
    let just_bottom = justifier.just_bottom()?;

    // Guarded assignments and the distinct query axioms they instantiate.
    let mut per_query = Vec::new();
    let mut targets: Vec<Entailment> = Vec::new();
    let mut target_index: BTreeMap<Entailment, usize> = BTreeMap::new();
    for s in om.queries() {
        let mut rows = Vec::new();
        for ga in om.guarded_assignments(s, &instances)? {
            let axioms = s.instantiate(&ga.theta);
            let mut idx = Vec::new();
            for ax in &axioms {
                let e = Entailment::from_axiom(ax).expect("query templates are assertions");
                let i = *target_index.entry(e.clone()).or_insert_with(|| {
                    targets.push(e);
                    targets.len() - 1
                });
                idx.push(i);
            }
            rows.push((ga, axioms, idx));
        }
        per_query.push((s, rows));
    }
    let just_alpha = justifier.just_alpha_many(&targets, opts.jobs.max(1))?;

    let bottom_dnf: Dnf = just_bottom
        .iter()
        .map(|j| j.iter().map(|a| atom_of(f, a)).collect())
        .collect();

    let mut spec = planning.clone();
    let domain = &mut spec.domain;
    let mut rules = Vec::new();
    rules.push(DerivationRule {
        head: Atom::new(INCONSISTENT, vec![]),
        body: Formula::Or(just_bottom.iter().map(|j| conjunction(f, j)).collect()),
    });

    let mut explanation = Explanation {
        just_bottom: just_bottom.clone(),
        queries: Vec::new(),
    };
    let mut report = CompileReport {
        fluents: f.fluents().len(),
        inconsistency_justifications: just_bottom.len(),
        query_axioms: targets.len(),
        query_justifications: just_alpha.iter().map(Vec::len).sum(),
        ..CompileReport::default()
    };
    for (s, rows) in &per_query {
        let vars: Vec<Term> = s.vars.iter().map(Term::var).collect();
        let mut lifted_disjuncts = vec![inconsistent_atom()];
        for (ga, axioms, idx) in rows {
            report.guarded_assignments += 1;
            let per_axiom: Vec<&Vec<Justification>> = idx.iter().map(|&i| &just_alpha[i]).collect();
            let core = assignment_core(f, &per_axiom, opts.simplify, &bottom_dnf);
            explanation.queries.push(QueryExplanation {
                atom: GroundAtom {
                    predicate: s.predicate.clone(),
                    args: ga.objects.clone(),
                },
                axioms: axioms.iter().cloned().zip(per_axiom.iter().map(|js| (*js).clone())).collect(),
            });
            if opts.lifted {
                let mut conj: Vec<Formula> = s
                    .vars
                    .iter()
                    .zip(&ga.objects)
                    .map(|(v, o)| Formula::Eq(Term::var(v), Term::constant(o)))
                    .collect();
                conj.push(Formula::Or(core));
                lifted_disjuncts.push(Formula::And(conj));
            } else {
                let mut body = vec![inconsistent_atom()];
                body.extend(core);
                rules.push(DerivationRule {
                    head: Atom::new(s.predicate.clone(), ga.objects.iter().map(Term::constant).collect()),
                    body: Formula::Or(body),
                });
            }
        }
        if opts.lifted {
            rules.push(DerivationRule {
                head: Atom::new(s.predicate.clone(), vars),
                body: Formula::Or(lifted_disjuncts),
            });
        } else if rows.is_empty() {
            // Keeps the predicate derived (and false) after a round trip.
            rules.push(DerivationRule {
                head: Atom::new(s.predicate.clone(), vars),
                body: Formula::falsity(),
            });
        }
    }
    report.rules = rules.len();

    for p in domain.predicates.iter_mut() {
        if p.kind == PredicateKind::Query {
            p.kind = PredicateKind::Derived;
        }
    }
    domain.predicates.push(PredicateDecl {
        name: INCONSISTENT.to_string(),
        arity: 0,
        kind: PredicateKind::Derived,
    });
    if opts.block_inconsistent {
        for a in domain.actions.iter_mut() {
            let guard = Formula::not(inconsistent_atom());
            match &mut a.pre {
                Formula::And(gs) => gs.push(guard),
                other => *other = Formula::And(vec![other.clone(), guard]),
            }
        }
    }

    // Objects named in rules must be domain constants.
    let mut used = BTreeSet::new();
    for r in &rules {
        used.extend(r.body.constants());
        used.extend(r.head.args.iter().filter_map(|t| match t {
            Term::Const(c) => Some(c.clone()),
            Term::Var(_) => None,
        }));
    }
    for c in used {
        if !domain.constants.contains(&c) {
            domain.constants.push(c.clone());
            spec.problem.objects.retain(|o| *o != c);
        }
    }
    domain.rules.extend(rules);

    let reqs = &mut domain.requirements;
    add_requirement(reqs, ":derived-predicates");
    add_requirement(reqs, ":disjunctive-preconditions");
    if opts.block_inconsistent {
        add_requirement(reqs, ":negative-preconditions");
    }
    if opts.lifted {
        add_requirement(reqs, ":equality");
    }

    // Query atoms in the initial state are recomputed, never stored.
    let queries: Vec<String> = om.queries().iter().map(|q| q.predicate.clone()).collect();
    spec.problem.init.retain(|g| !queries.contains(&g.predicate));

    check_spec(&spec)?;
    let stats = justifier.stats();
    report.entailment_queries = stats.queries;
    report.reasoner_calls = stats.reasoner_calls + instances.calls();
    report.hst_nodes = stats.hst_nodes;
    report.wall_time_ms = start.elapsed().as_millis();
    Ok(CompiledSpec {
        spec,
        query_predicates: queries,
        explanation,
        report,
    })
}
