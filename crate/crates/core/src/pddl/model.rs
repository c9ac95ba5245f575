use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PredicateKind {
    Base,
    Derived,
    Query,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub arity: usize,
    pub kind: PredicateKind,
}

/// A variable (stored without the leading `?`) or an object constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn ground(&self, binding: &BTreeMap<String, String>) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(v) => binding.get(v).cloned(),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom {
            predicate: self.predicate.clone(),
            args,
        })
    }
}

impl From<&GroundAtom> for Atom {
    fn from(g: &GroundAtom) -> Self {
        Atom {
            predicate: g.predicate.clone(),
            args: g.args.iter().cloned().map(Term::Const).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

/// Precondition, goal and rule-body formulas. `And(vec![])` is true and
/// `Or(vec![])` is false.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn truth() -> Self {
        Formula::And(Vec::new())
    }

    pub fn falsity() -> Self {
        Formula::Or(Vec::new())
    }

    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(predicate, args))
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Replaces free variables according to `binding`.
    pub fn substitute(&self, binding: &BTreeMap<String, String>) -> Formula {
        let term = |t: &Term, bound: &BTreeSet<String>| match t {
            Term::Var(v) if !bound.contains(v) => match binding.get(v) {
                Some(c) => Term::Const(c.clone()),
                None => t.clone(),
            },
            _ => t.clone(),
        };
        fn go(f: &Formula, bound: &mut BTreeSet<String>, term: &dyn Fn(&Term, &BTreeSet<String>) -> Term) -> Formula {
            match f {
                Formula::Atom(a) => Formula::Atom(Atom {
                    predicate: a.predicate.clone(),
                    args: a.args.iter().map(|t| term(t, bound)).collect(),
                }),
                Formula::Eq(a, b) => Formula::Eq(term(a, bound), term(b, bound)),
                Formula::Not(g) => Formula::not(go(g, bound, term)),
                Formula::And(gs) => Formula::And(gs.iter().map(|g| go(g, bound, term)).collect()),
                Formula::Or(gs) => Formula::Or(gs.iter().map(|g| go(g, bound, term)).collect()),
                Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                    let added: Vec<String> = vs.iter().filter(|v| bound.insert((*v).clone())).cloned().collect();
                    let inner = go(g, bound, term);
                    for v in added {
                        bound.remove(&v);
                    }
                    if matches!(f, Formula::Exists(..)) {
                        Formula::Exists(vs.clone(), Box::new(inner))
                    } else {
                        Formula::Forall(vs.clone(), Box::new(inner))
                    }
                }
            }
        }
        go(self, &mut BTreeSet::new(), &term)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let mut term = |t: &Term, bound: &Vec<String>| {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            };
            match f {
                Formula::Atom(a) => a.args.iter().for_each(|t| term(t, bound)),
                Formula::Eq(a, b) => {
                    term(a, bound);
                    term(b, bound);
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, bound, out)),
                Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                    let n = bound.len();
                    bound.extend(vs.iter().cloned());
                    go(g, bound, out);
                    bound.truncate(n);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Calls `visit(atom, positive)` for every atom, with its polarity.
    pub fn visit_atoms<'a>(&'a self, visit: &mut impl FnMut(&'a Atom, bool)) {
        fn go<'a>(f: &'a Formula, positive: bool, visit: &mut impl FnMut(&'a Atom, bool)) {
            match f {
                Formula::Atom(a) => visit(a, positive),
                Formula::Eq(..) => {}
                Formula::Not(g) => go(g, !positive, visit),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, positive, visit)),
                Formula::Exists(_, g) | Formula::Forall(_, g) => go(g, positive, visit),
            }
        }
        go(self, true, visit)
    }

    /// Object constants mentioned anywhere in the formula.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(f: &Formula, out: &mut BTreeSet<String>) {
            let mut term = |t: &Term| {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            };
            match f {
                Formula::Atom(a) => a.args.iter().for_each(&mut term),
                Formula::Eq(a, b) => {
                    term(a);
                    term(b);
                }
                Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => go(g, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, out)),
            }
        }
        go(self, &mut out);
        out
    }
}

fn write_quantified(f: &mut fmt::Formatter<'_>, head: &str, vars: &[String], body: &Formula) -> fmt::Result {
    write!(f, "({head} (")?;
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "?{v}")?;
    }
    write!(f, ") {body})")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) | Formula::Or(gs) => {
                f.write_str(if matches!(self, Formula::And(_)) { "(and" } else { "(or" })?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                f.write_str(")")
            }
            Formula::Exists(vs, g) => write_quantified(f, "exists", vs, g),
            Formula::Forall(vs, g) => write_quantified(f, "forall", vs, g),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<String>,
    pub pre: Formula,
    pub add: Vec<Atom>,
    pub del: Vec<Atom>,
}

/// `head ← body`. The head's arguments are distinct variables, or object
/// constants for rules that are already ground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationRule {
    pub head: Atom,
    pub body: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub requirements: Vec<String>,
    pub constants: Vec<String>,
    pub predicates: Vec<PredicateDecl>,
    pub actions: Vec<ActionSchema>,
    pub rules: Vec<DerivationRule>,
}

impl Domain {
    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: &[&str]) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

pub type State = BTreeSet<GroundAtom>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub domain_name: String,
    pub objects: Vec<String>,
    pub init: State,
    pub goal: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanningSpec {
    pub domain: Domain,
    pub problem: Problem,
}

impl PlanningSpec {
    /// All objects: domain constants and problem objects, sorted.
    pub fn objects(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.domain.constants.iter().chain(&self.problem.objects).collect();
        set.into_iter().cloned().collect()
    }
}

/// A schema instantiated by a total binding of its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAction {
    pub name: String,
    pub args: Vec<String>,
    pub pre: Formula,
    pub add: Vec<GroundAtom>,
    pub del: Vec<GroundAtom>,
}

impl GroundAction {
    pub fn step(&self) -> PlanStep {
        PlanStep {
            action: self.name.clone(),
            args: self.args.clone(),
        }
    }
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

/// A plan step as written in a plan file: action name and arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanStep {
    pub action: String,
    pub args: Vec<String>,
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.action)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

pub type Plan = Vec<PlanStep>;
