use std::collections::BTreeSet;
use std::fmt;

/// A class expression of the supported fragment.
///
/// `Exactly(n, r, C)` is kept as written for display purposes; the reasoner
/// treats it as `Max(n, r, C) ⊓ Min(n, r, C)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassExpr {
    Named(String),
    Top,
    Bottom,
    Not(Box<ClassExpr>),
    And(Vec<ClassExpr>),
    Or(Vec<ClassExpr>),
    Some(String, Box<ClassExpr>),
    All(String, Box<ClassExpr>),
    Max(u32, String, Box<ClassExpr>),
    Min(u32, String, Box<ClassExpr>),
    Exactly(u32, String, Box<ClassExpr>),
    Nominal(String),
}

impl ClassExpr {
    pub fn named(name: impl Into<String>) -> Self {
        ClassExpr::Named(name.into())
    }

    pub fn not(c: ClassExpr) -> Self {
        ClassExpr::Not(Box::new(c))
    }

    pub fn some(role: impl Into<String>, c: ClassExpr) -> Self {
        ClassExpr::Some(role.into(), Box::new(c))
    }

    pub fn all(role: impl Into<String>, c: ClassExpr) -> Self {
        ClassExpr::All(role.into(), Box::new(c))
    }

    pub fn max(n: u32, role: impl Into<String>, c: ClassExpr) -> Self {
        ClassExpr::Max(n, role.into(), Box::new(c))
    }

    pub fn min(n: u32, role: impl Into<String>, c: ClassExpr) -> Self {
        ClassExpr::Min(n, role.into(), Box::new(c))
    }

    pub fn exactly(n: u32, role: impl Into<String>, c: ClassExpr) -> Self {
        ClassExpr::Exactly(n, role.into(), Box::new(c))
    }

    pub fn nominal(ind: impl Into<String>) -> Self {
        ClassExpr::Nominal(ind.into())
    }

    /// Individuals occurring in nominals.
    pub fn collect_individuals(&self, out: &mut BTreeSet<String>) {
        match self {
            ClassExpr::Named(_) | ClassExpr::Top | ClassExpr::Bottom => {}
            ClassExpr::Nominal(a) => {
                out.insert(a.clone());
            }
            ClassExpr::Not(c)
            | ClassExpr::Some(_, c)
            | ClassExpr::All(_, c)
            | ClassExpr::Max(_, _, c)
            | ClassExpr::Min(_, _, c)
            | ClassExpr::Exactly(_, _, c) => c.collect_individuals(out),
            ClassExpr::And(cs) | ClassExpr::Or(cs) => {
                for c in cs {
                    c.collect_individuals(out);
                }
            }
        }
    }

    pub fn collect_signature(&self, classes: &mut BTreeSet<String>, roles: &mut BTreeSet<String>) {
        match self {
            ClassExpr::Named(a) => {
                classes.insert(a.clone());
            }
            ClassExpr::Top | ClassExpr::Bottom | ClassExpr::Nominal(_) => {}
            ClassExpr::Not(c) => c.collect_signature(classes, roles),
            ClassExpr::Some(r, c)
            | ClassExpr::All(r, c)
            | ClassExpr::Max(_, r, c)
            | ClassExpr::Min(_, r, c)
            | ClassExpr::Exactly(_, r, c) => {
                roles.insert(r.clone());
                c.collect_signature(classes, roles);
            }
            ClassExpr::And(cs) | ClassExpr::Or(cs) => {
                for c in cs {
                    c.collect_signature(classes, roles);
                }
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, items: &[ClassExpr]) -> fmt::Result {
    write!(f, "{head}(")?;
    for (i, c) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Named(a) => f.write_str(a),
            ClassExpr::Top => f.write_str("Top"),
            ClassExpr::Bottom => f.write_str("Bottom"),
            ClassExpr::Not(c) => write!(f, "not({c})"),
            ClassExpr::And(cs) => write_list(f, "and", cs),
            ClassExpr::Or(cs) => write_list(f, "or", cs),
            ClassExpr::Some(r, c) => write!(f, "some({r}, {c})"),
            ClassExpr::All(r, c) => write!(f, "all({r}, {c})"),
            ClassExpr::Max(n, r, c) => write!(f, "max({n}, {r}, {c})"),
            ClassExpr::Min(n, r, c) => write!(f, "min({n}, {r}, {c})"),
            ClassExpr::Exactly(n, r, c) => write!(f, "exactly({n}, {r}, {c})"),
            ClassExpr::Nominal(a) => write!(f, "one({a})"),
        }
    }
}

/// An ontology axiom.
///
/// `EquivalentClasses` and `DisjointClasses` are accepted on input but an
/// [`crate::Ontology`] only ever stores their expansion into `SubClassOf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    SubClassOf(ClassExpr, ClassExpr),
    EquivalentClasses(ClassExpr, ClassExpr),
    ClassAssertion(String, ClassExpr),
    PropertyAssertion(String, String, String),
    DifferentIndividuals(String, String),
    DisjointClasses(ClassExpr, ClassExpr),
}

impl Axiom {
    pub fn class_assertion(ind: impl Into<String>, class: ClassExpr) -> Self {
        Axiom::ClassAssertion(ind.into(), class)
    }

    pub fn property_assertion(
        subject: impl Into<String>,
        role: impl Into<String>,
        object: impl Into<String>,
    ) -> Self {
        Axiom::PropertyAssertion(subject.into(), role.into(), object.into())
    }

    /// Rewrites sugar into the core axiom forms.
    pub fn expand(self) -> Vec<Axiom> {
        match self {
            Axiom::EquivalentClasses(c, d) => {
                vec![Axiom::SubClassOf(c.clone(), d.clone()), Axiom::SubClassOf(d, c)]
            }
            Axiom::DisjointClasses(c, d) => {
                vec![Axiom::SubClassOf(ClassExpr::And(vec![c, d]), ClassExpr::Bottom)]
            }
            other => vec![other],
        }
    }

    pub fn collect_individuals(&self, out: &mut BTreeSet<String>) {
        match self {
            Axiom::SubClassOf(c, d) | Axiom::EquivalentClasses(c, d) | Axiom::DisjointClasses(c, d) => {
                c.collect_individuals(out);
                d.collect_individuals(out);
            }
            Axiom::ClassAssertion(a, c) => {
                out.insert(a.clone());
                c.collect_individuals(out);
            }
            Axiom::PropertyAssertion(a, _, b) | Axiom::DifferentIndividuals(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
        }
    }

    pub fn collect_signature(&self, classes: &mut BTreeSet<String>, roles: &mut BTreeSet<String>) {
        match self {
            Axiom::SubClassOf(c, d) | Axiom::EquivalentClasses(c, d) | Axiom::DisjointClasses(c, d) => {
                c.collect_signature(classes, roles);
                d.collect_signature(classes, roles);
            }
            Axiom::ClassAssertion(_, c) => c.collect_signature(classes, roles),
            Axiom::PropertyAssertion(_, r, _) => {
                roles.insert(r.clone());
            }
            Axiom::DifferentIndividuals(..) => {}
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf(c, d) => write!(f, "SubClassOf({c}, {d})"),
            Axiom::EquivalentClasses(c, d) => write!(f, "EquivalentClasses({c}, {d})"),
            Axiom::ClassAssertion(a, c) => write!(f, "ClassAssertion({a}, {c})"),
            Axiom::PropertyAssertion(a, r, b) => write!(f, "PropertyAssertion({a}, {r}, {b})"),
            Axiom::DifferentIndividuals(a, b) => write!(f, "DifferentIndividuals({a}, {b})"),
            Axiom::DisjointClasses(c, d) => write!(f, "DisjointClasses({c}, {d})"),
        }
    }
}

/// Something that can be asked of an ontology: plain inconsistency
/// (`⊤ ⊑ ⊥`) or an ABox assertion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entailment {
    Inconsistency,
    Class(String, ClassExpr),
    Property(String, String, String),
}

impl Entailment {
    /// The entailment corresponding to an assertion axiom, if it is one.
    pub fn from_axiom(axiom: &Axiom) -> Option<Self> {
        match axiom {
            Axiom::ClassAssertion(a, c) => Some(Entailment::Class(a.clone(), c.clone())),
            Axiom::PropertyAssertion(a, r, b) => Some(Entailment::Property(a.clone(), r.clone(), b.clone())),
            _ => None,
        }
    }
}

impl fmt::Display for Entailment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entailment::Inconsistency => f.write_str("SubClassOf(Top, Bottom)"),
            Entailment::Class(a, c) => write!(f, "ClassAssertion({a}, {c})"),
            Entailment::Property(a, r, b) => write!(f, "PropertyAssertion({a}, {r}, {b})"),
        }
    }
}
