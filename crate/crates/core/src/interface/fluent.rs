use std::collections::BTreeMap;

use omplan_dl::{Axiom, ClassExpr};

use super::InterfaceError;
use crate::pddl::GroundAtom;

/// The fluent interface `F`: a partial, inverse-functional map from planning
/// objects and unary/binary predicates to individuals, classes and
/// properties.
///
/// Inverse functionality is enforced over all right-hand sides together, so
/// an IRI names at most one planning symbol.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FluentInterface {
    objects: BTreeMap<String, String>,
    predicates: BTreeMap<String, (usize, String)>,
    inverse: BTreeMap<String, Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Symbol {
    Object(String),
    Predicate(String),
}

impl FluentInterface {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, object: &str, iri: &str) -> Result<(), InterfaceError> {
        self.add(Symbol::Object(object.to_string()), iri, None, 0)
    }

    pub fn add_predicate(&mut self, predicate: &str, arity: usize, iri: &str) -> Result<(), InterfaceError> {
        self.add(Symbol::Predicate(predicate.to_string()), iri, Some(arity), 0)
    }

    fn add(&mut self, sym: Symbol, iri: &str, arity: Option<usize>, line: usize) -> Result<(), InterfaceError> {
        let name = match &sym {
            Symbol::Object(n) | Symbol::Predicate(n) => n.clone(),
        };
        let taken = match &sym {
            Symbol::Object(n) => self.objects.contains_key(n),
            Symbol::Predicate(n) => self.predicates.contains_key(n),
        };
        if taken {
            return Err(InterfaceError::DuplicateMapping { line, name });
        }
        if arity.is_some_and(|a| !(1..=2).contains(&a)) {
            return Err(InterfaceError::ArityNotMappable {
                line,
                predicate: name,
                arity: arity.unwrap_or(0),
            });
        }
        if self.inverse.contains_key(iri) {
            return Err(InterfaceError::InverseFunctionalityViolation {
                line,
                iri: iri.to_string(),
            });
        }
        self.inverse.insert(iri.to_string(), sym.clone());
        match sym {
            Symbol::Object(n) => {
                self.objects.insert(n, iri.to_string());
            }
            Symbol::Predicate(n) => {
                self.predicates.insert(n, (arity.unwrap_or(0), iri.to_string()));
            }
        }
        Ok(())
    }

    /// Reads the line format
    ///
    /// ```text
    /// OBJECT    stackBot   -> stackBot
    /// PREDICATE holds(_,_) -> holds
    /// ```
    ///
    /// Blank lines and lines starting with `;` or `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, InterfaceError> {
        let mut f = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with(';') || trimmed.starts_with('#') {
                continue;
            }
            let syntax = |message: &str| InterfaceError::Syntax {
                line,
                message: message.to_string(),
            };
            let (lhs, iri) = trimmed.split_once("->").ok_or_else(|| syntax("expected `->`"))?;
            let iri = iri.trim();
            if iri.is_empty() || iri.contains(char::is_whitespace) {
                return Err(syntax("expected a single IRI after `->`"));
            }
            let lhs = lhs.trim();
            let (keyword, rest) = lhs
                .split_once(char::is_whitespace)
                .ok_or_else(|| syntax("expected `OBJECT <name>` or `PREDICATE <name>(_,...)`"))?;
            let rest = rest.trim();
            if keyword.eq_ignore_ascii_case("OBJECT") {
                if rest.is_empty() || rest.contains(|c: char| c.is_whitespace() || "(),".contains(c)) {
                    return Err(syntax("expected an object name"));
                }
                f.add(Symbol::Object(rest.to_string()), iri, None, line)?;
            } else if keyword.eq_ignore_ascii_case("PREDICATE") {
                let compact: String = rest.chars().filter(|c| !c.is_whitespace()).collect();
                let (name, args) = compact
                    .strip_suffix(')')
                    .and_then(|s| s.split_once('('))
                    .ok_or_else(|| syntax("expected `<name>(_,...)`"))?;
                if name.is_empty() {
                    return Err(syntax("missing predicate name"));
                }
                let arity = if args.is_empty() { 0 } else { args.split(',').count() };
                if args.split(',').any(|a| !args.is_empty() && a != "_") {
                    return Err(syntax("predicate arguments are written `_`"));
                }
                f.add(Symbol::Predicate(name.to_string()), iri, Some(arity), line)?;
            } else {
                return Err(syntax(&format!("unknown directive `{keyword}`")));
            }
        }
        Ok(f)
    }

    pub fn object(&self, object: &str) -> Option<&str> {
        self.objects.get(object).map(String::as_str)
    }

    pub fn predicate(&self, predicate: &str) -> Option<(usize, &str)> {
        self.predicates.get(predicate).map(|(a, iri)| (*a, iri.as_str()))
    }

    /// Mapped objects with their individuals, sorted by object name.
    pub fn objects(&self) -> impl Iterator<Item = (&str, &str)> {
        self.objects.iter().map(|(o, i)| (o.as_str(), i.as_str()))
    }

    /// Mapped predicates with arity and IRI, sorted by predicate name.
    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize, &str)> {
        self.predicates.iter().map(|(p, (a, i))| (p.as_str(), *a, i.as_str()))
    }

    /// `F⁻` on individuals.
    pub fn object_of(&self, individual: &str) -> Option<&str> {
        match self.inverse.get(individual) {
            Some(Symbol::Object(o)) => Some(o),
            _ => None,
        }
    }

    fn predicate_of(&self, iri: &str, arity: usize) -> Option<&str> {
        match self.inverse.get(iri) {
            Some(Symbol::Predicate(p)) if self.predicates[p].0 == arity => Some(p),
            _ => None,
        }
    }

    /// `F(α)`: defined iff the predicate and every argument are mapped.
    pub fn map_atom(&self, atom: &GroundAtom) -> Option<Axiom> {
        let (arity, iri) = self.predicate(&atom.predicate)?;
        if arity != atom.args.len() {
            return None;
        }
        let args: Vec<&str> = atom.args.iter().map(|a| self.object(a)).collect::<Option<_>>()?;
        Some(match args[..] {
            [a] => Axiom::class_assertion(a, ClassExpr::named(iri)),
            [a, b] => Axiom::property_assertion(a, iri, b),
            _ => unreachable!("only unary and binary predicates are mapped"),
        })
    }

    /// `F⁻` on fluent axioms.
    pub fn unmap_axiom(&self, axiom: &Axiom) -> Option<GroundAtom> {
        match axiom {
            Axiom::ClassAssertion(a, ClassExpr::Named(c)) => Some(GroundAtom {
                predicate: self.predicate_of(c, 1)?.to_string(),
                args: vec![self.object_of(a)?.to_string()],
            }),
            Axiom::PropertyAssertion(a, r, b) => Some(GroundAtom {
                predicate: self.predicate_of(r, 2)?.to_string(),
                args: vec![self.object_of(a)?.to_string(), self.object_of(b)?.to_string()],
            }),
            _ => None,
        }
    }

    /// The fluent set `𝐅`: the image of every ground atom over mapped
    /// predicates and mapped objects, sorted.
    pub fn fluents(&self) -> Vec<Axiom> {
        let inds: Vec<&str> = self.objects.values().map(String::as_str).collect();
        let mut out = Vec::new();
        for (arity, iri) in self.predicates.values() {
            for a in &inds {
                if *arity == 1 {
                    out.push(Axiom::class_assertion(*a, ClassExpr::named(iri)));
                } else {
                    for b in &inds {
                        out.push(Axiom::property_assertion(*a, iri, *b));
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty() && self.predicates.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FIG2A: &str = "
 OBJECT    stackBot   -> stackBot
 OBJECT    blockA     -> blockA
 OBJECT    blockB     -> blockB
 OBJECT    blockC     -> blockC

 PREDICATE holds(_,_) -> holds
";

    #[test]
    fn blocksworld_fluent_interface() {
        let f = FluentInterface::parse(FIG2A).unwrap();
        assert_eq!(f.objects().count(), 4);
        assert_eq!(f.predicates().collect::<Vec<_>>(), [("holds", 2, "holds")]);
        let h = GroundAtom::new("holds", &["stackBot", "blockA"]);
        assert_eq!(
            f.map_atom(&h),
            Some(Axiom::property_assertion("stackBot", "holds", "blockA"))
        );
        assert_eq!(f.map_atom(&GroundAtom::new("on", &["blockB", "blockA"])), None);
        assert_eq!(f.map_atom(&GroundAtom::new("holds", &["stackBot", "table"])), None);
        assert_eq!(f.fluents().len(), 16);
    }

    #[test]
    fn empty_interface_is_legal() {
        let f = FluentInterface::parse("").unwrap();
        assert!(f.is_empty() && f.fluents().is_empty());
    }

    #[test]
    fn malformed_interfaces() {
        let err = FluentInterface::parse("OBJECT a -> x\nOBJECT b -> x").unwrap_err();
        assert_eq!(
            err,
            InterfaceError::InverseFunctionalityViolation {
                line: 2,
                iri: "x".into()
            }
        );
        let err = FluentInterface::parse("OBJECT a -> x\nOBJECT a -> y").unwrap_err();
        assert!(matches!(err, InterfaceError::DuplicateMapping { line: 2, .. }));
        let err = FluentInterface::parse("PREDICATE between(_,_,_) -> between").unwrap_err();
        assert!(matches!(err, InterfaceError::ArityNotMappable { arity: 3, .. }));
        let err = FluentInterface::parse("OBJECT a -> p\nPREDICATE p(_) -> p").unwrap_err();
        assert!(matches!(err, InterfaceError::InverseFunctionalityViolation { .. }));
        assert!(matches!(
            FluentInterface::parse("OBJECT a b"),
            Err(InterfaceError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn unary_predicates_map_to_classes() {
        let f = FluentInterface::parse("OBJECT v1 -> valve1\nPREDICATE closed(_) -> ClosedValve").unwrap();
        let a = GroundAtom::new("closed", &["v1"]);
        let ax = f.map_atom(&a).unwrap();
        assert_eq!(ax, Axiom::class_assertion("valve1", ClassExpr::named("ClosedValve")));
        assert_eq!(f.unmap_axiom(&ax), Some(a));
    }

    proptest! {
        #[test]
        fn map_atom_is_injective_and_invertible(
            i in 0usize..4, j in 0usize..4, k in 0usize..4, l in 0usize..4,
            p in 0usize..2, q in 0usize..2,
        ) {
            let f = FluentInterface::parse(
                "OBJECT o0 -> i0\nOBJECT o1 -> i1\nOBJECT o2 -> i2\nOBJECT o3 -> i3\n\
                 PREDICATE p(_) -> P\nPREDICATE r(_,_) -> R",
            ).unwrap();
            let atom = |pred: usize, a: usize, b: usize| {
                let o = |n: usize| format!("o{n}");
                if pred == 0 {
                    GroundAtom { predicate: "p".into(), args: vec![o(a)] }
                } else {
                    GroundAtom { predicate: "r".into(), args: vec![o(a), o(b)] }
                }
            };
            let (x, y) = (atom(p, i, j), atom(q, k, l));
            let (fx, fy) = (f.map_atom(&x).unwrap(), f.map_atom(&y).unwrap());
            prop_assert_eq!(x == y, fx == fy);
            prop_assert_eq!(f.unmap_axiom(&fx), Some(x));
        }
    }
}
