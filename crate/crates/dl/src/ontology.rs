use std::collections::{BTreeSet, HashSet};

use crate::expr::Axiom;

/// A finite set of axioms, kept in insertion order.
///
/// Sugar (`EquivalentClasses`, `DisjointClasses`) is expanded on insertion,
/// and duplicates are dropped, so the stored axioms are always in core form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ontology {
    axioms: Vec<Axiom>,
    seen: HashSet<Axiom>,
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        let mut o = Self::new();
        o.extend(axioms);
        o
    }

    /// Adds an axiom (expanded). Returns `true` if anything new was added.
    pub fn insert(&mut self, axiom: Axiom) -> bool {
        let mut added = false;
        for ax in axiom.expand() {
            if self.seen.insert(ax.clone()) {
                self.axioms.push(ax);
                added = true;
            }
        }
        added
    }

    pub fn extend(&mut self, axioms: impl IntoIterator<Item = Axiom>) {
        for ax in axioms {
            self.insert(ax);
        }
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        self.seen.contains(axiom)
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// `Ind(O)`: every individual name occurring syntactically in the axioms,
    /// including those inside nominals.
    pub fn individuals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for ax in &self.axioms {
            ax.collect_individuals(&mut out);
        }
        out
    }

    /// Named classes and properties used by the axioms.
    pub fn signature(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut classes = BTreeSet::new();
        let mut roles = BTreeSet::new();
        for ax in &self.axioms {
            ax.collect_signature(&mut classes, &mut roles);
        }
        (classes, roles)
    }

    /// Asserts pairwise inequality between all individuals of the ontology
    /// (unique name assumption).
    pub fn with_unique_names(mut self) -> Self {
        let inds: Vec<String> = self.individuals().into_iter().collect();
        for (i, a) in inds.iter().enumerate() {
            for b in &inds[i + 1..] {
                self.insert(Axiom::DifferentIndividuals(a.clone(), b.clone()));
            }
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ClassExpr;

    #[test]
    fn sugar_is_expanded_and_deduplicated() {
        let o = Ontology::from_axioms([
            Axiom::EquivalentClasses(ClassExpr::named("A"), ClassExpr::named("B")),
            Axiom::SubClassOf(ClassExpr::named("A"), ClassExpr::named("B")),
            Axiom::DisjointClasses(ClassExpr::named("A"), ClassExpr::named("C")),
        ]);
        assert_eq!(o.len(), 3);
        assert!(o.contains(&Axiom::SubClassOf(ClassExpr::named("B"), ClassExpr::named("A"))));
        assert!(o.contains(&Axiom::SubClassOf(
            ClassExpr::And(vec![ClassExpr::named("A"), ClassExpr::named("C")]),
            ClassExpr::Bottom
        )));
    }

    #[test]
    fn individuals_include_nominals() {
        let o = Ontology::from_axioms([
            Axiom::class_assertion("a", ClassExpr::some("r", ClassExpr::nominal("b"))),
            Axiom::property_assertion("c", "r", "d"),
        ]);
        let inds: Vec<_> = o.individuals().into_iter().collect();
        assert_eq!(inds, ["a", "b", "c", "d"]);
    }

    #[test]
    fn unique_names_adds_pairwise_inequalities() {
        let o = Ontology::from_axioms([
            Axiom::property_assertion("a", "r", "b"),
            Axiom::class_assertion("c", ClassExpr::Top),
        ])
        .with_unique_names();
        assert_eq!(o.len(), 2 + 3);
    }
}
