//! Bounded finite-model search, used as an oracle for the tableau.
//!
//! For each domain size `1..=max_domain` the axioms are grounded into a
//! propositional formula over class memberships, role edges and the
//! interpretation of individual names, and handed to a SAT solver. Class
//! expressions are encoded directly from their first-order semantics (no
//! normal forms), so this shares nothing with the tableau beyond the AST.
//!
//! A model found is a proof of consistency. "No model up to the bound" is
//! only evidence of inconsistency; callers pick bounds that are large enough
//! for the shapes they test.

use std::collections::{BTreeSet, HashMap};

use varisat::{ExtendFormula, Lit, Solver};

use crate::expr::{Axiom, ClassExpr};

/// Whether the axioms have a model with at most `max_domain` elements.
pub fn has_model(axioms: &[Axiom], max_domain: usize) -> bool {
    (1..=max_domain).any(|d| has_model_of_size(axioms, d))
}

/// Whether the axioms have a model with exactly `size` elements.
pub fn has_model_of_size(axioms: &[Axiom], size: usize) -> bool {
    let axioms: Vec<Axiom> = axioms.iter().flat_map(|a| a.clone().expand()).collect();
    let mut enc = Encoder::new(size);
    let mut inds = BTreeSet::new();
    for ax in &axioms {
        ax.collect_individuals(&mut inds);
    }
    for a in &inds {
        enc.individual(a);
    }
    for ax in &axioms {
        match ax {
            Axiom::SubClassOf(c, d) => {
                for k in 0..size {
                    let c = enc.holds(c, k);
                    let d = enc.holds(d, k);
                    enc.solver.add_clause(&[!c, d]);
                }
            }
            Axiom::ClassAssertion(a, c) => {
                for k in 0..size {
                    let at = enc.individual(a)[k];
                    let c = enc.holds(c, k);
                    enc.solver.add_clause(&[!at, c]);
                }
            }
            Axiom::PropertyAssertion(a, r, b) => {
                for k in 0..size {
                    for l in 0..size {
                        let at_a = enc.individual(a)[k];
                        let at_b = enc.individual(b)[l];
                        let edge = enc.edge(r, k, l);
                        enc.solver.add_clause(&[!at_a, !at_b, edge]);
                    }
                }
            }
            Axiom::DifferentIndividuals(a, b) => {
                for k in 0..size {
                    let at_a = enc.individual(a)[k];
                    let at_b = enc.individual(b)[k];
                    enc.solver.add_clause(&[!at_a, !at_b]);
                }
            }
            Axiom::EquivalentClasses(..) | Axiom::DisjointClasses(..) => unreachable!("expanded above"),
        }
    }
    enc.solver.solve().expect("SAT solver failure")
}

struct Encoder {
    solver: Solver<'static>,
    size: usize,
    truth: Lit,
    classes: HashMap<(String, usize), Lit>,
    edges: HashMap<(String, usize, usize), Lit>,
    inds: HashMap<String, Vec<Lit>>,
    memo: HashMap<(ClassExpr, usize), Lit>,
}

impl Encoder {
    fn new(size: usize) -> Self {
        let mut solver = Solver::new();
        let truth = solver.new_lit();
        solver.add_clause(&[truth]);
        Encoder {
            solver,
            size,
            truth,
            classes: HashMap::new(),
            edges: HashMap::new(),
            inds: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    /// One literal per element; exactly one of them is true.
    fn individual(&mut self, a: &str) -> Vec<Lit> {
        if let Some(v) = self.inds.get(a) {
            return v.clone();
        }
        let lits: Vec<Lit> = (0..self.size).map(|_| self.solver.new_lit()).collect();
        self.solver.add_clause(&lits);
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                self.solver.add_clause(&[!lits[i], !lits[j]]);
            }
        }
        self.inds.insert(a.to_string(), lits.clone());
        lits
    }

    fn class(&mut self, name: &str, k: usize) -> Lit {
        if let Some(&l) = self.classes.get(&(name.to_string(), k)) {
            return l;
        }
        let l = self.solver.new_lit();
        self.classes.insert((name.to_string(), k), l);
        l
    }

    fn edge(&mut self, role: &str, k: usize, l: usize) -> Lit {
        if let Some(&x) = self.edges.get(&(role.to_string(), k, l)) {
            return x;
        }
        let x = self.solver.new_lit();
        self.edges.insert((role.to_string(), k, l), x);
        x
    }

    fn define_and(&mut self, parts: &[Lit]) -> Lit {
        let t = self.solver.new_lit();
        let mut long = vec![t];
        for &p in parts {
            self.solver.add_clause(&[!t, p]);
            long.push(!p);
        }
        self.solver.add_clause(&long);
        t
    }

    fn define_or(&mut self, parts: &[Lit]) -> Lit {
        let negated: Vec<Lit> = parts.iter().map(|&p| !p).collect();
        !self.define_and(&negated)
    }

    /// `r(k, l) ∧ C(l)` for every `l`.
    fn filler_edges(&mut self, role: &str, c: &ClassExpr, k: usize) -> Vec<Lit> {
        (0..self.size)
            .map(|l| {
                let e = self.edge(role, k, l);
                let f = self.holds(c, l);
                self.define_and(&[e, f])
            })
            .collect()
    }

    /// At least `n` of `lits` are true.
    fn at_least(&mut self, n: u32, lits: &[Lit]) -> Lit {
        let n = n as usize;
        if n == 0 {
            return self.truth;
        }
        if n > lits.len() {
            return !self.truth;
        }
        let mut subsets = Vec::new();
        let mut chosen = Vec::new();
        fn walk(lits: &[Lit], start: usize, n: usize, chosen: &mut Vec<Lit>, out: &mut Vec<Vec<Lit>>) {
            if chosen.len() == n {
                out.push(chosen.clone());
                return;
            }
            for i in start..lits.len() {
                chosen.push(lits[i]);
                walk(lits, i + 1, n, chosen, out);
                chosen.pop();
            }
        }
        walk(lits, 0, n, &mut chosen, &mut subsets);
        let conj: Vec<Lit> = subsets.iter().map(|s| self.define_and(s)).collect();
        self.define_or(&conj)
    }

    /// Literal true iff element `k` is an instance of `c`.
    fn holds(&mut self, c: &ClassExpr, k: usize) -> Lit {
        if let Some(&l) = self.memo.get(&(c.clone(), k)) {
            return l;
        }
        let lit = match c {
            ClassExpr::Named(a) => self.class(a, k),
            ClassExpr::Top => self.truth,
            ClassExpr::Bottom => !self.truth,
            ClassExpr::Not(d) => !self.holds(d, k),
            ClassExpr::And(ds) => {
                let parts: Vec<Lit> = ds.iter().map(|d| self.holds(d, k)).collect();
                self.define_and(&parts)
            }
            ClassExpr::Or(ds) => {
                let parts: Vec<Lit> = ds.iter().map(|d| self.holds(d, k)).collect();
                self.define_or(&parts)
            }
            ClassExpr::Some(r, d) => {
                let parts = self.filler_edges(r, d, k);
                self.define_or(&parts)
            }
            ClassExpr::All(r, d) => {
                let parts: Vec<Lit> = (0..self.size)
                    .map(|l| {
                        let e = self.edge(r, k, l);
                        let f = self.holds(d, l);
                        self.define_or(&[!e, f])
                    })
                    .collect();
                self.define_and(&parts)
            }
            ClassExpr::Min(n, r, d) => {
                let parts = self.filler_edges(r, d, k);
                self.at_least(*n, &parts)
            }
            ClassExpr::Max(n, r, d) => {
                let parts = self.filler_edges(r, d, k);
                !self.at_least(n + 1, &parts)
            }
            ClassExpr::Exactly(n, r, d) => {
                let parts = self.filler_edges(r, d, k);
                let lo = self.at_least(*n, &parts);
                let hi = !self.at_least(n + 1, &parts);
                self.define_and(&[lo, hi])
            }
            ClassExpr::Nominal(a) => self.individual(a)[k],
        };
        self.memo.insert((c.clone(), k), lit);
        lit
    }
}
