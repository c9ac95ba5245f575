//! Tableau decision procedure for the ALCOQ-style fragment.
//!
//! Concepts are converted to negation normal form and interned. TBox axioms
//! whose left-hand side contains named classes or nominals are absorbed into
//! lazy trigger rules; all remaining general inclusions are internalised and
//! added to every node. Individuals become named (non-blockable) nodes that
//! carry their own nominal, so `{a}` in a label forces a merge with `a`.
//!
//! Nondeterministic rules (⊔, choose, ≤-merge) are explored depth-first in a
//! fixed order by cloning the completion graph. Every label entry, edge and
//! inequality records the branch points it depends on, so a clash backjumps
//! over choices it does not depend on. Generating rules (∃, ≥) only
//! fire on nodes that are not blocked; blocking is subset blocking against
//! blockable ancestors, which is sufficient without inverse roles.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;
use std::sync::Mutex;

use crate::error::ReasonerError;
use crate::expr::{Axiom, ClassExpr, Entailment};
use crate::ontology::Ontology;

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReasonerConfig {
    /// Upper bound on tableau work per call: generated nodes plus explored
    /// branches.
    pub node_budget: usize,
    /// Memoize consistency answers keyed by the (sorted) axiom set.
    pub memoize: bool,
}

impl Default for ReasonerConfig {
    fn default() -> Self {
        Self {
            node_budget: DEFAULT_NODE_BUDGET,
            memoize: true,
        }
    }
}

/// Consistency, entailment and instance queries. Each call builds a private
/// tableau, so a `Reasoner` can be shared between threads.
#[derive(Debug, Default)]
pub struct Reasoner {
    config: ReasonerConfig,
    cache: Mutex<HashMap<Vec<Axiom>, bool>>,
    calls: std::sync::atomic::AtomicU64,
}

impl Reasoner {
    pub fn new(config: ReasonerConfig) -> Self {
        Self {
            config,
            cache: Mutex::new(HashMap::new()),
            calls: Default::default(),
        }
    }

    pub fn config(&self) -> ReasonerConfig {
        self.config
    }

    /// Number of consistency checks answered so far (cache hits included).
    pub fn calls(&self) -> u64 {
        self.calls.load(std::sync::atomic::Ordering::Relaxed)
    }

    pub fn is_consistent(&self, ontology: &Ontology) -> Result<bool, ReasonerError> {
        self.is_consistent_axioms(ontology.axioms().iter())
    }

    /// Consistency of an arbitrary collection of axioms (sugar is expanded).
    pub fn is_consistent_axioms<'a>(
        &self,
        axioms: impl IntoIterator<Item = &'a Axiom>,
    ) -> Result<bool, ReasonerError> {
        self.calls.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        let mut list: Vec<Axiom> = axioms.into_iter().flat_map(|a| a.clone().expand()).collect();
        if !self.config.memoize {
            return Tableau::build(&list, self.config.node_budget).run();
        }
        list.sort();
        list.dedup();
        if let Some(&hit) = self.cache.lock().expect("reasoner cache poisoned").get(&list) {
            return Ok(hit);
        }
        let answer = Tableau::build(&list, self.config.node_budget).run()?;
        self.cache
            .lock()
            .expect("reasoner cache poisoned")
            .insert(list, answer);
        Ok(answer)
    }

    pub fn entails(&self, ontology: &Ontology, target: &Entailment) -> Result<bool, ReasonerError> {
        self.entails_axioms(ontology.axioms().iter(), target)
    }

    /// `O ⊨ α`, by reduction to inconsistency. An inconsistent `O` entails
    /// everything.
    pub fn entails_axioms<'a>(
        &self,
        axioms: impl IntoIterator<Item = &'a Axiom>,
        target: &Entailment,
    ) -> Result<bool, ReasonerError> {
        let extra = match target {
            Entailment::Inconsistency => None,
            Entailment::Class(a, c) => Some(Axiom::ClassAssertion(a.clone(), ClassExpr::not(c.clone()))),
            Entailment::Property(a, r, b) => Some(Axiom::ClassAssertion(
                a.clone(),
                ClassExpr::all(r.clone(), ClassExpr::not(ClassExpr::Nominal(b.clone()))),
            )),
        };
        let mut list: Vec<&Axiom> = axioms.into_iter().collect();
        list.extend(extra.as_ref());
        Ok(!self.is_consistent_axioms(list)?)
    }

    /// `{a ∈ Ind(O) | O ⊨ a : C}`.
    pub fn instances(&self, ontology: &Ontology, class: &ClassExpr) -> Result<BTreeSet<String>, ReasonerError> {
        let mut out = BTreeSet::new();
        if !self.is_consistent(ontology)? {
            return Ok(ontology.individuals());
        }
        for a in ontology.individuals() {
            if self.entails(ontology, &Entailment::Class(a.clone(), class.clone()))? {
                out.insert(a);
            }
        }
        Ok(out)
    }
}

type Cid = u32;
type Role = u32;
type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Concept {
    Top,
    Bottom,
    Atom(u32, bool),
    Nominal(u32, bool),
    And(Vec<Cid>),
    Or(Vec<Cid>),
    Some(Role, Cid),
    All(Role, Cid),
    Min(u32, Role, Cid),
    Max(u32, Role, Cid),
}

#[derive(Default)]
struct Names {
    ids: HashMap<String, u32>,
}

impl Names {
    fn id(&mut self, name: &str) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(name.to_string()).or_insert(next)
    }
}

/// Interned NNF concepts, closed under negation.
#[derive(Default)]
struct Store {
    concepts: Vec<Concept>,
    index: HashMap<Concept, Cid>,
    neg: Vec<Cid>,
    classes: Names,
    roles: Names,
    inds: Names,
}

const TOP: Cid = 0;
const BOTTOM: Cid = 1;

impl Store {
    fn new() -> Self {
        let mut s = Store::default();
        s.intern(Concept::Top);
        s.intern(Concept::Bottom);
        s
    }

    fn intern(&mut self, c: Concept) -> Cid {
        if let Some(&id) = self.index.get(&c) {
            return id;
        }
        let id = self.concepts.len() as Cid;
        self.concepts.push(c.clone());
        self.index.insert(c, id);
        id
    }

    fn and(&mut self, parts: Vec<Cid>) -> Cid {
        let mut flat = Vec::new();
        for p in parts {
            match &self.concepts[p as usize] {
                Concept::Top => {}
                Concept::Bottom => return BOTTOM,
                Concept::And(inner) => flat.extend(inner.iter().copied()),
                _ => flat.push(p),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        match flat.len() {
            0 => TOP,
            1 => flat[0],
            _ => self.intern(Concept::And(flat)),
        }
    }

    fn or(&mut self, parts: Vec<Cid>) -> Cid {
        let mut flat = Vec::new();
        for p in parts {
            match &self.concepts[p as usize] {
                Concept::Bottom => {}
                Concept::Top => return TOP,
                Concept::Or(inner) => flat.extend(inner.iter().copied()),
                _ => flat.push(p),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        match flat.len() {
            0 => BOTTOM,
            1 => flat[0],
            _ => self.intern(Concept::Or(flat)),
        }
    }

    fn some(&mut self, r: Role, c: Cid) -> Cid {
        if c == BOTTOM {
            BOTTOM
        } else {
            self.intern(Concept::Some(r, c))
        }
    }

    fn all(&mut self, r: Role, c: Cid) -> Cid {
        if c == TOP {
            TOP
        } else {
            self.intern(Concept::All(r, c))
        }
    }

    fn min(&mut self, n: u32, r: Role, c: Cid) -> Cid {
        if n == 0 {
            TOP
        } else if c == BOTTOM {
            BOTTOM
        } else if n == 1 {
            self.some(r, c)
        } else {
            self.intern(Concept::Min(n, r, c))
        }
    }

    fn max(&mut self, n: u32, r: Role, c: Cid) -> Cid {
        if c == BOTTOM {
            TOP
        } else if n == 0 {
            let nc = self.negate_shallow(c);
            self.all(r, nc)
        } else {
            self.intern(Concept::Max(n, r, c))
        }
    }

    /// NNF of `e` (or of `¬e` when `positive` is false).
    fn nnf(&mut self, e: &ClassExpr, positive: bool) -> Cid {
        match e {
            ClassExpr::Named(a) => {
                let id = self.classes.id(a);
                self.intern(Concept::Atom(id, positive))
            }
            ClassExpr::Top => {
                if positive {
                    TOP
                } else {
                    BOTTOM
                }
            }
            ClassExpr::Bottom => {
                if positive {
                    BOTTOM
                } else {
                    TOP
                }
            }
            ClassExpr::Nominal(a) => {
                let id = self.inds.id(a);
                self.intern(Concept::Nominal(id, positive))
            }
            ClassExpr::Not(c) => self.nnf(c, !positive),
            ClassExpr::And(cs) | ClassExpr::Or(cs) => {
                let parts: Vec<Cid> = cs.iter().map(|c| self.nnf(c, positive)).collect();
                let conj = matches!(e, ClassExpr::And(_)) == positive;
                if conj {
                    self.and(parts)
                } else {
                    self.or(parts)
                }
            }
            ClassExpr::Some(r, c) | ClassExpr::All(r, c) => {
                let r = self.roles.id(r);
                let c = self.nnf(c, positive);
                if matches!(e, ClassExpr::Some(..)) == positive {
                    self.some(r, c)
                } else {
                    self.all(r, c)
                }
            }
            ClassExpr::Min(n, r, c) => {
                let r = self.roles.id(r);
                let c = self.nnf(c, true);
                if positive {
                    self.min(*n, r, c)
                } else if *n == 0 {
                    BOTTOM
                } else {
                    self.max(n - 1, r, c)
                }
            }
            ClassExpr::Max(n, r, c) => {
                let r = self.roles.id(r);
                let c = self.nnf(c, true);
                if positive {
                    self.max(*n, r, c)
                } else {
                    self.min(n + 1, r, c)
                }
            }
            ClassExpr::Exactly(n, r, c) => {
                let r_id = self.roles.id(r);
                let c = self.nnf(c, true);
                let lo = self.min(*n, r_id, c);
                let hi = self.max(*n, r_id, c);
                if positive {
                    self.and(vec![lo, hi])
                } else {
                    let nlo = self.negate_shallow(lo);
                    let nhi = self.negate_shallow(hi);
                    self.or(vec![nlo, nhi])
                }
            }
        }
    }

    fn negate_shallow(&mut self, id: Cid) -> Cid {
        match self.concepts[id as usize].clone() {
            Concept::Top => BOTTOM,
            Concept::Bottom => TOP,
            Concept::Atom(a, p) => self.intern(Concept::Atom(a, !p)),
            Concept::Nominal(a, p) => self.intern(Concept::Nominal(a, !p)),
            Concept::And(cs) => {
                let parts = cs.iter().map(|&c| self.negate_shallow(c)).collect();
                self.or(parts)
            }
            Concept::Or(cs) => {
                let parts = cs.iter().map(|&c| self.negate_shallow(c)).collect();
                self.and(parts)
            }
            Concept::Some(r, c) => {
                let n = self.negate_shallow(c);
                self.all(r, n)
            }
            Concept::All(r, c) => {
                let n = self.negate_shallow(c);
                self.some(r, n)
            }
            Concept::Min(n, r, c) => {
                if n == 0 {
                    BOTTOM
                } else {
                    self.max(n - 1, r, c)
                }
            }
            Concept::Max(n, r, c) => self.min(n + 1, r, c),
        }
    }

    /// Fills the negation table for every interned concept (and the new ones
    /// that creates).
    fn close_under_negation(&mut self) {
        let mut i = 0;
        while i < self.concepts.len() {
            let n = self.negate_shallow(i as Cid);
            if self.neg.len() <= i {
                self.neg.resize(i + 1, 0);
            }
            self.neg[i] = n;
            // Fillers of number restrictions need both polarities for the
            // choose rule.
            if let Concept::Max(_, _, c) | Concept::Min(_, _, c) = self.concepts[i].clone() {
                self.negate_shallow(c);
            }
            i += 1;
        }
    }
}

struct Trigger {
    atoms: Vec<Cid>,
    consequence: Cid,
}

/// Branch points a fact depends on: sorted, shared between clones.
#[derive(Debug, Clone, Default)]
struct Deps(Rc<Vec<u32>>);

impl Deps {
    fn single(b: u32) -> Self {
        Deps(Rc::new(vec![b]))
    }

    fn contains(&self, b: u32) -> bool {
        self.0.binary_search(&b).is_ok()
    }

    fn union(&self, other: &Deps) -> Deps {
        if other.0.is_empty() || Rc::ptr_eq(&self.0, &other.0) {
            return self.clone();
        }
        if self.0.is_empty() {
            return other.clone();
        }
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    v.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    v.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    v.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        v.extend_from_slice(&a[i..]);
        v.extend_from_slice(&b[j..]);
        Deps(Rc::new(v))
    }

    fn without(&self, b: u32) -> Deps {
        if !self.contains(b) {
            return self.clone();
        }
        Deps(Rc::new(self.0.iter().copied().filter(|&x| x != b).collect()))
    }
}

#[derive(Debug, Clone)]
struct Node {
    label: BTreeMap<Cid, Deps>,
    succ: BTreeMap<NodeId, BTreeMap<Role, Deps>>,
    parent: Option<NodeId>,
    named: bool,
    alive: bool,
}

#[derive(Debug, Clone)]
struct Graph {
    nodes: Vec<Node>,
    ineq: BTreeMap<(NodeId, NodeId), Deps>,
    /// Individual id to the node currently representing it, and why.
    ind_node: Vec<(NodeId, Deps)>,
    clash: Option<Deps>,
}

fn pair(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Graph {
    fn distinct(&self, a: NodeId, b: NodeId) -> bool {
        self.ineq.contains_key(&pair(a, b))
    }

    fn add(&mut self, x: NodeId, c: Cid, deps: Deps) -> bool {
        match self.nodes[x].label.entry(c) {
            std::collections::btree_map::Entry::Occupied(_) => false,
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(deps);
                true
            }
        }
    }

    fn add_edge(&mut self, x: NodeId, y: NodeId, r: Role, deps: Deps) {
        self.nodes[x].succ.entry(y).or_default().entry(r).or_insert(deps);
    }

    fn add_ineq(&mut self, a: NodeId, b: NodeId, deps: Deps) {
        if a == b {
            self.set_clash(deps);
        } else {
            self.ineq.entry(pair(a, b)).or_insert(deps);
        }
    }

    fn set_clash(&mut self, deps: Deps) {
        if self.clash.is_none() {
            self.clash = Some(deps);
        }
    }

    /// `r`-successors of `x` with the dependencies of the edge.
    fn successors(&self, x: NodeId, r: Role) -> impl Iterator<Item = (NodeId, &Deps)> + '_ {
        self.nodes[x]
            .succ
            .iter()
            .filter_map(move |(&y, roles)| roles.get(&r).map(|d| (y, d)))
    }

    /// Merges `from` into `into`; the surviving node keeps all labels, edges
    /// and inequalities, each extended by the merge's own dependencies.
    fn merge(&mut self, mut from: NodeId, mut into: NodeId, why: Deps) {
        if from == into {
            return;
        }
        if let Some(d) = self.ineq.get(&pair(from, into)) {
            let d = d.union(&why);
            self.set_clash(d);
            return;
        }
        if self.nodes[from].named && !self.nodes[into].named
            || self.nodes[from].named && self.nodes[into].named && from < into
        {
            std::mem::swap(&mut from, &mut into);
        }
        let label = std::mem::take(&mut self.nodes[from].label);
        for (c, d) in label {
            self.add(into, c, d.union(&why));
        }
        let out = std::mem::take(&mut self.nodes[from].succ);
        for x in 0..self.nodes.len() {
            if !self.nodes[x].alive {
                continue;
            }
            if let Some(roles) = self.nodes[x].succ.remove(&from) {
                for (r, d) in roles {
                    self.add_edge(x, into, r, d.union(&why));
                }
            }
            if self.nodes[x].parent == Some(from) {
                self.nodes[x].parent = Some(into);
            }
        }
        for (w, roles) in out {
            let w = if w == from { into } else { w };
            for (r, d) in roles {
                self.add_edge(into, w, r, d.union(&why));
            }
        }
        let ineq = std::mem::take(&mut self.ineq);
        for ((a, b), d) in ineq {
            if a != from && b != from {
                self.ineq.insert((a, b), d);
                continue;
            }
            let a = if a == from { into } else { a };
            let b = if b == from { into } else { b };
            self.add_ineq(a, b, d.union(&why));
        }
        for (n, d) in self.ind_node.iter_mut() {
            if *n == from {
                *n = into;
                *d = d.union(&why);
            }
        }
        let node = &mut self.nodes[from];
        node.alive = false;
        node.parent = None;
    }
}

enum Outcome {
    Clash(Deps),
    Complete,
    Branch(Vec<Graph>),
}

/// An open branch point on the search stack.
struct Frame {
    id: u32,
    rest: std::vec::IntoIter<Graph>,
    /// Union of the failure reasons of the alternatives tried so far.
    failed: Deps,
}

struct Tableau {
    store: Store,
    globals: Vec<Cid>,
    triggers: Vec<Trigger>,
    /// Trigger indices by the atoms they mention.
    trigger_index: HashMap<Cid, Vec<usize>>,
    initial: Graph,
    budget: usize,
    work: usize,
    branches: u32,
}

impl Tableau {
    fn build(axioms: &[Axiom], budget: usize) -> Self {
        let mut store = Store::new();
        let mut globals = Vec::new();
        let mut triggers = Vec::new();
        let mut assertions: Vec<(String, Cid)> = Vec::new();
        let mut edges: Vec<(String, Role, String)> = Vec::new();
        let mut different: Vec<(String, String)> = Vec::new();

        let mut inds = BTreeSet::new();
        for ax in axioms {
            ax.collect_individuals(&mut inds);
        }
        for a in &inds {
            let id = store.inds.id(a);
            store.intern(Concept::Nominal(id, true));
        }

        for ax in axioms {
            match ax {
                Axiom::SubClassOf(lhs, rhs) => {
                    let conjuncts: Vec<&ClassExpr> = match lhs {
                        ClassExpr::And(cs) => cs.iter().collect(),
                        other => vec![other],
                    };
                    let (atoms, rest): (Vec<&ClassExpr>, Vec<&ClassExpr>) = conjuncts
                        .into_iter()
                        .partition(|c| matches!(c, ClassExpr::Named(_) | ClassExpr::Nominal(_)));
                    if atoms.is_empty() {
                        let c = store.nnf(lhs, false);
                        let d = store.nnf(rhs, true);
                        let g = store.or(vec![c, d]);
                        if g != TOP {
                            globals.push(g);
                        }
                    } else {
                        let atoms: Vec<Cid> = atoms.into_iter().map(|a| store.nnf(a, true)).collect();
                        let rest_neg = store.nnf(&ClassExpr::And(rest.into_iter().cloned().collect()), false);
                        let d = store.nnf(rhs, true);
                        let consequence = store.or(vec![rest_neg, d]);
                        if consequence != TOP {
                            triggers.push(Trigger { atoms, consequence });
                        }
                    }
                }
                Axiom::ClassAssertion(a, c) => {
                    let c = store.nnf(c, true);
                    assertions.push((a.clone(), c));
                }
                Axiom::PropertyAssertion(a, r, b) => {
                    let r = store.roles.id(r);
                    edges.push((a.clone(), r, b.clone()));
                }
                Axiom::DifferentIndividuals(a, b) => different.push((a.clone(), b.clone())),
                Axiom::EquivalentClasses(..) | Axiom::DisjointClasses(..) => {
                    unreachable!("sugar is expanded before building the tableau")
                }
            }
        }
        store.close_under_negation();
        globals.sort_unstable();
        globals.dedup();

        let mut trigger_index: HashMap<Cid, Vec<usize>> = HashMap::new();
        for (i, t) in triggers.iter().enumerate() {
            for &a in &t.atoms {
                trigger_index.entry(a).or_default().push(i);
            }
        }

        // One named node per individual, in interning order (nominals that
        // only occur inside class expressions included).
        let n_inds = store.inds.ids.len();
        let mut nodes = Vec::with_capacity(n_inds);
        let mut by_id: Vec<(u32, String)> = store.inds.ids.iter().map(|(k, &v)| (v, k.clone())).collect();
        by_id.sort();
        for (id, _) in &by_id {
            let own = store.index[&Concept::Nominal(*id, true)];
            let mut label: BTreeMap<Cid, Deps> = globals.iter().map(|&g| (g, Deps::default())).collect();
            label.insert(own, Deps::default());
            nodes.push(Node {
                label,
                succ: BTreeMap::new(),
                parent: None,
                named: true,
                alive: true,
            });
        }
        if nodes.is_empty() {
            // Domains are non-empty: without individuals, start from one
            // anonymous root.
            nodes.push(Node {
                label: globals.iter().map(|&g| (g, Deps::default())).collect(),
                succ: BTreeMap::new(),
                parent: None,
                named: false,
                alive: true,
            });
        }
        let mut graph = Graph {
            nodes,
            ineq: BTreeMap::new(),
            ind_node: (0..n_inds).map(|x| (x, Deps::default())).collect(),
            clash: None,
        };
        for (a, c) in assertions {
            let x = store.inds.ids[&a] as usize;
            graph.add(x, c, Deps::default());
        }
        for (a, r, b) in edges {
            let x = store.inds.ids[&a] as usize;
            let y = store.inds.ids[&b] as usize;
            graph.add_edge(x, y, r, Deps::default());
        }
        for (a, b) in different {
            let x = store.inds.ids[&a] as usize;
            let y = store.inds.ids[&b] as usize;
            graph.add_ineq(x, y, Deps::default());
        }

        Tableau {
            store,
            globals,
            triggers,
            trigger_index,
            initial: graph,
            budget,
            work: 0,
            branches: 0,
        }
    }

    fn charge(&mut self, amount: usize) -> Result<(), ReasonerError> {
        self.work += amount;
        if self.work > self.budget {
            Err(ReasonerError::ResourceLimit { budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Depth-first search with dependency-directed backjumping: a clash
    /// that does not depend on the innermost open branch point skips it.
    fn run(mut self) -> Result<bool, ReasonerError> {
        let mut stack: Vec<Frame> = Vec::new();
        let mut current = self.initial.clone();
        loop {
            let mut reason = match self.expand(&mut current)? {
                Outcome::Complete => return Ok(true),
                Outcome::Branch(alternatives) => {
                    self.charge(alternatives.len())?;
                    let id = self.branches - 1;
                    let mut rest = alternatives.into_iter();
                    current = rest.next().expect("a branch has alternatives");
                    stack.push(Frame {
                        id,
                        rest,
                        failed: Deps::default(),
                    });
                    continue;
                }
                Outcome::Clash(reason) => reason,
            };
            loop {
                let Some(mut frame) = stack.pop() else {
                    return Ok(false);
                };
                if !reason.contains(frame.id) {
                    continue;
                }
                frame.failed = frame.failed.union(&reason.without(frame.id));
                if let Some(next) = frame.rest.next() {
                    current = next;
                    stack.push(frame);
                    break;
                }
                reason = frame.failed;
            }
        }
    }

    fn expand(&mut self, g: &mut Graph) -> Result<Outcome, ReasonerError> {
        loop {
            if let Some(d) = &g.clash {
                return Ok(Outcome::Clash(d.clone()));
            }
            if self.deterministic(g) {
                continue;
            }
            if let Some(d) = &g.clash {
                return Ok(Outcome::Clash(d.clone()));
            }
            if let Some(out) = self.nondeterministic(g) {
                return Ok(out);
            }
            if self.generate(g)? {
                continue;
            }
            return Ok(Outcome::Complete);
        }
    }

    fn concept(&self, c: Cid) -> &Concept {
        &self.store.concepts[c as usize]
    }

    fn neg(&self, c: Cid) -> Cid {
        self.store.neg[c as usize]
    }

    fn label_clash(&self, label: &BTreeMap<Cid, Deps>) -> Option<Deps> {
        if let Some(d) = label.get(&BOTTOM) {
            return Some(d.clone());
        }
        label
            .iter()
            .find_map(|(&c, d)| label.get(&self.neg(c)).map(|e| d.union(e)))
    }

    /// Applies ⊓, trigger, ∀ and nominal rules once over the graph. Returns
    /// whether anything changed.
    fn deterministic(&self, g: &mut Graph) -> bool {
        let mut changed = false;
        for x in 0..g.nodes.len() {
            if !g.nodes[x].alive {
                continue;
            }
            if let Some(d) = self.label_clash(&g.nodes[x].label) {
                g.set_clash(d);
                return true;
            }
            let mut additions: Vec<(Cid, Deps)> = Vec::new();
            let mut forall: Vec<(Role, Cid, Deps)> = Vec::new();
            let mut nominal_merge: Option<(NodeId, Deps)> = None;
            {
                let label = &g.nodes[x].label;
                for (&c, dc) in label {
                    match self.concept(c) {
                        Concept::And(parts) => {
                            additions.extend(
                                parts
                                    .iter()
                                    .filter(|p| !label.contains_key(p))
                                    .map(|&p| (p, dc.clone())),
                            );
                        }
                        Concept::All(r, d) => forall.push((*r, *d, dc.clone())),
                        Concept::Nominal(i, true) => {
                            let (target, why) = &g.ind_node[*i as usize];
                            if *target != x && nominal_merge.is_none() {
                                nominal_merge = Some((*target, dc.union(why)));
                            }
                        }
                        _ => {}
                    }
                    if let Some(ts) = self.trigger_index.get(&c) {
                        for &t in ts {
                            let trig = &self.triggers[t];
                            if label.contains_key(&trig.consequence) {
                                continue;
                            }
                            let mut why = Deps::default();
                            let fires = trig.atoms.iter().all(|a| match label.get(a) {
                                Some(d) => {
                                    why = why.union(d);
                                    true
                                }
                                None => false,
                            });
                            if fires {
                                additions.push((trig.consequence, why));
                            }
                        }
                    }
                }
            }
            if let Some((target, why)) = nominal_merge {
                g.merge(x, target, why);
                return true;
            }
            for (c, d) in additions {
                changed |= g.add(x, c, d);
            }
            for (r, c, dc) in forall {
                let ys: Vec<(NodeId, Deps)> = g.successors(x, r).map(|(y, d)| (y, d.clone())).collect();
                for (y, de) in ys {
                    changed |= g.add(y, c, dc.union(&de));
                }
            }
        }
        changed
    }

    fn open_branch(&mut self) -> Deps {
        self.branches += 1;
        Deps::single(self.branches - 1)
    }

    /// Finds the first applicable nondeterministic rule and returns its
    /// alternatives, or the clash if it has none.
    fn nondeterministic(&mut self, g: &Graph) -> Option<Outcome> {
        for x in 0..g.nodes.len() {
            if !g.nodes[x].alive {
                continue;
            }
            let label = &g.nodes[x].label;
            for (&c, dc) in label {
                match self.concept(c) {
                    Concept::Or(parts) => {
                        if parts.iter().any(|p| label.contains_key(p)) {
                            continue;
                        }
                        let parts = parts.clone();
                        let why = dc.union(&self.open_branch());
                        // Semantic branching: later alternatives also get
                        // the negations of the earlier ones.
                        let mut alts = Vec::with_capacity(parts.len());
                        for (i, &p) in parts.iter().enumerate() {
                            let mut h = g.clone();
                            h.add(x, p, why.clone());
                            for &q in &parts[..i] {
                                h.add(x, self.neg(q), why.clone());
                            }
                            alts.push(h);
                        }
                        return Some(Outcome::Branch(alts));
                    }
                    Concept::Max(n, r, d) => {
                        let (n, r, d) = (*n, *r, *d);
                        let nd = self.neg(d);
                        let succ: Vec<(NodeId, Deps)> = g.successors(x, r).map(|(y, e)| (y, e.clone())).collect();
                        if let Some((y, e)) = succ.iter().find(|(y, _)| {
                            !g.nodes[*y].label.contains_key(&d) && !g.nodes[*y].label.contains_key(&nd)
                        }) {
                            let why = dc.union(e).union(&self.open_branch());
                            let mut with = g.clone();
                            with.add(*y, d, why.clone());
                            let mut without = g.clone();
                            without.add(*y, nd, why);
                            return Some(Outcome::Branch(vec![with, without]));
                        }
                        let matching: Vec<(NodeId, Deps)> = succ
                            .into_iter()
                            .filter_map(|(y, e)| g.nodes[y].label.get(&d).map(|f| (y, e.union(f))))
                            .collect();
                        if matching.len() as u64 > n as u64 {
                            let mut pairs = Vec::new();
                            let mut reason = dc.clone();
                            for (i, (y, ey)) in matching.iter().enumerate() {
                                reason = reason.union(ey);
                                for (z, ez) in &matching[i + 1..] {
                                    match g.ineq.get(&pair(*y, *z)) {
                                        Some(di) => reason = reason.union(di),
                                        None => pairs.push((*y, *z, ey.union(ez))),
                                    }
                                }
                            }
                            if pairs.is_empty() {
                                return Some(Outcome::Clash(reason));
                            }
                            let b = self.open_branch();
                            let alts = pairs
                                .into_iter()
                                .map(|(y, z, e)| {
                                    let mut h = g.clone();
                                    h.merge(z, y, dc.union(&e).union(&b));
                                    h
                                })
                                .collect();
                            return Some(Outcome::Branch(alts));
                        }
                    }
                    _ => {}
                }
            }
        }
        None
    }

    fn is_blocked(&self, g: &Graph, x: NodeId) -> bool {
        if g.nodes[x].named {
            return false;
        }
        let mut ancestors = Vec::new();
        let mut cur = g.nodes[x].parent;
        while let Some(a) = cur {
            if g.nodes[a].named || !g.nodes[a].alive {
                break;
            }
            ancestors.push(a);
            cur = g.nodes[a].parent;
        }
        let label = &g.nodes[x].label;
        let below = |a: NodeId| label.keys().all(|c| g.nodes[a].label.contains_key(c));
        if ancestors.iter().any(|&a| below(a)) {
            return true;
        }
        ancestors.iter().any(|&a| self.is_blocked(g, a))
    }

    fn new_node(
        &mut self,
        g: &mut Graph,
        parent: NodeId,
        role: Role,
        filler: Cid,
        why: &Deps,
    ) -> Result<NodeId, ReasonerError> {
        self.charge(1)?;
        let mut label: BTreeMap<Cid, Deps> = self.globals.iter().map(|&c| (c, why.clone())).collect();
        label.insert(filler, why.clone());
        let id = g.nodes.len();
        g.nodes.push(Node {
            label,
            succ: BTreeMap::new(),
            parent: Some(parent),
            named: false,
            alive: true,
        });
        g.add_edge(parent, id, role, why.clone());
        Ok(id)
    }

    /// Applies one ∃ or ≥ rule on an unblocked node.
    fn generate(&mut self, g: &mut Graph) -> Result<bool, ReasonerError> {
        for x in 0..g.nodes.len() {
            if !g.nodes[x].alive {
                continue;
            }
            let mut todo: Option<(u32, Role, Cid, Deps)> = None;
            for (&c, dc) in &g.nodes[x].label {
                match *self.concept(c) {
                    Concept::Some(r, d) => {
                        if !g.successors(x, r).any(|(y, _)| g.nodes[y].label.contains_key(&d)) {
                            todo = Some((1, r, d, dc.clone()));
                            break;
                        }
                    }
                    Concept::Min(n, r, d) => {
                        let cands: Vec<NodeId> = g
                            .successors(x, r)
                            .filter(|(y, _)| g.nodes[*y].label.contains_key(&d))
                            .map(|(y, _)| y)
                            .collect();
                        if !has_distinct_subset(g, &cands, n as usize) {
                            todo = Some((n, r, d, dc.clone()));
                            break;
                        }
                    }
                    _ => {}
                }
            }
            let Some((n, r, d, why)) = todo else { continue };
            if self.is_blocked(g, x) {
                continue;
            }
            let mut fresh = Vec::with_capacity(n as usize);
            for _ in 0..n {
                fresh.push(self.new_node(g, x, r, d, &why)?);
            }
            for (i, &a) in fresh.iter().enumerate() {
                for &b in &fresh[i + 1..] {
                    g.add_ineq(a, b, why.clone());
                }
            }
            return Ok(true);
        }
        Ok(false)
    }
}

/// Whether `cands` contains `n` pairwise distinct nodes.
fn has_distinct_subset(g: &Graph, cands: &[NodeId], n: usize) -> bool {
    fn extend(g: &Graph, cands: &[NodeId], chosen: &mut Vec<NodeId>, start: usize, n: usize) -> bool {
        if chosen.len() == n {
            return true;
        }
        for i in start..cands.len() {
            let c = cands[i];
            if chosen.iter().all(|&o| g.distinct(o, c)) {
                chosen.push(c);
                if extend(g, cands, chosen, i + 1, n) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if cands.len() < n {
        return false;
    }
    extend(g, cands, &mut Vec::new(), 0, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ontology;

    fn consistent(text: &str) -> bool {
        Reasoner::default().is_consistent(&parse_ontology(text).unwrap()).unwrap()
    }

    const STATIC: &str = "\
DifferentIndividuals(blockA, blockB, blockC)
SubClassOf(PR2, and(Robot, max(2, holds, Block)))
SubClassOf(and(PR2, exactly(2, holds, Block)), FullHands)
ClassAssertion(stackBot, PR2)
ClassAssertion(blockA, Block)
ClassAssertion(blockB, Block)
ClassAssertion(blockC, Block)
";

    #[test]
    fn empty_ontology_is_consistent() {
        assert!(consistent(""));
    }

    #[test]
    fn tbox_without_individuals_needs_a_non_empty_domain() {
        assert!(!consistent("SubClassOf(Top, some(r, Bottom))"));
        assert!(consistent("SubClassOf(Top, some(r, A))"));
    }

    #[test]
    fn top_below_bottom_is_inconsistent() {
        assert!(!consistent("SubClassOf(Top, Bottom)\nClassAssertion(a, Top)"));
    }

    #[test]
    fn three_held_blocks_violate_the_at_most_restriction() {
        let text = format!(
            "{STATIC}PropertyAssertion(stackBot, holds, blockA)\nPropertyAssertion(stackBot, holds, blockB)\nPropertyAssertion(stackBot, holds, blockC)\n"
        );
        assert!(!consistent(&text));
    }

    #[test]
    fn two_held_blocks_entail_full_hands() {
        let r = Reasoner::default();
        let target = Entailment::Class("stackBot".into(), ClassExpr::named("FullHands"));
        let mut o = parse_ontology(STATIC).unwrap();
        assert!(r.is_consistent(&o).unwrap());
        assert!(!r.entails(&o, &target).unwrap());
        o.insert(Axiom::property_assertion("stackBot", "holds", "blockA"));
        assert!(!r.entails(&o, &target).unwrap());
        o.insert(Axiom::property_assertion("stackBot", "holds", "blockB"));
        assert!(r.entails(&o, &target).unwrap());
    }

    #[test]
    fn instances_of_static_types() {
        let r = Reasoner::default();
        let o = parse_ontology(STATIC).unwrap();
        let robots: Vec<_> = r.instances(&o, &ClassExpr::named("Robot")).unwrap().into_iter().collect();
        assert_eq!(robots, ["stackBot"]);
        let blocks: Vec<_> = r.instances(&o, &ClassExpr::named("Block")).unwrap().into_iter().collect();
        assert_eq!(blocks, ["blockA", "blockB", "blockC"]);
        assert_eq!(r.instances(&o, &ClassExpr::Top).unwrap(), o.individuals());
    }

    #[test]
    fn property_entailment_via_nominals() {
        let r = Reasoner::default();
        let o = parse_ontology("ClassAssertion(a, some(r, one(b)))").unwrap();
        assert!(r.entails(&o, &Entailment::Property("a".into(), "r".into(), "b".into())).unwrap());
        assert!(!r.entails(&o, &Entailment::Property("b".into(), "r".into(), "a".into())).unwrap());
    }

    #[test]
    fn inconsistent_ontology_entails_everything() {
        let r = Reasoner::default();
        let o = parse_ontology("ClassAssertion(a, Bottom)").unwrap();
        assert!(r.entails(&o, &Entailment::Class("zzz".into(), ClassExpr::named("Q"))).unwrap());
    }

    #[test]
    fn cyclic_tbox_terminates_by_blocking() {
        assert!(consistent("SubClassOf(A, some(r, A))\nClassAssertion(a, A)"));
        assert!(consistent("SubClassOf(Top, some(r, Top))\nClassAssertion(a, Top)"));
        assert!(!consistent(
            "SubClassOf(A, some(r, A))\nSubClassOf(A, all(r, B))\nSubClassOf(B, Bottom)\nClassAssertion(a, A)"
        ));
    }

    #[test]
    fn budget_is_reported() {
        let r = Reasoner::new(ReasonerConfig {
            node_budget: 2,
            memoize: false,
        });
        let o = parse_ontology("ClassAssertion(a, min(5, r, A))").unwrap();
        assert_eq!(r.is_consistent(&o), Err(ReasonerError::ResourceLimit { budget: 2 }));
    }

    #[test]
    fn same_name_inequality_is_a_clash() {
        assert!(!consistent("DifferentIndividuals(a, a)"));
    }
}
