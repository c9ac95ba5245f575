//! Justifications relative to a background ontology.
//!
//! A justification of `α` over a candidate set `𝐅` is a minimal `J ⊆ 𝐅`
//! with `J ∪ O ⊨ α`. One justification is found black-box style by growing a
//! prefix of the candidates until the entailment holds and then deleting
//! candidates one at a time; all of them are enumerated with Reiter's
//! hitting-set tree on top of that.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, OnceLock};

use fixedbitset::FixedBitSet;
use omplan_dl::{Axiom, Entailment, Reasoner, ReasonerConfig, ReasonerError};
use rayon::prelude::*;

pub const DEFAULT_HST_NODE_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JustifyError {
    #[error("the static ontology is inconsistent, so every state would be inconsistent")]
    StaticOntologyInconsistent,
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error("hitting-set tree for `{target}` exceeded {limit} nodes; the justification set would be incomplete")]
    HstLimit { target: String, limit: usize },
}

/// A justification as a sorted list of fluent axioms.
pub type Justification = Vec<Axiom>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JustifyConfig {
    pub hst_node_limit: usize,
    pub reasoner: ReasonerConfig,
}

impl Default for JustifyConfig {
    fn default() -> Self {
        Self {
            hst_node_limit: DEFAULT_HST_NODE_LIMIT,
            reasoner: ReasonerConfig {
                memoize: false,
                ..ReasonerConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct JustifyStats {
    /// Entailment questions asked, including memo hits.
    pub queries: u64,
    /// Questions that reached the tableau.
    pub reasoner_calls: u64,
    pub hst_nodes: u64,
}

/// Justification search over a fixed candidate set and background ontology.
/// Answers are memoised per (target, subset) and shared between targets and
/// threads.
pub struct Justifier {
    background: Vec<Axiom>,
    candidates: Vec<Axiom>,
    reasoner: Reasoner,
    config: JustifyConfig,
    memo: Mutex<HashMap<(Entailment, FixedBitSet), bool>>,
    bottom: OnceLock<Result<Vec<FixedBitSet>, JustifyError>>,
    queries: AtomicU64,
    calls: AtomicU64,
    hst_nodes: AtomicU64,
}

impl Justifier {
    /// `candidates` are deduplicated and sorted; that order is the canonical
    /// search order.
    pub fn new(background: Vec<Axiom>, mut candidates: Vec<Axiom>, config: JustifyConfig) -> Self {
        candidates.sort();
        candidates.dedup();
        Self {
            background,
            candidates,
            reasoner: Reasoner::new(config.reasoner),
            config,
            memo: Mutex::new(HashMap::new()),
            bottom: OnceLock::new(),
            queries: AtomicU64::new(0),
            calls: AtomicU64::new(0),
            hst_nodes: AtomicU64::new(0),
        }
    }

    pub fn candidates(&self) -> &[Axiom] {
        &self.candidates
    }

    pub fn stats(&self) -> JustifyStats {
        JustifyStats {
            queries: self.queries.load(Ordering::Relaxed),
            reasoner_calls: self.calls.load(Ordering::Relaxed),
            hst_nodes: self.hst_nodes.load(Ordering::Relaxed),
        }
    }

    fn full(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.candidates.len());
        s.insert_range(..);
        s
    }

    fn to_axioms(&self, set: &FixedBitSet) -> Justification {
        set.ones().map(|i| self.candidates[i].clone()).collect()
    }

    /// Index set of a list of candidate axioms; `None` if one is not a
    /// candidate.
    pub fn index_set(&self, axioms: &[Axiom]) -> Option<FixedBitSet> {
        let mut s = FixedBitSet::with_capacity(self.candidates.len());
        for a in axioms {
            s.insert(self.candidates.binary_search(a).ok()?);
        }
        Some(s)
    }

    /// `set ∪ O ⊨ target`.
    pub fn entails(&self, set: &FixedBitSet, target: &Entailment) -> Result<bool, ReasonerError> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        let key = (target.clone(), set.clone());
        if let Some(&hit) = self.memo.lock().expect("memo poisoned").get(&key) {
            return Ok(hit);
        }
        self.calls.fetch_add(1, Ordering::Relaxed);
        let axioms = self.background.iter().chain(set.ones().map(|i| &self.candidates[i]));
        let answer = self.reasoner.entails_axioms(axioms, target)?;
        self.memo.lock().expect("memo poisoned").insert(key, answer);
        Ok(answer)
    }

    /// One minimal subset of `within` entailing `target`, or `None` if
    /// `within` itself does not entail it.
    pub fn one_justification_within(
        &self,
        within: &FixedBitSet,
        target: &Entailment,
    ) -> Result<Option<FixedBitSet>, ReasonerError> {
        let empty = FixedBitSet::with_capacity(self.candidates.len());
        if self.entails(&empty, target)? {
            return Ok(Some(empty));
        }
        if !self.entails(within, target)? {
            return Ok(None);
        }
        let order: Vec<usize> = within.ones().collect();
        let mut k = 1;
        let mut set = loop {
            let k_now = k.min(order.len());
            let mut prefix = empty.clone();
            for &i in &order[..k_now] {
                prefix.insert(i);
            }
            if k_now == order.len() || self.entails(&prefix, target)? {
                break prefix;
            }
            k *= 2;
        };
        let members: Vec<usize> = set.ones().collect();
        for &i in members.iter().rev() {
            set.set(i, false);
            if !self.entails(&set, target)? {
                set.insert(i);
            }
        }
        Ok(Some(set))
    }

    pub fn one_justification(&self, target: &Entailment) -> Result<Option<Justification>, ReasonerError> {
        Ok(self.one_justification_within(&self.full(), target)?.map(|s| self.to_axioms(&s)))
    }

    fn all_sets(&self, target: &Entailment) -> Result<Vec<FixedBitSet>, JustifyError> {
        let mut found: Vec<FixedBitSet> = Vec::new();
        let mut dead: Vec<FixedBitSet> = Vec::new();
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        let mut queue: VecDeque<FixedBitSet> = VecDeque::new();
        let root = FixedBitSet::with_capacity(self.candidates.len());
        seen.insert(root.clone());
        queue.push_back(root);
        let full = self.full();
        let mut nodes = 0usize;
        while let Some(path) = queue.pop_front() {
            nodes += 1;
            self.hst_nodes.fetch_add(1, Ordering::Relaxed);
            if nodes > self.config.hst_node_limit {
                return Err(JustifyError::HstLimit {
                    target: target.to_string(),
                    limit: self.config.hst_node_limit,
                });
            }
            let label = match found.iter().find(|j| j.is_disjoint(&path)) {
                Some(j) => j.clone(),
                None => {
                    let mut remaining = full.clone();
                    remaining.difference_with(&path);
                    match self.one_justification_within(&remaining, target)? {
                        Some(j) => {
                            found.push(j.clone());
                            j
                        }
                        None => {
                            dead.push(path);
                            continue;
                        }
                    }
                }
            };
            for i in label.ones() {
                let mut child = path.clone();
                child.insert(i);
                if seen.contains(&child) || dead.iter().any(|d| d.is_subset(&child)) {
                    continue;
                }
                seen.insert(child.clone());
                queue.push_back(child);
            }
        }
        found.sort_by(|a, b| a.count_ones(..).cmp(&b.count_ones(..)).then_with(|| a.ones().cmp(b.ones())));
        Ok(found)
    }

    /// `Just(α)`: every justification, in canonical order (size, then
    /// lexicographic).
    pub fn all_justifications(&self, target: &Entailment) -> Result<Vec<Justification>, JustifyError> {
        Ok(self.all_sets(target)?.iter().map(|s| self.to_axioms(s)).collect())
    }

    fn bottom_sets(&self) -> Result<&[FixedBitSet], JustifyError> {
        self.bottom
            .get_or_init(|| {
                let empty = FixedBitSet::with_capacity(self.candidates.len());
                if self.entails(&empty, &Entailment::Inconsistency)? {
                    return Err(JustifyError::StaticOntologyInconsistent);
                }
                self.all_sets(&Entailment::Inconsistency)
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    /// `Just_⊥`: the minimal candidate subsets inconsistent with the
    /// background.
    pub fn just_bottom(&self) -> Result<Vec<Justification>, JustifyError> {
        Ok(self.bottom_sets()?.iter().map(|s| self.to_axioms(s)).collect())
    }

    /// `Just_α = Just(α) \ Just_⊥`.
    pub fn just_alpha(&self, target: &Entailment) -> Result<Vec<Justification>, JustifyError> {
        let bottom = self.bottom_sets()?;
        Ok(self
            .all_sets(target)?
            .iter()
            .filter(|j| !bottom.contains(j))
            .map(|s| self.to_axioms(s))
            .collect())
    }

    /// `just_alpha` for several targets, spread over `jobs` threads. The
    /// result is in the order of `targets` and does not depend on `jobs`.
    pub fn just_alpha_many(&self, targets: &[Entailment], jobs: usize) -> Result<Vec<Vec<Justification>>, JustifyError> {
        self.bottom_sets()?;
        if jobs <= 1 {
            return targets.iter().map(|t| self.just_alpha(t)).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| targets.par_iter().map(|t| self.just_alpha(t)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use omplan_dl::{parse_ontology, ClassExpr};

    const STATIC: &str = "
DifferentIndividuals(blockA, blockB, blockC)
SubClassOf(PR2, and(Robot, max(2, holds, Block)))
SubClassOf(and(PR2, exactly(2, holds, Block)), FullHands)
ClassAssertion(stackBot, PR2)
ClassAssertion(blockA, Block)
ClassAssertion(blockB, Block)
ClassAssertion(blockC, Block)
";

    fn holds(b: &str) -> Axiom {
        Axiom::property_assertion("stackBot", "holds", b)
    }

    fn blocks_justifier() -> Justifier {
        let o = parse_ontology(STATIC).unwrap();
        Justifier::new(
            o.axioms().to_vec(),
            vec![holds("blockA"), holds("blockB"), holds("blockC")],
            JustifyConfig::default(),
        )
    }

    fn full_hands() -> Entailment {
        Entailment::Class("stackBot".into(), ClassExpr::named("FullHands"))
    }

    #[test]
    fn full_hands_has_the_three_pairs() {
        let j = blocks_justifier();
        let one = j.one_justification(&full_hands()).unwrap().unwrap();
        assert_eq!(one.len(), 2);
        assert_eq!(
            j.all_justifications(&full_hands()).unwrap(),
            [
                vec![holds("blockA"), holds("blockB")],
                vec![holds("blockA"), holds("blockC")],
                vec![holds("blockB"), holds("blockC")],
            ]
        );
        assert_eq!(j.just_alpha(&full_hands()).unwrap().len(), 3);
    }

    #[test]
    fn inconsistency_needs_all_three() {
        let j = blocks_justifier();
        assert_eq!(
            j.just_bottom().unwrap(),
            [vec![holds("blockA"), holds("blockB"), holds("blockC")]]
        );
    }

    #[test]
    fn trivial_targets() {
        let j = blocks_justifier();
        let robot = Entailment::Class("stackBot".into(), ClassExpr::named("Robot"));
        assert_eq!(j.one_justification(&robot).unwrap(), Some(vec![]));
        assert_eq!(j.just_alpha(&robot).unwrap(), [Vec::<Axiom>::new()]);
        // Only the inconsistent triple entails it, and that is filtered out.
        let via_bottom = Entailment::Class("blockA".into(), ClassExpr::named("Robot"));
        assert_eq!(j.all_justifications(&via_bottom).unwrap(), j.just_bottom().unwrap());
        assert!(j.just_alpha(&via_bottom).unwrap().is_empty());

        let o = parse_ontology(STATIC).unwrap();
        let consistent = Justifier::new(o.axioms().to_vec(), vec![holds("blockA")], JustifyConfig::default());
        assert_eq!(consistent.one_justification(&via_bottom).unwrap(), None);
        assert!(consistent.all_justifications(&via_bottom).unwrap().is_empty());

        let none = Justifier::new(vec![], vec![], JustifyConfig::default());
        assert!(none.just_bottom().unwrap().is_empty());
        assert!(none.all_justifications(&full_hands()).unwrap().is_empty());
    }

    #[test]
    fn assertion_only_fluents_are_never_inconsistent() {
        let o = parse_ontology("SubClassOf(A, B)\nClassAssertion(a, A)").unwrap();
        let fluents = vec![
            Axiom::class_assertion("a", ClassExpr::named("B")),
            Axiom::class_assertion("b", ClassExpr::named("A")),
            Axiom::property_assertion("a", "r", "b"),
        ];
        let j = Justifier::new(o.axioms().to_vec(), fluents, JustifyConfig::default());
        assert!(j.just_bottom().unwrap().is_empty());
    }

    #[test]
    fn entailment_only_through_inconsistency_is_filtered() {
        let o = parse_ontology("DisjointClasses(A, B)").unwrap();
        let fluents = vec![
            Axiom::class_assertion("a", ClassExpr::named("A")),
            Axiom::class_assertion("a", ClassExpr::named("B")),
        ];
        let j = Justifier::new(o.axioms().to_vec(), fluents.clone(), JustifyConfig::default());
        let target = Entailment::Class("a".into(), ClassExpr::named("C"));
        assert_eq!(j.all_justifications(&target).unwrap(), [fluents]);
        assert!(j.just_alpha(&target).unwrap().is_empty());
    }

    #[test]
    fn two_singleton_inconsistencies() {
        let o = parse_ontology("SubClassOf(A, Bottom)").unwrap();
        let fluents = vec![
            Axiom::class_assertion("a", ClassExpr::named("A")),
            Axiom::class_assertion("b", ClassExpr::named("A")),
            Axiom::class_assertion("a", ClassExpr::named("C")),
        ];
        let j = Justifier::new(o.axioms().to_vec(), fluents.clone(), JustifyConfig::default());
        assert_eq!(j.just_bottom().unwrap(), [vec![fluents[0].clone()], vec![fluents[1].clone()]]);
    }

    #[test]
    fn static_inconsistency_is_an_error() {
        let o = parse_ontology("ClassAssertion(a, Bottom)").unwrap();
        let j = Justifier::new(o.axioms().to_vec(), vec![], JustifyConfig::default());
        assert_eq!(j.just_bottom(), Err(JustifyError::StaticOntologyInconsistent));
    }

    #[test]
    fn node_limit_is_reported() {
        let o = parse_ontology(STATIC).unwrap();
        let config = JustifyConfig {
            hst_node_limit: 2,
            ..JustifyConfig::default()
        };
        let j = Justifier::new(
            o.axioms().to_vec(),
            vec![holds("blockA"), holds("blockB"), holds("blockC")],
            config,
        );
        assert!(matches!(j.all_justifications(&full_hands()), Err(JustifyError::HstLimit { .. })));
    }

    #[test]
    fn parallel_results_match_sequential() {
        let j = blocks_justifier();
        let targets = vec![
            full_hands(),
            Entailment::Class("stackBot".into(), ClassExpr::named("Robot")),
            Entailment::Property("stackBot".into(), "holds".into(), "blockA".into()),
        ];
        let seq = j.just_alpha_many(&targets, 1).unwrap();
        let fresh = blocks_justifier();
        assert_eq!(fresh.just_alpha_many(&targets, 3).unwrap(), seq);
        assert_eq!(seq[2], [vec![holds("blockA")]]);
    }
}
