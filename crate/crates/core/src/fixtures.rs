//! Generated benchmark specifications.
//!
//! * `blocksworld(n)`: a two-handed robot (`stackBot`, a `PR2`) moves `n`
//!   blocks from a tower to the reversed tower. It may only pick up while its
//!   hands are not full, which is a query against the ontology.
//! * `pipes(n)`: a robot walks along `n` waypoints, closing valves so that a
//!   tank becomes safe before it inspects the last waypoint. Closing both
//!   valves makes the ontology inconsistent.
//! * `juggle()`: blocksworld with three blocks where the only way to reach
//!   the goal passes through a state that holds three blocks, which the
//!   ontology forbids.
//! * `two_robots()`: two `PR2` robots sharing two blocks.
//!
//! The same texts are checked in under `fixtures/` for use with the command
//! line tool.

use std::fmt::Write as _;
use std::path::Path;

use crate::interface::{LoadError, OmSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub domain: String,
    pub problem: String,
    pub ontology: String,
    pub fluents: String,
    pub queries: String,
}

pub const FILES: [&str; 5] = ["domain.pddl", "problem.pddl", "ontology.txt", "fluents.txt", "queries.txt"];

impl Fixture {
    pub fn load(&self) -> Result<OmSpec, LoadError> {
        OmSpec::from_texts(&self.domain, &self.problem, &self.ontology, &self.fluents, &self.queries)
    }

    fn texts(&self) -> [&str; 5] {
        [&self.domain, &self.problem, &self.ontology, &self.fluents, &self.queries]
    }

    pub fn write_to(&self, root: &Path) -> std::io::Result<()> {
        let dir = root.join(&self.name);
        std::fs::create_dir_all(&dir)?;
        for (file, text) in FILES.iter().zip(self.texts()) {
            std::fs::write(dir.join(file), text)?;
        }
        Ok(())
    }

    pub fn read_from(root: &Path, name: &str) -> std::io::Result<Self> {
        let dir = root.join(name);
        let read = |f: &str| std::fs::read_to_string(dir.join(f));
        Ok(Self {
            name: name.to_string(),
            domain: read(FILES[0])?,
            problem: read(FILES[1])?,
            ontology: read(FILES[2])?,
            fluents: read(FILES[3])?,
            queries: read(FILES[4])?,
        })
    }
}

pub fn block_names(n: usize) -> Vec<String> {
    assert!(n <= 26, "at most 26 blocks");
    (0..n).map(|i| format!("block{}", (b'A' + i as u8) as char)).collect()
}

const FULL_HANDS_QUERY: &str = "\
PREDICATE: fullHands
VARIABLES: ?r
TYPE_SPECIFICATION:
   Robot(?r)
QUERY:
   FullHands(?r)
";

const BLOCKS_ACTIONS: &str = "
  (:action putdown
    :parameters (?r ?b)
    :precondition (holds ?r ?b)
    :effect (and (onTable ?b) (clear ?b) (not (holds ?r ?b))))
  (:action stack
    :parameters (?r ?b ?c)
    :precondition (and (holds ?r ?b) (clear ?c))
    :effect (and (on ?b ?c) (clear ?b) (not (holds ?r ?b)) (not (clear ?c))))
  (:action unstack
    :parameters (?r ?b ?c)
    :precondition (and (robot ?r) (on ?b ?c) (clear ?b) (not (fullHands ?r)))
    :effect (and (holds ?r ?b) (clear ?c) (not (on ?b ?c)) (not (clear ?b))))";

fn blocks_domain(name: &str, guarded_pickup: bool, extra: &str) -> String {
    let guard = if guarded_pickup { " (not (fullHands ?r))" } else { "" };
    format!(
        "(define (domain {name})
  (:requirements :strips :negative-preconditions :equality)
  (:predicates (robot ?r) (block ?b) (onTable ?b) (on ?b ?c) (clear ?b) (holds ?r ?b) (fullHands ?r){extra_pred})
  (:action pickup
    :parameters (?r ?b)
    :precondition (and (robot ?r) (block ?b) (clear ?b) (onTable ?b){guard})
    :effect (and (holds ?r ?b) (not (onTable ?b)) (not (clear ?b)))){BLOCKS_ACTIONS}{extra})
",
        extra_pred = if extra.is_empty() { "" } else { " (done)" },
    )
}

fn blocks_ontology(robots: &[&str], blocks: &[String]) -> String {
    let mut o = String::new();
    if blocks.len() > 1 {
        let _ = writeln!(o, "DifferentIndividuals({})", blocks.join(", "));
    }
    o.push_str("SubClassOf(PR2, and(Robot, max(2, holds, Block)))\n");
    o.push_str("SubClassOf(and(PR2, exactly(2, holds, Block)), FullHands)\n");
    for r in robots {
        let _ = writeln!(o, "ClassAssertion({r}, PR2)");
    }
    for b in blocks {
        let _ = writeln!(o, "ClassAssertion({b}, Block)");
    }
    o
}

fn blocks_fluents(robots: &[&str], blocks: &[String]) -> String {
    let mut f = String::new();
    for x in robots.iter().copied().chain(blocks.iter().map(String::as_str)) {
        let _ = writeln!(f, "OBJECT {x} -> {x}");
    }
    f.push_str("\nPREDICATE holds(_,_) -> holds\n");
    f
}

fn blocks_problem(name: &str, domain: &str, robots: &[&str], blocks: &[String], init_extra: &str, goal: &str) -> String {
    let mut p = format!("(define (problem {name})\n  (:domain {domain})\n  (:objects");
    for x in robots.iter().copied().chain(blocks.iter().map(String::as_str)) {
        let _ = write!(p, " {x}");
    }
    p.push_str(")\n  (:init");
    for r in robots {
        let _ = write!(p, "\n    (robot {r})");
    }
    for b in blocks {
        let _ = write!(p, "\n    (block {b})");
    }
    p.push_str(init_extra);
    let _ = write!(p, ")\n  (:goal {goal}))\n");
    p
}

/// Tower `blockA` (bottom) … last (top); goal is the reversed tower.
pub fn blocksworld(n: usize) -> Fixture {
    assert!(n >= 2, "blocksworld needs at least two blocks");
    let blocks = block_names(n);
    let robots = ["stackBot"];
    let mut init = format!("\n    (onTable {})", blocks[0]);
    for w in blocks.windows(2) {
        let _ = write!(init, "\n    (on {} {})", w[1], w[0]);
    }
    let _ = write!(init, "\n    (clear {})", blocks[n - 1]);
    let goal_atoms: Vec<String> = blocks.windows(2).map(|w| format!("(on {} {})", w[0], w[1])).collect();
    let goal = format!("(and {})", goal_atoms.join(" "));
    Fixture {
        name: format!("blocksworld-{n}"),
        domain: blocks_domain("blocksworld-om", true, ""),
        problem: blocks_problem(&format!("reverse-{n}"), "blocksworld-om", &robots, &blocks, &init, &goal),
        ontology: blocks_ontology(&robots, &blocks),
        fluents: blocks_fluents(&robots, &blocks),
        queries: FULL_HANDS_QUERY.to_string(),
    }
}

/// Three blocks on the table; the goal `done` needs all three held at once.
pub fn juggle() -> Fixture {
    let blocks = block_names(3);
    let robots = ["stackBot"];
    let triple = "
  (:action tripleStack
    :parameters (?r ?a ?b ?c)
    :precondition (and (holds ?r ?a) (holds ?r ?b) (holds ?r ?c)
                       (not (= ?a ?b)) (not (= ?a ?c)) (not (= ?b ?c)))
    :effect (and (done) (on ?b ?a) (on ?c ?b) (clear ?c) (onTable ?a)
                 (not (holds ?r ?a)) (not (holds ?r ?b)) (not (holds ?r ?c))))";
    let mut init = String::new();
    for b in &blocks {
        let _ = write!(init, "\n    (onTable {b})\n    (clear {b})");
    }
    Fixture {
        name: "juggle".into(),
        domain: blocks_domain("blocksworld-juggle", false, triple),
        problem: blocks_problem("juggle", "blocksworld-juggle", &robots, &blocks, &init, "(done)"),
        ontology: blocks_ontology(&robots, &blocks),
        fluents: blocks_fluents(&robots, &blocks),
        queries: FULL_HANDS_QUERY.to_string(),
    }
}

/// Two robots, two blocks on the table; the goal is a two-block tower.
pub fn two_robots() -> Fixture {
    let blocks = block_names(2);
    let robots = ["stackBot", "helperBot"];
    let mut init = String::new();
    for b in &blocks {
        let _ = write!(init, "\n    (onTable {b})\n    (clear {b})");
    }
    Fixture {
        name: "two-robots".into(),
        domain: blocks_domain("blocksworld-om", true, ""),
        problem: blocks_problem("two-robots", "blocksworld-om", &robots, &blocks, &init, "(on blockA blockB)"),
        ontology: blocks_ontology(&robots, &blocks),
        fluents: blocks_fluents(&robots, &blocks),
        queries: FULL_HANDS_QUERY.to_string(),
    }
}

const PIPES_DOMAIN: &str = "(define (domain pipes-om)
  (:requirements :strips :negative-preconditions)
  (:constants tank1)
  (:predicates (at ?w) (connected ?v ?w) (valveAt ?v ?w) (closed ?v) (safe ?t) (inspected ?w))
  (:action move
    :parameters (?from ?to)
    :precondition (and (at ?from) (connected ?from ?to))
    :effect (and (at ?to) (not (at ?from))))
  (:action close
    :parameters (?v ?w)
    :precondition (and (at ?w) (valveAt ?v ?w) (not (closed ?v)))
    :effect (closed ?v))
  (:action open
    :parameters (?v ?w)
    :precondition (and (at ?w) (valveAt ?v ?w) (closed ?v))
    :effect (not (closed ?v)))
  (:action inspect
    :parameters (?w)
    :precondition (and (at ?w) (safe tank1))
    :effect (inspected ?w)))
";

const PIPES_ONTOLOGY: &str = "\
SubClassOf(Valve, or(OpenValve, ClosedValve))
DisjointClasses(OpenValve, ClosedValve)
ClassAssertion(v1, Valve)
ClassAssertion(v2, Valve)
DifferentIndividuals(v1, v2)
ClassAssertion(tank1, Tank)
PropertyAssertion(tank1, feedsFrom, v1)
PropertyAssertion(tank1, feedsFrom, v2)
SubClassOf(Tank, max(2, feedsFrom, Top))
SubClassOf(and(Tank, max(1, feedsFrom, OpenValve)), SafeTank)
ClassAssertion(pump1, and(some(feeds, OpenValve), max(2, feeds, Top)))
PropertyAssertion(pump1, feeds, v1)
PropertyAssertion(pump1, feeds, v2)
";

const PIPES_FLUENTS: &str = "\
OBJECT v1 -> v1
OBJECT v2 -> v2
OBJECT tank1 -> tank1
OBJECT pump1 -> pump1

PREDICATE closed(_) -> ClosedValve
";

const PIPES_QUERY: &str = "\
PREDICATE: safe
VARIABLES: ?t
TYPE_SPECIFICATION:
   Tank(?t)
QUERY:
   SafeTank(?t)
";

/// Waypoints `wp1 … wpn` in a line. Valve `v1` sits at `wp2`, `v2` at the
/// second to last waypoint; the robot starts at `wp1` and must inspect
/// `wpn` while the tank is safe.
pub fn pipes(n: usize) -> Fixture {
    assert!(n >= 3, "pipes needs at least three waypoints");
    let wps: Vec<String> = (1..=n).map(|i| format!("wp{i}")).collect();
    let mut p = String::from("(define (problem pipes-line)\n  (:domain pipes-om)\n  (:objects");
    for w in &wps {
        let _ = write!(p, " {w}");
    }
    p.push_str(" v1 v2 pump1)\n  (:init\n    (at wp1)");
    for w in wps.windows(2) {
        let _ = write!(p, "\n    (connected {} {})\n    (connected {} {})", w[0], w[1], w[1], w[0]);
    }
    let _ = write!(p, "\n    (valveAt v1 wp2)\n    (valveAt v2 {})", wps[n - 2]);
    let _ = write!(p, ")\n  (:goal (and (safe tank1) (inspected {}))))\n", wps[n - 1]);
    Fixture {
        name: format!("pipes-{n}"),
        domain: PIPES_DOMAIN.to_string(),
        problem: p,
        ontology: PIPES_ONTOLOGY.to_string(),
        fluents: PIPES_FLUENTS.to_string(),
        queries: PIPES_QUERY.to_string(),
    }
}

/// Every checked-in fixture.
pub fn all() -> Vec<Fixture> {
    let mut out: Vec<Fixture> = (2..=6).map(blocksworld).collect();
    out.extend((3..=8).map(pipes));
    out.push(juggle());
    out.push(two_robots());
    out
}
