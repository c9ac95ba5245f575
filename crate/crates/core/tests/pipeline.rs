mod common;

use omplan_core::compile::{compile, CompileOptions};
use omplan_core::fixtures;
use omplan_core::interface::OmSpec;
use omplan_core::oracle::Oracle;
use omplan_core::pddl::{emit_domain, emit_problem, parse_spec};
use omplan_core::planner::{grounded_actions, solve, Limits, Outcome};
use proptest::prelude::*;

use common::{bfs_optimum, Bfs};

fn plan_of(outcome: Outcome) -> Vec<String> {
    match outcome {
        Outcome::Plan(p) => p.iter().map(ToString::to_string).collect(),
        other => panic!("no plan: {other:?}"),
    }
}

#[test]
fn in_memory_and_reparsed_specs_agree() {
    for fx in fixtures::all() {
        let om = fx.load().unwrap();
        for block_inconsistent in [false, true] {
            let opts = CompileOptions {
                block_inconsistent,
                ..CompileOptions::default()
            };
            let c = compile(&om, &opts).unwrap();
            let reparsed = parse_spec(&emit_domain(&c.spec.domain), &emit_problem(&c.spec.problem)).unwrap();
            let a = solve(&c.spec, &Limits::default());
            let b = solve(&reparsed, &Limits::default());
            assert_eq!(a.outcome, b.outcome, "{} block={block_inconsistent}", fx.name);
            assert_eq!(a.stats.expanded, b.stats.expanded, "{}", fx.name);
        }
    }
}

#[test]
fn search_is_deterministic() {
    let om = fixtures::blocksworld(4).load().unwrap();
    let c = compile(&om, &CompileOptions::default()).unwrap();
    let first = plan_of(solve(&c.spec, &Limits::default()).outcome);
    for _ in 0..3 {
        let again = compile(&om, &CompileOptions::default()).unwrap();
        assert_eq!(plan_of(solve(&again.spec, &Limits::default()).outcome), first);
    }
}

#[test]
fn two_step_tower_from_the_table() {
    let fx = fixtures::blocksworld(3);
    let problem = "(define (problem table-3) (:domain blocksworld-om)
  (:objects stackBot blockA blockB blockC)
  (:init (robot stackBot) (block blockA) (block blockB) (block blockC)
    (onTable blockA) (onTable blockB) (onTable blockC)
    (clear blockA) (clear blockB) (clear blockC))
  (:goal (on blockA blockB)))";
    let om = OmSpec::from_texts(&fx.domain, problem, &fx.ontology, &fx.fluents, &fx.queries).unwrap();
    let c = compile(&om, &CompileOptions::default()).unwrap();
    let plan = plan_of(solve(&c.spec, &Limits::default()).outcome);
    assert_eq!(plan, ["(pickup stackBot blockA)", "(stack stackBot blockA blockB)"]);
    let parsed = omplan_core::pddl::parse_plan(&plan.join("\n")).unwrap();
    assert!(Oracle::new(&om).unwrap().validate_plan(&parsed).unwrap().is_valid());
}

#[test]
fn blocksworld_ground_action_count() {
    // One robot, n blocks: n pickups and putdowns, n² stacks and unstacks.
    // Stacking a block onto itself is not excluded statically.
    for n in 2..=4 {
        let om = fixtures::blocksworld(n).load().unwrap();
        let c = compile(&om, &CompileOptions::default()).unwrap();
        assert_eq!(grounded_actions(&c.spec).len(), 2 * n + 2 * n * n, "{n} blocks");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Uniform-cost search returns plans as short as plain breadth-first
    /// search, for random conjunctive goals over the tower fixture.
    #[test]
    fn planner_is_optimal(picks in prop::collection::vec((0usize..3, 0usize..3, any::<bool>()), 1..3)) {
        let fx = fixtures::blocksworld(3);
        let blocks = fixtures::block_names(3);
        let goal: Vec<String> = picks
            .iter()
            .map(|&(i, j, on)| if on && i != j {
                format!("(on {} {})", blocks[i], blocks[j])
            } else {
                format!("(onTable {})", blocks[i])
            })
            .collect();
        let problem = fx.problem.replace(
            &fx.problem[fx.problem.find("(:goal").unwrap()..],
            &format!("(:goal (and {})))\n", goal.join(" ")),
        );
        let om = OmSpec::from_texts(&fx.domain, &problem, &fx.ontology, &fx.fluents, &fx.queries).unwrap();
        let c = compile(&om, &CompileOptions::default()).unwrap();
        let outcome = solve(&c.spec, &Limits::default()).outcome;
        match (bfs_optimum(&c.spec, 100_000), outcome) {
            (Bfs::Length(n), Outcome::Plan(p)) => prop_assert_eq!(n, p.len()),
            (Bfs::Unreachable, Outcome::Unsolvable) => {}
            (_, other) => prop_assert!(false, "disagreement: {:?}", other),
        }
    }
}
