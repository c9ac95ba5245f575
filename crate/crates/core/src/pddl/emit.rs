//! PDDL text output. Everything is written in stored order, so emitting and
//! re-parsing gives back a structurally identical specification.

use std::fmt::Write;

use super::model::*;

const WIDTH: usize = 88;

/// Writes `f` inline if it fits, otherwise one sub-formula per line.
fn pretty(f: &Formula, indent: usize, out: &mut String) {
    let flat = f.to_string();
    if indent + flat.len() <= WIDTH {
        out.push_str(&flat);
        return;
    }
    let pad = " ".repeat(indent + 2);
    match f {
        Formula::And(gs) | Formula::Or(gs) if !gs.is_empty() => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for g in gs {
                out.push('\n');
                out.push_str(&pad);
                pretty(g, indent + 2, out);
            }
            out.push(')');
        }
        Formula::Not(g) => {
            out.push_str("(not ");
            pretty(g, indent + 5, out);
            out.push(')');
        }
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let head = if matches!(f, Formula::Exists(..)) { "exists" } else { "forall" };
            let vars: Vec<String> = vs.iter().map(|v| format!("?{v}")).collect();
            let _ = write!(out, "({head} ({})\n{pad}", vars.join(" "));
            pretty(g, indent + 2, out);
            out.push(')');
        }
        _ => out.push_str(&flat),
    }
}

fn pretty_string(f: &Formula, indent: usize) -> String {
    let mut s = String::new();
    pretty(f, indent, &mut s);
    s
}

pub fn emit_domain(d: &Domain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", d.name);
    if !d.requirements.is_empty() {
        let _ = writeln!(out, "  (:requirements {})", d.requirements.join(" "));
    }
    if !d.constants.is_empty() {
        let _ = writeln!(out, "  (:constants {})", d.constants.join(" "));
    }
    if !d.predicates.is_empty() {
        out.push_str("  (:predicates");
        for p in &d.predicates {
            let _ = write!(out, "\n    ({}", p.name);
            for i in 0..p.arity {
                let _ = write!(out, " ?x{i}");
            }
            out.push(')');
        }
        out.push_str(")\n");
    }
    for a in &d.actions {
        let _ = writeln!(out, "  (:action {}", a.name);
        let params: Vec<String> = a.params.iter().map(|v| format!("?{v}")).collect();
        let _ = writeln!(out, "    :parameters ({})", params.join(" "));
        let _ = writeln!(out, "    :precondition {}", pretty_string(&a.pre, 18));
        let mut effects: Vec<String> = a.add.iter().map(|e| e.to_string()).collect();
        effects.extend(a.del.iter().map(|e| format!("(not {e})")));
        let _ = writeln!(out, "    :effect (and{}{}))", if effects.is_empty() { "" } else { " " }, effects.join(" "));
    }
    for r in &d.rules {
        let _ = writeln!(out, "  (:derived {}\n    {})", r.head, pretty_string(&r.body, 4));
    }
    out.push_str(")\n");
    out
}

pub fn emit_problem(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", p.name);
    let _ = writeln!(out, "  (:domain {})", p.domain_name);
    if !p.objects.is_empty() {
        let _ = writeln!(out, "  (:objects {})", p.objects.join(" "));
    }
    out.push_str("  (:init");
    for a in &p.init {
        let _ = write!(out, "\n    {a}");
    }
    out.push_str(")\n");
    let _ = writeln!(out, "  (:goal {}))", pretty_string(&p.goal, 9));
    out
}

pub fn emit_plan(plan: &[PlanStep]) -> String {
    plan.iter().map(|s| format!("{s}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::super::parse::{parse_domain, parse_problem};
    use super::*;

    #[test]
    fn round_trip_with_rules_and_quantifiers() {
        let domain = "
(define (domain d)
  (:requirements :strips :derived-predicates :quantified-preconditions :equality)
  (:constants c)
  (:predicates (p ?x) (q ?x ?y) (r ?x) (goal))
  (:action a :parameters (?x ?y)
     :precondition (and (p ?x) (not (= ?x ?y)) (forall (?z) (imply (p ?z) (q ?z ?y))))
     :effect (and (q ?x ?y) (not (p ?x))))
  (:action noop :parameters () :effect (and))
  (:derived (r ?x) (or (p ?x) (exists (?y) (and (q ?x ?y) (r ?y)))))
  (:derived (goal) (or)))";
        let d = parse_domain(domain).unwrap();
        let again = parse_domain(&emit_domain(&d)).unwrap();
        assert_eq!(d, again);
        let problem = "(define (problem p1) (:domain d) (:objects o1 o2)
            (:init (p o1) (q c o2)) (:goal (and (r o1) (not (p o2)))))";
        let p = parse_problem(problem, &d).unwrap();
        assert_eq!(p, parse_problem(&emit_problem(&p), &d).unwrap());
    }

    #[test]
    fn long_bodies_are_broken_over_lines() {
        let atoms: Vec<Formula> = (0..12)
            .map(|i| Formula::atom("holds", vec![Term::constant("robot"), Term::constant(format!("block{i}"))]))
            .collect();
        let text = pretty_string(&Formula::Or(atoms), 4);
        assert!(text.lines().count() > 1);
        assert!(text.lines().all(|l| l.len() <= WIDTH));
    }
}
