//! Reader for the supported PDDL subset.
//!
//! Keywords are case-insensitive; predicate, action and object names are
//! kept as written. `;` starts a comment.

use std::collections::{BTreeMap, BTreeSet};

use super::error::PddlError;
use super::model::*;

#[derive(Debug, Clone)]
enum Sexp {
    Word { text: String, line: usize, column: usize },
    List { items: Vec<Sexp>, line: usize, column: usize },
}

impl Sexp {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Word { line, column, .. } | Sexp::List { line, column, .. } => (*line, *column),
        }
    }

    fn word(&self) -> Option<&str> {
        match self {
            Sexp::Word { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    fn keyword(&self) -> Option<String> {
        self.word().map(|w| w.to_ascii_lowercase())
    }

    fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            Sexp::Word { .. } => None,
        }
    }

    /// Lower-cased head word of a list.
    fn head(&self) -> Option<String> {
        self.list().and_then(|items| items.first()).and_then(Sexp::keyword)
    }
}

fn syntax(at: &Sexp, message: impl Into<String>) -> PddlError {
    let (line, column) = at.pos();
    PddlError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn unsupported(at: &Sexp, feature: impl Into<String>) -> PddlError {
    PddlError::Unsupported {
        line: at.pos().0,
        feature: feature.into(),
    }
}

fn read(text: &str) -> Result<Vec<Sexp>, PddlError> {
    let mut stack: Vec<(Vec<Sexp>, usize, usize)> = Vec::new();
    let mut top = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            match c {
                ';' => break,
                c if c.is_whitespace() => i += 1,
                '(' => {
                    stack.push((Vec::new(), line_no, column));
                    i += 1;
                }
                ')' => {
                    let Some((items, l, col)) = stack.pop() else {
                        return Err(PddlError::Syntax {
                            line: line_no,
                            column,
                            message: "unbalanced `)`".into(),
                        });
                    };
                    let node = Sexp::List {
                        items,
                        line: l,
                        column: col,
                    };
                    match stack.last_mut() {
                        Some((parent, _, _)) => parent.push(node),
                        None => top.push(node),
                    }
                    i += 1;
                }
                _ => {
                    let start = i;
                    while i < chars.len() && !chars[i].is_whitespace() && !matches!(chars[i], '(' | ')' | ';') {
                        i += 1;
                    }
                    let node = Sexp::Word {
                        text: chars[start..i].iter().collect(),
                        line: line_no,
                        column,
                    };
                    match stack.last_mut() {
                        Some((parent, _, _)) => parent.push(node),
                        None => {
                            return Err(PddlError::Syntax {
                                line: line_no,
                                column,
                                message: "expected `(`".into(),
                            })
                        }
                    }
                }
            }
        }
    }
    if let Some((_, line, column)) = stack.pop() {
        return Err(PddlError::Syntax {
            line,
            column,
            message: "unclosed `(`".into(),
        });
    }
    Ok(top)
}

fn single_define(text: &str, kind: &str) -> Result<Sexp, PddlError> {
    let mut top = read(text)?;
    if top.len() != 1 {
        let at = top.get(1).map(Sexp::pos).unwrap_or((1, 1));
        return Err(PddlError::Syntax {
            line: at.0,
            column: at.1,
            message: format!("expected exactly one `(define ({kind} ...))` form"),
        });
    }
    let def = top.pop().expect("one form");
    if def.head().as_deref() != Some("define") {
        return Err(syntax(&def, "expected `define`"));
    }
    Ok(def)
}

fn name_of(header: &Sexp, kind: &str) -> Result<String, PddlError> {
    match header.list() {
        Some([k, n]) if k.keyword().as_deref() == Some(kind) && n.word().is_some() => {
            Ok(n.word().expect("word").to_string())
        }
        _ => Err(syntax(header, format!("expected `({kind} <name>)`"))),
    }
}

fn words(items: &[Sexp]) -> Result<Vec<String>, PddlError> {
    items
        .iter()
        .map(|s| s.word().map(str::to_string).ok_or_else(|| syntax(s, "expected a name")))
        .collect()
}

/// Untyped name lists; `- object` annotations are accepted and dropped.
fn name_list(items: &[Sexp], what: &str) -> Result<Vec<String>, PddlError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let w = items[i].word().ok_or_else(|| syntax(&items[i], format!("expected {what}")))?;
        if w == "-" {
            match items.get(i + 1).and_then(Sexp::keyword) {
                Some(t) if t == "object" => {
                    i += 2;
                    continue;
                }
                _ => return Err(unsupported(&items[i], ":typing")),
            }
        }
        out.push(w.to_string());
        i += 1;
    }
    Ok(out)
}

fn variables(items: &[Sexp]) -> Result<Vec<String>, PddlError> {
    name_list(items, "a variable")?
        .into_iter()
        .zip(items)
        .map(|(v, at)| {
            v.strip_prefix('?')
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .ok_or_else(|| syntax(at, format!("expected a variable, found `{v}`")))
        })
        .collect()
}

fn term(s: &Sexp) -> Result<Term, PddlError> {
    let w = s.word().ok_or_else(|| syntax(s, "expected a term"))?;
    match w.strip_prefix('?') {
        Some("") => Err(syntax(s, "empty variable name")),
        Some(v) => Ok(Term::Var(v.to_string())),
        None => Ok(Term::Const(w.to_string())),
    }
}

fn atom(s: &Sexp) -> Result<Atom, PddlError> {
    let items = s.list().ok_or_else(|| syntax(s, "expected an atom"))?;
    let (head, rest) = items.split_first().ok_or_else(|| syntax(s, "empty atom"))?;
    let predicate = head.word().ok_or_else(|| syntax(head, "expected a predicate name"))?;
    Ok(Atom {
        predicate: predicate.to_string(),
        args: rest.iter().map(term).collect::<Result<_, _>>()?,
    })
}

fn formula(s: &Sexp) -> Result<Formula, PddlError> {
    let items = s.list().ok_or_else(|| syntax(s, "expected a formula"))?;
    if items.is_empty() {
        return Err(syntax(s, "empty formula"));
    }
    let args = &items[1..];
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(syntax(s, format!("expected {n} argument(s)")))
        }
    };
    match s.head().as_deref() {
        Some("and") => Ok(Formula::And(args.iter().map(formula).collect::<Result<_, _>>()?)),
        Some("or") => Ok(Formula::Or(args.iter().map(formula).collect::<Result<_, _>>()?)),
        Some("not") => {
            arity(1)?;
            Ok(Formula::not(formula(&args[0])?))
        }
        Some("imply") => {
            arity(2)?;
            Ok(Formula::Or(vec![Formula::not(formula(&args[0])?), formula(&args[1])?]))
        }
        Some("exists") | Some("forall") => {
            arity(2)?;
            let vars = args[0].list().ok_or_else(|| syntax(&args[0], "expected a variable list"))?;
            let vars = variables(vars)?;
            let body = Box::new(formula(&args[1])?);
            if s.head().as_deref() == Some("exists") {
                Ok(Formula::Exists(vars, body))
            } else {
                Ok(Formula::Forall(vars, body))
            }
        }
        Some("=") => {
            arity(2)?;
            Ok(Formula::Eq(term(&args[0])?, term(&args[1])?))
        }
        Some("when") => Err(unsupported(s, "conditional effects (when)")),
        Some(op) if matches!(op, "<" | ">" | "<=" | ">=" | "increase" | "decrease" | "assign") => {
            Err(unsupported(s, format!("numeric expressions ({op})")))
        }
        Some(_) => Ok(Formula::Atom(atom(s)?)),
        None => Err(syntax(s, "expected an operator or predicate name")),
    }
}

fn effect(s: &Sexp, add: &mut Vec<Atom>, del: &mut Vec<Atom>) -> Result<(), PddlError> {
    match s.head().as_deref() {
        Some("and") => {
            for e in &s.list().expect("list")[1..] {
                effect(e, add, del)?;
            }
            Ok(())
        }
        Some("not") => {
            let items = s.list().expect("list");
            if items.len() != 2 {
                return Err(syntax(s, "expected `(not <atom>)`"));
            }
            del.push(atom(&items[1])?);
            Ok(())
        }
        Some("when") => Err(unsupported(s, "conditional effects (when)")),
        Some("forall") => Err(unsupported(s, "universal effects (forall)")),
        Some(op) if matches!(op, "increase" | "decrease" | "assign" | "scale-up" | "scale-down") => {
            Err(unsupported(s, format!("numeric effects ({op})")))
        }
        Some(_) => {
            add.push(atom(s)?);
            Ok(())
        }
        None => Err(syntax(s, "expected an effect")),
    }
}

const SUPPORTED_REQUIREMENTS: &[&str] = &[
    ":strips",
    ":negative-preconditions",
    ":disjunctive-preconditions",
    ":existential-preconditions",
    ":universal-preconditions",
    ":quantified-preconditions",
    ":equality",
    ":derived-predicates",
];

/// Keyword-value pairs of an `(:action ...)` form.
fn keyword_args<'a>(items: &'a [Sexp], form: &Sexp) -> Result<BTreeMap<String, &'a Sexp>, PddlError> {
    if !items.len().is_multiple_of(2) {
        return Err(syntax(form, "expected `:keyword value` pairs"));
    }
    let mut out = BTreeMap::new();
    for pair in items.chunks(2) {
        let k = pair[0]
            .keyword()
            .filter(|k| k.starts_with(':'))
            .ok_or_else(|| syntax(&pair[0], "expected a keyword"))?;
        if out.insert(k.clone(), &pair[1]).is_some() {
            return Err(syntax(&pair[0], format!("duplicate `{k}`")));
        }
    }
    Ok(out)
}

pub fn parse_domain(text: &str) -> Result<Domain, PddlError> {
    let def = single_define(text, "domain")?;
    let items = def.list().expect("list");
    let name = name_of(items.get(1).ok_or_else(|| syntax(&def, "missing domain name"))?, "domain")?;
    let mut domain = Domain {
        name,
        requirements: Vec::new(),
        constants: Vec::new(),
        predicates: Vec::new(),
        actions: Vec::new(),
        rules: Vec::new(),
    };
    for section in &items[2..] {
        let body = section.list().ok_or_else(|| syntax(section, "expected a section"))?;
        let rest = &body[1..];
        match section.head().as_deref() {
            Some(":requirements") => {
                for r in rest {
                    let k = r.keyword().ok_or_else(|| syntax(r, "expected a requirement"))?;
                    if !SUPPORTED_REQUIREMENTS.contains(&k.as_str()) {
                        return Err(unsupported(r, k));
                    }
                    domain.requirements.push(k);
                }
            }
            Some(":constants") => domain.constants.extend(name_list(rest, "a constant")?),
            Some(":predicates") => {
                for p in rest {
                    let items = p.list().ok_or_else(|| syntax(p, "expected `(<name> ?x ...)`"))?;
                    let (head, vars) = items.split_first().ok_or_else(|| syntax(p, "empty predicate"))?;
                    let name = head.word().ok_or_else(|| syntax(head, "expected a predicate name"))?;
                    let vars = variables(vars)?;
                    domain.predicates.push(PredicateDecl {
                        name: name.to_string(),
                        arity: vars.len(),
                        kind: PredicateKind::Base,
                    });
                }
            }
            Some(":action") => {
                let name = rest
                    .first()
                    .and_then(Sexp::word)
                    .ok_or_else(|| syntax(section, "missing action name"))?;
                let kw = keyword_args(&rest[1..], section)?;
                let mut params = Vec::new();
                let mut pre = Formula::truth();
                let mut add = Vec::new();
                let mut del = Vec::new();
                for (k, v) in kw {
                    match k.as_str() {
                        ":parameters" => {
                            params = variables(v.list().ok_or_else(|| syntax(v, "expected a parameter list"))?)?
                        }
                        ":precondition" => pre = formula(v)?,
                        ":effect" => effect(v, &mut add, &mut del)?,
                        other => return Err(unsupported(v, other)),
                    }
                }
                domain.actions.push(ActionSchema {
                    name: name.to_string(),
                    params,
                    pre,
                    add,
                    del,
                });
            }
            Some(":derived") => {
                if rest.len() != 2 {
                    return Err(syntax(section, "expected `(:derived <head> <body>)`"));
                }
                domain.rules.push(DerivationRule {
                    head: atom(&rest[0])?,
                    body: formula(&rest[1])?,
                });
            }
            Some(":types") => return Err(unsupported(section, ":typing")),
            Some(":functions") => return Err(unsupported(section, ":functions")),
            Some(":durative-action") => return Err(unsupported(section, ":durative-actions")),
            Some(":constraints") => return Err(unsupported(section, ":constraints")),
            Some(other) => return Err(unsupported(section, other)),
            None => return Err(syntax(section, "expected a section keyword")),
        }
    }
    let derived: BTreeSet<String> = domain.rules.iter().map(|r| r.head.predicate.clone()).collect();
    for p in &mut domain.predicates {
        if derived.contains(&p.name) {
            p.kind = PredicateKind::Derived;
        }
    }
    super::check::check_domain(&domain)?;
    Ok(domain)
}

pub fn parse_problem(text: &str, domain: &Domain) -> Result<Problem, PddlError> {
    let def = single_define(text, "problem")?;
    let items = def.list().expect("list");
    let name = name_of(items.get(1).ok_or_else(|| syntax(&def, "missing problem name"))?, "problem")?;
    let mut problem = Problem {
        name,
        domain_name: String::new(),
        objects: Vec::new(),
        init: State::new(),
        goal: Formula::truth(),
    };
    for section in &items[2..] {
        let body = section.list().ok_or_else(|| syntax(section, "expected a section"))?;
        let rest = &body[1..];
        match section.head().as_deref() {
            Some(":domain") => problem.domain_name = words(rest)?.join(" "),
            Some(":objects") => problem.objects.extend(name_list(rest, "an object")?),
            Some(":init") => {
                for a in rest {
                    if a.head().as_deref() == Some("=") {
                        return Err(unsupported(a, ":numeric-fluents"));
                    }
                    let at = atom(a)?;
                    let args = at
                        .args
                        .iter()
                        .map(|t| match t {
                            Term::Const(c) => Ok(c.clone()),
                            Term::Var(_) => Err(syntax(a, "initial atoms must be ground")),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    problem.init.insert(GroundAtom {
                        predicate: at.predicate,
                        args,
                    });
                }
            }
            Some(":goal") => {
                if rest.len() != 1 {
                    return Err(syntax(section, "expected `(:goal <formula>)`"));
                }
                problem.goal = formula(&rest[0])?;
            }
            Some(":requirements") => {}
            Some(":metric") => return Err(unsupported(section, ":metric")),
            Some(":constraints") => return Err(unsupported(section, ":constraints")),
            Some(other) => return Err(unsupported(section, other)),
            None => return Err(syntax(section, "expected a section keyword")),
        }
    }
    if problem.domain_name != domain.name {
        return Err(PddlError::DomainMismatch {
            expected: domain.name.clone(),
            found: problem.domain_name,
        });
    }
    super::check::check_problem(domain, &problem)?;
    Ok(problem)
}

pub fn parse_spec(domain: &str, problem: &str) -> Result<PlanningSpec, PddlError> {
    let domain = parse_domain(domain)?;
    let problem = parse_problem(problem, &domain)?;
    Ok(PlanningSpec { domain, problem })
}

/// One `(name arg ...)` per line; `;` comments and blank lines are skipped.
pub fn parse_plan(text: &str) -> Result<Plan, PddlError> {
    read(text)?
        .iter()
        .map(|s| {
            let items = s.list().ok_or_else(|| syntax(s, "expected `(action args...)`"))?;
            let ws = words(items)?;
            let (name, args) = ws.split_first().ok_or_else(|| syntax(s, "empty plan step"))?;
            Ok(PlanStep {
                action: name.clone(),
                args: args.to_vec(),
            })
        })
        .collect()
}

/// A ground atom written either as `(p a b)` or as `p(a, b)`.
pub fn parse_ground_atom(text: &str) -> Result<GroundAtom, PddlError> {
    let text = text.trim();
    let sexp_text = if text.starts_with('(') {
        text.to_string()
    } else if let Some((name, rest)) = text.split_once('(') {
        let args = rest.strip_suffix(')').ok_or_else(|| PddlError::Syntax {
            line: 1,
            column: text.len(),
            message: "expected `)`".into(),
        })?;
        format!("({} {})", name.trim(), args.replace(',', " "))
    } else {
        format!("({text})")
    };
    let top = read(&sexp_text)?;
    let [s] = top.as_slice() else {
        return Err(PddlError::Syntax {
            line: 1,
            column: 1,
            message: "expected a single atom".into(),
        });
    };
    let ws = words(s.list().ok_or_else(|| syntax(s, "expected an atom"))?)?;
    let (name, args) = ws.split_first().ok_or_else(|| syntax(s, "empty atom"))?;
    Ok(GroundAtom {
        predicate: name.clone(),
        args: args.to_vec(),
    })
}
