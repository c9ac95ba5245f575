use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use omplan_dl::{parse_axiom, parse_class_expr, Axiom, ClassExpr, Ontology, Reasoner, ReasonerError};

use super::InterfaceError;

/// One query specification: a query predicate, its variables (without `?`),
/// a static type per variable and a set of axiom templates whose individual
/// positions may hold `?variables`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySpec {
    pub predicate: String,
    pub vars: Vec<String>,
    pub types: BTreeMap<String, ClassExpr>,
    pub query: Vec<Axiom>,
}

/// A legal assignment: query variable to individual.
pub type Assignment = BTreeMap<String, String>;

impl QuerySpec {
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// `Θ(S, O)`: every total map from the variables into `Ind(O)` whose
    /// values are entailed instances of the variable's type, in lexicographic
    /// order.
    pub fn legal_assignments(&self, ontology: &Ontology, reasoner: &Reasoner) -> Result<Vec<Assignment>, ReasonerError> {
        let mut candidates = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            let inst: Vec<String> = reasoner.instances(ontology, &self.types[v])?.into_iter().collect();
            candidates.push(inst);
        }
        let mut out = vec![Assignment::new()];
        for (v, cands) in self.vars.iter().zip(&candidates) {
            out = out
                .into_iter()
                .flat_map(|theta| {
                    cands.iter().map(move |c| {
                        let mut t = theta.clone();
                        t.insert(v.clone(), c.clone());
                        t
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// `θ(Q_S)`.
    pub fn instantiate(&self, theta: &Assignment) -> Vec<Axiom> {
        self.query.iter().map(|ax| substitute_axiom(ax, theta)).collect()
    }
}

fn substitute_ind(name: &str, theta: &Assignment) -> String {
    match name.strip_prefix('?') {
        Some(v) => theta.get(v).cloned().unwrap_or_else(|| name.to_string()),
        None => name.to_string(),
    }
}

fn substitute_class(c: &ClassExpr, theta: &Assignment) -> ClassExpr {
    let sub = |c: &ClassExpr| Box::new(substitute_class(c, theta));
    match c {
        ClassExpr::Nominal(a) => ClassExpr::Nominal(substitute_ind(a, theta)),
        ClassExpr::Named(_) | ClassExpr::Top | ClassExpr::Bottom => c.clone(),
        ClassExpr::Not(d) => ClassExpr::Not(sub(d)),
        ClassExpr::And(ds) => ClassExpr::And(ds.iter().map(|d| substitute_class(d, theta)).collect()),
        ClassExpr::Or(ds) => ClassExpr::Or(ds.iter().map(|d| substitute_class(d, theta)).collect()),
        ClassExpr::Some(r, d) => ClassExpr::Some(r.clone(), sub(d)),
        ClassExpr::All(r, d) => ClassExpr::All(r.clone(), sub(d)),
        ClassExpr::Max(n, r, d) => ClassExpr::Max(*n, r.clone(), sub(d)),
        ClassExpr::Min(n, r, d) => ClassExpr::Min(*n, r.clone(), sub(d)),
        ClassExpr::Exactly(n, r, d) => ClassExpr::Exactly(*n, r.clone(), sub(d)),
    }
}

fn substitute_axiom(ax: &Axiom, theta: &Assignment) -> Axiom {
    match ax {
        Axiom::ClassAssertion(a, c) => Axiom::ClassAssertion(substitute_ind(a, theta), substitute_class(c, theta)),
        Axiom::PropertyAssertion(a, r, b) => {
            Axiom::PropertyAssertion(substitute_ind(a, theta), r.clone(), substitute_ind(b, theta))
        }
        other => other.clone(),
    }
}

fn template_vars(ax: &Axiom) -> BTreeSet<String> {
    let mut inds = BTreeSet::new();
    ax.collect_individuals(&mut inds);
    inds.into_iter().filter_map(|i| i.strip_prefix('?').map(str::to_string)).collect()
}

impl fmt::Display for QuerySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PREDICATE: {}", self.predicate)?;
        let vars: Vec<String> = self.vars.iter().map(|v| format!("?{v}")).collect();
        writeln!(f, "VARIABLES: {}", vars.join(" "))?;
        writeln!(f, "TYPE_SPECIFICATION:")?;
        for v in &self.vars {
            writeln!(f, "   {}(?{v})", self.types[v])?;
        }
        writeln!(f, "QUERY:")?;
        for ax in &self.query {
            writeln!(f, "   {ax}")?;
        }
        Ok(())
    }
}

#[derive(PartialEq)]
enum Section {
    Types,
    Query,
}

/// Splits `Expr(arg, ...)` into `Expr` and its arguments: the last
/// parenthesised group of the line is the argument list.
fn split_application(line: &str) -> Option<(&str, Vec<&str>)> {
    let body = line.strip_suffix(')')?;
    let mut depth = 0usize;
    for (i, c) in body.char_indices().rev() {
        match c {
            ')' => depth += 1,
            '(' if depth == 0 => {
                let head = body[..i].trim();
                let args = body[i + 1..].split(',').map(str::trim).collect();
                return (!head.is_empty()).then_some((head, args));
            }
            '(' => depth -= 1,
            _ => {}
        }
    }
    None
}

const AXIOM_FORMS: &[&str] = &["ClassAssertion", "PropertyAssertion", "ObjectPropertyAssertion"];

fn parse_template(line: &str, lineno: usize) -> Result<Axiom, InterfaceError> {
    let syntax = |message: String| InterfaceError::Syntax { line: lineno, message };
    if AXIOM_FORMS.iter().any(|k| line.starts_with(&format!("{k}("))) {
        let axioms = parse_axiom(line).map_err(|e| syntax(e.to_string()))?;
        return match &axioms[..] {
            [ax] => Ok(ax.clone()),
            _ => Err(syntax("expected a single assertion".into())),
        };
    }
    let (head, args) = split_application(line).ok_or_else(|| syntax(format!("expected `C(?x)` or `r(?x, ?y)`, found `{line}`")))?;
    match args[..] {
        [a] if !a.is_empty() => {
            let class = parse_class_expr(head).map_err(|e| syntax(e.to_string()))?;
            Ok(Axiom::class_assertion(a, class))
        }
        [a, b] if !head.contains(['(', ')', ',']) && !a.is_empty() && !b.is_empty() => {
            Ok(Axiom::property_assertion(a, head, b))
        }
        _ => Err(syntax(format!("expected one or two arguments in `{line}`"))),
    }
}

#[derive(Default)]
struct Block {
    line: usize,
    predicate: String,
    vars: Option<Vec<String>>,
    types: Vec<(usize, Axiom)>,
    query: Vec<(usize, Axiom)>,
}

impl Block {
    fn finish(self) -> Result<QuerySpec, InterfaceError> {
        let vars = self.vars.ok_or(InterfaceError::Syntax {
            line: self.line,
            message: format!("query `{}` has no VARIABLES line", self.predicate),
        })?;
        let declared: BTreeSet<&String> = vars.iter().collect();
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v) {
                return Err(InterfaceError::Syntax {
                    line: self.line,
                    message: format!("variable ?{v} declared twice"),
                });
            }
        }
        let undeclared = |line: usize, ax: &Axiom| {
            template_vars(ax)
                .into_iter()
                .find(|v| !declared.contains(v))
                .map(|var| InterfaceError::UndeclaredQueryVariable { line, var })
        };
        let mut types: BTreeMap<String, Vec<ClassExpr>> = BTreeMap::new();
        for (line, ax) in &self.types {
            if let Some(e) = undeclared(*line, ax) {
                return Err(e);
            }
            match ax {
                Axiom::ClassAssertion(a, c) if a.starts_with('?') && template_vars(ax).len() == 1 => {
                    types.entry(a[1..].to_string()).or_default().push(c.clone());
                }
                _ => {
                    return Err(InterfaceError::Syntax {
                        line: *line,
                        message: "a type specification is `C(?x)` with a static class expression".into(),
                    })
                }
            }
        }
        let mut typed = BTreeMap::new();
        for v in &vars {
            let mut cs = types.remove(v).ok_or_else(|| InterfaceError::MissingTypeSpecification {
                predicate: self.predicate.clone(),
                var: v.clone(),
            })?;
            typed.insert(v.clone(), if cs.len() == 1 { cs.remove(0) } else { ClassExpr::And(cs) });
        }
        for (line, ax) in &self.query {
            if let Some(e) = undeclared(*line, ax) {
                return Err(e);
            }
        }
        Ok(QuerySpec {
            predicate: self.predicate,
            vars,
            types: typed,
            query: self.query.into_iter().map(|(_, ax)| ax).collect(),
        })
    }
}

/// Reads the block format
///
/// ```text
/// PREDICATE: fullHands
/// VARIABLES: ?r
/// TYPE_SPECIFICATION:
///    Robot(?r)
/// QUERY:
///    FullHands(?r)
/// ```
///
/// Type lines are `C(?x)`; query lines are `C(a)`, `r(a, b)` or an explicit
/// `ClassAssertion(...)`/`PropertyAssertion(...)`. Variables may also appear
/// inside nominals (`one(?x)`). Blank lines and lines starting with `;` or
/// `#` are ignored.
pub fn parse_query_interface(text: &str) -> Result<Vec<QuerySpec>, InterfaceError> {
    let mut specs = Vec::new();
    let mut current: Option<Block> = None;
    let mut section = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with(';') || trimmed.starts_with('#') {
            continue;
        }
        let header = trimmed
            .split_once(':')
            .filter(|(k, _)| k.chars().all(|c| c.is_ascii_uppercase() || c == '_') && !k.is_empty());
        match header {
            Some(("PREDICATE", name)) => {
                if let Some(b) = current.take() {
                    specs.push(b.finish()?);
                }
                let name = name.trim();
                if name.is_empty() || name.contains(|c: char| c.is_whitespace() || "(),".contains(c)) {
                    return Err(InterfaceError::Syntax {
                        line,
                        message: "expected a predicate name".into(),
                    });
                }
                current = Some(Block {
                    line,
                    predicate: name.to_string(),
                    ..Block::default()
                });
                section = None;
            }
            Some((key, rest)) => {
                let block = current.as_mut().ok_or_else(|| InterfaceError::Syntax {
                    line,
                    message: format!("`{key}:` outside a PREDICATE block"),
                })?;
                match key {
                    "VARIABLES" => {
                        let mut vars = Vec::new();
                        for tok in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                            let v = tok.strip_prefix('?').filter(|v| !v.is_empty()).ok_or_else(|| {
                                InterfaceError::Syntax {
                                    line,
                                    message: format!("variables start with `?`, found `{tok}`"),
                                }
                            })?;
                            vars.push(v.to_string());
                        }
                        block.vars = Some(vars);
                        section = None;
                    }
                    "TYPE_SPECIFICATION" | "QUERY" => {
                        section = Some(if key == "QUERY" { Section::Query } else { Section::Types });
                        if !rest.trim().is_empty() {
                            let ax = parse_template(rest.trim(), line)?;
                            match section {
                                Some(Section::Query) => block.query.push((line, ax)),
                                _ => block.types.push((line, ax)),
                            }
                        }
                    }
                    _ => {
                        return Err(InterfaceError::Syntax {
                            line,
                            message: format!("unknown section `{key}:`"),
                        })
                    }
                }
            }
            None => {
                let (block, sec) = match (current.as_mut(), &section) {
                    (Some(b), Some(s)) => (b, s),
                    _ => {
                        return Err(InterfaceError::Syntax {
                            line,
                            message: "expected a TYPE_SPECIFICATION or QUERY section".into(),
                        })
                    }
                };
                let ax = parse_template(trimmed, line)?;
                if *sec == Section::Query {
                    block.query.push((line, ax));
                } else {
                    block.types.push((line, ax));
                }
            }
        }
    }
    if let Some(b) = current {
        specs.push(b.finish()?);
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use omplan_dl::parse_ontology;

    pub(crate) const FIG2B: &str = "
 PREDICATE: fullHands
 VARIABLES: ?r
 TYPE_SPECIFICATION:
    Robot(?r)
 QUERY:
    FullHands(?r)
";

    const STATIC: &str = "
DifferentIndividuals(blockA, blockB, blockC)
SubClassOf(PR2, and(Robot, max(2, holds, Block)))
SubClassOf(and(PR2, exactly(2, holds, Block)), FullHands)
ClassAssertion(stackBot, PR2)
ClassAssertion(blockA, Block)
ClassAssertion(blockB, Block)
ClassAssertion(blockC, Block)
";

    #[test]
    fn blocksworld_query_specification() {
        let specs = parse_query_interface(FIG2B).unwrap();
        assert_eq!(specs.len(), 1);
        let s = &specs[0];
        assert_eq!(s.predicate, "fullHands");
        assert_eq!(s.vars, ["r"]);
        assert_eq!(s.types["r"], ClassExpr::named("Robot"));
        assert_eq!(s.query, [Axiom::class_assertion("?r", ClassExpr::named("FullHands"))]);
        assert_eq!(parse_query_interface(&s.to_string()).unwrap(), specs);
    }

    #[test]
    fn legal_assignments_and_instantiation() {
        let o = parse_ontology(STATIC).unwrap();
        let r = Reasoner::default();
        let s = &parse_query_interface(FIG2B).unwrap()[0];
        let thetas = s.legal_assignments(&o, &r).unwrap();
        let expected: Assignment = [("r".to_string(), "stackBot".to_string())].into();
        assert_eq!(thetas, std::slice::from_ref(&expected));
        assert_eq!(
            s.instantiate(&expected),
            [Axiom::class_assertion("stackBot", ClassExpr::named("FullHands"))]
        );

        let mut bottom = s.clone();
        bottom.types.insert("r".into(), ClassExpr::Bottom);
        assert!(bottom.legal_assignments(&o, &r).unwrap().is_empty());

        let mut empty = s.clone();
        empty.query.clear();
        assert!(empty.instantiate(&expected).is_empty());
    }

    #[test]
    fn two_variables_give_the_product() {
        let o = parse_ontology("ClassAssertion(a, A)\nClassAssertion(b, A)\nClassAssertion(c, B)").unwrap();
        let text = "PREDICATE: pair\nVARIABLES: ?x ?y\nTYPE_SPECIFICATION:\n A(?x)\n A(?y)\nQUERY:\n r(?x, ?y)\n";
        let s = &parse_query_interface(text).unwrap()[0];
        let thetas = s.legal_assignments(&o, &Reasoner::default()).unwrap();
        let inst = ["a", "b"];
        let brute: Vec<Assignment> = inst
            .iter()
            .flat_map(|x| {
                inst.iter()
                    .map(move |y| [("x".to_string(), x.to_string()), ("y".to_string(), y.to_string())].into())
            })
            .collect();
        assert_eq!(thetas, brute);
        assert_eq!(
            s.instantiate(&brute[1]),
            [Axiom::property_assertion("a", "r", "b")]
        );
    }

    #[test]
    fn templates_in_several_spellings() {
        let text = "PREDICATE: q\nVARIABLES: ?x, ?y\nTYPE_SPECIFICATION:\n Top(?x)\n some(r, A)(?y)\n\
                    QUERY:\n ClassAssertion(?x, some(r, one(?y)))\n PropertyAssertion(?y, s, c)\n not(B)(?x)\n";
        let s = &parse_query_interface(text).unwrap()[0];
        assert_eq!(s.types["y"], ClassExpr::some("r", ClassExpr::named("A")));
        let theta: Assignment = [("x".into(), "a".into()), ("y".into(), "b".into())].into();
        assert_eq!(
            s.instantiate(&theta),
            [
                Axiom::class_assertion("a", ClassExpr::some("r", ClassExpr::nominal("b"))),
                Axiom::property_assertion("b", "s", "c"),
                Axiom::class_assertion("a", ClassExpr::not(ClassExpr::named("B"))),
            ]
        );
    }

    #[test]
    fn malformed_query_interfaces() {
        assert!(parse_query_interface("").unwrap().is_empty());
        let undeclared = FIG2B.replace("FullHands(?r)", "FullHands(?x)");
        assert_eq!(
            parse_query_interface(&undeclared),
            Err(InterfaceError::UndeclaredQueryVariable {
                line: 7,
                var: "x".into()
            })
        );
        let untyped = "PREDICATE: q\nVARIABLES: ?x ?y\nTYPE_SPECIFICATION:\n A(?x)\nQUERY:\n B(?x)\n";
        assert_eq!(
            parse_query_interface(untyped),
            Err(InterfaceError::MissingTypeSpecification {
                predicate: "q".into(),
                var: "y".into()
            })
        );
        assert!(matches!(
            parse_query_interface("QUERY:\n A(?x)"),
            Err(InterfaceError::Syntax { line: 1, .. })
        ));
    }
}
