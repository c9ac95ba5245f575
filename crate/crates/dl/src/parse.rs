//! Line-oriented ontology text format.
//!
//! One axiom per line, `#` starts a comment (at the beginning of a token).
//!
//! ```text
//! SubClassOf(PR2, and(Robot, max(2, holds, Block)))
//! SubClassOf(and(PR2, exactly(2, holds, Block)), FullHands)
//! DifferentIndividuals(blockA, blockB, blockC)
//! ClassAssertion(stackBot, PR2)
//! PropertyAssertion(stackBot, holds, blockA)
//! ```
//!
//! Class expressions: a class name, `Top`, `Bottom`, `not(C)`,
//! `and(C, D, ...)`, `or(C, D, ...)`, `some(r, C)`, `all(r, C)`,
//! `min(n, r, C)`, `max(n, r, C)`, `exactly(n, r, C)` and `one(a)`.
//! The OWL functional-syntax spellings (`ObjectIntersectionOf`, ...) are
//! accepted as aliases.

use crate::error::ParseError;
use crate::expr::{Axiom, ClassExpr};
use crate::ontology::Ontology;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Comma,
    Word(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Spanned> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '#' => break,
            '(' => {
                out.push(Spanned { tok: Tok::Open, column });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::Close, column });
                i += 1;
            }
            ',' => {
                out.push(Spanned { tok: Tok::Comma, column });
                i += 1;
            }
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !matches!(chars[i], '(' | ')' | ',') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Word(word), column });
            }
        }
    }
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    line_len: usize,
}

const UNSUPPORTED_CLASS: &[&str] = &[
    "ObjectInverseOf",
    "inverse",
    "ObjectHasSelf",
    "ObjectHasValue",
    "DataSomeValuesFrom",
    "DataAllValuesFrom",
    "DataHasValue",
    "DataMinCardinality",
    "DataMaxCardinality",
    "DataExactCardinality",
];

const UNSUPPORTED_AXIOM: &[&str] = &[
    "SubObjectPropertyOf",
    "EquivalentObjectProperties",
    "DisjointObjectProperties",
    "InverseObjectProperties",
    "ObjectPropertyDomain",
    "ObjectPropertyRange",
    "FunctionalObjectProperty",
    "InverseFunctionalObjectProperty",
    "ReflexiveObjectProperty",
    "IrreflexiveObjectProperty",
    "SymmetricObjectProperty",
    "AsymmetricObjectProperty",
    "TransitiveObjectProperty",
    "SameIndividual",
    "NegativeObjectPropertyAssertion",
    "DataPropertyAssertion",
    "NegativeDataPropertyAssertion",
    "SubDataPropertyOf",
    "DataPropertyDomain",
    "DataPropertyRange",
    "FunctionalDataProperty",
    "HasKey",
    "DLSafeRule",
    "Rule",
];

impl Parser {
    fn err(&self, message: impl Into<String>) -> ParseError {
        let column = self
            .toks
            .get(self.pos)
            .map(|t| t.column)
            .unwrap_or(self.line_len + 1);
        ParseError::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn word(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        let w = self.word("a non-negative integer")?;
        w.parse::<u32>().map_err(|_| {
            self.pos -= 1;
            self.err(format!("`{w}` is not a non-negative integer"))
        })
    }

    fn role(&mut self) -> Result<String, ParseError> {
        let w = self.word("a property name")?;
        if matches!(self.peek(), Some(Tok::Open)) {
            return Err(ParseError::Unsupported {
                line: self.line,
                feature: w,
            });
        }
        Ok(w)
    }

    /// Comma-separated arguments up to the closing paren (the opening paren
    /// has been consumed).
    fn class_list(&mut self) -> Result<Vec<ClassExpr>, ParseError> {
        let mut items = vec![self.class()?];
        while matches!(self.peek(), Some(Tok::Comma)) {
            self.pos += 1;
            items.push(self.class()?);
        }
        self.expect(Tok::Close, "`)`")?;
        Ok(items)
    }

    fn comma(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::Comma, "`,`")
    }

    fn restriction(&mut self) -> Result<(u32, String, ClassExpr), ParseError> {
        let n = self.number()?;
        self.comma()?;
        let r = self.role()?;
        // The filler is optional in OWL (unqualified restrictions mean ⊤).
        let c = if matches!(self.peek(), Some(Tok::Comma)) {
            self.pos += 1;
            self.class()?
        } else {
            ClassExpr::Top
        };
        self.expect(Tok::Close, "`)`")?;
        Ok((n, r, c))
    }

    fn class(&mut self) -> Result<ClassExpr, ParseError> {
        let head = self.word("a class expression")?;
        if !matches!(self.peek(), Some(Tok::Open)) {
            return Ok(match head.as_str() {
                "Top" | "Thing" | "owl:Thing" | "⊤" => ClassExpr::Top,
                "Bottom" | "Nothing" | "owl:Nothing" | "⊥" => ClassExpr::Bottom,
                _ => ClassExpr::Named(head),
            });
        }
        if UNSUPPORTED_CLASS.contains(&head.as_str()) {
            return Err(ParseError::Unsupported {
                line: self.line,
                feature: head,
            });
        }
        self.pos += 1;
        let e = match head.as_str() {
            "not" | "ObjectComplementOf" => {
                let c = self.class()?;
                self.expect(Tok::Close, "`)`")?;
                ClassExpr::not(c)
            }
            "and" | "ObjectIntersectionOf" => ClassExpr::And(self.class_list()?),
            "or" | "ObjectUnionOf" => ClassExpr::Or(self.class_list()?),
            "some" | "ObjectSomeValuesFrom" | "all" | "ObjectAllValuesFrom" => {
                let r = self.role()?;
                self.comma()?;
                let c = self.class()?;
                self.expect(Tok::Close, "`)`")?;
                if head == "some" || head == "ObjectSomeValuesFrom" {
                    ClassExpr::some(r, c)
                } else {
                    ClassExpr::all(r, c)
                }
            }
            "min" | "ObjectMinCardinality" => {
                let (n, r, c) = self.restriction()?;
                ClassExpr::min(n, r, c)
            }
            "max" | "ObjectMaxCardinality" => {
                let (n, r, c) = self.restriction()?;
                ClassExpr::max(n, r, c)
            }
            "exactly" | "ObjectExactCardinality" => {
                let (n, r, c) = self.restriction()?;
                ClassExpr::exactly(n, r, c)
            }
            "one" | "ObjectOneOf" => {
                let mut inds = vec![self.word("an individual")?];
                while matches!(self.peek(), Some(Tok::Comma)) {
                    self.pos += 1;
                    inds.push(self.word("an individual")?);
                }
                self.expect(Tok::Close, "`)`")?;
                if inds.len() == 1 {
                    ClassExpr::Nominal(inds.pop().unwrap_or_default())
                } else {
                    ClassExpr::Or(inds.into_iter().map(ClassExpr::Nominal).collect())
                }
            }
            _ => {
                self.pos -= 2;
                return Err(self.err(format!("unknown class constructor `{head}`")));
            }
        };
        Ok(e)
    }

    /// Parses one axiom; a line may expand into several (n-ary sugar).
    fn axiom(&mut self) -> Result<Vec<Axiom>, ParseError> {
        let head = self.word("an axiom")?;
        if UNSUPPORTED_AXIOM.contains(&head.as_str()) {
            return Err(ParseError::Unsupported {
                line: self.line,
                feature: head,
            });
        }
        self.expect(Tok::Open, "`(`")?;
        let axioms = match head.as_str() {
            "SubClassOf" => {
                let c = self.class()?;
                self.comma()?;
                let d = self.class()?;
                self.expect(Tok::Close, "`)`")?;
                vec![Axiom::SubClassOf(c, d)]
            }
            "EquivalentClasses" | "DisjointClasses" => {
                let cs = self.class_list()?;
                if cs.len() < 2 {
                    return Err(self.err(format!("{head} needs at least two classes")));
                }
                let mut out = Vec::new();
                if head == "EquivalentClasses" {
                    for w in cs.windows(2) {
                        out.push(Axiom::EquivalentClasses(w[0].clone(), w[1].clone()));
                    }
                } else {
                    for i in 0..cs.len() {
                        for j in i + 1..cs.len() {
                            out.push(Axiom::DisjointClasses(cs[i].clone(), cs[j].clone()));
                        }
                    }
                }
                out
            }
            "ClassAssertion" => {
                let a = self.word("an individual")?;
                self.comma()?;
                let c = self.class()?;
                self.expect(Tok::Close, "`)`")?;
                vec![Axiom::ClassAssertion(a, c)]
            }
            "PropertyAssertion" | "ObjectPropertyAssertion" => {
                let a = self.word("an individual")?;
                self.comma()?;
                let r = self.role()?;
                self.comma()?;
                let b = self.word("an individual")?;
                self.expect(Tok::Close, "`)`")?;
                vec![Axiom::PropertyAssertion(a, r, b)]
            }
            "DifferentIndividuals" => {
                let mut inds = vec![self.word("an individual")?];
                while matches!(self.peek(), Some(Tok::Comma)) {
                    self.pos += 1;
                    inds.push(self.word("an individual")?);
                }
                self.expect(Tok::Close, "`)`")?;
                if inds.len() < 2 {
                    return Err(self.err("DifferentIndividuals needs at least two individuals"));
                }
                let mut out = Vec::new();
                for i in 0..inds.len() {
                    for j in i + 1..inds.len() {
                        out.push(Axiom::DifferentIndividuals(inds[i].clone(), inds[j].clone()));
                    }
                }
                out
            }
            _ => {
                self.pos -= 2;
                return Err(self.err(format!("unknown axiom type `{head}`")));
            }
        };
        Ok(axioms)
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }
}

fn parser_for(text: &str, line: usize) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: tokenize(text),
        pos: 0,
        line,
        line_len: text.chars().count(),
    })
}

/// Parses a whole ontology file.
pub fn parse_ontology(text: &str) -> Result<Ontology, ParseError> {
    let mut ontology = Ontology::new();
    for (i, line) in text.lines().enumerate() {
        let mut p = parser_for(line, i + 1)?;
        if p.toks.is_empty() {
            continue;
        }
        let axioms = p.axiom()?;
        p.finish()?;
        ontology.extend(axioms);
    }
    Ok(ontology)
}

/// Parses a single class expression (reported as line 1).
pub fn parse_class_expr(text: &str) -> Result<ClassExpr, ParseError> {
    let mut p = parser_for(text, 1)?;
    let c = p.class()?;
    p.finish()?;
    Ok(c)
}

/// Parses a single axiom line. N-ary sugar yields several axioms.
pub fn parse_axiom(text: &str) -> Result<Vec<Axiom>, ParseError> {
    let mut p = parser_for(text, 1)?;
    let a = p.axiom()?;
    p.finish()?;
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1_STATIC: &str = "\
DifferentIndividuals(blockA, blockB, blockC)
SubClassOf(PR2, and(Robot, max(2, holds, Block)))
SubClassOf(and(PR2, exactly(2, holds, Block)), FullHands)
ClassAssertion(stackBot, PR2)
";

    #[test]
    fn running_example_static_part_has_six_axioms() {
        let o = parse_ontology(FIG1_STATIC).unwrap();
        assert_eq!(o.len(), 6);
        assert!(o.contains(&Axiom::DifferentIndividuals("blockA".into(), "blockC".into())));
        assert!(o.contains(&Axiom::SubClassOf(
            ClassExpr::named("PR2"),
            ClassExpr::And(vec![ClassExpr::named("Robot"), ClassExpr::max(2, "holds", ClassExpr::named("Block"))])
        )));
    }

    #[test]
    fn empty_file_is_empty_ontology() {
        let o = parse_ontology("# nothing here\n\n").unwrap();
        assert!(o.is_empty());
        assert!(o.individuals().is_empty());
    }

    #[test]
    fn single_assertion_individuals() {
        let o = parse_ontology("ClassAssertion(stackBot, PR2)").unwrap();
        assert_eq!(o.individuals().into_iter().collect::<Vec<_>>(), ["stackBot"]);
    }

    #[test]
    fn owl_aliases() {
        let c = parse_class_expr("ObjectIntersectionOf(A, ObjectMaxCardinality(1, r), ObjectOneOf(a, b))").unwrap();
        assert_eq!(
            c,
            ClassExpr::And(vec![
                ClassExpr::named("A"),
                ClassExpr::max(1, "r", ClassExpr::Top),
                ClassExpr::Or(vec![ClassExpr::nominal("a"), ClassExpr::nominal("b")]),
            ])
        );
    }

    #[test]
    fn display_round_trips() {
        let text = "SubClassOf(and(A, not(B), or(some(r, C), all(s, Bottom))), min(2, r, exactly(1, s, one(a))))";
        let ax = parse_axiom(text).unwrap();
        assert_eq!(ax[0].to_string(), text);
        assert_eq!(parse_axiom(&ax[0].to_string()).unwrap(), ax);
    }

    #[test]
    fn unsupported_constructs_are_named() {
        let err = parse_ontology("ClassAssertion(a, A)\nTransitiveObjectProperty(r)").unwrap_err();
        assert_eq!(
            err,
            ParseError::Unsupported {
                line: 2,
                feature: "TransitiveObjectProperty".into()
            }
        );
        let err = parse_ontology("SubClassOf(some(inverse(r), A), B)").unwrap_err();
        assert!(matches!(err, ParseError::Unsupported { feature, .. } if feature == "inverse"));
    }

    #[test]
    fn syntax_errors_cite_position() {
        let err = parse_ontology("ClassAssertion(a, A)\n\nSubClassOf(A B)").unwrap_err();
        match err {
            ParseError::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, 14);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_ontology("max(x, r, A)").is_err());
        assert!(parse_class_expr("max(x, r, A)").is_err());
    }

    #[test]
    fn comments_are_ignored() {
        let o = parse_ontology("# header\nClassAssertion(a, A) # trailing\n").unwrap();
        assert_eq!(o.len(), 1);
    }
}
