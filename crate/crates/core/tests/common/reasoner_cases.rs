//! Hand-built reasoning problems. Each entry is an ontology, an optional
//! assertion to test for entailment (plain consistency otherwise) and the
//! expected answer.

pub const CASES: &[(&str, Option<&str>, bool)] = &[
    // Boolean structure and disjunction branching.
    ("ClassAssertion(a, A)", None, true),
    ("ClassAssertion(a, and(A, not(A)))", None, false),
    ("ClassAssertion(a, Bottom)", None, false),
    ("SubClassOf(A, B)\nClassAssertion(a, A)", Some("ClassAssertion(a, B)"), true),
    ("SubClassOf(A, or(B, C))\nSubClassOf(B, D)\nSubClassOf(C, D)\nClassAssertion(a, A)", Some("ClassAssertion(a, D)"), true),
    ("SubClassOf(A, or(B, C))\nSubClassOf(B, D)\nSubClassOf(C, D)\nClassAssertion(a, A)", Some("ClassAssertion(a, B)"), false),
    ("SubClassOf(A, or(B, C))\nSubClassOf(B, Bottom)\nClassAssertion(a, A)", Some("ClassAssertion(a, C)"), true),
    ("ClassAssertion(a, or(A, B))\nClassAssertion(a, not(A))", Some("ClassAssertion(a, B)"), true),
    ("ClassAssertion(a, or(A, B))\nClassAssertion(a, not(A))\nClassAssertion(a, not(B))", None, false),
    ("ClassAssertion(a, or(and(A, B), and(A, C)))", Some("ClassAssertion(a, A)"), true),
    ("ClassAssertion(a, or(and(A, B), and(A, C)))", Some("ClassAssertion(a, B)"), false),
    ("SubClassOf(Top, or(A, B))\nSubClassOf(A, C)\nSubClassOf(B, C)\nClassAssertion(a, Top)", Some("ClassAssertion(a, C)"), true),
    ("DisjointClasses(A, B)\nClassAssertion(a, A)\nClassAssertion(a, B)", None, false),
    ("DisjointClasses(A, B)\nClassAssertion(a, A)", Some("ClassAssertion(a, not(B))"), true),
    // Qualified number restrictions, including the at-most-two / exactly-two pattern.
    (
        "DifferentIndividuals(a, b, c)\nSubClassOf(P, and(R, max(2, h, B)))\nSubClassOf(and(P, exactly(2, h, B)), F)\n\
         ClassAssertion(x, P)\nClassAssertion(a, B)\nClassAssertion(b, B)\nClassAssertion(c, B)\n\
         PropertyAssertion(x, h, a)\nPropertyAssertion(x, h, b)",
        Some("ClassAssertion(x, F)"),
        true,
    ),
    (
        "DifferentIndividuals(a, b, c)\nSubClassOf(P, and(R, max(2, h, B)))\nSubClassOf(and(P, exactly(2, h, B)), F)\n\
         ClassAssertion(x, P)\nClassAssertion(a, B)\nClassAssertion(b, B)\nClassAssertion(c, B)\n\
         PropertyAssertion(x, h, a)",
        Some("ClassAssertion(x, F)"),
        false,
    ),
    (
        "DifferentIndividuals(a, b, c)\nSubClassOf(P, and(R, max(2, h, B)))\nSubClassOf(and(P, exactly(2, h, B)), F)\n\
         ClassAssertion(x, P)\nClassAssertion(a, B)\nClassAssertion(b, B)\nClassAssertion(c, B)\n\
         PropertyAssertion(x, h, a)\nPropertyAssertion(x, h, b)\nPropertyAssertion(x, h, c)",
        None,
        false,
    ),
    (
        "SubClassOf(P, and(R, max(2, h, B)))\nSubClassOf(and(P, exactly(2, h, B)), F)\n\
         ClassAssertion(x, P)\nClassAssertion(a, B)\nClassAssertion(b, B)\nClassAssertion(c, B)\n\
         PropertyAssertion(x, h, a)\nPropertyAssertion(x, h, b)\nPropertyAssertion(x, h, c)",
        None,
        true,
    ),
    (
        "SubClassOf(P, and(R, max(2, h, B)))\nSubClassOf(and(P, exactly(2, h, B)), F)\n\
         ClassAssertion(x, P)\nClassAssertion(a, B)\nClassAssertion(b, B)\n\
         PropertyAssertion(x, h, a)\nPropertyAssertion(x, h, b)",
        Some("ClassAssertion(x, F)"),
        false,
    ),
    ("ClassAssertion(a, max(1, r, Top))\nPropertyAssertion(a, r, b)\nPropertyAssertion(a, r, c)\nClassAssertion(c, A)", Some("ClassAssertion(b, A)"), true),
    (
        "ClassAssertion(a, max(1, r, A))\nPropertyAssertion(a, r, b)\nPropertyAssertion(a, r, c)\n\
         ClassAssertion(b, A)\nClassAssertion(c, A)\nDifferentIndividuals(b, c)",
        None,
        false,
    ),
    (
        "ClassAssertion(a, max(1, r, A))\nPropertyAssertion(a, r, b)\nPropertyAssertion(a, r, c)\n\
         ClassAssertion(b, A)\nClassAssertion(c, not(A))\nDifferentIndividuals(b, c)",
        None,
        true,
    ),
    (
        "ClassAssertion(a, max(1, r, A))\nPropertyAssertion(a, r, b)\nPropertyAssertion(a, r, c)\n\
         ClassAssertion(b, A)\nDifferentIndividuals(b, c)",
        Some("ClassAssertion(c, not(A))"),
        true,
    ),
    ("ClassAssertion(a, and(min(2, r, A), max(1, r, Top)))", None, false),
    ("ClassAssertion(a, and(min(2, r, A), max(2, r, Top)))", None, true),
    ("ClassAssertion(a, and(min(3, r, Top), max(1, r, A), max(1, r, not(A))))", None, false),
    ("ClassAssertion(a, and(min(2, r, Top), max(1, r, A), max(1, r, not(A))))", None, true),
    ("ClassAssertion(a, and(some(r, A), some(r, B), max(1, r, Top)))", Some("ClassAssertion(a, some(r, and(A, B)))"), true),
    ("ClassAssertion(a, and(some(r, A), some(r, B)))", Some("ClassAssertion(a, some(r, and(A, B)))"), false),
    ("ClassAssertion(a, and(exactly(2, r, A), all(r, B)))", Some("ClassAssertion(a, min(2, r, B))"), true),
    ("ClassAssertion(a, max(0, r, A))\nPropertyAssertion(a, r, b)", Some("ClassAssertion(b, not(A))"), true),
    ("ClassAssertion(a, exactly(1, r, Top))\nPropertyAssertion(a, r, b)", Some("ClassAssertion(a, all(r, one(b)))"), true),
    ("ClassAssertion(a, min(2, r, A))\nSubClassOf(A, one(o))", None, false),
    // Nominals.
    ("SubClassOf(A, one(o))\nClassAssertion(a, A)\nClassAssertion(b, A)\nDifferentIndividuals(a, b)", None, false),
    ("SubClassOf(A, one(o))\nClassAssertion(a, A)\nClassAssertion(b, A)\nClassAssertion(a, B)", Some("ClassAssertion(b, B)"), true),
    ("ClassAssertion(a, one(b))\nClassAssertion(b, A)", Some("ClassAssertion(a, A)"), true),
    ("ClassAssertion(a, not(one(b)))\nClassAssertion(a, one(b))", None, false),
    ("SubClassOf(Top, or(one(a), one(b)))\nClassAssertion(c, min(3, r, Top))", None, false),
    ("SubClassOf(Top, or(one(a), one(b), one(c)))\nClassAssertion(a, min(3, r, Top))", None, true),
    ("SubClassOf(Top, or(one(a), one(b)))\nClassAssertion(a, A)\nClassAssertion(b, A)\nClassAssertion(c, Top)", Some("ClassAssertion(c, A)"), true),
    ("ClassAssertion(a, some(r, one(b)))", Some("PropertyAssertion(a, r, b)"), true),
    ("PropertyAssertion(a, r, b)", Some("ClassAssertion(a, some(r, one(b)))"), true),
    ("ClassAssertion(a, all(r, one(b)))\nPropertyAssertion(a, r, c)\nClassAssertion(b, A)", Some("ClassAssertion(c, A)"), true),
    ("ClassAssertion(a, some(r, one(b)))\nClassAssertion(a, all(r, A))", Some("ClassAssertion(b, A)"), true),
    ("SubClassOf(one(a), A)\nClassAssertion(b, one(a))", Some("ClassAssertion(b, A)"), true),
    ("PropertyAssertion(a, r, b)", Some("PropertyAssertion(a, r, c)"), false),
    // Inequality.
    ("DifferentIndividuals(a, b)\nClassAssertion(a, one(b))", None, false),
    ("DifferentIndividuals(a, b)\nSubClassOf(Top, one(c))", None, false),
    ("DifferentIndividuals(a, b)\nSubClassOf(Top, or(one(c), one(d)))", None, true),
    ("DifferentIndividuals(a, b, c)\nSubClassOf(Top, or(one(c), one(d)))", None, false),
    ("DifferentIndividuals(a, b)\nClassAssertion(a, A)\nSubClassOf(A, one(c))", Some("ClassAssertion(b, not(A))"), true),
    ("PropertyAssertion(a, r, b)\nPropertyAssertion(a, r, c)\nDifferentIndividuals(b, c)", Some("ClassAssertion(a, min(2, r, Top))"), true),
    ("PropertyAssertion(a, r, b)\nPropertyAssertion(a, r, c)", Some("ClassAssertion(a, min(2, r, Top))"), false),
    ("SubClassOf(Top, max(1, r, Top))\nPropertyAssertion(a, r, b)\nPropertyAssertion(a, r, c)\nDifferentIndividuals(b, c)", None, false),
    ("SubClassOf(Top, max(1, r, Top))\nPropertyAssertion(a, r, b)\nPropertyAssertion(a, r, c)", None, true),
    // Existential and universal restrictions.
    ("SubClassOf(A, some(r, A))\nClassAssertion(a, A)", None, true),
    ("ClassAssertion(a, and(some(r, A), all(r, not(A))))", None, false),
    ("SubClassOf(A, some(r, B))\nSubClassOf(B, C)\nClassAssertion(a, A)", Some("ClassAssertion(a, some(r, C))"), true),
    ("SubClassOf(some(r, A), B)\nPropertyAssertion(a, r, b)\nClassAssertion(b, A)", Some("ClassAssertion(a, B)"), true),
    ("ClassAssertion(a, all(r, A))\nPropertyAssertion(a, r, b)", Some("ClassAssertion(b, A)"), true),
    ("SubClassOf(A, all(r, B))\nSubClassOf(A, some(r, not(B)))\nClassAssertion(a, A)", None, false),
    ("SubClassOf(Top, some(r, Top))\nSubClassOf(Top, max(1, r, Top))\nClassAssertion(a, A)", None, true),
    ("SubClassOf(A, some(r, A))\nSubClassOf(A, all(r, B))\nClassAssertion(a, A)", Some("ClassAssertion(a, some(r, and(A, B)))"), true),
];
