//! `omplan`: compile, solve, validate, check and explain ontology-mediated
//! planning specifications.
//!
//! Exit status: 0 success or plan found, 1 unsolvable or invalid plan,
//! 2 input error, 3 resource limit, 4 internal invariant violation.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use omplan_core::compile::{compile, CompileError, CompileOptions, CompiledSpec, INCONSISTENT};
use omplan_core::fixtures::FILES;
use omplan_core::interface::OmSpec;
use omplan_core::justify::{Justification, JustifyConfig, JustifyError, DEFAULT_HST_NODE_LIMIT};
use omplan_core::oracle::{Oracle, OracleError};
use omplan_core::pddl::{emit_domain, emit_plan, emit_problem, parse_ground_atom, parse_plan, validate_plan, PlanVerdict};
use omplan_core::planner::{solve, Limit, Limits, Outcome};
use omplan_dl::{Reasoner, ReasonerConfig, ReasonerError, DEFAULT_NODE_BUDGET};

#[derive(Parser)]
#[command(name = "omplan", version, about = "Ontology-mediated planning via compilation to PDDL")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Emit the compiled domain and problem.
    Compile {
        #[command(flatten)]
        run: RunConfig,
        /// Write domain.pddl and problem.pddl here instead of to stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Write the compilation report (JSON) to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compile, search, and print a plan (one action per line).
    Plan {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Check a plan file.
    Validate {
        #[command(flatten)]
        run: RunConfig,
        plan: PathBuf,
        /// Check on the ontology-enhanced semantics with the reasoner in the
        /// loop instead of the compiled specification.
        #[arg(long)]
        direct: bool,
    },
    /// Static ontology consistency, interface well-formedness, diagnostics.
    Check {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Print the justifications behind a query atom or `inconsistent`.
    Explain {
        #[command(flatten)]
        run: RunConfig,
        /// `inconsistent`, `p(a, b)` or `(p a b)`.
        atom: String,
    },
}

#[derive(Args)]
struct RunConfig {
    /// Directory holding domain.pddl, problem.pddl, ontology.txt,
    /// fluents.txt and queries.txt; individual paths override it.
    #[arg(long)]
    dir: Option<PathBuf>,
    #[arg(long)]
    domain: Option<PathBuf>,
    #[arg(long)]
    problem: Option<PathBuf>,
    #[arg(long)]
    ontology: Option<PathBuf>,
    #[arg(long)]
    fluents: Option<PathBuf>,
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Forbid actions in states whose ontology perspective is inconsistent.
    #[arg(long)]
    block_inconsistent: bool,
    /// Treat all individuals of the static ontology as pairwise distinct.
    #[arg(long)]
    una: bool,
    /// Drop subsumed disjuncts from compiled rules.
    #[arg(long)]
    simplify: bool,
    /// One rule per query predicate with equality guards.
    #[arg(long)]
    lifted: bool,
    /// Threads for justification search.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Search time limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Maximum stored search nodes.
    #[arg(long, default_value_t = Limits::default().max_nodes)]
    node_limit: usize,
    /// Maximum hitting-set tree nodes per justification target.
    #[arg(long, default_value_t = DEFAULT_HST_NODE_LIMIT)]
    hst_limit: usize,
    /// Maximum tableau work per reasoner call.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    tableau_limit: usize,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

const UNSOLVABLE: u8 = 1;
const INPUT: u8 = 2;
const LIMIT: u8 = 3;
const INTERNAL: u8 = 4;

impl From<ReasonerError> for Failure {
    fn from(e: ReasonerError) -> Self {
        fail(LIMIT, e.to_string())
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Self {
        let code = match &e {
            CompileError::Justify(JustifyError::StaticOntologyInconsistent) | CompileError::NameClash { .. } => INPUT,
            CompileError::Justify(_) | CompileError::Reasoner(_) => LIMIT,
            CompileError::Invalid(_) => INTERNAL,
        };
        fail(code, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Reasoner(e) => e.into(),
            other => fail(INTERNAL, other.to_string()),
        }
    }
}

impl RunConfig {
    fn path(&self, explicit: &Option<PathBuf>, file: &str) -> Result<PathBuf, Failure> {
        explicit
            .clone()
            .or_else(|| self.dir.as_ref().map(|d| d.join(file)))
            .ok_or_else(|| fail(INPUT, format!("no path for {file}: pass --dir or --{}", file.split('.').next().unwrap_or(file))))
    }

    fn load(&self) -> Result<OmSpec, Failure> {
        let explicit = [&self.domain, &self.problem, &self.ontology, &self.fluents, &self.queries];
        let mut texts = Vec::new();
        for (path, file) in explicit.into_iter().zip(FILES) {
            let path = self.path(path, file)?;
            texts.push(read(&path)?);
        }
        let om = OmSpec::from_texts(&texts[0], &texts[1], &texts[2], &texts[3], &texts[4])
            .map_err(|e| fail(INPUT, e.to_string()))?;
        Ok(if self.una { om.with_unique_names() } else { om })
    }

    fn reasoner(&self) -> ReasonerConfig {
        ReasonerConfig {
            node_budget: self.tableau_limit,
            ..ReasonerConfig::default()
        }
    }

    fn options(&self) -> CompileOptions {
        CompileOptions {
            block_inconsistent: self.block_inconsistent,
            simplify: self.simplify,
            lifted: self.lifted,
            jobs: self.jobs.max(1),
            justify: JustifyConfig {
                hst_node_limit: self.hst_limit,
                reasoner: ReasonerConfig {
                    memoize: false,
                    ..self.reasoner()
                },
            },
        }
    }

    fn limits(&self) -> Limits {
        Limits {
            max_nodes: self.node_limit,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(INPUT, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(INPUT, format!("{}: {e}", path.display())))
}

fn compile_verb(run: &RunConfig, out_dir: Option<&Path>, report: Option<&Path>) -> Result<String, Failure> {
    let om = run.load()?;
    let c = compile(&om, &run.options())?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| fail(INPUT, format!("{}: {e}", dir.display())))?;
    }
    if let Some(path) = report {
        write(path, &c.report.to_json())?;
    }
    let domain = emit_domain(&c.spec.domain);
    let problem = emit_problem(&c.spec.problem);
    match out_dir {
        Some(dir) => {
            write(&dir.join("domain.pddl"), &domain)?;
            write(&dir.join("problem.pddl"), &problem)?;
            Ok(String::new())
        }
        None => Ok(format!("{domain}\n{problem}")),
    }
}

fn plan_verb(run: &RunConfig) -> Result<String, Failure> {
    let om = run.load()?;
    let c = compile(&om, &run.options())?;
    let solution = solve(&c.spec, &run.limits());
    let plan = match solution.outcome {
        Outcome::Plan(plan) => plan,
        Outcome::Unsolvable => return Err(fail(UNSOLVABLE, "unsolvable")),
        Outcome::ResourceLimit(Limit::Nodes) => return Err(fail(LIMIT, "search node limit reached")),
        Outcome::ResourceLimit(Limit::Time) => return Err(fail(LIMIT, "search time limit reached")),
    };
    if let PlanVerdict::Invalid { step, reason } = validate_plan(&c.spec, &plan) {
        return Err(fail(INTERNAL, format!("plan rejected by the compiled specification at step {step}: {reason}")));
    }
    let oracle = Oracle::with_reasoner(&om, Reasoner::new(run.reasoner()))?;
    let verdict = oracle.validate_plan(&plan)?;
    if let PlanVerdict::Invalid { step, reason } = verdict {
        return Err(fail(INTERNAL, format!("plan rejected by the direct semantics at step {step}: {reason}")));
    }
    if run.block_inconsistent {
        // The compiled guard forbids acting in inconsistent states; the
        // direct replay above allows it, so check that separately.
        let mut q = oracle.initial()?;
        let spec = om.planning();
        for (i, step) in plan.iter().enumerate() {
            if oracle.is_inconsistent(&q)? {
                return Err(fail(INTERNAL, format!("step {i} acts in an inconsistent state")));
            }
            let a = omplan_core::pddl::ground_step(spec, step).map_err(|e| fail(INTERNAL, e.to_string()))?;
            q = oracle.apply(&q, &a)?;
        }
    }
    Ok(emit_plan(&plan))
}

fn validate_verb(run: &RunConfig, plan: &Path, direct: bool) -> Result<String, Failure> {
    let om = run.load()?;
    let plan = parse_plan(&read(plan)?).map_err(|e| fail(INPUT, format!("plan: {e}")))?;
    let verdict = if direct {
        Oracle::with_reasoner(&om, Reasoner::new(run.reasoner()))?.validate_plan(&plan)?
    } else {
        let c = compile(&om, &run.options())?;
        validate_plan(&c.spec, &plan)
    };
    match verdict {
        PlanVerdict::Valid => Ok("valid\n".into()),
        PlanVerdict::Invalid { step, reason } => Err(fail(UNSOLVABLE, format!("invalid at step {step}: {reason}"))),
    }
}

fn check_verb(run: &RunConfig) -> Result<String, Failure> {
    let om = run.load()?;
    let reasoner = Reasoner::new(run.reasoner());
    let mut out = String::new();
    for d in om.diagnostics() {
        let _ = writeln!(out, "warning: {d}");
    }
    if !reasoner.is_consistent(om.ontology())? {
        eprint!("{out}");
        return Err(fail(INPUT, "static ontology is inconsistent"));
    }
    for s in om.queries() {
        let n = om.guarded_assignments(s, &reasoner)?.len();
        let _ = writeln!(out, "query {}: {n} guarded assignment{}", s.predicate, if n == 1 { "" } else { "s" });
    }
    let _ = writeln!(out, "fluents: {}", om.fluents().fluents().len());
    out.push_str("consistent\n");
    Ok(out)
}

fn write_justifications(out: &mut String, indent: &str, js: &[Justification]) {
    if js.is_empty() {
        let _ = writeln!(out, "{indent}(none)");
    }
    for (i, j) in js.iter().enumerate() {
        let axioms: Vec<String> = j.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{indent}{}: {{{}}}", i + 1, axioms.join(", "));
    }
}

fn explain_verb(run: &RunConfig, atom: &str) -> Result<String, Failure> {
    let om = run.load()?;
    let c: CompiledSpec = compile(&om, &run.options())?;
    let mut out = String::new();
    if atom.trim() == INCONSISTENT {
        out.push_str("inconsistent\n");
        write_justifications(&mut out, "  ", &c.explanation.just_bottom);
        return Ok(out);
    }
    let atom = parse_ground_atom(atom).map_err(|e| fail(INPUT, format!("atom: {e}")))?;
    if !om.is_query(&atom.predicate) {
        return Err(fail(INPUT, format!("`{}` is not a query predicate", atom.predicate)));
    }
    let q = c
        .explanation
        .queries
        .iter()
        .find(|q| q.atom == atom)
        .ok_or_else(|| fail(INPUT, format!("{atom} has no guarded assignment; it is derived only when inconsistent")))?;
    let _ = writeln!(out, "{atom}");
    out.push_str("  inconsistent, or every query axiom below\n");
    for (axiom, js) in &q.axioms {
        let _ = writeln!(out, "  {axiom}");
        write_justifications(&mut out, "    ", js);
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.verb {
        Verb::Compile { run, out_dir, report } => compile_verb(run, out_dir.as_deref(), report.as_deref()),
        Verb::Plan { run } => plan_verb(run),
        Verb::Validate { run, plan, direct } => validate_verb(run, plan, *direct),
        Verb::Check { run } => check_verb(run),
        Verb::Explain { run, atom } => explain_verb(run, atom),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("omplan: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
