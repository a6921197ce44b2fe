//! Command dispatch for the `hkbfs` binary.
//!
//! [`run`] does all the work and returns the text destined for stdout and
//! stderr together with the exit status, so it can be driven in-process.

use std::path::PathBuf;

use hkbfs_core::engine::{alternating_fixpoint, compare_ground, iterated_fixpoint, Comparison, GroundKb, IfpTrace};
use hkbfs_core::ground::DEFAULT_MAX_GROUND_RULES;
use hkbfs_core::oracle::{check_coherence, CoherenceReport, OracleLimits};
use hkbfs_core::parser::parse_kb_named;
use hkbfs_core::{parse_atom, Atom, AtomSet, Diagnostic, Error, HybridKb, KnownAtoms};
use serde::Serialize;

/// Version of the structured output document.
pub const SCHEMA_VERSION: u32 = 1;

pub mod exit {
    pub const SUCCESS: u8 = 0;
    /// Diagnostics were reported as errors: parse errors, unknown atoms,
    /// grounding limits, a failed comparison.
    pub const DIAGNOSTICS: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INCOHERENT: u8 = 3;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Query,
    Partition,
    Trace,
    Compare,
    CheckCoherence,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Query => "query",
            Command::Partition => "partition",
            Command::Trace => "trace",
            Command::Compare => "compare",
            Command::CheckCoherence => "check-coherence",
            Command::Validate => "validate",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub kb: PathBuf,
    pub depth: usize,
    pub command: Command,
    pub atom: Option<String>,
    pub format: Format,
    pub max_ground_rules: u64,
}

impl RunConfig {
    pub const DEFAULT_DEPTH: usize = 3;

    pub fn new(command: Command, kb: impl Into<PathBuf>) -> Self {
        RunConfig {
            kb: kb.into(),
            depth: Self::DEFAULT_DEPTH,
            command,
            atom: None,
            format: Format::Text,
            max_ground_rules: DEFAULT_MAX_GROUND_RULES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize, Debug, Default)]
struct Verdict {
    atom: String,
    value: String,
}

#[derive(Serialize, Debug)]
struct ComparisonDoc {
    matches: bool,
    true_atoms: Vec<String>,
    definite: Vec<String>,
    not_false: Vec<String>,
    possible: Vec<String>,
}

#[derive(Serialize, Debug)]
struct CoherenceDoc {
    coherent: bool,
    definite: Vec<String>,
    possible: Vec<String>,
    minimality_checked: bool,
    evidence: Vec<String>,
}

#[derive(Serialize, Debug)]
struct StepDoc {
    op_true: Vec<Vec<String>>,
    op_false: Vec<Vec<String>>,
    true_atoms: Vec<String>,
    false_atoms: Vec<String>,
}

/// The structured output document. Fields a command does not compute are
/// `null`; see the README for the schema.
#[derive(Serialize, Debug)]
struct Document {
    schema_version: u32,
    command: &'static str,
    status: u8,
    ka_size: Option<usize>,
    depth: usize,
    iterations: Option<usize>,
    true_atoms: Option<Vec<String>>,
    false_atoms: Option<Vec<String>>,
    undefined_atoms: Option<Vec<String>>,
    verdicts: Vec<Verdict>,
    diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<StepDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ComparisonDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coherence: Option<CoherenceDoc>,
}

/// Accumulates both renderings while a command runs.
struct Report {
    doc: Document,
    text: String,
}

impl Report {
    fn new(config: &RunConfig) -> Self {
        Report {
            doc: Document {
                schema_version: SCHEMA_VERSION,
                command: config.command.name(),
                status: exit::SUCCESS,
                ka_size: None,
                depth: config.depth,
                iterations: None,
                true_atoms: None,
                false_atoms: None,
                undefined_atoms: None,
                verdicts: Vec::new(),
                diagnostics: Vec::new(),
                trace: None,
                comparison: None,
                coherence: None,
            },
            text: String::new(),
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn diagnostic(&mut self, d: impl ToString) {
        self.doc.diagnostics.push(d.to_string());
    }

    fn fail(&mut self, status: u8, message: impl ToString) -> Halt {
        self.diagnostic(message);
        self.doc.status = status;
        Halt
    }

    fn ifp(&mut self, g: &GroundKb, trace: &IfpTrace) {
        let k = g.known();
        let i = trace.fixpoint();
        self.doc.ka_size = Some(k.len());
        self.doc.iterations = Some(trace.iterations());
        self.doc.true_atoms = Some(names(k, i.true_set()));
        self.doc.false_atoms = Some(names(k, i.false_set()));
        self.doc.undefined_atoms = Some(names(k, &i.undefined_set()));
        for d in &trace.diagnostics {
            self.diagnostic(format!("warning: {d}"));
        }
    }

    fn finish(self, format: Format) -> Outcome {
        let status = self.doc.status;
        match format {
            Format::Text => Outcome { status, stdout: self.text, stderr: lines(&self.doc.diagnostics) },
            Format::Structured => {
                let mut stdout = serde_json::to_string_pretty(&self.doc).expect("document serialises");
                stdout.push('\n');
                Outcome { status, stdout, stderr: String::new() }
            }
        }
    }
}

fn lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

fn names(k: &KnownAtoms, s: &AtomSet) -> Vec<String> {
    s.iter().map(|id| k.atom(id).to_string()).collect()
}

fn strings(atoms: &[Atom]) -> Vec<String> {
    atoms.iter().map(Atom::to_string).collect()
}

fn error_status(e: &Error) -> u8 {
    match e {
        Error::Incoherent(_) => exit::INCOHERENT,
        _ => exit::DIAGNOSTICS,
    }
}

/// Runs one command. Never panics on bad input; every failure becomes a
/// diagnostic and a non-zero status.
pub fn run(config: &RunConfig) -> Outcome {
    let mut report = Report::new(config);
    // On `Halt` the status and diagnostics are already recorded.
    let _ = dispatch(config, &mut report);
    report.finish(config.format)
}

/// Stops a command early; the reason is in the report.
struct Halt;

type Step<T = ()> = std::result::Result<T, Halt>;

fn dispatch(config: &RunConfig, report: &mut Report) -> Step {
    // Usage problems come first so they are reported even for a bad path.
    let atom = match (config.command, &config.atom) {
        (Command::Query, None) => return Err(report.fail(exit::USAGE, "error: `query` requires --atom")),
        (Command::Query, Some(text)) => match parse_atom(text) {
            Ok(a) if a.is_ground() => Some(a),
            Ok(a) => return Err(report.fail(exit::USAGE, format!("error: query atom `{a}` is not ground"))),
            Err(diags) => {
                for d in diags {
                    report.diagnostic(d);
                }
                return Err(report.fail(exit::USAGE, format!("error: cannot parse atom `{text}`")));
            }
        },
        _ => None,
    };
    let text = std::fs::read_to_string(&config.kb)
        .map_err(|e| report.fail(exit::USAGE, format!("error: cannot read {}: {e}", config.kb.display())))?;
    let source = match parse_kb_named(&config.kb.display().to_string(), &text) {
        Ok(s) => s,
        Err(diags) => {
            let n = diags.iter().filter(|d| d.is_error()).count();
            for d in diags {
                report.diagnostic(d);
            }
            report.line(format!("{n} error(s)"));
            report.doc.status = exit::DIAGNOSTICS;
            return Err(Halt);
        }
    };
    let warnings: Vec<Diagnostic> = source.dl_safety_warnings();
    for w in &warnings {
        report.diagnostic(w);
    }
    let kb = &source.kb;
    match config.command {
        Command::Validate => {
            report.line(format!(
                "ok: {} axiom(s), {} rule(s), {} warning(s)",
                kb.ontology().len(),
                kb.program().len(),
                warnings.len()
            ));
            Ok(())
        }
        Command::Query => query(config, report, kb, &atom.expect("checked above")),
        Command::Partition => partition(config, report, kb),
        Command::Trace => trace(config, report, kb),
        Command::Compare => compare(config, report, kb),
        Command::CheckCoherence => coherence(config, report, kb),
    }
}

fn ground(config: &RunConfig, report: &mut Report, kb: &HybridKb) -> Step<GroundKb> {
    GroundKb::new(kb, config.depth, config.max_ground_rules).map_err(|e| report.fail(error_status(&e), format!("error: {e}")))
}

fn fixpoint(report: &mut Report, g: &GroundKb) -> Step<IfpTrace> {
    iterated_fixpoint(g).map_err(|e| {
        for d in g.diagnostics() {
            report.diagnostic(format!("warning: {d}"));
        }
        report.fail(error_status(&e), format!("error: {e}"))
    })
}

fn query(config: &RunConfig, report: &mut Report, kb: &HybridKb, atom: &Atom) -> Step {
    let g = ground(config, report, kb)?;
    let Some(id) = g.known().id(atom) else {
        let e = Error::UnknownAtom { atom: atom.to_string(), depth: config.depth };
        return Err(report.fail(exit::DIAGNOSTICS, format!("error: {e}")));
    };
    let trace = fixpoint(report, &g)?;
    report.ifp(&g, &trace);
    let value = trace.fixpoint().value(id);
    report.line(format!("{value} (k={})", config.depth));
    report.doc.verdicts.push(Verdict { atom: atom.to_string(), value: value.to_string() });
    Ok(())
}

fn partition(config: &RunConfig, report: &mut Report, kb: &HybridKb) -> Step {
    let g = ground(config, report, kb)?;
    let trace = fixpoint(report, &g)?;
    report.ifp(&g, &trace);
    let k = g.known();
    let i = trace.fixpoint();
    report.line(format!("k = {}, |ka| = {}, iterations = {}", config.depth, k.len(), trace.iterations()));
    report.line(format!("I_T = {}", k.render(i.true_set())));
    report.line(format!("I_F = {}", k.render(i.false_set())));
    report.line(format!("undefined = {}", k.render(&i.undefined_set())));
    Ok(())
}

fn trace(config: &RunConfig, report: &mut Report, kb: &HybridKb) -> Step {
    let g = ground(config, report, kb)?;
    let trace = fixpoint(report, &g)?;
    report.ifp(&g, &trace);
    let k = g.known();
    report.text.push_str(&trace.render(&g));
    report.doc.trace = Some(
        trace
            .steps
            .iter()
            .map(|s| StepDoc {
                op_true: s.op_true.iter().map(|a| names(k, a)).collect(),
                op_false: s.op_false.iter().map(|a| names(k, a)).collect(),
                true_atoms: names(k, s.result.true_set()),
                false_atoms: names(k, s.result.false_set()),
            })
            .collect(),
    );
    Ok(())
}

fn compare(config: &RunConfig, report: &mut Report, kb: &HybridKb) -> Step {
    if !kb.is_function_free() {
        return Err(report.fail(exit::DIAGNOSTICS, format!("error: {}", Error::NotFunctionFree)));
    }
    let g = ground(config, report, kb)?;
    let trace = fixpoint(report, &g)?;
    report.ifp(&g, &trace);
    let c: Comparison = compare_ground(&g).map_err(|e| report.fail(error_status(&e), format!("error: {e}")))?;
    report.line(c.render());
    report.doc.comparison = Some(ComparisonDoc {
        matches: c.matches(),
        true_atoms: strings(&c.true_atoms),
        definite: strings(&c.definite),
        not_false: strings(&c.not_false),
        possible: strings(&c.possible),
    });
    if !c.matches() {
        report.doc.status = exit::DIAGNOSTICS;
    }
    Ok(())
}

fn coherence(config: &RunConfig, report: &mut Report, kb: &HybridKb) -> Step {
    let g = ground(config, report, kb)?;
    let k = g.known();
    let afp = alternating_fixpoint(&g);
    let r: CoherenceReport = check_coherence(&g, OracleLimits::default());
    report.doc.ka_size = Some(k.len());
    report.doc.iterations = Some(afp.iterations());
    report.line(format!("{} (k={}, |ka|={})", if r.coherent() { "coherent" } else { "incoherent" }, config.depth, k.len()));
    report.line(format!("P_ω = {}", k.render(&r.definite)));
    report.line(format!("N_ω = {}", k.render(&r.possible)));
    for e in &r.evidence {
        report.line(format!("note: {e}"));
    }
    for d in g.diagnostics() {
        report.diagnostic(format!("warning: {d}"));
    }
    report.doc.coherence = Some(CoherenceDoc {
        coherent: r.coherent(),
        definite: names(k, &r.definite),
        possible: names(k, &r.possible),
        minimality_checked: r.stability.is_some(),
        evidence: r.evidence.clone(),
    });
    if !r.coherent() {
        report.doc.status = exit::INCOHERENT;
    }
    Ok(())
}
