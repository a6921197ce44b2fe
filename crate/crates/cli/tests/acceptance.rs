//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process exits non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use hkbfs_core::dl::{entails_atom, entails_negated_atom, is_satisfiable, ObjectiveKnowledge, Ontology};
use hkbfs_core::engine::{
    alternating_fixpoint, compare_ground, gamma, gamma_prime, ifp, iterated_fixpoint, op_false, op_true, GroundKb,
};
use hkbfs_core::ground::DEFAULT_MAX_GROUND_RULES;
use hkbfs_core::oracle::models::{entails_by_enumeration, random_desk_case, satisfiable_by_enumeration};
use hkbfs_core::oracle::{
    check_coherence, enumerate_stable_partitions, is_stable_partition, random_kb, OracleLimits, RandomLimits,
};
use hkbfs_core::{parse_atom, parse_kb, Atom, AtomSet, HybridKb, Partition, ThreeValuedInterpretation, TruthValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C1_DEPTH: usize = 2;
const C1_MAX_RUNTIME: Duration = Duration::from_secs(1);
const C2_SEEDS: u64 = 500;
const C2_MAX_EXCLUSION_RATE: f64 = 0.20;
const C2_MAX_RUNTIME: Duration = Duration::from_secs(60);
const C3_MAX_KA: usize = 10;
const C4_TRIALS: u64 = 1000;
const C5_QUERIES: usize = 200;
const C5_MAX_DOMAIN: usize = 3;
const C7_DEPTHS: [usize; 3] = [2, 3, 4];
const C7_VERDICT_DEPTHS: std::ops::RangeInclusive<usize> = 2..=5;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> HybridKb {
    let text = std::fs::read_to_string(fixtures_dir().join(name)).unwrap();
    parse_kb(&text).unwrap().kb
}

fn atom(s: &str) -> Atom {
    parse_atom(s).unwrap()
}

fn render(g: &GroundKb, s: &AtomSet) -> String {
    g.known().render(s)
}

// ---------------------------------------------------------------- 1

struct SpilloverChecks {
    first_true: bool,
    first_false: Option<AtomSet>,
    second_false: Option<AtomSet>,
    fixpoint_at_two: bool,
    runtime: Duration,
}

/// Each set-valued check is `None` on success and the symmetric
/// difference otherwise.
fn spillover_checks(name: &str) -> (GroundKb, SpilloverChecks) {
    let started = Instant::now();
    let g = GroundKb::new(&fixture(name), C1_DEPTH, DEFAULT_MAX_GROUND_RULES).unwrap();
    let trace = iterated_fixpoint(&g).unwrap();
    let runtime = started.elapsed();
    let is = trace.interpretations();
    let k = g.known();
    let expected_t1: Vec<Atom> =
        ["virus(t)", "mutated(t)", "sc(t,0)", "sc(t,s(0))", "sc(t,s(s(0)))"].iter().map(|s| atom(s)).collect();
    let t1 = is[1].true_set();
    let shallow: Vec<Atom> = k.to_atoms(t1).into_iter().filter(|a| a.depth() <= C1_DEPTH).collect();
    let mut sorted_expected = expected_t1.clone();
    sorted_expected.sort();
    let first_true = shallow == sorted_expected;

    let safe_t = k.id(&atom("safe(t)")).unwrap();
    let mut expect_f1 = g.ka().difference(t1);
    expect_f1.remove(safe_t);
    let expect_f2 = g.ka().difference(t1);
    let diff = |actual: &AtomSet, expected: &AtomSet| {
        let d = actual.difference(expected).union(&expected.difference(actual));
        (!d.is_empty()).then_some(d)
    };
    let first_false = diff(is[1].false_set(), &expect_f1);
    let second_false = is.get(2).and_then(|i2| diff(i2.false_set(), &expect_f2));
    let fixpoint_at_two = trace.iterations() == 2 && is.len() == 4 && is[3] == is[2];
    let checks = SpilloverChecks { first_true, first_false, second_false, fixpoint_at_two, runtime };
    (g, checks)
}

fn describe(g: &GroundKb, c: &SpilloverChecks) -> (bool, String) {
    let mut parts = Vec::new();
    let ok = |b: bool| if b { "ok" } else { "FAIL" };
    parts.push(format!("I_T1 {}", ok(c.first_true)));
    match &c.first_false {
        None => parts.push("I_F1 ok".into()),
        Some(d) => parts.push(format!("I_F1 FAIL (differs on {})", render(g, d))),
    }
    match &c.second_false {
        None => parts.push("I_F2 ok".into()),
        Some(d) => parts.push(format!("I_F2 FAIL (differs on {})", render(g, d))),
    }
    parts.push(format!("I_3 = I_2 {}", ok(c.fixpoint_at_two)));
    let fast = c.runtime < C1_MAX_RUNTIME;
    parts.push(format!("{:.3}s {}", c.runtime.as_secs_f64(), ok(fast)));
    let pass = c.first_true && c.first_false.is_none() && c.second_false.is_none() && c.fixpoint_at_two && fast;
    (pass, parts.join("; "))
}

fn criterion_1() -> Outcome {
    let (g, c) = spillover_checks("spillover.hkb");
    let (pass, detail) = describe(&g, &c);
    Outcome::new(pass, format!("verbatim fixture, k={C1_DEPTH}, |ka|={}: {detail}", g.known().len()))
}

fn guarded_spillover_info() -> String {
    let (g, c) = spillover_checks("spillover_guarded.hkb");
    let (pass, detail) = describe(&g, &c);
    format!("guarded fixture, k={C1_DEPTH}, |ka|={}: {} ({detail})", g.known().len(), if pass { "all checks hold" } else { "checks fail" })
}

// ---------------------------------------------------------------- 2, 3

struct Corpus {
    coherent: Vec<(u64, GroundKb)>,
    excluded: Vec<(u64, String)>,
    incoherent: Vec<(u64, GroundKb)>,
    total: u64,
}

fn corpus() -> Corpus {
    let limits = RandomLimits::default();
    let mut coherent = Vec::new();
    let mut excluded = Vec::new();
    let mut incoherent = Vec::new();
    for seed in 0..C2_SEEDS {
        let g = GroundKb::new(&random_kb(seed, limits), 0, DEFAULT_MAX_GROUND_RULES).unwrap();
        let report = check_coherence(&g, OracleLimits::default());
        if report.coherent() {
            coherent.push((seed, g));
        } else {
            excluded.push((seed, report.evidence.join("; ")));
            incoherent.push((seed, g));
        }
    }
    Corpus { coherent, excluded, incoherent, total: C2_SEEDS }
}

fn criterion_2(corpus: &Corpus, started: Instant) -> Outcome {
    let mut mismatches = Vec::new();
    for (seed, g) in &corpus.coherent {
        match compare_ground(g) {
            Ok(c) if c.matches() => {}
            Ok(c) => mismatches.push(format!("seed {seed}: {}", c.render())),
            Err(e) => mismatches.push(format!("seed {seed}: {e}")),
        }
    }
    let elapsed = started.elapsed();
    let rate = corpus.excluded.len() as f64 / corpus.total as f64;
    let pass = mismatches.is_empty() && rate < C2_MAX_EXCLUSION_RATE && elapsed < C2_MAX_RUNTIME;
    let mut detail = format!(
        "{} seeds, {} coherent, {} excluded ({:.1}% < {:.0}%), {} mismatches, {:.2}s",
        corpus.total,
        corpus.coherent.len(),
        corpus.excluded.len(),
        100.0 * rate,
        100.0 * C2_MAX_EXCLUSION_RATE,
        mismatches.len(),
        elapsed.as_secs_f64()
    );
    if let Some(m) = mismatches.first() {
        write!(detail, "; first: {m}").unwrap();
    }
    Outcome::new(pass, detail)
}

fn criterion_3(corpus: &Corpus) -> Outcome {
    let limits = OracleLimits { check: C3_MAX_KA, enumerate: C3_MAX_KA };
    let mut checked = 0;
    let mut exact = 0;
    let mut failures = Vec::new();
    let all = corpus.coherent.iter().map(|(s, g)| (s, g, true)).chain(corpus.incoherent.iter().map(|(s, g)| (s, g, false)));
    for (seed, g, coherent) in all {
        if g.known().len() > C3_MAX_KA {
            continue;
        }
        let found = enumerate_stable_partitions(g, limits).unwrap();
        if coherent {
            checked += 1;
            let afp = alternating_fixpoint(g);
            let (p, n) = afp.limit();
            let part = Partition::new(p.clone(), n.clone()).unwrap();
            if !is_stable_partition(g, &part, limits).unwrap().passes() {
                failures.push(format!("seed {seed}: (P_ω, N_ω) is not stable"));
            }
            if !found.contains(&part) {
                failures.push(format!("seed {seed}: enumeration misses (P_ω, N_ω)"));
            }
        }
        for e in found.iter().filter(|e| e.is_exact()) {
            exact += 1;
            let s = e.definite();
            if &gamma(g, s) != s || &gamma_prime(g, s) != s {
                failures.push(format!("seed {seed}: exact partition {} is not a fixpoint", render(g, s)));
            }
        }
    }
    let mut detail = format!(
        "{checked} coherent KBs with |ka| ≤ {C3_MAX_KA}, {exact} exact stable partitions (all small KBs), {} mismatches",
        failures.len()
    );
    if let Some(f) = failures.first() {
        write!(detail, "; first: {f}").unwrap();
    }
    Outcome::new(failures.is_empty() && checked > 0, detail)
}

// ---------------------------------------------------------------- 4

fn random_subset(rng: &mut ChaCha8Rng, within: &AtomSet, p: f64) -> AtomSet {
    AtomSet::from_ids(within.universe_size(), within.iter().filter(|_| rng.gen_bool(p)).collect::<Vec<_>>())
}

fn ordered_pair(rng: &mut ChaCha8Rng, g: &GroundKb) -> (ThreeValuedInterpretation, ThreeValuedInterpretation) {
    let ka = g.ka();
    let t = random_subset(rng, &ka, 0.3);
    let f = random_subset(rng, &ka.difference(&t), 0.3);
    let undefined = ka.difference(&t.union(&f));
    let t2 = t.union(&random_subset(rng, &undefined, 0.3));
    let f2 = f.union(&random_subset(rng, &undefined.difference(&t2), 0.3));
    (ThreeValuedInterpretation::new(t, f).unwrap(), ThreeValuedInterpretation::new(t2, f2).unwrap())
}

fn criterion_4() -> Outcome {
    let limits = RandomLimits { constants: 3, predicates: 4, rules: 8, axioms: 4 };
    let mut violations: BTreeMap<&str, u64> = BTreeMap::new();
    for name in ["argument", "interpretation", "ifp"] {
        violations.insert(name, 0);
    }
    for trial in 0..C4_TRIALS {
        let g = GroundKb::new(&random_kb(trial, limits), 0, DEFAULT_MAX_GROUND_RULES).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(trial ^ 0x5eed);
        let (i, i2) = ordered_pair(&mut rng, &g);
        let ka = g.ka();

        let small = random_subset(&mut rng, &ka, 0.3);
        let big = small.union(&random_subset(&mut rng, &ka, 0.3));
        let arg_ok = op_true(&g, &i, &small).is_subset(&op_true(&g, &i, &big))
            && op_false(&g, &i, &small).is_subset(&op_false(&g, &i, &big));
        let s = random_subset(&mut rng, &ka, 0.4);
        let interp_ok = op_true(&g, &i, &s).is_subset(&op_true(&g, &i2, &s))
            && op_false(&g, &i, &s).is_subset(&op_false(&g, &i2, &s));
        let (t, f) = ifp(&g, &i);
        let (t2, f2) = ifp(&g, &i2);
        let ifp_ok = t.is_subset(&t2) && f.is_subset(&f2);
        for (name, ok) in [("argument", arg_ok), ("interpretation", interp_ok), ("ifp", ifp_ok)] {
            if !ok {
                *violations.get_mut(name).unwrap() += 1;
            }
        }
    }
    let total: u64 = violations.values().sum();
    let detail = format!(
        "{C4_TRIALS} trials each; violations: argument {}, interpretation {}, IFP {}",
        violations["argument"], violations["interpretation"], violations["ifp"]
    );
    Outcome::new(total == 0, detail)
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let mut queries = 0;
    let mut mismatches = Vec::new();
    let mut seed = 0;
    while queries < C5_QUERIES {
        let case = random_desk_case(seed, 4);
        let onto = Ontology::compile(&case.axioms);
        let atoms: Vec<Atom> = case.facts.iter().map(|f| f.to_atom()).collect();
        let ob = ObjectiveKnowledge::new(&onto, &atoms);
        if is_satisfiable(ob) != satisfiable_by_enumeration(&case.axioms, &case.facts, C5_MAX_DOMAIN) {
            mismatches.push(format!("seed {seed}: satisfiability"));
        }
        for q in case.queries.iter().take(C5_QUERIES - queries) {
            let a = q.to_atom();
            if entails_atom(ob, &a) != entails_by_enumeration(&case.axioms, &case.facts, q, false, C5_MAX_DOMAIN) {
                mismatches.push(format!("seed {seed}: {a}"));
            }
            if entails_negated_atom(ob, &a)
                != entails_by_enumeration(&case.axioms, &case.facts, q, true, C5_MAX_DOMAIN)
            {
                mismatches.push(format!("seed {seed}: not {a}"));
            }
            queries += 1;
        }
        seed += 1;
    }
    let mut detail = format!("{queries} queries over {seed} ontologies, domain ≤ {C5_MAX_DOMAIN}, {} mismatches", mismatches.len());
    if let Some(m) = mismatches.first() {
        write!(detail, "; first: {m}").unwrap();
    }
    Outcome::new(mismatches.is_empty(), detail)
}

// ---------------------------------------------------------------- 6

fn fixture_files() -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![fixtures_dir()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|e| e == "hkb") {
                out.push(path);
            }
        }
    }
    out.sort();
    out
}

fn query_atom(path: &Path) -> &'static str {
    match path.file_stem().and_then(|s| s.to_str()) {
        Some(s) if s.starts_with("spillover") => "safe(t)",
        Some("disjoint") => "flier(opus)",
        Some("inconsistent") => "q",
        _ => "p",
    }
}

fn criterion_6() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_hkbfs");
    let commands = ["query", "partition", "trace", "compare", "check-coherence", "validate"];
    let mut runs = 0;
    let mut differing = Vec::new();
    for path in fixture_files() {
        for cmd in commands {
            for format in ["text", "structured"] {
                let invoke = || {
                    Process::new(bin)
                        .arg(cmd)
                        .arg("--kb")
                        .arg(&path)
                        .args(["--depth", "2", "--format", format, "--atom", query_atom(&path)])
                        .output()
                        .unwrap()
                };
                let (a, b) = (invoke(), invoke());
                runs += 2;
                if a.stdout != b.stdout || a.stderr != b.stderr || a.status != b.status {
                    let name = path.file_name().unwrap().to_string_lossy();
                    differing.push(format!("{cmd} --format {format} on {name}"));
                }
            }
        }
    }
    let mut detail = format!("{runs} runs, {} differing pairs", differing.len());
    if let Some(d) = differing.first() {
        write!(detail, "; first: {d}").unwrap();
    }
    Outcome::new(differing.is_empty(), detail)
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let kb = fixture("spillover.hkb");
    let true_at = |k: usize| {
        let g = GroundKb::new(&kb, k, DEFAULT_MAX_GROUND_RULES).unwrap();
        let trace = iterated_fixpoint(&g).unwrap();
        let t = g.known().to_atoms(trace.fixpoint().true_set());
        let value = |s: &str| g.known().id(&atom(s)).map(|id| trace.fixpoint().value(id));
        let verdicts = ["virus(t)", "mutated(t)", "safe(t)"].map(value);
        (t, verdicts)
    };
    let mut problems = Vec::new();
    for k in C7_DEPTHS {
        let (lower, _) = true_at(k);
        let (upper, _) = true_at(k + 1);
        let lost: Vec<String> =
            lower.iter().filter(|a| a.depth() < k && !upper.contains(a)).map(Atom::to_string).collect();
        if !lost.is_empty() {
            problems.push(format!("k={k}→{}: lost {}", k + 1, lost.join(", ")));
        }
    }
    let verdicts: Vec<[Option<TruthValue>; 3]> = C7_VERDICT_DEPTHS.map(|k| true_at(k).1).collect();
    if verdicts.iter().any(|v| v != &verdicts[0] || v.contains(&None)) {
        problems.push(format!("verdicts vary with k: {verdicts:?}"));
    }
    let shown: Vec<String> = verdicts[0].iter().map(|v| v.map_or("unknown".into(), |v| v.to_string())).collect();
    let mut detail = format!(
        "k ∈ {C7_DEPTHS:?}; verdicts for k ∈ {C7_VERDICT_DEPTHS:?}: virus(t) {}, mutated(t) {}, safe(t) {}",
        shown[0], shown[1], shown[2]
    );
    for p in &problems {
        write!(detail, "; {p}").unwrap();
    }
    Outcome::new(problems.is_empty(), detail)
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("1 spillover reproduction", criterion_1()));
    let started = Instant::now();
    let corpus = corpus();
    results.push(("2 differential suite", criterion_2(&corpus, started)));
    results.push(("3 stable-partition oracle", criterion_3(&corpus)));
    results.push(("4 monotonicity", criterion_4()));
    results.push(("5 DL reasoner vs enumeration", criterion_5()));
    results.push(("6 determinism", criterion_6()));
    results.push(("7 depth monotonicity", criterion_7()));

    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("INFO {}", guarded_spillover_info());
    let excluded: Vec<String> = corpus.excluded.iter().map(|(s, why)| format!("  seed {s}: {why}")).collect();
    println!("INFO excluded as incoherent ({}):\n{}", excluded.len(), excluded.join("\n"));

    let failed = results.iter().filter(|(_, o)| !o.pass).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
