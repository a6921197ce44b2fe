//! Exhaustive enumeration of small ALC interpretations.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dl::DlFact;
use crate::syntax::{Axiom, Concept, Symbol, Term};

/// Largest domain the enumerator accepts; extensions are `u8` bitmasks.
pub const MAX_DOMAIN: usize = 8;

/// An interpretation over the domain `{0, …, size-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallInterpretation {
    pub size: usize,
    pub concepts: BTreeMap<Symbol, u8>,
    /// `roles[r][x]` is the set of `r`-successors of `x`.
    pub roles: BTreeMap<Symbol, Vec<u8>>,
    pub individuals: BTreeMap<Term, usize>,
}

impl SmallInterpretation {
    fn full(&self) -> u8 {
        ((1u16 << self.size) - 1) as u8
    }

    pub fn extension(&self, c: &Concept) -> u8 {
        let full = self.full();
        match c {
            Concept::Top => full,
            Concept::Bottom => 0,
            Concept::Atomic(a) => self.concepts.get(a).copied().unwrap_or(0),
            Concept::Not(inner) => full & !self.extension(inner),
            Concept::And(a, b) => self.extension(a) & self.extension(b),
            Concept::Or(a, b) => self.extension(a) | self.extension(b),
            Concept::Exists(r, inner) | Concept::Forall(r, inner) => {
                let body = self.extension(inner);
                let rows = self.roles.get(r);
                let mut out = 0u8;
                for x in 0..self.size {
                    let succ = rows.map_or(0, |rows| rows[x]);
                    let member = match c {
                        Concept::Exists(..) => succ & body != 0,
                        _ => succ & !body == 0,
                    };
                    if member {
                        out |= 1 << x;
                    }
                }
                out
            }
        }
    }

    fn element(&self, t: &Term) -> usize {
        self.individuals[t]
    }

    pub fn satisfies_axiom(&self, ax: &Axiom) -> bool {
        match ax {
            Axiom::Inclusion { sub, sup } => self.extension(sub) & !self.extension(sup) == 0,
            Axiom::ConceptAssertion { individual, concept } => self.extension(concept) >> self.element(individual) & 1 == 1,
            Axiom::RoleAssertion { subject, object, role } => self.has_edge(role, subject, object),
        }
    }

    fn has_edge(&self, role: &Symbol, s: &Term, o: &Term) -> bool {
        self.roles.get(role).is_some_and(|rows| rows[self.element(s)] >> self.element(o) & 1 == 1)
    }

    pub fn satisfies(&self, fact: &DlFact) -> bool {
        match fact {
            DlFact::Concept { individual, concept } => {
                self.concepts.get(concept).copied().unwrap_or(0) >> self.element(individual) & 1 == 1
            }
            DlFact::Role { subject, role, object } => self.has_edge(role, subject, object),
        }
    }
}

/// Names and individuals mentioned by axioms and facts.
#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    pub concepts: BTreeSet<Symbol>,
    pub roles: BTreeSet<Symbol>,
    pub individuals: BTreeSet<Term>,
}

impl Vocabulary {
    pub fn of<'a>(axioms: &[Axiom], facts: impl IntoIterator<Item = &'a DlFact>) -> Self {
        let mut v = Vocabulary::default();
        for ax in axioms {
            match ax {
                Axiom::Inclusion { sub, sup } => {
                    sub.collect_names(&mut v.concepts, &mut v.roles);
                    sup.collect_names(&mut v.concepts, &mut v.roles);
                }
                Axiom::ConceptAssertion { individual, concept } => {
                    concept.collect_names(&mut v.concepts, &mut v.roles);
                    v.individuals.insert(individual.clone());
                }
                Axiom::RoleAssertion { subject, object, role } => {
                    v.roles.insert(role.clone());
                    v.individuals.insert(subject.clone());
                    v.individuals.insert(object.clone());
                }
            }
        }
        for f in facts {
            v.add_fact(f);
        }
        v
    }

    pub fn add_fact(&mut self, f: &DlFact) {
        match f {
            DlFact::Concept { individual, concept } => {
                self.concepts.insert(concept.clone());
                self.individuals.insert(individual.clone());
            }
            DlFact::Role { subject, role, object } => {
                self.roles.insert(role.clone());
                self.individuals.insert(subject.clone());
                self.individuals.insert(object.clone());
            }
        }
    }
}

/// Advances `digits` as an odometer with per-digit bases.
fn step(digits: &mut [usize], base: impl Fn(usize) -> usize) -> bool {
    for (i, d) in digits.iter_mut().enumerate() {
        *d += 1;
        if *d < base(i) {
            return true;
        }
        *d = 0;
    }
    false
}

/// Calls `visit` on every interpretation of `vocab` over domains of size
/// `1..=max_domain` that satisfies `axioms` and `facts`, stopping early
/// when `visit` returns false.
///
/// The first individual is always mapped to element 0; every model is
/// isomorphic to one of that shape.
pub fn for_each_model(
    vocab: &Vocabulary,
    axioms: &[Axiom],
    facts: &[DlFact],
    max_domain: usize,
    mut visit: impl FnMut(&SmallInterpretation) -> bool,
) {
    assert!(max_domain <= MAX_DOMAIN);
    let concepts: Vec<&Symbol> = vocab.concepts.iter().collect();
    let roles: Vec<&Symbol> = vocab.roles.iter().collect();
    let individuals: Vec<&Term> = vocab.individuals.iter().collect();
    for size in 1..=max_domain {
        let subsets = 1usize << size;
        let ext_digits = concepts.len();
        let role_digits = roles.len() * size;
        let ind_digits = individuals.len().saturating_sub(1);
        let mut digits = vec![0usize; ext_digits + role_digits + ind_digits];
        loop {
            let mut interp = SmallInterpretation {
                size,
                concepts: BTreeMap::new(),
                roles: BTreeMap::new(),
                individuals: BTreeMap::new(),
            };
            for (i, c) in concepts.iter().enumerate() {
                interp.concepts.insert((*c).clone(), digits[i] as u8);
            }
            for (j, r) in roles.iter().enumerate() {
                let rows = (0..size).map(|x| digits[ext_digits + j * size + x] as u8).collect();
                interp.roles.insert((*r).clone(), rows);
            }
            for (k, t) in individuals.iter().enumerate() {
                let e = if k == 0 { 0 } else { digits[ext_digits + role_digits + k - 1] };
                interp.individuals.insert((*t).clone(), e);
            }
            if axioms.iter().all(|a| interp.satisfies_axiom(a))
                && facts.iter().all(|f| interp.satisfies(f))
                && !visit(&interp)
            {
                return;
            }
            let base = |i: usize| if i < ext_digits + role_digits { subsets } else { size };
            if !step(&mut digits, base) {
                break;
            }
        }
    }
}

/// Brute-force entailment: `query` (or its negation when `negated`) holds
/// in every model of `axioms ∪ facts` up to `max_domain` elements.
pub fn entails_by_enumeration(axioms: &[Axiom], facts: &[DlFact], query: &DlFact, negated: bool, max_domain: usize) -> bool {
    let mut vocab = Vocabulary::of(axioms, facts);
    vocab.add_fact(query);
    let mut entailed = true;
    for_each_model(&vocab, axioms, facts, max_domain, |m| {
        entailed = m.satisfies(query) != negated;
        entailed
    });
    entailed
}

/// Brute-force satisfiability up to `max_domain` elements.
pub fn satisfiable_by_enumeration(axioms: &[Axiom], facts: &[DlFact], max_domain: usize) -> bool {
    let vocab = Vocabulary::of(axioms, facts);
    let mut found = false;
    for_each_model(&vocab, axioms, facts, max_domain, |_| {
        found = true;
        false
    });
    found
}

/// A random ontology over concepts `ca`, `cb`, role `r` and individuals
/// `a`, `b`, with a few asserted facts and queries.
#[derive(Clone, Debug)]
pub struct DeskCase {
    pub axioms: Vec<Axiom>,
    pub facts: Vec<DlFact>,
    pub queries: Vec<DlFact>,
}

fn random_concept(rng: &mut ChaCha8Rng, depth: usize) -> Concept {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => Concept::Top,
            1 => Concept::Bottom,
            2..=5 => Concept::atomic("ca"),
            _ => Concept::atomic("cb"),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_concept(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => Concept::not(sub(rng)),
        1 => Concept::and(sub(rng), sub(rng)),
        2 => Concept::or(sub(rng), sub(rng)),
        3 => Concept::exists("r", sub(rng)),
        _ => Concept::forall("r", sub(rng)),
    }
}

fn random_fact(rng: &mut ChaCha8Rng) -> DlFact {
    let ind = |rng: &mut ChaCha8Rng| Term::constant(if rng.gen_bool(0.5) { "a" } else { "b" });
    if rng.gen_bool(0.75) {
        let concept = Symbol::new(if rng.gen_bool(0.5) { "ca" } else { "cb" });
        DlFact::Concept { individual: ind(rng), concept }
    } else {
        DlFact::Role { subject: ind(rng), role: Symbol::new("r"), object: ind(rng) }
    }
}

/// Generates a [`DeskCase`] deterministically from `seed`.
pub fn random_desk_case(seed: u64, queries: usize) -> DeskCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut axioms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let ax = match rng.gen_range(0..4) {
            0 | 1 => Axiom::Inclusion { sub: random_concept(&mut rng, 2), sup: random_concept(&mut rng, 2) },
            2 => Axiom::ConceptAssertion {
                individual: Term::constant(if rng.gen_bool(0.5) { "a" } else { "b" }),
                concept: random_concept(&mut rng, 2),
            },
            _ => Axiom::RoleAssertion { subject: Term::constant("a"), object: Term::constant("b"), role: Symbol::new("r") },
        };
        axioms.push(ax);
    }
    let facts = (0..rng.gen_range(0..=2)).map(|_| random_fact(&mut rng)).collect();
    let queries = (0..queries).map(|_| random_fact(&mut rng)).collect();
    DeskCase { axioms, facts, queries }
}
