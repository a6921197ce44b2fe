//! Satisfiability and entailment over the objective knowledge `π(O) ∪ S`,
//! decided by an ALC tableau.

mod tableau;

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::ground::KnownAtoms;
use crate::semantics::{AtomId, AtomSet};
use crate::syntax::{Atom, Axiom, Symbol, Term};

use tableau::{ConceptArena, ConceptId, Problem, RoleId, Tableau};

/// A ground DL atom read as an ABox assertion.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum DlFact {
    Concept { individual: Term, concept: Symbol },
    Role { subject: Term, role: Symbol, object: Term },
}

impl DlFact {
    pub fn to_atom(&self) -> Atom {
        match self {
            DlFact::Concept { individual, concept } => Atom::new(concept.as_str(), vec![individual.clone()]),
            DlFact::Role { subject, role, object } => Atom::new(role.as_str(), vec![subject.clone(), object.clone()]),
        }
    }
}

/// An ontology compiled for the tableau: concepts in NNF, GCIs
/// internalised, ABox kept aside.
#[derive(Clone, Debug)]
pub struct Ontology {
    arena: ConceptArena,
    tbox: Vec<ConceptId>,
    concept_assertions: Vec<(Term, ConceptId)>,
    role_assertions: Vec<(Term, RoleId, Term)>,
    literals: HashMap<Symbol, (ConceptId, ConceptId)>,
    roles: BTreeSet<Symbol>,
}

impl Ontology {
    pub fn compile(axioms: &[Axiom]) -> Self {
        let mut arena = ConceptArena::default();
        let (mut concepts, mut roles) = (BTreeSet::new(), BTreeSet::new());
        for ax in axioms {
            match ax {
                Axiom::Inclusion { sub, sup } => {
                    sub.collect_names(&mut concepts, &mut roles);
                    sup.collect_names(&mut concepts, &mut roles);
                }
                Axiom::ConceptAssertion { concept, .. } => concept.collect_names(&mut concepts, &mut roles),
                Axiom::RoleAssertion { role, .. } => {
                    roles.insert(role.clone());
                }
            }
        }
        let literals = concepts
            .iter()
            .map(|c| (c.clone(), (arena.literal(c, false), arena.literal(c, true))))
            .collect();
        for r in &roles {
            arena.role(r);
        }
        let mut tbox = Vec::new();
        let mut concept_assertions = Vec::new();
        let mut role_assertions = Vec::new();
        for ax in axioms {
            match ax {
                Axiom::Inclusion { sub, sup } => tbox.extend(arena.internalise(sub, sup)),
                Axiom::ConceptAssertion { individual, concept } => {
                    concept_assertions.push((individual.clone(), arena.nnf(concept, false)))
                }
                Axiom::RoleAssertion { subject, object, role } => {
                    let r = arena.role(role);
                    role_assertions.push((subject.clone(), r, object.clone()));
                }
            }
        }
        tbox.sort();
        tbox.dedup();
        Ontology { arena, tbox, concept_assertions, role_assertions, literals, roles }
    }

    /// Reads a ground atom as a DL assertion, or `None` for non-DL atoms.
    pub fn classify(&self, atom: &Atom) -> Option<DlFact> {
        match atom.args.as_slice() {
            [t] if self.literals.contains_key(atom.predicate.as_str()) => {
                Some(DlFact::Concept { individual: t.clone(), concept: atom.predicate.clone() })
            }
            [s, o] if self.roles.contains(atom.predicate.as_str()) => {
                Some(DlFact::Role { subject: s.clone(), role: atom.predicate.clone(), object: o.clone() })
            }
            _ => None,
        }
    }

    fn problem<'a>(&self, facts: impl IntoIterator<Item = &'a DlFact>, extra: Option<(&DlFact, bool)>) -> Problem {
        let mut problem = Problem::default();
        let mut nodes: HashMap<Term, usize> = HashMap::new();
        let mut node = |p: &mut Problem, t: &Term| *nodes.entry(t.clone()).or_insert_with(|| p.add_individual());
        for (t, c) in &self.concept_assertions {
            let n = node(&mut problem, t);
            problem.labels[n].push(*c);
        }
        for (s, r, o) in &self.role_assertions {
            let (s, o) = (node(&mut problem, s), node(&mut problem, o));
            problem.edges.push((s, *r, o));
        }
        let facts = facts.into_iter().map(|f| (f, false)).chain(extra);
        for (fact, negated) in facts {
            match fact {
                DlFact::Concept { individual, concept } => {
                    let (pos, neg) = self.literals[concept.as_str()];
                    let n = node(&mut problem, individual);
                    problem.labels[n].push(if negated { neg } else { pos });
                }
                DlFact::Role { subject, role, object } => {
                    debug_assert!(!negated, "negated role assertions are not expressible");
                    let r = self.arena.lookup_role(role.as_str()).expect("role compiled with the ontology");
                    let (s, o) = (node(&mut problem, subject), node(&mut problem, object));
                    problem.edges.push((s, r, o));
                }
            }
        }
        problem
    }

    fn run(&self, problem: &Problem) -> bool {
        Tableau::new(&self.arena, &self.tbox).is_satisfiable(problem)
    }

    /// Whether `π(O) ∪ facts` has a model.
    pub fn is_satisfiable<'a>(&self, facts: impl IntoIterator<Item = &'a DlFact>) -> bool {
        self.run(&self.problem(facts, None))
    }

    /// Whether `π(O) ∪ facts ⊨ query`.
    pub fn entails(&self, facts: &[DlFact], query: &DlFact) -> bool {
        match query {
            DlFact::Concept { .. } => !self.run(&self.problem(facts, Some((query, true)))),
            // Without role constructors, a role assertion is entailed only
            // when asserted or when the theory is inconsistent.
            DlFact::Role { .. } => {
                facts.contains(query) || self.asserts_role(query) || !self.is_satisfiable(facts)
            }
        }
    }

    /// Whether `π(O) ∪ facts ⊨ ¬query`.
    pub fn entails_negation(&self, facts: &[DlFact], query: &DlFact) -> bool {
        !self.run(&self.problem(facts, Some((query, false))))
    }

    fn asserts_role(&self, query: &DlFact) -> bool {
        let DlFact::Role { subject, role, object } = query else { return false };
        let Some(r) = self.arena.lookup_role(role.as_str()) else { return false };
        self.role_assertions.iter().any(|(s, rr, o)| s == subject && *rr == r && o == object)
    }
}

/// The objective knowledge `π(O) ∪ S` for a set `S` of ground atoms. Only
/// the DL atoms of `S` reach the tableau.
#[derive(Clone, Copy, Debug)]
pub struct ObjectiveKnowledge<'a> {
    pub ontology: &'a Ontology,
    pub atoms: &'a [Atom],
}

impl<'a> ObjectiveKnowledge<'a> {
    pub fn new(ontology: &'a Ontology, atoms: &'a [Atom]) -> Self {
        ObjectiveKnowledge { ontology, atoms }
    }

    fn facts(&self) -> Vec<DlFact> {
        self.atoms.iter().filter_map(|a| self.ontology.classify(a)).collect()
    }
}

pub fn is_satisfiable(ob: ObjectiveKnowledge<'_>) -> bool {
    ob.ontology.is_satisfiable(&ob.facts())
}

pub fn entails_atom(ob: ObjectiveKnowledge<'_>, a: &Atom) -> bool {
    let facts = ob.facts();
    if !ob.ontology.is_satisfiable(&facts) {
        return true;
    }
    match ob.ontology.classify(a) {
        None => ob.atoms.contains(a),
        Some(q) => ob.ontology.entails(&facts, &q),
    }
}

pub fn entails_negated_atom(ob: ObjectiveKnowledge<'_>, a: &Atom) -> bool {
    let facts = ob.facts();
    if !ob.ontology.is_satisfiable(&facts) {
        return true;
    }
    match ob.ontology.classify(a) {
        None => false,
        Some(q) => ob.ontology.entails_negation(&facts, &q),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Query {
    Satisfiable,
    Entails(AtomId),
    EntailsNegation(AtomId),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

impl CacheStats {
    pub fn hit_rate(&self) -> f64 {
        let total = self.hits + self.misses;
        if total == 0 {
            0.0
        } else {
            self.hits as f64 / total as f64
        }
    }
}

/// Memoised answers keyed by the DL part of `S` and the query.
#[derive(Debug, Default)]
pub struct EntailmentCache {
    table: Mutex<HashMap<(AtomSet, Query), bool>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl EntailmentCache {
    fn get_or(&self, key: (AtomSet, Query), compute: impl FnOnce() -> bool) -> bool {
        if let Some(&v) = self.table.lock().expect("cache lock").get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return v;
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let v = compute();
        self.table.lock().expect("cache lock").insert(key, v);
        v
    }

    pub fn clear(&self) {
        self.table.lock().expect("cache lock").clear();
        self.hits.store(0, Ordering::Relaxed);
        self.misses.store(0, Ordering::Relaxed);
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats { hits: self.hits.load(Ordering::Relaxed), misses: self.misses.load(Ordering::Relaxed) }
    }
}

/// Entailment over sets of known atoms of one grounding.
#[derive(Debug)]
pub struct Reasoner {
    ontology: Ontology,
    facts: Vec<Option<DlFact>>,
    dl_mask: AtomSet,
    cache: Option<EntailmentCache>,
}

impl Reasoner {
    pub fn new(ontology: Ontology, known: &KnownAtoms) -> Self {
        let facts: Vec<Option<DlFact>> = known.iter().map(|(_, a)| ontology.classify(a)).collect();
        let dl_mask =
            AtomSet::from_ids(known.len(), facts.iter().enumerate().filter(|(_, f)| f.is_some()).map(|(i, _)| AtomId(i as u32)));
        Reasoner { ontology, facts, dl_mask, cache: Some(EntailmentCache::default()) }
    }

    pub fn without_cache(mut self) -> Self {
        self.cache = None;
        self
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn is_dl(&self, id: AtomId) -> bool {
        self.dl_mask.contains(id)
    }

    /// The DL atoms among the known atoms.
    pub fn dl_atoms(&self) -> &AtomSet {
        &self.dl_mask
    }

    pub fn cache(&self) -> Option<&EntailmentCache> {
        self.cache.as_ref()
    }

    fn facts_of(&self, s: &AtomSet) -> Vec<DlFact> {
        s.iter().filter_map(|id| self.facts[id.index()].clone()).collect()
    }

    fn memo(&self, s: &AtomSet, q: Query, compute: impl FnOnce(&[DlFact]) -> bool) -> bool {
        let dl = s.intersection(&self.dl_mask);
        match &self.cache {
            Some(c) => c.get_or((dl.clone(), q), || compute(&self.facts_of(&dl))),
            None => compute(&self.facts_of(&dl)),
        }
    }

    pub fn is_satisfiable(&self, s: &AtomSet) -> bool {
        self.memo(s, Query::Satisfiable, |f| self.ontology.is_satisfiable(f))
    }

    pub fn entails(&self, s: &AtomSet, a: AtomId) -> bool {
        if s.contains(a) || !self.is_satisfiable(s) {
            return true;
        }
        match &self.facts[a.index()] {
            None => false,
            Some(q) => self.memo(s, Query::Entails(a), |f| self.ontology.entails(f, q)),
        }
    }

    pub fn entails_negation(&self, s: &AtomSet, a: AtomId) -> bool {
        if !self.is_satisfiable(s) {
            return true;
        }
        match &self.facts[a.index()] {
            None => false,
            Some(_) if s.contains(a) => false,
            Some(q) => self.memo(s, Query::EntailsNegation(a), |f| self.ontology.entails_negation(f, q)),
        }
    }

    /// `{a ∈ ka | OB(S) ⊨ a}`.
    pub fn entailed(&self, s: &AtomSet) -> AtomSet {
        if !self.is_satisfiable(s) {
            return AtomSet::full(s.universe_size());
        }
        let mut out = s.clone();
        for id in self.dl_mask.difference(s).iter() {
            if self.entails(s, id) {
                out.insert(id);
            }
        }
        out
    }

    /// `{a ∈ ka | OB(S) ⊨ ¬a}`.
    pub fn negation_entailed(&self, s: &AtomSet) -> AtomSet {
        if !self.is_satisfiable(s) {
            return AtomSet::full(s.universe_size());
        }
        let mut out = AtomSet::empty(s.universe_size());
        for id in self.dl_mask.iter() {
            if self.entails_negation(s, id) {
                out.insert(id);
            }
        }
        out
    }
}
