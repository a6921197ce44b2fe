//! The alternating fixpoint partition and the iterated fixpoint semantics
//! over a depth-bounded grounding.

mod afp;
mod ifp;

use std::collections::BTreeSet;
use std::sync::Mutex;

use crate::dl::{Ontology, Reasoner};
use crate::error::{Error, Result};
use crate::ground::{ground_program, GroundProgram, GroundRule, KnownAtoms, DEFAULT_MAX_GROUND_RULES};
use crate::semantics::{AtomId, AtomSet, TruthValue};
use crate::syntax::{Atom, HybridKb};

pub use afp::{alternating_fixpoint, alternating_fixpoint_partition, gamma, gamma_prime, AfpTrace};
pub use ifp::{
    gfp_op_false, ifp, iterated_fixpoint, lfp_op_true, op_false, op_true, IfpStep, IfpTrace,
};

/// A ground knowledge base: the grounding, its known atoms and a reasoner
/// for the ontology.
#[derive(Debug)]
pub struct GroundKb {
    program: GroundProgram,
    known: KnownAtoms,
    reasoner: Reasoner,
    by_head: Vec<Vec<usize>>,
    inconsistencies: Mutex<BTreeSet<String>>,
}

impl GroundKb {
    pub fn new(kb: &HybridKb, depth: usize, max_rules: u64) -> Result<Self> {
        let (program, known) = ground_program(kb, depth, max_rules)?;
        Ok(Self::from_grounding(kb, program, known))
    }

    pub fn from_grounding(kb: &HybridKb, program: GroundProgram, known: KnownAtoms) -> Self {
        let reasoner = Reasoner::new(Ontology::compile(kb.ontology()), &known);
        let mut by_head = vec![Vec::new(); known.len()];
        for (i, r) in program.rules.iter().enumerate() {
            by_head[r.head.index()].push(i);
        }
        GroundKb { program, known, reasoner, by_head, inconsistencies: Mutex::new(BTreeSet::new()) }
    }

    pub fn program(&self) -> &GroundProgram {
        &self.program
    }

    pub fn known(&self) -> &KnownAtoms {
        &self.known
    }

    pub fn reasoner(&self) -> &Reasoner {
        &self.reasoner
    }

    pub fn ka(&self) -> AtomSet {
        self.known.all()
    }

    pub fn empty_set(&self) -> AtomSet {
        self.known.empty_set()
    }

    /// Ground rules whose head is `a`.
    pub fn rules_for(&self, a: AtomId) -> impl Iterator<Item = &GroundRule> {
        self.by_head[a.index()].iter().map(move |&i| &self.program.rules[i])
    }

    /// Messages for every set whose objective knowledge was found
    /// inconsistent so far, in sorted order.
    pub fn diagnostics(&self) -> Vec<String> {
        self.inconsistencies.lock().expect("diagnostics lock").iter().cloned().collect()
    }

    /// Records a diagnostic when `OB(S)` is inconsistent. Entailment then
    /// explodes, which callers get from the reasoner anyway.
    fn note_consistency(&self, s: &AtomSet, context: &str) {
        if !self.reasoner.is_satisfiable(s) {
            let msg = format!(
                "{context}: objective knowledge over {} is inconsistent; every atom is entailed",
                self.known.render(&s.intersection(self.reasoner.dl_atoms()))
            );
            self.inconsistencies.lock().expect("diagnostics lock").insert(msg);
        }
    }

    fn entailed(&self, s: &AtomSet, context: &str) -> AtomSet {
        self.note_consistency(s, context);
        self.reasoner.entailed(s)
    }
}

/// A positive ground knowledge base: a selection of ground rules read
/// without their negative bodies, over the same ontology.
#[derive(Clone, Debug)]
pub struct PositiveGroundKb<'a> {
    base: &'a GroundKb,
    rules: Vec<usize>,
}

impl<'a> PositiveGroundKb<'a> {
    /// Every rule of `base` with its negative body dropped.
    pub fn strip_negation(base: &'a GroundKb) -> Self {
        PositiveGroundKb { base, rules: (0..base.program.rules.len()).collect() }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Indices into the ground program of the kept rules.
    pub fn rule_indices(&self) -> &[usize] {
        &self.rules
    }

    fn rules(&self) -> impl Iterator<Item = &GroundRule> {
        self.rules.iter().map(|&i| &self.base.program.rules[i])
    }

    /// `R_K(S)`: heads of rules whose positive body lies in `S`.
    pub fn rk(&self, s: &AtomSet) -> AtomSet {
        let mut out = self.base.empty_set();
        for r in self.rules() {
            if r.positive.iter().all(|&a| s.contains(a)) {
                out.insert(r.head);
            }
        }
        out
    }

    /// `D_K(S)`: known atoms entailed by `OB(S)`.
    pub fn dk(&self, s: &AtomSet) -> AtomSet {
        self.base.entailed(s, "D_K")
    }

    /// `lfp T_K` by upward iteration from the empty set.
    pub fn lfp_tk(&self) -> AtomSet {
        let mut s = self.base.empty_set();
        loop {
            let next = self.rk(&s).union(&self.dk(&s));
            if next == s {
                return s;
            }
            s = next;
        }
    }
}

/// `K/S`: rules whose negative body avoids `S`.
pub fn mknf_transform<'a>(g: &'a GroundKb, s: &AtomSet) -> PositiveGroundKb<'a> {
    let rules = (0..g.program.rules.len())
        .filter(|&i| g.program.rules[i].negative.iter().all(|&b| !s.contains(b)))
        .collect();
    PositiveGroundKb { base: g, rules }
}

/// `K//S`: as `K/S`, also dropping rules whose head is refuted by `OB(S)`.
pub fn mknf_coherent_transform<'a>(g: &'a GroundKb, s: &AtomSet) -> PositiveGroundKb<'a> {
    g.note_consistency(s, "K//S");
    let refuted = g.reasoner.negation_entailed(s);
    let mut t = mknf_transform(g, s);
    t.rules.retain(|&i| !refuted.contains(g.program.rules[i].head));
    t
}

/// The truth value of a ground atom in the iterated fixpoint at bound `k`.
pub fn query(kb: &HybridKb, atom: &Atom, depth: usize) -> Result<TruthValue> {
    let g = GroundKb::new(kb, depth, DEFAULT_MAX_GROUND_RULES)?;
    let id = g.known.id(atom).ok_or_else(|| Error::UnknownAtom { atom: atom.to_string(), depth })?;
    let trace = iterated_fixpoint(&g)?;
    Ok(trace.fixpoint().value(id))
}

/// The two semantics side by side on a function-free knowledge base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub true_atoms: Vec<Atom>,
    pub definite: Vec<Atom>,
    pub not_false: Vec<Atom>,
    pub possible: Vec<Atom>,
}

impl Comparison {
    /// `I_T = P_ω` and `ka ∖ I_F = N_ω`.
    pub fn matches(&self) -> bool {
        self.true_atoms == self.definite && self.not_false == self.possible
    }

    /// Atoms on which `I_T` and `P_ω` disagree.
    pub fn true_mismatches(&self) -> Vec<Atom> {
        symmetric_difference(&self.true_atoms, &self.definite)
    }

    /// Atoms on which `ka ∖ I_F` and `N_ω` disagree.
    pub fn possible_mismatches(&self) -> Vec<Atom> {
        symmetric_difference(&self.not_false, &self.possible)
    }

    pub fn render(&self) -> String {
        let list = |v: &[Atom]| {
            let items: Vec<String> = v.iter().map(|a| a.to_string()).collect();
            format!("{{{}}}", items.join(", "))
        };
        if self.matches() {
            format!("MATCH: I_T=P_ω={}, ka∖I_F=N_ω={}", list(&self.true_atoms), list(&self.possible))
        } else {
            format!(
                "MISMATCH: I_T={} P_ω={} (differ on {}), ka∖I_F={} N_ω={} (differ on {})",
                list(&self.true_atoms),
                list(&self.definite),
                list(&self.true_mismatches()),
                list(&self.not_false),
                list(&self.possible),
                list(&self.possible_mismatches()),
            )
        }
    }
}

fn symmetric_difference(a: &[Atom], b: &[Atom]) -> Vec<Atom> {
    let (a, b): (BTreeSet<&Atom>, BTreeSet<&Atom>) = (a.iter().collect(), b.iter().collect());
    a.symmetric_difference(&b).map(|&x| x.clone()).collect()
}

pub fn compare_semantics(kb: &HybridKb) -> Result<Comparison> {
    if !kb.is_function_free() {
        return Err(Error::NotFunctionFree);
    }
    let g = GroundKb::new(kb, 0, DEFAULT_MAX_GROUND_RULES)?;
    compare_ground(&g)
}

/// [`compare_semantics`] over an existing grounding.
pub fn compare_ground(g: &GroundKb) -> Result<Comparison> {
    let ifp = iterated_fixpoint(g)?;
    let afp = alternating_fixpoint(g);
    let i = ifp.fixpoint();
    let (p, n) = afp.limit();
    Ok(Comparison {
        true_atoms: g.known.to_atoms(i.true_set()),
        definite: g.known.to_atoms(p),
        not_false: g.known.to_atoms(&i.false_set().complement()),
        possible: g.known.to_atoms(n),
    })
}
