//! Depth-bounded grounding.
//!
//! Variables range over the Herbrand terms of depth at most `k`. Atoms in
//! a ground rule may be deeper than `k` when the rule itself nests function
//! symbols around a variable; they are still known atoms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::semantics::{AtomId, AtomSet};
use crate::syntax::{Atom, HybridKb, Symbol, Term};

pub const DEFAULT_MAX_GROUND_RULES: u64 = 10_000_000;

/// Constant injected when a knowledge base mentions none.
pub const RESERVED_CONSTANT: &str = "c0";

/// All ground terms over the constants and function symbols of `kb` with
/// depth at most `depth`, in term order.
pub fn herbrand_universe(kb: &HybridKb, depth: usize) -> Vec<Term> {
    let sig = kb.signature();
    let mut terms: BTreeSet<Term> = sig.constants.iter().cloned().map(Term::Const).collect();
    if terms.is_empty() {
        terms.insert(Term::constant(RESERVED_CONSTANT));
    }
    for _ in 0..depth {
        let previous: Vec<Term> = terms.iter().cloned().collect();
        for (f, arity) in &sig.functions {
            let mut args = vec![0usize; *arity];
            loop {
                let t = Term::Func(f.clone(), args.iter().map(|&i| previous[i].clone()).collect());
                terms.insert(t);
                if !next_tuple(&mut args, previous.len()) {
                    break;
                }
            }
        }
    }
    terms.into_iter().collect()
}

/// Advances an odometer over `base^len`; false once it wraps around.
fn next_tuple(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// The ground atoms of one grounding, numbered in canonical order.
#[derive(Clone, Debug)]
pub struct KnownAtoms {
    atoms: Vec<Atom>,
    index: HashMap<Atom, AtomId>,
    depth: usize,
}

impl KnownAtoms {
    fn new(atoms: BTreeSet<Atom>, depth: usize) -> Self {
        let atoms: Vec<Atom> = atoms.into_iter().collect();
        let index = atoms.iter().enumerate().map(|(i, a)| (a.clone(), AtomId(i as u32))).collect();
        KnownAtoms { atoms, index, depth }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The depth bound this set was computed for.
    pub fn depth_bound(&self) -> usize {
        self.depth
    }

    pub fn id(&self, atom: &Atom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &Atom)> {
        self.atoms.iter().enumerate().map(|(i, a)| (AtomId(i as u32), a))
    }

    pub fn all(&self) -> AtomSet {
        AtomSet::full(self.len())
    }

    pub fn empty_set(&self) -> AtomSet {
        AtomSet::empty(self.len())
    }

    pub fn set_of<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> Option<AtomSet> {
        let mut s = self.empty_set();
        for a in atoms {
            s.insert(self.id(a)?);
        }
        Some(s)
    }

    /// Renders a set as `{a, b, ...}` in canonical order.
    pub fn render(&self, set: &AtomSet) -> String {
        let parts: Vec<String> = set.iter().map(|id| self.atom(id).to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn to_atoms(&self, set: &AtomSet) -> Vec<Atom> {
        set.iter().map(|id| self.atom(id).clone()).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroundRule {
    pub head: AtomId,
    pub positive: Vec<AtomId>,
    pub negative: Vec<AtomId>,
}

/// Where a ground rule came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleOrigin {
    pub source: usize,
    pub substitution: Vec<(Symbol, Term)>,
}

#[derive(Clone, Debug, Default)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
    pub origins: Vec<RuleOrigin>,
}

impl GroundProgram {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Instantiates every rule with every substitution of its variables by
/// terms of depth at most `depth`.
pub fn ground_program(kb: &HybridKb, depth: usize, max_rules: u64) -> Result<(GroundProgram, KnownAtoms)> {
    let universe = herbrand_universe(kb, depth);
    let mut total: u64 = 0;
    let mut plans = Vec::with_capacity(kb.program().len());
    for rule in kb.program() {
        let vars = rule.variables();
        let count = (0..vars.len()).try_fold(1u64, |acc, _| acc.checked_mul(universe.len() as u64));
        total = count.and_then(|c| total.checked_add(c)).unwrap_or(u64::MAX);
        if total > max_rules {
            return Err(Error::GroundingLimit { cap: max_rules, depth });
        }
        plans.push(vars);
    }

    let mut raw: Vec<(Atom, Vec<Atom>, Vec<Atom>, RuleOrigin)> = Vec::with_capacity(total as usize);
    let mut atoms = BTreeSet::new();
    for (source, (rule, vars)) in kb.program().iter().zip(plans).enumerate() {
        let mut digits = vec![0usize; vars.len()];
        loop {
            let subst: BTreeMap<Symbol, Term> =
                vars.iter().cloned().zip(digits.iter().map(|&i| universe[i].clone())).collect();
            let head = rule.head.substitute(&subst);
            let pos: Vec<Atom> = rule.positive.iter().map(|a| a.substitute(&subst)).collect();
            let neg: Vec<Atom> = rule.negative.iter().map(|a| a.substitute(&subst)).collect();
            atoms.insert(head.clone());
            atoms.extend(pos.iter().cloned());
            atoms.extend(neg.iter().cloned());
            let origin = RuleOrigin { source, substitution: subst.into_iter().collect() };
            raw.push((head, pos, neg, origin));
            if !next_tuple(&mut digits, universe.len()) {
                break;
            }
        }
    }

    let known = KnownAtoms::new(atoms, depth);
    let id = |a: &Atom| known.id(a).expect("atom collected during grounding");
    let mut program = GroundProgram::default();
    for (head, pos, neg, origin) in raw {
        program.rules.push(GroundRule {
            head: id(&head),
            positive: pos.iter().map(id).collect(),
            negative: neg.iter().map(id).collect(),
        });
        program.origins.push(origin);
    }
    Ok((program, known))
}
