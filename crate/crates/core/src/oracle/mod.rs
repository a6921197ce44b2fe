//! Brute-force stable-partition checking and a random knowledge base
//! generator, for cross-checking the engine on small inputs.

mod eval;
pub mod models;
mod random;

use std::cell::RefCell;
use std::collections::HashMap;

use crate::engine::{alternating_fixpoint, gamma, gamma_prime, GroundKb};
use crate::error::{Error, Result};
use crate::semantics::{AtomId, AtomSet, Partition};

pub use eval::{evaluate_program, evaluate_rule, evaluate_staged, EvalMode, EvaluatedRule, ProgramValue};
pub use random::{random_kb, RandomLimits};

/// Size guards on the known-atom set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OracleLimits {
    /// Largest `|ka|` for which a single candidate is checked.
    pub check: usize,
    /// Largest `|ka|` for which all `3^|ka|` candidates are enumerated.
    pub enumerate: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { check: 16, enumerate: 12 }
    }
}

/// Outcome of checking one candidate partition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilityReport {
    pub candidate: Partition,
    /// Condition 1: `OB(N)` is satisfiable.
    pub satisfiable: bool,
    /// Condition 2, first half: `P` and `N` are closed under entailment.
    pub closed: bool,
    /// Condition 2, second half: `P[P, ka ∖ N] = true`.
    pub program_true: bool,
    /// Condition 3, or `None` when an earlier condition already failed.
    pub minimal: Option<bool>,
    /// A smaller partition for which no escape of condition 3 holds.
    pub witness: Option<(AtomSet, AtomSet)>,
}

impl StabilityReport {
    pub fn passes(&self) -> bool {
        self.satisfiable && self.closed && self.program_true && self.minimal == Some(true)
    }
}

type Mask = u32;

/// The ground program and entailment closure in bitmask form.
struct Checker<'a> {
    g: &'a GroundKb,
    n: usize,
    full: Mask,
    dl: Mask,
    rules: Vec<(usize, Mask, Mask)>,
    /// DL atoms entailed by a DL-part mask, or `None` when inconsistent.
    entailed: RefCell<HashMap<Mask, Option<Mask>>>,
}

impl<'a> Checker<'a> {
    fn new(g: &'a GroundKb) -> Self {
        let n = g.known().len();
        assert!(n <= 31, "bitmask oracle supports at most 31 atoms");
        let bits = |ids: &[AtomId]| ids.iter().fold(0, |m, a| m | 1 << a.0);
        let rules = g.program().rules.iter().map(|r| (r.head.index(), bits(&r.positive), bits(&r.negative))).collect();
        Checker {
            g,
            n,
            full: if n == 0 { 0 } else { Mask::MAX >> (32 - n) },
            dl: to_mask(g.reasoner().dl_atoms()),
            rules,
            entailed: RefCell::new(HashMap::new()),
        }
    }

    fn set(&self, m: Mask) -> AtomSet {
        AtomSet::from_ids(self.n, (0..self.n as u32).filter(|i| m >> i & 1 == 1).map(AtomId))
    }

    fn dl_entailed(&self, m: Mask) -> Option<Mask> {
        let key = m & self.dl;
        if let Some(&v) = self.entailed.borrow().get(&key) {
            return v;
        }
        let s = self.set(key);
        let r = self.g.reasoner();
        let v = r.is_satisfiable(&s).then(|| to_mask(&r.entailed(&s)) & self.dl);
        self.entailed.borrow_mut().insert(key, v);
        v
    }

    fn satisfiable(&self, m: Mask) -> bool {
        self.dl_entailed(m).is_some()
    }

    /// No atom outside `m` is entailed by `OB(m)`.
    fn closed(&self, m: Mask) -> bool {
        match self.dl_entailed(m) {
            Some(e) => e & !m == 0,
            None => m == self.full,
        }
    }

    fn program_true(&self, t: Mask, f: Mask) -> bool {
        use crate::semantics::TruthValue::*;
        let k = |a: usize| if t >> a & 1 == 1 { True } else if f >> a & 1 == 1 { False } else { Undefined };
        self.rules.iter().all(|&(h, pos, neg)| {
            let body = (0..self.n)
                .filter(|&a| pos >> a & 1 == 1)
                .map(k)
                .chain((0..self.n).filter(|&a| neg >> a & 1 == 1).map(|a| match k(a) {
                    True => False,
                    False => True,
                    Undefined => Undefined,
                }))
                .min()
                .unwrap_or(True);
            k(h) >= body
        })
    }

    /// Whether `P[not, P, ka ∖ N][K, P′, ka ∖ N′]` evaluates to false.
    fn staged_false(&self, not_values: &[crate::semantics::TruthValue], p2: Mask, n2: Mask) -> bool {
        use crate::semantics::TruthValue::*;
        let f2 = self.full & !n2;
        let k = |a: usize| if p2 >> a & 1 == 1 { True } else if f2 >> a & 1 == 1 { False } else { Undefined };
        self.rules.iter().zip(not_values).any(|(&(h, pos, _), &nv)| {
            let body = (0..self.n).filter(|&a| pos >> a & 1 == 1).map(k).fold(nv, |acc, v| acc.min(v));
            k(h) < body
        })
    }

    fn not_values(&self, p: Mask, nn: Mask) -> Vec<crate::semantics::TruthValue> {
        use crate::semantics::TruthValue::*;
        let f = self.full & !nn;
        self.rules
            .iter()
            .map(|&(_, _, neg)| {
                (0..self.n)
                    .filter(|&b| neg >> b & 1 == 1)
                    .map(|b| if f >> b & 1 == 1 { True } else if p >> b & 1 == 1 { False } else { Undefined })
                    .min()
                    .unwrap_or(True)
            })
            .collect()
    }

    /// Condition 3; returns the first sub-partition without an escape.
    fn minimality_witness(&self, p: Mask, nn: Mask) -> Option<(Mask, Mask)> {
        let not_values = self.not_values(p, nn);
        for n2 in submasks(nn) {
            if !self.closed(n2) {
                continue;
            }
            for p2 in submasks(p & n2) {
                if (p2, n2) == (p, nn) || !self.closed(p2) {
                    continue;
                }
                if !self.staged_false(&not_values, p2, n2) {
                    return Some((p2, n2));
                }
            }
        }
        None
    }

    fn report(&self, p: Mask, nn: Mask, with_minimality: bool) -> StabilityReport {
        let satisfiable = self.satisfiable(nn);
        let closed = self.closed(p) && self.closed(nn);
        let program_true = self.program_true(p, self.full & !nn);
        let (minimal, witness) = if satisfiable && closed && program_true && with_minimality {
            let w = self.minimality_witness(p, nn);
            (Some(w.is_none()), w.map(|(a, b)| (self.set(a), self.set(b))))
        } else {
            (None, None)
        };
        StabilityReport {
            candidate: Partition::new(self.set(p), self.set(nn)).expect("P ⊆ N"),
            satisfiable,
            closed,
            program_true,
            minimal,
            witness,
        }
    }
}

fn to_mask(s: &AtomSet) -> Mask {
    s.iter().fold(0, |m, a| m | 1 << a.0)
}

/// All submasks of `m`, in increasing numeric order.
fn submasks(m: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(0);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == m { None } else { Some((cur | !m).wrapping_add(1) & m) };
        Some(cur)
    })
}

/// Checks the three conditions of a stable partition for `candidate`.
pub fn is_stable_partition(g: &GroundKb, candidate: &Partition, limits: OracleLimits) -> Result<StabilityReport> {
    let size = g.known().len();
    if size > limits.check {
        return Err(Error::OracleLimit { size, limit: limits.check });
    }
    let c = Checker::new(g);
    Ok(c.report(to_mask(candidate.definite()), to_mask(candidate.possible()), true))
}

/// Every stable partition, ordered by `P` then `N` as ascending id lists.
pub fn enumerate_stable_partitions(g: &GroundKb, limits: OracleLimits) -> Result<Vec<Partition>> {
    let size = g.known().len();
    if size > limits.enumerate {
        return Err(Error::OracleLimit { size, limit: limits.enumerate });
    }
    let c = Checker::new(g);
    let mut found = Vec::new();
    for nn in submasks(c.full) {
        if !c.satisfiable(nn) || !c.closed(nn) {
            continue;
        }
        for p in submasks(nn) {
            if c.closed(p) && c.program_true(p, c.full & !nn) && c.minimality_witness(p, nn).is_none() {
                found.push(Partition::new(c.set(p), c.set(nn)).expect("P ⊆ N"));
            }
        }
    }
    found.sort_by_key(|part| {
        (part.definite().iter().collect::<Vec<_>>(), part.possible().iter().collect::<Vec<_>>())
    });
    Ok(found)
}

/// Evidence gathered by [`check_coherence`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoherenceReport {
    pub definite: AtomSet,
    pub possible: AtomSet,
    /// `P_ω ⊆ N_ω`.
    pub is_partition: bool,
    /// `P_ω = Γ(N_ω)` and `N_ω = Γ′(P_ω)`.
    pub fixpoint: bool,
    /// Result of the stable-partition check, or `None` when `|ka|` exceeds
    /// the guard and only conditions 1 and 2 were checked.
    pub stability: Option<StabilityReport>,
    /// Conditions 1 and 2 alone, checked at any size.
    pub conditions_1_2: bool,
    pub evidence: Vec<String>,
}

impl CoherenceReport {
    pub fn coherent(&self) -> bool {
        self.is_partition
            && self.fixpoint
            && self.conditions_1_2
            && self.stability.as_ref().is_none_or(StabilityReport::passes)
    }
}

/// Whether the alternating fixpoint partition is a stable partition.
///
/// The fixpoint checks and conditions 1 and 2 always run. The minimality
/// condition runs only when `|ka| ≤ limits.check`.
pub fn check_coherence(g: &GroundKb, limits: OracleLimits) -> CoherenceReport {
    let afp = alternating_fixpoint(g);
    let (p, n) = afp.limit();
    let k = g.known();
    let mut evidence = Vec::new();
    let is_partition = p.is_subset(n);
    if !is_partition {
        evidence.push(format!("P_ω ⊄ N_ω: {} are in P_ω only", k.render(&p.difference(n))));
    }
    let fixpoint = &gamma(g, n) == p && &gamma_prime(g, p) == n;
    if !fixpoint {
        evidence.push("alternating limit is not a fixpoint of Γ and Γ′".to_string());
    }
    let r = g.reasoner();
    for (name, s) in [("P_ω", p), ("N_ω", n)] {
        if !r.is_satisfiable(s) {
            evidence.push(format!("OB({name}) is unsatisfiable"));
        }
    }
    let mut conditions_1_2 = false;
    let mut stability = None;
    if is_partition && g.known().len() <= 31 {
        let c = Checker::new(g);
        let (pm, nm) = (to_mask(p), to_mask(n));
        let run_minimality = g.known().len() <= limits.check;
        let report = c.report(pm, nm, run_minimality);
        conditions_1_2 = report.satisfiable && report.closed && report.program_true;
        if !report.closed {
            evidence.push("P_ω or N_ω is not closed under entailment".to_string());
        }
        if !report.program_true {
            evidence.push("P[P_ω, ka ∖ N_ω] is not true".to_string());
        }
        if let Some((p2, n2)) = &report.witness {
            evidence.push(format!("condition 3 fails for ({}, {})", k.render(p2), k.render(n2)));
        }
        if !run_minimality {
            evidence.push(format!("|ka| = {} exceeds {}; condition 3 not checked", g.known().len(), limits.check));
        } else {
            stability = Some(report);
        }
    } else if is_partition {
        let sat = r.is_satisfiable(n);
        conditions_1_2 = sat && &r.entailed(p) == p && &r.entailed(n) == n;
        evidence.push(format!("|ka| = {} too large for the bitmask checker; condition 3 not checked", g.known().len()));
    }
    CoherenceReport {
        definite: p.clone(),
        possible: n.clone(),
        is_partition,
        fixpoint,
        stability,
        conditions_1_2,
        evidence,
    }
}
