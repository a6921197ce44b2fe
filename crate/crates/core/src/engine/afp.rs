use std::fmt::Write as _;

use super::{mknf_coherent_transform, mknf_transform, GroundKb};
use crate::error::{Error, Result};
use crate::semantics::{AtomSet, Partition};

/// `Γ(S) = lfp T_{K/S}`.
pub fn gamma(g: &GroundKb, s: &AtomSet) -> AtomSet {
    mknf_transform(g, s).lfp_tk()
}

/// `Γ′(S) = lfp T_{K//S}`.
pub fn gamma_prime(g: &GroundKb, s: &AtomSet) -> AtomSet {
    mknf_coherent_transform(g, s).lfp_tk()
}

/// The sequences `P_0, P_1, …` and `N_0, N_1, …` up to stabilisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AfpTrace {
    pub definite: Vec<AtomSet>,
    pub possible: Vec<AtomSet>,
    pub diagnostics: Vec<String>,
}

impl AfpTrace {
    /// `(P_ω, N_ω)`.
    pub fn limit(&self) -> (&AtomSet, &AtomSet) {
        (self.definite.last().expect("non-empty trace"), self.possible.last().expect("non-empty trace"))
    }

    /// Number of alternating steps before the sequences stabilised.
    pub fn iterations(&self) -> usize {
        self.definite.len() - 1
    }

    pub fn render(&self, g: &GroundKb) -> String {
        let mut out = String::new();
        for (i, (p, n)) in self.definite.iter().zip(&self.possible).enumerate() {
            writeln!(out, "P_{i} = {}", g.known().render(p)).unwrap();
            writeln!(out, "N_{i} = {}", g.known().render(n)).unwrap();
        }
        for d in &self.diagnostics {
            writeln!(out, "warning: {d}").unwrap();
        }
        out
    }
}

/// Iterates `P_{n+1} = Γ(N_n)`, `N_{n+1} = Γ′(P_n)` from `(∅, ka)`.
///
/// Both operators are antitone, so `P_n` grows and `N_n` shrinks and the
/// loop ends within `|ka| + 1` rounds. The limit is not checked for
/// `P_ω ⊆ N_ω`.
pub fn alternating_fixpoint(g: &GroundKb) -> AfpTrace {
    let mut definite = vec![g.empty_set()];
    let mut possible = vec![g.ka()];
    loop {
        let (p, n) = (definite.last().unwrap(), possible.last().unwrap());
        let next_p = gamma(g, n);
        let next_n = gamma_prime(g, p);
        if &next_p == p && &next_n == n {
            break;
        }
        definite.push(next_p);
        possible.push(next_n);
    }
    AfpTrace { definite, possible, diagnostics: g.diagnostics() }
}

/// The alternating fixpoint partition, or an incoherence error when
/// `P_ω ⊄ N_ω`.
pub fn alternating_fixpoint_partition(g: &GroundKb) -> Result<(AfpTrace, Partition)> {
    let trace = alternating_fixpoint(g);
    let (p, n) = trace.limit();
    let partition = Partition::new(p.clone(), n.clone()).map_err(|_| {
        Error::Incoherent(format!(
            "alternating fixpoint has atoms {} in P_ω but not in N_ω",
            g.known().render(&p.difference(n))
        ))
    })?;
    Ok((trace, partition))
}
