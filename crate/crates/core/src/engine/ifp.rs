use std::fmt::Write as _;

use super::GroundKb;
use crate::error::{Error, Result};
use crate::semantics::{AtomSet, ThreeValuedInterpretation};

/// `OpTrue_I(Tr)`: heads of rules whose positive body holds in `I_T ∪ Tr`
/// and whose negative body is false in `I`, plus every known atom entailed
/// by `OB(I_T ∪ Tr)`.
pub fn op_true(g: &GroundKb, i: &ThreeValuedInterpretation, tr: &AtomSet) -> AtomSet {
    let base = i.true_set().union(tr);
    let mut out = g.entailed(&base, "OpTrue");
    for r in &g.program().rules {
        if r.positive.iter().all(|&a| base.contains(a)) && r.negative.iter().all(|&b| i.false_set().contains(b)) {
            out.insert(r.head);
        }
    }
    out
}

/// `OpFalse_I(Fa)`: atoms refuted by `OB(I_T)` or whose every rule is
/// blocked by `I_F ∪ Fa` or `I_T`, and which `OB(ka ∖ (I_F ∪ Fa))` does not
/// entail.
pub fn op_false(g: &GroundKb, i: &ThreeValuedInterpretation, fa: &AtomSet) -> AtomSet {
    g.note_consistency(i.true_set(), "OpFalse");
    let refuted = g.reasoner().negation_entailed(i.true_set());
    let blocked_by = i.false_set().union(fa);
    let supported = g.entailed(&blocked_by.complement(), "OpFalse");
    let mut out = g.empty_set();
    for a in g.ka().iter() {
        if supported.contains(a) {
            continue;
        }
        let unsupported = || {
            g.rules_for(a).all(|r| {
                r.positive.iter().any(|&p| blocked_by.contains(p)) || r.negative.iter().any(|&n| i.true_set().contains(n))
            })
        };
        if refuted.contains(a) || unsupported() {
            out.insert(a);
        }
    }
    out
}

/// `lfp OpTrue_I` by upward iteration from the empty set, with the atoms
/// added at each step.
pub fn lfp_op_true(g: &GroundKb, i: &ThreeValuedInterpretation) -> (AtomSet, Vec<AtomSet>) {
    let mut cur = g.empty_set();
    let mut added = Vec::new();
    loop {
        let next = op_true(g, i, &cur);
        if next == cur {
            return (cur, added);
        }
        added.push(next.difference(&cur));
        cur = next;
    }
}

/// `gfp OpFalse_I` by downward iteration from `ka`, with the atoms removed
/// at each step.
pub fn gfp_op_false(g: &GroundKb, i: &ThreeValuedInterpretation) -> (AtomSet, Vec<AtomSet>) {
    let mut cur = g.ka();
    let mut removed = Vec::new();
    loop {
        let next = op_false(g, i, &cur);
        if next == cur {
            return (cur, removed);
        }
        removed.push(cur.difference(&next));
        cur = next;
    }
}

/// `IFP(I) = ⟨lfp OpTrue_I, gfp OpFalse_I⟩` as a raw pair of sets, which
/// may overlap on incoherent input.
pub fn ifp(g: &GroundKb, i: &ThreeValuedInterpretation) -> (AtomSet, AtomSet) {
    (lfp_op_true(g, i).0, gfp_op_false(g, i).0)
}

/// One application of the outer operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IfpStep {
    /// Atoms added by each upward `OpTrue` step.
    pub op_true: Vec<AtomSet>,
    /// Atoms removed by each downward `OpFalse` step.
    pub op_false: Vec<AtomSet>,
    pub result: ThreeValuedInterpretation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IfpTrace {
    pub start: ThreeValuedInterpretation,
    /// `steps[n]` computes `I_{n+1}`; the last step reproduces its input.
    pub steps: Vec<IfpStep>,
    pub diagnostics: Vec<String>,
}

impl IfpTrace {
    /// `I_0, I_1, …` including the repeated fixpoint at the end.
    pub fn interpretations(&self) -> Vec<&ThreeValuedInterpretation> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.result)).collect()
    }

    pub fn fixpoint(&self) -> &ThreeValuedInterpretation {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    /// The least `n` with `I_{n+1} = I_n`.
    pub fn iterations(&self) -> usize {
        self.steps.len() - 1
    }

    /// One line per inner step, grouped by outer step.
    pub fn render(&self, g: &GroundKb) -> String {
        let k = g.known();
        let mut out = String::new();
        writeln!(out, "I_0: T = {}, F = {}", k.render(self.start.true_set()), k.render(self.start.false_set())).unwrap();
        for (n, step) in self.steps.iter().enumerate() {
            writeln!(out, "step {}", n + 1).unwrap();
            for (j, s) in step.op_true.iter().enumerate() {
                writeln!(out, "  optrue↑{} += {}", j + 1, k.render(s)).unwrap();
            }
            for (j, s) in step.op_false.iter().enumerate() {
                writeln!(out, "  opfalse↓{} -= {}", j + 1, k.render(s)).unwrap();
            }
            let r = &step.result;
            writeln!(out, "I_{}: T = {}, F = {}", n + 1, k.render(r.true_set()), k.render(r.false_set())).unwrap();
        }
        writeln!(out, "fixpoint: I_{} = I_{}", self.steps.len(), self.iterations()).unwrap();
        for d in &self.diagnostics {
            writeln!(out, "warning: {d}").unwrap();
        }
        out
    }
}

/// Iterates the outer operator from `⟨∅, ∅⟩` until `I_{n+1} = I_n`.
pub fn iterated_fixpoint(g: &GroundKb) -> Result<IfpTrace> {
    let start = ThreeValuedInterpretation::bottom(g.known().len());
    let mut steps: Vec<IfpStep> = Vec::new();
    loop {
        let cur = steps.last().map_or(&start, |s| &s.result);
        let (t, op_true) = lfp_op_true(g, cur);
        let (f, op_false) = gfp_op_false(g, cur);
        let result = ThreeValuedInterpretation::new(t, f).map_err(|_| {
            Error::Incoherent(format!("I_{} assigns some atom both true and false", steps.len() + 1))
        })?;
        let done = &result == cur;
        steps.push(IfpStep { op_true, op_false, result });
        if done {
            return Ok(IfpTrace { start, steps, diagnostics: g.diagnostics() });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{ground, set, SPILLOVER};
    use super::*;
    use crate::parser::parse_atom;
    use crate::semantics::TruthValue;

    fn interp(g: &GroundKb, t: &[&str], f: &[&str]) -> ThreeValuedInterpretation {
        ThreeValuedInterpretation::new(set(g, t), set(g, f)).unwrap()
    }

    #[test]
    fn op_true_on_spillover() {
        let g = ground(SPILLOVER, 2);
        let i0 = ThreeValuedInterpretation::bottom(g.known().len());
        assert_eq!(op_true(&g, &i0, &g.empty_set()), set(&g, &["virus(t)", "mutated(t)"]));
        let out = op_true(&g, &i0, &set(&g, &["virus(t)", "mutated(t)", "sc(t,0)"]));
        assert!(out.contains(g.known().id(&parse_atom("sc(t,s(0))").unwrap()).unwrap()));
        let e = ground("", 0);
        assert!(op_true(&e, &ThreeValuedInterpretation::bottom(0), &e.empty_set()).is_empty());
    }

    #[test]
    fn op_false_first_step_on_spillover() {
        let g = ground(SPILLOVER, 2);
        let i0 = ThreeValuedInterpretation::bottom(g.known().len());
        let removed = g.ka().difference(&op_false(&g, &i0, &g.ka()));
        let names: Vec<String> = g.known().to_atoms(&removed).iter().map(|a| a.to_string()).collect();
        assert!(names.contains(&"virus(t)".into()));
        assert!(names.contains(&"mutated(t)".into()));
        assert!(names.contains(&"safe(t)".into()));
        assert!(!names.iter().any(|n| n.starts_with("sc(")));
    }

    #[test]
    fn facts_are_never_false() {
        let g = ground("p.\n", 0);
        let i0 = ThreeValuedInterpretation::bottom(1);
        assert!(op_false(&g, &i0, &g.empty_set()).is_empty());
    }

    #[test]
    fn ifp_examples() {
        let g = ground("p :- not q.\n", 0);
        let t = iterated_fixpoint(&g).unwrap();
        assert_eq!(t.fixpoint(), &interp(&g, &["p"], &["q"]));
        let g = ground("", 0);
        let t = iterated_fixpoint(&g).unwrap();
        assert_eq!(t.fixpoint(), &ThreeValuedInterpretation::bottom(0));
        assert_eq!(t.iterations(), 0);
    }

    #[test]
    fn spillover_reaches_fixpoint_at_step_two() {
        let g = ground(SPILLOVER, 2);
        let t = iterated_fixpoint(&g).unwrap();
        assert_eq!(t.iterations(), 2);
        let is = t.interpretations();
        assert!(is.windows(2).all(|w| w[0].le(w[1])));
        let first_true: Vec<String> =
            g.known().to_atoms(is[1].true_set()).iter().filter(|a| a.depth() <= 2).map(|a| a.to_string()).collect();
        assert_eq!(first_true, ["mutated(t)", "sc(t,0)", "sc(t,s(0))", "sc(t,s(s(0)))", "virus(t)"]);
        // A safe(t) instance with Y = t has a negative atom outside every
        // derivable sc fact, so safe(t) ends true.
        let safe = g.known().id(&parse_atom("safe(t)").unwrap()).unwrap();
        assert_eq!(is[1].value(safe), TruthValue::Undefined);
        assert_eq!(t.fixpoint().value(safe), TruthValue::True);
    }

    #[test]
    fn trace_lines_follow_figure_layout() {
        let g = ground(SPILLOVER, 2);
        let text = iterated_fixpoint(&g).unwrap().render(&g);
        let wanted = [
            "optrue↑1 += {mutated(t), virus(t)}",
            "optrue↑2 += {sc(t,0)}",
            "optrue↑3 += {sc(t,s(0))}",
            "optrue↑4 += {sc(t,s(s(0)))}",
            "opfalse↓1 -= {",
            "opfalse↓2 -= {sc(t,0)}",
            "opfalse↓3 -= {sc(t,s(0))}",
            "opfalse↓4 -= {sc(t,s(s(0)))}",
        ];
        let mut pos = 0;
        for w in wanted {
            let at = text[pos..].find(w).unwrap_or_else(|| panic!("{w} missing after offset {pos} in\n{text}"));
            pos += at + w.len();
        }
    }

    #[test]
    fn incoherence_halts() {
        let g = ground("#ontology.\nca subClassOf not cb.\n#program.\nca(c).\ncb(c).\n", 0);
        assert!(matches!(iterated_fixpoint(&g), Err(Error::Incoherent(_))));
    }
}
