//! Three-valued evaluation of ground programs against a pair of disjoint
//! atom sets.

use crate::ground::GroundRule;
use crate::semantics::{AtomId, AtomSet, TruthValue};

/// Which literals an evaluation pass replaces.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EvalMode {
    /// Positive literals and the head.
    K,
    /// Negative literals.
    Not,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProgramValue {
    True,
    False,
    Neither,
}

/// A rule with some literals replaced by truth values. `None` marks a
/// literal not yet evaluated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvaluatedRule {
    pub head: Option<TruthValue>,
    pub positive: Vec<Option<TruthValue>>,
    /// Values of the literals `not b`, not of the atoms `b`.
    pub negative: Vec<Option<TruthValue>>,
}

fn k_value(a: AtomId, t: &AtomSet, f: &AtomSet) -> TruthValue {
    if t.contains(a) {
        TruthValue::True
    } else if f.contains(a) {
        TruthValue::False
    } else {
        TruthValue::Undefined
    }
}

fn not_value(a: AtomId, t: &AtomSet, f: &AtomSet) -> TruthValue {
    if f.contains(a) {
        TruthValue::True
    } else if t.contains(a) {
        TruthValue::False
    } else {
        TruthValue::Undefined
    }
}

impl EvaluatedRule {
    pub fn unevaluated(rule: &GroundRule) -> Self {
        EvaluatedRule {
            head: None,
            positive: vec![None; rule.positive.len()],
            negative: vec![None; rule.negative.len()],
        }
    }

    /// Replaces the still unevaluated literals selected by `mode`.
    pub fn apply(mut self, rule: &GroundRule, t: &AtomSet, f: &AtomSet, mode: EvalMode) -> Self {
        if mode != EvalMode::Not {
            self.head = self.head.or(Some(k_value(rule.head, t, f)));
            for (v, &a) in self.positive.iter_mut().zip(&rule.positive) {
                *v = v.or(Some(k_value(a, t, f)));
            }
        }
        if mode != EvalMode::K {
            for (v, &b) in self.negative.iter_mut().zip(&rule.negative) {
                *v = v.or(Some(not_value(b, t, f)));
            }
        }
        self
    }

    /// `Some(true)` for `true ←`, `Some(false)` for `false ←`, `None` while
    /// some literal is unevaluated.
    pub fn simplified(&self) -> Option<bool> {
        let head = self.head?;
        let mut body = TruthValue::True;
        for v in self.positive.iter().chain(&self.negative) {
            body = body.min((*v)?);
        }
        Some(head >= body)
    }
}

pub fn evaluate_rule(rule: &GroundRule, t: &AtomSet, f: &AtomSet, mode: EvalMode) -> EvaluatedRule {
    EvaluatedRule::unevaluated(rule).apply(rule, t, f, mode)
}

fn verdict(rules: impl Iterator<Item = EvaluatedRule>) -> ProgramValue {
    let mut all_true = true;
    for r in rules {
        match r.simplified() {
            Some(false) => return ProgramValue::False,
            Some(true) => {}
            None => all_true = false,
        }
    }
    if all_true {
        ProgramValue::True
    } else {
        ProgramValue::Neither
    }
}

/// `P[mode, T, F]`, or `P[T, F]` for [`EvalMode::Both`].
pub fn evaluate_program(rules: &[GroundRule], t: &AtomSet, f: &AtomSet, mode: EvalMode) -> ProgramValue {
    debug_assert!(t.is_disjoint(f));
    verdict(rules.iter().map(|r| evaluate_rule(r, t, f, mode)))
}

/// `P[not, T1, F1][K, T2, F2]`.
pub fn evaluate_staged(rules: &[GroundRule], not: (&AtomSet, &AtomSet), k: (&AtomSet, &AtomSet)) -> ProgramValue {
    verdict(rules.iter().map(|r| {
        evaluate_rule(r, not.0, not.1, EvalMode::Not).apply(r, k.0, k.1, EvalMode::K)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(ids: &[u32]) -> AtomSet {
        AtomSet::from_ids(3, ids.iter().map(|&i| AtomId(i)))
    }

    fn rule(head: u32, pos: &[u32], neg: &[u32]) -> GroundRule {
        GroundRule {
            head: AtomId(head),
            positive: pos.iter().map(|&i| AtomId(i)).collect(),
            negative: neg.iter().map(|&i| AtomId(i)).collect(),
        }
    }

    #[test]
    fn empty_program_is_true() {
        assert_eq!(evaluate_program(&[], &s(&[]), &s(&[]), EvalMode::Both), ProgramValue::True);
    }

    #[test]
    fn violated_rule_is_false() {
        // p = 0, q = 1.
        let p = [rule(0, &[1], &[])];
        assert_eq!(evaluate_program(&p, &s(&[1]), &s(&[0]), EvalMode::Both), ProgramValue::False);
    }

    #[test]
    fn negative_body_satisfied() {
        let p = [rule(0, &[], &[1])];
        assert_eq!(evaluate_program(&p, &s(&[0]), &s(&[1]), EvalMode::Both), ProgramValue::True);
    }

    #[test]
    fn partial_modes_leave_rules_open() {
        let p = [rule(0, &[], &[1])];
        assert_eq!(evaluate_program(&p, &s(&[0]), &s(&[1]), EvalMode::K), ProgramValue::Neither);
        assert_eq!(evaluate_program(&p, &s(&[0]), &s(&[1]), EvalMode::Not), ProgramValue::Neither);
        // A negation-free rule is fully evaluated by the K pass alone.
        let q = [rule(0, &[1], &[])];
        assert_eq!(evaluate_program(&q, &s(&[1]), &s(&[0]), EvalMode::K), ProgramValue::False);
    }

    #[test]
    fn staged_uses_each_pair_for_its_literals() {
        let p = [rule(0, &[], &[1])];
        // not 1 is true under F1 = {1}; head 0 is false under F2 = {0}.
        assert_eq!(evaluate_staged(&p, (&s(&[]), &s(&[1])), (&s(&[]), &s(&[0]))), ProgramValue::False);
        assert_eq!(evaluate_staged(&p, (&s(&[1]), &s(&[])), (&s(&[]), &s(&[0]))), ProgramValue::True);
    }

    /// Every assignment of the three literals of `h ← a, not b` against the
    /// rule "head at least the minimum of the body".
    #[test]
    fn truth_table() {
        let r = rule(0, &[1], &[2]);
        let vals = [TruthValue::False, TruthValue::Undefined, TruthValue::True];
        let place = |id: u32, v: TruthValue, t: &mut Vec<u32>, f: &mut Vec<u32>| match v {
            TruthValue::True => t.push(id),
            TruthValue::False => f.push(id),
            TruthValue::Undefined => {}
        };
        for h in vals {
            for a in vals {
                for b in vals {
                    let (mut t, mut f) = (vec![], vec![]);
                    place(0, h, &mut t, &mut f);
                    place(1, a, &mut t, &mut f);
                    place(2, b, &mut t, &mut f);
                    let not_b = match b {
                        TruthValue::True => TruthValue::False,
                        TruthValue::False => TruthValue::True,
                        TruthValue::Undefined => TruthValue::Undefined,
                    };
                    let expect = if h >= a.min(not_b) { ProgramValue::True } else { ProgramValue::False };
                    let got = evaluate_program(std::slice::from_ref(&r), &s(&t), &s(&f), EvalMode::Both);
                    assert_eq!(got, expect, "h={h} a={a} b={b}");
                }
            }
        }
    }
}
