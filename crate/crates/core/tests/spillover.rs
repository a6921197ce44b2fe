//! The virus spillover example, verbatim and in a guarded variant.

use std::path::PathBuf;

use hkbfs_core::engine::{gfp_op_false, iterated_fixpoint, lfp_op_true, query, GroundKb};
use hkbfs_core::ground::DEFAULT_MAX_GROUND_RULES;
use hkbfs_core::{parse_atom, parse_kb, Atom, AtomSet, HybridKb, TruthValue};

fn fixture(name: &str) -> HybridKb {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    parse_kb(&std::fs::read_to_string(path).unwrap()).unwrap().kb
}

fn atom(s: &str) -> Atom {
    parse_atom(s).unwrap()
}

fn names(g: &GroundKb, s: &AtomSet, max_depth: usize) -> Vec<String> {
    g.known().to_atoms(s).iter().filter(|a| a.depth() <= max_depth).map(|a| a.to_string()).collect()
}

const FIRST_TRUE: [&str; 5] = ["mutated(t)", "sc(t,0)", "sc(t,s(0))", "sc(t,s(s(0)))", "virus(t)"];

#[test]
fn guarded_variant_matches_the_worked_iterations() {
    let kb = fixture("spillover_guarded.hkb");
    let g = GroundKb::new(&kb, 2, DEFAULT_MAX_GROUND_RULES).unwrap();
    let trace = iterated_fixpoint(&g).unwrap();
    let is = trace.interpretations();
    let safe_t = g.known().id(&atom("safe(t)")).unwrap();
    let t1 = is[1].true_set();
    assert_eq!(names(&g, t1, 2), FIRST_TRUE);

    let mut expect_f1 = g.ka().difference(t1);
    expect_f1.remove(safe_t);
    assert_eq!(is[1].false_set(), &expect_f1);
    assert_eq!(is[2].false_set(), &g.ka().difference(t1));
    assert_eq!(is[2].true_set(), t1);
    assert_eq!(trace.iterations(), 2);
    assert_eq!(is[3], is[2]);

    let (_, removed) = gfp_op_false(&g, is[0]);
    assert!(removed[0].contains(g.known().id(&atom("virus(t)")).unwrap()));
    assert!(removed[0].contains(g.known().id(&atom("mutated(t)")).unwrap()));
    // In I_1, safe(t) survives the first downward step only because
    // sc(t,s(s(0))) is not yet false.
    let (_, removed) = gfp_op_false(&g, is[1]);
    assert!(removed.iter().all(|r| !r.contains(safe_t)));
    assert_eq!(query(&kb, &atom("safe(t)"), 2).unwrap(), TruthValue::False);
}

#[test]
fn verbatim_first_true_set() {
    let kb = fixture("spillover.hkb");
    let g = GroundKb::new(&kb, 2, DEFAULT_MAX_GROUND_RULES).unwrap();
    let i0 = iterated_fixpoint(&g).unwrap().start;
    let (t1, added) = lfp_op_true(&g, &i0);
    assert_eq!(names(&g, &t1, 2), FIRST_TRUE);
    let steps: Vec<Vec<String>> = added.iter().map(|s| names(&g, s, 2)).collect();
    assert_eq!(steps[0], ["mutated(t)", "virus(t)"]);
    assert_eq!(steps[1], ["sc(t,0)"]);
    assert_eq!(steps[2], ["sc(t,s(0))"]);
    assert_eq!(steps[3], ["sc(t,s(s(0)))"]);
}

/// `safe(t) ← not sc(t, s(s(t)))` has a negative atom that no rule can
/// derive, so safe(t) is true at every bound of at least 1.
#[test]
fn verbatim_safe_verdict_is_true_and_stable_across_depths() {
    let kb = fixture("spillover.hkb");
    for k in 1..=4 {
        assert_eq!(query(&kb, &atom("safe(t)"), k).unwrap(), TruthValue::True, "k={k}");
        assert_eq!(query(&kb, &atom("virus(t)"), k).unwrap(), TruthValue::True);
        assert_eq!(query(&kb, &atom("mutated(t)"), k).unwrap(), TruthValue::True);
    }
    assert_eq!(query(&kb, &atom("virus(t)"), 0).unwrap(), TruthValue::True);
}

#[test]
fn true_atoms_grow_with_the_depth_bound() {
    let kb = fixture("spillover.hkb");
    let mut previous: Option<Vec<Atom>> = None;
    for k in 2..=5 {
        let g = GroundKb::new(&kb, k, DEFAULT_MAX_GROUND_RULES).unwrap();
        let t = g.known().to_atoms(iterated_fixpoint(&g).unwrap().fixpoint().true_set());
        if let Some(prev) = previous {
            for a in prev.iter().filter(|a| a.depth() < k) {
                assert!(t.contains(a), "{a} lost going to k={k}");
            }
        }
        previous = Some(t);
    }
}

#[test]
fn unknown_atom_names_the_bound() {
    let kb = fixture("spillover.hkb");
    let err = query(&kb, &atom("sc(t,s(s(s(s(s(0))))))"), 2).unwrap_err();
    assert!(err.to_string().contains("k=2"));
}
