//! The two semantics coincide on function-free knowledge bases, and the
//! brute-force stable-partition checker agrees with the fixpoints.

use hkbfs_core::engine::{alternating_fixpoint, compare_ground, gamma, gamma_prime, GroundKb};
use hkbfs_core::ground::DEFAULT_MAX_GROUND_RULES;
use hkbfs_core::oracle::{
    check_coherence, enumerate_stable_partitions, is_stable_partition, random_kb, OracleLimits, RandomLimits,
};
use hkbfs_core::Partition;

#[test]
fn iterated_fixpoint_equals_alternating_partition() {
    let limits = RandomLimits::default();
    let mut coherent = 0;
    for seed in 0..150 {
        let g = GroundKb::new(&random_kb(seed, limits), 0, DEFAULT_MAX_GROUND_RULES).unwrap();
        if !check_coherence(&g, OracleLimits { check: 10, enumerate: 10 }).coherent() {
            continue;
        }
        coherent += 1;
        let c = compare_ground(&g).unwrap();
        assert!(c.matches(), "seed {seed}: {}", c.render());
    }
    assert!(coherent >= 120, "only {coherent} coherent instances");
}

#[test]
fn oracle_agrees_with_fixpoints() {
    let limits = RandomLimits::default();
    let oracle = OracleLimits::default();
    let mut checked = 0;
    for seed in 0..150 {
        let g = GroundKb::new(&random_kb(seed, limits), 0, DEFAULT_MAX_GROUND_RULES).unwrap();
        if g.known().len() > 8 {
            continue;
        }
        let afp = alternating_fixpoint(&g);
        let (p, n) = afp.limit();
        let report = check_coherence(&g, oracle);
        if report.coherent() {
            let part = Partition::new(p.clone(), n.clone()).unwrap();
            assert!(is_stable_partition(&g, &part, oracle).unwrap().passes());
            let all = enumerate_stable_partitions(&g, oracle).unwrap();
            assert!(all.contains(&part), "seed {seed}");
            for e in &all {
                assert_eq!(&gamma(&g, e.possible()), e.definite(), "seed {seed}");
                assert_eq!(&gamma_prime(&g, e.definite()), e.possible(), "seed {seed}");
            }
        }
        for e in enumerate_stable_partitions(&g, oracle).unwrap().iter().filter(|e| e.is_exact()) {
            let set = e.definite();
            assert_eq!(&gamma(&g, set), set, "seed {seed}");
            assert_eq!(&gamma_prime(&g, set), set, "seed {seed}");
        }
        checked += 1;
    }
    assert!(checked > 50, "only {checked} small instances");
}
