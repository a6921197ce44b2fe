use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Atom, Axiom, Concept, HybridKb, Rule, Term};

/// Upper bounds for [`random_kb`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RandomLimits {
    pub constants: usize,
    pub predicates: usize,
    pub rules: usize,
    pub axioms: usize,
}

impl Default for RandomLimits {
    fn default() -> Self {
        RandomLimits { constants: 6, predicates: 4, rules: 8, axioms: 4 }
    }
}

const CONSTANTS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];
const PREDICATES: [&str; 8] = ["p", "q", "r", "s", "u", "v", "w", "z"];
const CONCEPTS: [&str; 3] = ["ca", "cb", "cc"];

/// A function-free, DL-safe knowledge base determined by `seed`.
///
/// The first predicate is unary and guards every rule variable, so each
/// rule is DL-safe by construction. Ontology axioms are inclusions
/// `A ⊑ B`, `A ⊑ ¬B`, `A ⊓ B ⊑ C` and concept assertions over three
/// concept names.
pub fn random_kb(seed: u64, limits: RandomLimits) -> HybridKb {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let constants = &CONSTANTS[..rng.gen_range(1..=limits.constants.clamp(1, CONSTANTS.len()))];
    let npred = rng.gen_range(1..=limits.predicates.clamp(1, PREDICATES.len()));
    let mut preds: Vec<(&str, usize)> = vec![(PREDICATES[0], 1)];
    for &name in &PREDICATES[1..npred] {
        preds.push((name, if rng.gen_bool(0.5) { 1 } else { 0 }));
    }

    let constant = |rng: &mut ChaCha8Rng| Term::constant(constants.choose(rng).expect("non-empty"));
    let concept = |rng: &mut ChaCha8Rng| Concept::atomic(CONCEPTS.choose(rng).expect("non-empty"));
    let mut ontology = Vec::new();
    for _ in 0..rng.gen_range(0..=limits.axioms) {
        let ax = match rng.gen_range(0..100) {
            0..=34 => Axiom::Inclusion { sub: concept(&mut rng), sup: concept(&mut rng) },
            35..=54 => Axiom::Inclusion { sub: concept(&mut rng), sup: Concept::not(concept(&mut rng)) },
            55..=74 => Axiom::Inclusion { sub: Concept::and(concept(&mut rng), concept(&mut rng)), sup: concept(&mut rng) },
            _ => Axiom::ConceptAssertion { individual: constant(&mut rng), concept: concept(&mut rng) },
        };
        ontology.push(ax);
    }
    let (mut used, mut roles) = (BTreeSet::new(), BTreeSet::new());
    for ax in &ontology {
        match ax {
            Axiom::Inclusion { sub, sup } => {
                sub.collect_names(&mut used, &mut roles);
                sup.collect_names(&mut used, &mut roles);
            }
            Axiom::ConceptAssertion { concept, .. } => concept.collect_names(&mut used, &mut roles),
            Axiom::RoleAssertion { .. } => {}
        }
    }
    let dl_names: Vec<&str> = CONCEPTS.iter().copied().filter(|c| used.contains(*c)).collect();

    let mut program = Vec::new();
    for _ in 0..rng.gen_range(1..=limits.rules.max(1)) {
        let with_var = rng.gen_bool(0.35);
        let atom = |rng: &mut ChaCha8Rng| {
            let use_dl = !dl_names.is_empty() && rng.gen_bool(0.3);
            let (name, arity) = if use_dl {
                (*dl_names.choose(rng).expect("non-empty"), 1)
            } else {
                *preds.choose(rng).expect("non-empty")
            };
            let args = (0..arity)
                .map(|_| if with_var && rng.gen_bool(0.6) { Term::var("X") } else { constant(rng) })
                .collect();
            Atom::new(name, args)
        };
        let head = atom(&mut rng);
        if !with_var && rng.gen_bool(0.3) {
            program.push(Rule::fact(head));
            continue;
        }
        let mut positive: Vec<Atom> = (0..rng.gen_range(0..=2)).map(|_| atom(&mut rng)).collect();
        let negative: Vec<Atom> = (0..rng.gen_range(0..=2)).map(|_| atom(&mut rng)).collect();
        if with_var {
            positive.insert(0, Atom::new(PREDICATES[0], vec![Term::var("X")]));
        }
        program.push(Rule::new(head, positive, negative));
    }
    HybridKb::new(ontology, program).expect("generator respects arities")
}
