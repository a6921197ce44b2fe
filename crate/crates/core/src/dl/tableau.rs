//! ALC tableau with an internalised TBox and ancestor subset blocking.

use std::collections::{BTreeSet, HashMap};

use crate::syntax::{Concept, Symbol};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) struct ConceptId(u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) struct RoleId(pub(crate) u32);

/// Concepts in negation normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Nnf {
    Top,
    Bottom,
    Atom(u32),
    NegAtom(u32),
    And(Vec<ConceptId>),
    Or(Vec<ConceptId>),
    Exists(RoleId, ConceptId),
    Forall(RoleId, ConceptId),
}

/// Hash-consed NNF concepts plus the concept and role name tables.
#[derive(Clone, Debug, Default)]
pub(crate) struct ConceptArena {
    nodes: Vec<Nnf>,
    ids: HashMap<Nnf, ConceptId>,
    complement: Vec<Option<ConceptId>>,
    concept_names: HashMap<Symbol, u32>,
    role_names: HashMap<Symbol, RoleId>,
}

impl ConceptArena {
    fn intern(&mut self, n: Nnf) -> ConceptId {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = ConceptId(self.nodes.len() as u32);
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        self.complement.push(None);
        id
    }

    fn get(&self, id: ConceptId) -> &Nnf {
        &self.nodes[id.0 as usize]
    }

    pub(crate) fn concept_name(&mut self, name: &Symbol) -> u32 {
        let next = self.concept_names.len() as u32;
        *self.concept_names.entry(name.clone()).or_insert(next)
    }

    pub(crate) fn role(&mut self, name: &Symbol) -> RoleId {
        let next = RoleId(self.role_names.len() as u32);
        *self.role_names.entry(name.clone()).or_insert(next)
    }

    pub(crate) fn lookup_role(&self, name: &str) -> Option<RoleId> {
        self.role_names.get(name).copied()
    }

    /// The literal `A` or `¬A` for a concept name.
    pub(crate) fn literal(&mut self, name: &Symbol, negated: bool) -> ConceptId {
        let a = self.concept_name(name);
        let pos = self.intern(Nnf::Atom(a));
        let neg = self.intern(Nnf::NegAtom(a));
        self.complement[pos.0 as usize] = Some(neg);
        self.complement[neg.0 as usize] = Some(pos);
        if negated {
            neg
        } else {
            pos
        }
    }

    fn junction(&mut self, conjunctive: bool, parts: Vec<ConceptId>) -> ConceptId {
        let (unit, zero) = if conjunctive { (Nnf::Top, Nnf::Bottom) } else { (Nnf::Bottom, Nnf::Top) };
        let mut flat = BTreeSet::new();
        for p in parts {
            match self.get(p).clone() {
                n if n == unit => {}
                n if n == zero => return self.intern(zero),
                Nnf::And(inner) if conjunctive => flat.extend(inner),
                Nnf::Or(inner) if !conjunctive => flat.extend(inner),
                _ => {
                    flat.insert(p);
                }
            }
        }
        let flat: Vec<ConceptId> = flat.into_iter().collect();
        match flat.len() {
            0 => self.intern(unit),
            1 => flat[0],
            _ if conjunctive => self.intern(Nnf::And(flat)),
            _ => self.intern(Nnf::Or(flat)),
        }
    }

    /// NNF of `c`, or of `¬c` when `negated`.
    pub(crate) fn nnf(&mut self, c: &Concept, negated: bool) -> ConceptId {
        match (c, negated) {
            (Concept::Top, false) | (Concept::Bottom, true) => self.intern(Nnf::Top),
            (Concept::Top, true) | (Concept::Bottom, false) => self.intern(Nnf::Bottom),
            (Concept::Atomic(a), neg) => self.literal(a, neg),
            (Concept::Not(inner), neg) => self.nnf(inner, !neg),
            (Concept::And(a, b), neg) | (Concept::Or(a, b), neg) => {
                let conj = matches!(c, Concept::And(..)) != neg;
                let parts = vec![self.nnf(a, neg), self.nnf(b, neg)];
                self.junction(conj, parts)
            }
            (Concept::Exists(r, body), neg) | (Concept::Forall(r, body), neg) => {
                let existential = matches!(c, Concept::Exists(..)) != neg;
                let role = self.role(r);
                let body = self.nnf(body, neg);
                if existential {
                    if *self.get(body) == Nnf::Bottom {
                        return self.intern(Nnf::Bottom);
                    }
                    self.intern(Nnf::Exists(role, body))
                } else {
                    if *self.get(body) == Nnf::Top {
                        return self.intern(Nnf::Top);
                    }
                    self.intern(Nnf::Forall(role, body))
                }
            }
        }
    }

    /// NNF of `¬sub ⊔ sup`, or `None` when it is trivially `⊤`.
    pub(crate) fn internalise(&mut self, sub: &Concept, sup: &Concept) -> Option<ConceptId> {
        let parts = vec![self.nnf(sub, true), self.nnf(sup, false)];
        let c = self.junction(false, parts);
        (*self.get(c) != Nnf::Top).then_some(c)
    }
}

#[derive(Clone, Debug)]
struct Node {
    label: BTreeSet<ConceptId>,
    edges: Vec<(RoleId, usize)>,
    /// `None` for named individuals.
    parent: Option<usize>,
}

#[derive(Clone, Debug)]
struct Completion {
    nodes: Vec<Node>,
    clash: bool,
}

/// An ABox-shaped satisfiability problem: named individuals with initial
/// labels and role edges between them.
#[derive(Clone, Debug, Default)]
pub(crate) struct Problem {
    pub(crate) labels: Vec<Vec<ConceptId>>,
    pub(crate) edges: Vec<(usize, RoleId, usize)>,
}

impl Problem {
    pub(crate) fn add_individual(&mut self) -> usize {
        self.labels.push(Vec::new());
        self.labels.len() - 1
    }
}

pub(crate) struct Tableau<'a> {
    arena: &'a ConceptArena,
    tbox: &'a [ConceptId],
}

impl<'a> Tableau<'a> {
    pub(crate) fn new(arena: &'a ConceptArena, tbox: &'a [ConceptId]) -> Self {
        Tableau { arena, tbox }
    }

    pub(crate) fn is_satisfiable(&self, problem: &Problem) -> bool {
        let mut st = Completion { nodes: Vec::new(), clash: false };
        for labels in &problem.labels {
            let n = self.new_node(&mut st, None);
            for &c in labels {
                self.add(&mut st, n, c);
            }
        }
        for &(s, r, o) in &problem.edges {
            st.nodes[s].edges.push((r, o));
        }
        self.expand(st)
    }

    fn new_node(&self, st: &mut Completion, parent: Option<usize>) -> usize {
        st.nodes.push(Node { label: BTreeSet::new(), edges: Vec::new(), parent });
        let n = st.nodes.len() - 1;
        for &c in self.tbox {
            self.add(st, n, c);
        }
        n
    }

    fn add(&self, st: &mut Completion, n: usize, c: ConceptId) -> bool {
        if !st.nodes[n].label.insert(c) {
            return false;
        }
        match self.arena.get(c) {
            Nnf::Bottom => st.clash = true,
            Nnf::Atom(_) | Nnf::NegAtom(_) => {
                if let Some(comp) = self.arena.complement[c.0 as usize] {
                    if st.nodes[n].label.contains(&comp) {
                        st.clash = true;
                    }
                }
            }
            _ => {}
        }
        true
    }

    fn expand(&self, mut st: Completion) -> bool {
        loop {
            if st.clash {
                return false;
            }
            if self.apply_deterministic(&mut st) {
                continue;
            }
            if let Some((n, disjuncts)) = self.open_disjunction(&st) {
                for d in disjuncts {
                    let mut branch = st.clone();
                    self.add(&mut branch, n, d);
                    if self.expand(branch) {
                        return true;
                    }
                }
                return false;
            }
            if self.apply_exists(&mut st) {
                continue;
            }
            return true;
        }
    }

    /// Conjunction and value restriction rules, to saturation.
    fn apply_deterministic(&self, st: &mut Completion) -> bool {
        let mut changed = false;
        for n in 0..st.nodes.len() {
            let label: Vec<ConceptId> = st.nodes[n].label.iter().copied().collect();
            for c in label {
                match self.arena.get(c) {
                    Nnf::And(parts) => {
                        for &p in parts {
                            changed |= self.add(st, n, p);
                        }
                    }
                    Nnf::Forall(r, body) => {
                        let targets: Vec<usize> =
                            st.nodes[n].edges.iter().filter(|(er, _)| er == r).map(|&(_, m)| m).collect();
                        for m in targets {
                            changed |= self.add(st, m, *body);
                        }
                    }
                    _ => {}
                }
                if st.clash {
                    return true;
                }
            }
        }
        changed
    }

    fn open_disjunction(&self, st: &Completion) -> Option<(usize, Vec<ConceptId>)> {
        for (n, node) in st.nodes.iter().enumerate() {
            for &c in &node.label {
                if let Nnf::Or(parts) = self.arena.get(c) {
                    if !parts.iter().any(|p| node.label.contains(p)) {
                        return Some((n, parts.clone()));
                    }
                }
            }
        }
        None
    }

    /// A generated node is blocked when some generated ancestor's label
    /// contains its own.
    fn is_blocked(&self, st: &Completion, n: usize) -> bool {
        let mut cur = st.nodes[n].parent;
        while let Some(a) = cur {
            if st.nodes[a].parent.is_none() {
                return false;
            }
            if st.nodes[n].label.is_subset(&st.nodes[a].label) {
                return true;
            }
            cur = st.nodes[a].parent;
        }
        false
    }

    fn apply_exists(&self, st: &mut Completion) -> bool {
        for n in 0..st.nodes.len() {
            if st.nodes[n].parent.is_some() && self.is_blocked(st, n) {
                continue;
            }
            let label: Vec<ConceptId> = st.nodes[n].label.iter().copied().collect();
            for c in label {
                if let Nnf::Exists(r, body) = *self.arena.get(c) {
                    let satisfied = st.nodes[n]
                        .edges
                        .iter()
                        .any(|&(er, m)| er == r && st.nodes[m].label.contains(&body));
                    if !satisfied {
                        let m = self.new_node(st, Some(n));
                        self.add(st, m, body);
                        st.nodes[n].edges.push((r, m));
                        return true;
                    }
                }
            }
        }
        false
    }
}
