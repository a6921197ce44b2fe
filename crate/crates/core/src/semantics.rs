//! Semantic states: sets of known atoms, three-valued interpretations and
//! partitions.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Index of a ground atom in a [`KnownAtoms`](crate::ground::KnownAtoms)
/// table. Ids follow the canonical atom order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AtomId(pub u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A subset of the known atoms of one grounding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomSet(FixedBitSet);

impl AtomSet {
    /// The empty set over a universe of `size` atoms.
    pub fn empty(size: usize) -> Self {
        AtomSet(FixedBitSet::with_capacity(size))
    }

    /// Every atom of the universe.
    pub fn full(size: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(size);
        bits.insert_range(..);
        AtomSet(bits)
    }

    pub fn from_ids(size: usize, ids: impl IntoIterator<Item = AtomId>) -> Self {
        let mut s = Self::empty(size);
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn universe_size(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, id: AtomId) -> bool {
        !self.0.put(id.index())
    }

    pub fn remove(&mut self, id: AtomId) {
        self.0.set(id.index(), false);
    }

    pub fn contains(&self, id: AtomId) -> bool {
        self.0.contains(id.index())
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &AtomSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.0.clone();
        out.union_with(&other.0);
        AtomSet(out)
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.0.clone();
        out.intersect_with(&other.0);
        AtomSet(out)
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.0.clone();
        out.difference_with(&other.0);
        AtomSet(out)
    }

    pub fn complement(&self) -> AtomSet {
        let mut out = self.0.clone();
        out.toggle_range(..);
        AtomSet(out)
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        self.0.union_with(&other.0);
    }

    /// Members in ascending (canonical) order.
    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.0.ones().map(|i| AtomId(i as u32))
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

/// Three truth values ordered `False < Undefined < True`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TruthValue {
    False,
    Undefined,
    True,
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::False => "false",
            TruthValue::Undefined => "undefined",
            TruthValue::True => "true",
        })
    }
}

/// A pair of disjoint sets of known atoms: those taken as true and those
/// taken as false. Everything else is undefined.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ThreeValuedInterpretation {
    true_set: AtomSet,
    false_set: AtomSet,
}

impl ThreeValuedInterpretation {
    pub fn new(true_set: AtomSet, false_set: AtomSet) -> Result<Self> {
        if !true_set.is_disjoint(&false_set) {
            let clash: Vec<_> = true_set.intersection(&false_set).iter().map(|a| a.0).collect();
            return Err(Error::Incoherent(format!(
                "atoms {clash:?} are both true and false"
            )));
        }
        Ok(ThreeValuedInterpretation { true_set, false_set })
    }

    /// `⟨∅, ∅⟩` over a universe of `size` atoms.
    pub fn bottom(size: usize) -> Self {
        ThreeValuedInterpretation { true_set: AtomSet::empty(size), false_set: AtomSet::empty(size) }
    }

    pub fn true_set(&self) -> &AtomSet {
        &self.true_set
    }

    pub fn false_set(&self) -> &AtomSet {
        &self.false_set
    }

    pub fn undefined_set(&self) -> AtomSet {
        self.true_set.union(&self.false_set).complement()
    }

    pub fn value(&self, atom: AtomId) -> TruthValue {
        if self.true_set.contains(atom) {
            TruthValue::True
        } else if self.false_set.contains(atom) {
            TruthValue::False
        } else {
            TruthValue::Undefined
        }
    }

    /// Componentwise inclusion.
    pub fn le(&self, other: &Self) -> bool {
        self.true_set.is_subset(&other.true_set) && self.false_set.is_subset(&other.false_set)
    }
}

impl PartialOrd for ThreeValuedInterpretation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

/// A pair `(P, N)` with `P ⊆ N`: atoms in `P` are true, atoms outside `N`
/// are false.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    definite: AtomSet,
    possible: AtomSet,
}

impl Partition {
    pub fn new(definite: AtomSet, possible: AtomSet) -> Result<Self> {
        if !definite.is_subset(&possible) {
            let stray: Vec<_> = definite.difference(&possible).iter().map(|a| a.0).collect();
            return Err(Error::Incoherent(format!(
                "atoms {stray:?} are in P but not in N"
            )));
        }
        Ok(Partition { definite, possible })
    }

    /// The `P` component.
    pub fn definite(&self) -> &AtomSet {
        &self.definite
    }

    /// The `N` component.
    pub fn possible(&self) -> &AtomSet {
        &self.possible
    }

    pub fn is_exact(&self) -> bool {
        self.definite == self.possible
    }

    /// The interpretation `⟨P, ka ∖ N⟩`.
    pub fn to_interpretation(&self) -> ThreeValuedInterpretation {
        ThreeValuedInterpretation {
            true_set: self.definite.clone(),
            false_set: self.possible.complement(),
        }
    }
}
