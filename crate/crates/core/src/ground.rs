//! Ground sets and element sets with bit-set semantics.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Index of an element in a ground set `V = {0, ..., n-1}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ElementId(pub u32);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for ElementId {
    fn from(id: u32) -> Self {
        ElementId(id)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The universe of items: dense ids `0..n`, optionally labelled.
#[derive(Clone, Debug)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("ground set must be non-empty".into()));
        }
        Ok(GroundSet { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut gs = Self::new(labels.len())?;
        gs.labels = Some(labels);
        Ok(gs)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn label(&self, e: ElementId) -> Option<&str> {
        self.labels.as_ref()?.get(e.index()).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> {
        (0..self.n as u32).map(ElementId)
    }

    /// The full set `V` as an element set.
    pub fn universe(&self) -> ElementSet {
        let mut s = ElementSet::empty(self.n);
        s.bits.insert_range(..);
        s
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.n)
    }
}

/// An unordered subset of a ground set, stored as a bit set.
///
/// Every set carries its universe size; operations that mix sets from
/// different universes panic, and oracles reject such sets with a domain
/// error.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: FixedBitSet,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn from_ids<I>(universe: usize, ids: I) -> Self
    where
        I: IntoIterator<Item = ElementId>,
    {
        let mut s = Self::empty(universe);
        for e in ids {
            s.insert(e);
        }
        s
    }

    /// Size of the universe this set lives in (not the cardinality).
    #[inline]
    pub fn universe_size(&self) -> usize {
        self.bits.len()
    }

    /// Cardinality |S|.
    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    #[inline]
    pub fn contains(&self, e: ElementId) -> bool {
        self.bits.contains(e.index())
    }

    /// Panics if `e` is outside the universe.
    #[inline]
    pub fn insert(&mut self, e: ElementId) {
        self.bits.insert(e.index());
    }

    #[inline]
    pub fn remove(&mut self, e: ElementId) {
        self.bits.set(e.index(), false);
    }

    /// Ascending iteration over members.
    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.bits.ones().map(|i| ElementId(i as u32))
    }

    pub fn to_vec(&self) -> Vec<ElementId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        out
    }

    /// Set difference `self \ other`.
    pub fn minus(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        out
    }

    /// `self` with a single element removed.
    pub fn without(&self, e: ElementId) -> ElementSet {
        let mut out = self.clone();
        out.remove(e);
        out
    }

    /// `self` with a single element added.
    pub fn with(&self, e: ElementId) -> ElementSet {
        let mut out = self.clone();
        out.insert(e);
        out
    }

    /// Bit mask of the members; only valid for universes of at most 64.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.universe_size() <= 64);
        self.iter().fold(0u64, |m, e| m | (1u64 << e.0))
    }

    pub fn from_mask(universe: usize, mask: u64) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe.min(64) {
            if mask & (1 << i) != 0 {
                s.insert(ElementId(i as u32));
            }
        }
        s
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}
