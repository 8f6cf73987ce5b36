use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use super::{GraphError, Node};

/// A subset of `{0, …, n-1}` for a fixed universe size `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    bits: FixedBitSet,
}

impl NodeSet {
    pub fn new(universe: usize) -> Self {
        NodeSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        NodeSet { bits }
    }

    /// Panics on an out-of-range id; use [`NodeSet::try_from_nodes`] for untrusted input.
    pub fn from_nodes<I: IntoIterator<Item = Node>>(universe: usize, nodes: I) -> Self {
        let mut s = NodeSet::new(universe);
        for v in nodes {
            s.insert(v);
        }
        s
    }

    pub fn try_from_nodes<I: IntoIterator<Item = Node>>(
        universe: usize,
        nodes: I,
    ) -> Result<Self, GraphError> {
        let mut s = NodeSet::new(universe);
        for v in nodes {
            if v >= universe {
                return Err(GraphError::NodeOutOfRange { node: v, n: universe });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn contains(&self, v: Node) -> bool {
        self.bits.contains(v)
    }

    /// Returns `true` if `v` was not already present.
    pub fn insert(&mut self, v: Node) -> bool {
        !self.bits.put(v)
    }

    pub fn remove(&mut self, v: Node) -> bool {
        let was = self.bits.contains(v);
        self.bits.set(v, false);
        was
    }

    pub fn iter(&self) -> impl Iterator<Item = Node> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Node> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn complement(&self) -> NodeSet {
        let mut s = self.clone();
        s.bits.toggle_range(..);
        s
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}
