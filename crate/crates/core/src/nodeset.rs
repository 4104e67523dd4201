//! Word-sized node subsets.

use std::fmt;

/// Largest supported node count. Every subset must fit in one `u64` mask.
pub const MAX_NODES: usize = 62;

/// A subset of node indices `{0, .., K-1}` stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub const fn from_mask(mask: u64) -> Self {
        NodeSet(mask)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub fn singleton(node: usize) -> Self {
        debug_assert!(node < 64);
        NodeSet(1 << node)
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    /// Builds a set from node indices; `None` if any index is 64 or more.
    pub fn from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Option<Self> {
        let mut mask = 0u64;
        for n in nodes {
            if n >= 64 {
                return None;
            }
            mask |= 1 << n;
        }
        Some(NodeSet(mask))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, node: usize) -> bool {
        node < 64 && self.0 & (1 << node) != 0
    }

    pub fn insert(&mut self, node: usize) {
        self.0 |= 1 << node;
    }

    pub fn remove(&mut self, node: usize) {
        self.0 &= !(1 << node);
    }

    pub fn with(self, node: usize) -> Self {
        NodeSet(self.0 | (1 << node))
    }

    pub fn without(self, node: usize) -> Self {
        NodeSet(self.0 & !(1 << node))
    }

    pub fn union(self, other: Self) -> Self {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest member plus one, i.e. the smallest `K` this set fits in.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Shifts every member down by `by` positions, dropping members below `by`.
    pub fn shift_down(self, by: usize) -> Self {
        NodeSet(self.0 >> by)
    }

    pub fn shift_up(self, by: usize) -> Self {
        NodeSet(self.0 << by)
    }

    /// All subsets of `self`, in increasing mask order (including the empty set).
    pub fn subsets(self) -> Subsets {
        Subsets {
            universe: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for n in iter {
            s.insert(n);
        }
        s
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let n = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(n)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

pub struct Subsets {
    universe: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        let cur = self.next?;
        // Standard "next submask in increasing order" step.
        let nxt = (cur.wrapping_sub(self.universe)) & self.universe;
        self.next = (nxt != 0).then_some(nxt);
        Some(NodeSet(cur))
    }
}
