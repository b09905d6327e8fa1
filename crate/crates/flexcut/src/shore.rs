//! Shores of cuts: subsets of the node set, stored as fixed-width bitsets.
//!
//! A cut is identified with either of its two shores, so most consumers work
//! with the canonical orientation (the side not containing node 0). The type
//! itself represents an arbitrary subset; operations that require a nonempty
//! proper shore validate at their own boundary.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShoreError {
    #[error("node {node} out of range for ground set of size {n}")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("shore must be nonempty and proper (|S| = {len}, ground set size {n})")]
    NotProper { len: usize, n: usize },
    #[error("ground set sizes differ: {0} vs {1}")]
    GroundMismatch(usize, usize),
}

/// One side of a cut over a ground set `{0, …, n-1}`.
///
/// Serializes as `{"n": …, "members": […]}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ShoreRepr", try_from = "ShoreRepr")]
pub struct NodeShore {
    n: usize,
    words: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ShoreRepr {
    n: usize,
    members: Vec<NodeId>,
}

impl From<NodeShore> for ShoreRepr {
    fn from(s: NodeShore) -> Self {
        ShoreRepr {
            n: s.ground_size(),
            members: s.members(),
        }
    }
}

impl TryFrom<ShoreRepr> for NodeShore {
    type Error = ShoreError;

    fn try_from(repr: ShoreRepr) -> Result<Self, Self::Error> {
        NodeShore::from_members(repr.n, repr.members)
    }
}

impl NodeShore {
    pub fn empty(n: usize) -> Self {
        NodeShore {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v as NodeId);
        }
        s
    }

    pub fn from_members<I: IntoIterator<Item = NodeId>>(n: usize, members: I) -> Result<Self, ShoreError> {
        let mut s = Self::empty(n);
        for v in members {
            if (v as usize) >= n {
                return Err(ShoreError::NodeOutOfRange { node: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// A shore that is usable as one side of a cut: nonempty and proper.
    pub fn proper<I: IntoIterator<Item = NodeId>>(n: usize, members: I) -> Result<Self, ShoreError> {
        let s = Self::from_members(n, members)?;
        s.require_proper()?;
        Ok(s)
    }

    pub fn require_proper(&self) -> Result<(), ShoreError> {
        if self.is_empty() || self.is_full() {
            return Err(ShoreError::NotProper {
                len: self.len(),
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: NodeId) {
        debug_assert!((v as usize) < self.n);
        self.words[v as usize / 64] |= 1u64 << (v % 64);
    }

    pub fn contains(&self, v: NodeId) -> bool {
        (v as usize) < self.n && self.words[v as usize / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn members(&self) -> Vec<NodeId> {
        (0..self.n as NodeId).filter(|&v| self.contains(v)).collect()
    }

    pub fn complement(&self) -> NodeShore {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    /// The orientation not containing node 0. Both shores of a cut map to the
    /// same canonical representative.
    pub fn canonical(&self) -> NodeShore {
        if self.contains(0) {
            self.complement()
        } else {
            self.clone()
        }
    }

    pub fn union(&self, other: &NodeShore) -> NodeShore {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &NodeShore) -> NodeShore {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &NodeShore) -> NodeShore {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset_of(&self, other: &NodeShore) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_proper_subset_of(&self, other: &NodeShore) -> bool {
        self.is_subset_of(other) && self != other
    }

    pub fn is_disjoint_from(&self, other: &NodeShore) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Two shores cross when all four corner regions `A∩B`, `A∖B`, `B∖A`,
    /// and `V∖(A∪B)` are nonempty.
    pub fn crosses(&self, other: &NodeShore) -> bool {
        !self.intersection(other).is_empty()
            && !self.difference(other).is_empty()
            && !other.difference(self).is_empty()
            && !self.union(other).is_full()
    }

    fn zip_with(&self, other: &NodeShore, f: impl Fn(u64, u64) -> u64) -> NodeShore {
        debug_assert_eq!(self.n, other.n, "shores over different ground sets");
        let mut out = NodeShore {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        };
        out.mask_tail();
        out
    }

    fn mask_tail(&mut self) {
        let used = self.n % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }
}

impl PartialOrd for NodeShore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Order by ground size, then cardinality, then lexicographic member list.
/// Small shores sort first, which makes "first offending pair" reports and
/// minimality scans deterministic.
impl Ord for NodeShore {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.members().cmp(&other.members()))
    }
}

impl fmt::Debug for NodeShore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NodeShore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn shore(n: usize, members: &[NodeId]) -> NodeShore {
        NodeShore::from_members(n, members.iter().copied()).unwrap()
    }

    #[test]
    fn construction_validates_range_and_properness() {
        assert!(NodeShore::from_members(4, [5]).is_err());
        assert!(NodeShore::proper(4, []).is_err());
        assert!(NodeShore::proper(4, [0, 1, 2, 3]).is_err());
        assert!(NodeShore::proper(4, [1, 3]).is_ok());
    }

    #[test]
    fn canonical_drops_node_zero_side() {
        let s = shore(4, &[0, 1]);
        assert_eq!(s.canonical(), shore(4, &[2, 3]));
        assert_eq!(s.complement().canonical(), shore(4, &[2, 3]));
    }

    #[test]
    fn crossing_requires_all_four_regions() {
        let a = shore(5, &[0, 1]);
        assert!(a.crosses(&shore(5, &[1, 2])));
        assert!(!a.crosses(&shore(5, &[0, 1, 2]))); // nested
        assert!(!a.crosses(&shore(5, &[2, 3, 4]))); // complement
        assert!(!a.crosses(&shore(5, &[2, 3]))); // disjoint but not covering
    }

    #[test]
    fn ordering_is_by_size_then_members() {
        let mut v = vec![shore(5, &[2, 3]), shore(5, &[4]), shore(5, &[1, 2]), shore(5, &[0])];
        v.sort();
        assert_eq!(
            v,
            vec![shore(5, &[0]), shore(5, &[4]), shore(5, &[1, 2]), shore(5, &[2, 3])]
        );
    }

    #[test]
    fn display_lists_sorted_members() {
        assert_eq!(shore(70, &[65, 2, 33]).to_string(), "{2,33,65}");
    }

    #[test]
    fn wide_ground_sets_mask_the_tail_word() {
        let s = shore(70, &[0, 69]);
        assert_eq!(s.complement().len(), 68);
        assert!(!s.complement().contains(69));
        assert!(s.complement().contains(1));
    }

    proptest! {
        #[test]
        fn set_algebra_matches_naive_model(n in 1usize..80, bits in proptest::collection::vec(any::<bool>(), 0..80)) {
            let mem_a: Vec<NodeId> = (0..n).filter(|&i| *bits.get(i).unwrap_or(&false)).map(|i| i as NodeId).collect();
            let mem_b: Vec<NodeId> = (0..n).filter(|&i| *bits.get(79 - i.min(79)).unwrap_or(&false)).map(|i| i as NodeId).collect();
            let a = NodeShore::from_members(n, mem_a.iter().copied()).unwrap();
            let b = NodeShore::from_members(n, mem_b.iter().copied()).unwrap();
            let model_union: Vec<NodeId> = (0..n as NodeId).filter(|v| mem_a.contains(v) || mem_b.contains(v)).collect();
            let model_inter: Vec<NodeId> = (0..n as NodeId).filter(|v| mem_a.contains(v) && mem_b.contains(v)).collect();
            let model_diff: Vec<NodeId> = (0..n as NodeId).filter(|v| mem_a.contains(v) && !mem_b.contains(v)).collect();
            prop_assert_eq!(a.union(&b).members(), model_union);
            prop_assert_eq!(a.intersection(&b).members(), model_inter);
            prop_assert_eq!(a.difference(&b).members(), model_diff);
            prop_assert_eq!(a.complement().len(), n - a.len());
            prop_assert_eq!(a.is_subset_of(&b), mem_a.iter().all(|v| mem_b.contains(v)));
            prop_assert_eq!(a.is_disjoint_from(&b), mem_a.iter().all(|v| !mem_b.contains(v)));
        }

        #[test]
        fn canonical_is_complement_invariant(n in 2usize..40, seed in any::<u64>()) {
            let members: Vec<NodeId> = (0..n as NodeId).filter(|v| (seed >> (v % 63)) & 1 == 1).collect();
            if !members.is_empty() && members.len() < n {
                let s = NodeShore::from_members(n, members).unwrap();
                prop_assert_eq!(s.canonical(), s.complement().canonical());
                prop_assert!(!s.canonical().contains(0));
            }
        }
    }
}
