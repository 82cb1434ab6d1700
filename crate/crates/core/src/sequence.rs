//! Weighted leaf-distance profiles of tree nodes.
//!
//! For a node `w`, entry `x_i` is scaled so that `x_i * s / 2^(i+1)` counts
//! the leaf descendants of `w` at distance exactly `n - 1 - i`. The degree
//! budget `s` is a power of two, so every entry is an exact dyadic rational.

use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::tree::{BinaryTree, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceSequence {
    n: usize,
    log_s: u32,
    entries: Vec<Dyadic>,
}

impl DistanceSequence {
    pub fn new(n: usize, log_s: u32, entries: Vec<Dyadic>) -> Result<Self> {
        if entries.len() != n {
            return Err(Error::SequenceMismatch(format!(
                "expected {n} entries, got {}",
                entries.len()
            )));
        }
        if let Some(i) = entries.iter().position(Dyadic::is_negative) {
            return Err(Error::SequenceMismatch(format!("entry {i} is negative")));
        }
        Ok(DistanceSequence { n, log_s, entries })
    }

    pub fn from_ints(n: usize, log_s: u32, entries: &[i64]) -> Result<Self> {
        Self::new(n, log_s, entries.iter().map(|&x| Dyadic::from_int(x)).collect())
    }

    pub fn zeros(n: usize, log_s: u32) -> Self {
        DistanceSequence {
            n,
            log_s,
            entries: vec![Dyadic::zero(); n],
        }
    }

    /// Sequence of a lone leaf: one leaf at distance 0, i.e. `x_{n-1} = 2^n / s`.
    pub fn single_node(n: usize, log_s: u32) -> Self {
        let mut seq = Self::zeros(n, log_s);
        if n > 0 {
            seq.entries[n - 1] = Dyadic::pow2(n as i64 - log_s as i64);
        }
        seq
    }

    /// Builds the sequence from leaf counts by distance (`counts[d]` leaves at distance `d`).
    pub fn from_leaf_counts(n: usize, log_s: u32, counts: &[u64]) -> Self {
        let entries = (0..n)
            .map(|i| {
                let c = counts.get(n - 1 - i).copied().unwrap_or(0);
                Dyadic::from_int(c as i64).shl(i as i64 + 1 - log_s as i64)
            })
            .collect();
        DistanceSequence { n, log_s, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn log_s(&self) -> u32 {
        self.log_s
    }

    pub fn entries(&self) -> &[Dyadic] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Dyadic {
        &self.entries[i]
    }

    /// `Σ x_i / 2^(i+1)`: the degree divided by `s`.
    pub fn degbar(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for x in self.entries.iter().rev() {
            acc = (&acc + x).half();
        }
        acc
    }

    /// Number of leaf descendants within distance `n - 1`.
    pub fn degree(&self) -> Dyadic {
        self.degbar().shl(self.log_s as i64)
    }

    pub fn within_budget(&self) -> bool {
        self.degbar() <= Dyadic::one()
    }

    /// Every `x_i * s / 2^(i+1)` is a nonnegative integer.
    pub fn is_plausible(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, x)| {
            !x.is_negative() && x.shl(self.log_s as i64 - i as i64 - 1).is_integer()
        })
    }

    /// Leaf counts by distance, when plausible.
    pub fn leaf_counts(&self) -> Option<Vec<num_bigint::BigInt>> {
        let mut counts = vec![num_bigint::BigInt::default(); self.n];
        for (i, x) in self.entries.iter().enumerate() {
            counts[self.n - 1 - i] = x.shl(self.log_s as i64 - i as i64 - 1).to_bigint()?;
        }
        Some(counts)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.log_s != other.log_s {
            return Err(Error::SequenceMismatch(format!(
                "(n, log s) = ({}, {}) vs ({}, {})",
                self.n, self.log_s, other.n, other.log_s
            )));
        }
        Ok(())
    }

    /// Sequence of a new root whose left and right subtrees have sequences
    /// `left` and `right`: `((x_1 + x'_1)/2, …, (x_{n-1} + x'_{n-1})/2, 0)`.
    pub fn join_under_root(left: &Self, right: &Self) -> Result<Self> {
        left.check_compatible(right)?;
        let mut entries: Vec<Dyadic> = (1..left.n)
            .map(|i| (&left.entries[i] + &right.entries[i]).half())
            .collect();
        entries.push(Dyadic::zero());
        Ok(DistanceSequence {
            n: left.n,
            log_s: left.log_s,
            entries,
        })
    }

    /// Root sequence of a full binary tree of height `h` with a copy of a
    /// tree with this sequence on every leaf: `(x_h, …, x_{n-1}, 0, …, 0)`.
    pub fn attach_to_full_tree(&self, h: usize) -> Result<Self> {
        if h >= self.n.max(1) {
            return Err(Error::OutOfRange(format!(
                "attach height {h} outside 0..={}",
                self.n.saturating_sub(1)
            )));
        }
        let mut entries: Vec<Dyadic> = self.entries[h..].to_vec();
        entries.resize(self.n, Dyadic::zero());
        Ok(DistanceSequence {
            n: self.n,
            log_s: self.log_s,
            entries,
        })
    }
}

impl std::fmt::Display for DistanceSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Sequence of node `v` computed by walking its subtree.
pub fn distance_sequence_bruteforce(t: &BinaryTree, v: NodeId, n: usize, log_s: u32) -> DistanceSequence {
    DistanceSequence::from_leaf_counts(n, log_s, &t.leaf_distance_counts(v, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(n: usize, log_s: u32, xs: &[i64]) -> DistanceSequence {
        DistanceSequence::from_ints(n, log_s, xs).unwrap()
    }

    #[test]
    fn single_node_sequence() {
        assert_eq!(DistanceSequence::single_node(3, 2), seq(3, 2, &[0, 0, 2]));
        let t = BinaryTree::single();
        assert_eq!(distance_sequence_bruteforce(&t, 0, 3, 2), seq(3, 2, &[0, 0, 2]));
    }

    #[test]
    fn full_tree_height_two() {
        let t = BinaryTree::full(2);
        assert_eq!(distance_sequence_bruteforce(&t, 0, 3, 2), seq(3, 2, &[2, 0, 0]));
    }

    #[test]
    fn join_examples() {
        let a = seq(3, 2, &[0, 0, 2]);
        let j = DistanceSequence::join_under_root(&a, &a).unwrap();
        assert_eq!(j, seq(3, 2, &[0, 2, 0]));
        let j2 = DistanceSequence::join_under_root(&j, &j).unwrap();
        assert_eq!(j2, seq(3, 2, &[2, 0, 0]));
        let z = DistanceSequence::zeros(3, 2);
        assert_eq!(DistanceSequence::join_under_root(&z, &z).unwrap(), z);
        assert!(DistanceSequence::join_under_root(&a, &seq(3, 3, &[0, 0, 1])).is_err());
    }

    #[test]
    fn attach_examples() {
        let a = seq(3, 2, &[0, 0, 2]);
        assert_eq!(a.attach_to_full_tree(0).unwrap(), a);
        assert_eq!(a.attach_to_full_tree(2).unwrap(), seq(3, 2, &[2, 0, 0]));
        assert_eq!(
            seq(4, 2, &[1, 1, 1, 1]).attach_to_full_tree(2).unwrap(),
            seq(4, 2, &[1, 1, 0, 0])
        );
        assert!(a.attach_to_full_tree(3).is_err());
    }

    #[test]
    fn degbar_examples() {
        // Single node: one leaf, degree 1.
        let s = DistanceSequence::single_node(5, 3);
        assert_eq!(s.degbar(), Dyadic::pow2(-3));
        assert_eq!(s.degree(), Dyadic::one());
        let ones = seq(5, 3, &[1, 1, 1, 1, 1]);
        assert_eq!(ones.degbar(), &Dyadic::one() - &Dyadic::pow2(-5));
        assert_eq!(seq(5, 3, &[2, 0, 0, 0, 0]).degbar(), Dyadic::one());
    }

    #[test]
    fn plausibility() {
        assert!(seq(4, 2, &[1, 1, 0, 0]).is_plausible());
        // x_2 * 4 / 8 = 1/2 is not an integer.
        assert!(!seq(4, 2, &[0, 0, 1, 0]).is_plausible());
        assert!(DistanceSequence::single_node(4, 2).is_plausible());
        assert!(DistanceSequence::from_ints(2, 1, &[-1, 0]).is_err());
    }
}
