use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::tree::{hyperedges_of_tree, BinaryTree, TreeBuilder};

/// The constant `c` in `s = 2^(n-1) / (c·n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scale {
    /// `c = 1`.
    One,
    /// `c = 64/63`.
    SixtyFourOverSixtyThree,
}

impl Scale {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Scale::One),
            "64/63" => Ok(Scale::SixtyFourOverSixtyThree),
            other => Err(Error::OutOfRange(format!("c must be 1 or 64/63, got {other}"))),
        }
    }

    /// `c·n` when it is an integer.
    pub fn scaled(self, n: u64) -> Option<u64> {
        match self {
            Scale::One => Some(n),
            Scale::SixtyFourOverSixtyThree => (n % 63 == 0).then(|| n / 63 * 64),
        }
    }
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scale::One => "1",
            Scale::SixtyFourOverSixtyThree => "64/63",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Neighborhood,
    RegularWeak,
    RegularStrong,
    CompleteGame,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "neighborhood" => Ok(Family::Neighborhood),
            "regular-weak" => Ok(Family::RegularWeak),
            "regular-strong" => Ok(Family::RegularStrong),
            "complete-game" => Ok(Family::CompleteGame),
            other => Err(Error::OutOfRange(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    pub family: Family,
    pub n: usize,
    /// `log2 s`; every degree budget used by the families is a power of two.
    pub log_s: u32,
    pub scale: Scale,
}

impl ConstructionParams {
    /// `s = 2^(n-1) / (c·n)` with `c·n` a power of two.
    pub fn strong(n: usize, scale: Scale) -> Result<Self> {
        let m = scale
            .scaled(n as u64)
            .filter(|m| m.is_power_of_two())
            .ok_or_else(|| Error::OutOfRange(format!("c·n must be a power of two (n = {n}, c = {scale})")))?;
        let log_m = m.trailing_zeros() as usize;
        if n < log_m + 2 {
            return Err(Error::OutOfRange(format!("n = {n} too small for s = 2^(n-1)/(c·n)")));
        }
        Ok(ConstructionParams {
            family: Family::RegularStrong,
            n,
            log_s: (n - 1 - log_m) as u32,
            scale,
        })
    }

    /// `s = 2^(n+1) / 2^⌊log n⌋`.
    pub fn regular_weak(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::OutOfRange(format!("regular-weak needs n ≥ 4, got {n}")));
        }
        Ok(ConstructionParams {
            family: Family::RegularWeak,
            n,
            log_s: (n + 1 - floor_log2(n)) as u32,
            scale: Scale::One,
        })
    }

    /// `c·n`.
    pub fn m(&self) -> u64 {
        self.scale.scaled(self.n as u64).unwrap_or(0)
    }

    /// `r = ⌊log s / 2⌋ - 1`.
    pub fn r(&self) -> i64 {
        self.log_s as i64 / 2 - 1
    }

    /// The degree budget, when it fits in 64 bits.
    pub fn s(&self) -> Option<u64> {
        1u64.checked_shl(self.log_s)
    }
}

pub fn floor_log2(n: usize) -> usize {
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

/// The board of the introductory game: every root-to-leaf path of a full
/// binary tree of height `n - 1`.
pub fn complete_tree_game(n: usize) -> Result<Hypergraph> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    Ok(hyperedges_of_tree(&BinaryTree::full(n - 1), n)?.hypergraph)
}

/// Tree whose path hypergraph has maximum neighborhood `2^(n-2) + 2^(n-3)`
/// while Maker still wins by the sibling pairing.
pub fn neighborhood_counterexample(n: usize) -> Result<BinaryTree> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("neighborhood construction needs n ≥ 3, got {n}")));
    }
    let s = BinaryTree::full(n - 3);
    let s_prime = BinaryTree::full(n - 2);
    // One copy of everything hanging below a leaf `u` of the top tree.
    let mut below_u = TreeBuilder::new();
    let (_v, w) = below_u.split(0);
    below_u.graft(w, &s);
    for u2 in below_u.leaves_in_order() {
        if u2 == 1 {
            continue;
        }
        let (_v2, w2) = below_u.split(u2);
        below_u.graft(w2, &s_prime);
    }
    let below_u = below_u.finish();
    Ok(BinaryTree::attach_to_full(&below_u, n - 2))
}

/// Full tree of height `n - 1` whose leaves, in runs of `2^⌊log n⌋ / 2`,
/// receive full subtrees of heights `0, 1, 2, …`.
pub fn regular_weak(n: usize) -> Result<BinaryTree> {
    if n < 4 {
        return Err(Error::OutOfRange(format!("regular-weak needs n ≥ 4, got {n}")));
    }
    let interval = (1usize << floor_log2(n)) / 2;
    let subtrees: Vec<BinaryTree> = (0..interval).map(BinaryTree::full).collect();
    let mut b = TreeBuilder::from_tree(&BinaryTree::full(n - 1));
    for (k, leaf) in b.leaves_in_order().into_iter().enumerate() {
        b.graft(leaf, &subtrees[k % interval]);
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::verify_tree;

    #[test]
    fn complete_game_counts() {
        let h = complete_tree_game(1).unwrap();
        assert_eq!((h.num_vertices(), h.num_edges()), (1, 1));
        let h = complete_tree_game(3).unwrap();
        assert_eq!((h.num_vertices(), h.num_edges()), (7, 4));
        let d = h.degree_stats();
        assert_eq!((d.max, d.argmax), (4, Some(0)));
    }

    #[test]
    fn neighborhood_small() {
        let t = neighborhood_counterexample(3).unwrap();
        assert_eq!(t.len(), 15);
        let th = hyperedges_of_tree(&t, 3).unwrap();
        assert!(th.in_class);
        assert_eq!(th.hypergraph.num_edges(), 8);
        assert_eq!(th.hypergraph.neighborhood_stats().max, 3);
        assert_eq!(th.hypergraph.max_degree(), 3);
        let t4 = neighborhood_counterexample(4).unwrap();
        let h4 = hyperedges_of_tree(&t4, 4).unwrap().hypergraph;
        assert_eq!(h4.neighborhood_stats().max, 6);
    }

    #[test]
    fn regular_weak_small() {
        let t = regular_weak(4).unwrap();
        assert_eq!(t.len(), 23);
        let p = ConstructionParams::regular_weak(4).unwrap();
        assert_eq!(p.s(), Some(8));
        let rep = verify_tree(&t, 4, 8);
        assert!(rep.passes, "{rep:?}");
        assert_eq!(crate::tree::horizon_degrees(&t, 4)[0], 4);
    }

    #[test]
    fn strong_params() {
        let p = ConstructionParams::strong(64, Scale::One).unwrap();
        assert_eq!(p.log_s, 57);
        assert_eq!(p.r(), 27);
        let q = ConstructionParams::strong(63 * 16, Scale::SixtyFourOverSixtyThree).unwrap();
        assert_eq!(q.m(), 1024);
        assert_eq!(q.log_s as usize, 63 * 16 - 1 - 10);
        assert!(ConstructionParams::strong(48, Scale::One).is_err());
        assert!(ConstructionParams::strong(64, Scale::SixtyFourOverSixtyThree).is_err());
    }
}
