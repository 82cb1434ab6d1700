//! Rooted ordered binary trees (every node has zero or two children), the
//! path hypergraph `H_T`, and the degree verifier for tree boards.
//!
//! Trees are stored as an arena in preorder, so node `0` is the root and the
//! node order coincides with the lexicographic order of path ids (`L < R`).
//! The vertex order of [`hyperedges_of_tree`] is the same order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{dot_escape, display_name, Hypergraph, Pairing, PairingStrategy};

pub type NodeId = usize;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Node {
    parent: u32,
    left: u32,
    right: u32,
    depth: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryTree {
    nodes: Vec<Node>,
}

impl BinaryTree {
    pub fn single() -> Self {
        BinaryTree {
            nodes: vec![Node {
                parent: NONE,
                left: NONE,
                right: NONE,
                depth: 0,
            }],
        }
    }

    /// Full binary tree of the given height (`2^(h+1) - 1` nodes).
    pub fn full(height: usize) -> Self {
        let mut b = TreeBuilder::new();
        let mut frontier = vec![0];
        for _ in 0..height {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for v in frontier {
                let (l, r) = b.split(v);
                next.push(l);
                next.push(r);
            }
            frontier = next;
        }
        b.finish()
    }

    /// New root with `left` and `right` as its subtrees.
    pub fn join(left: &BinaryTree, right: &BinaryTree) -> Self {
        let mut b = TreeBuilder::new();
        let (l, r) = b.split(0);
        b.graft(l, left);
        b.graft(r, right);
        b.finish()
    }

    /// Full binary tree of height `h` with a copy of `child` rooted at every leaf.
    pub fn attach_to_full(child: &BinaryTree, h: usize) -> Self {
        let mut b = TreeBuilder::from_tree(&BinaryTree::full(h));
        for leaf in b.leaves() {
            b.graft(leaf, child);
        }
        b.finish()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn children(&self, v: NodeId) -> Option<(NodeId, NodeId)> {
        let n = &self.nodes[v];
        (n.left != NONE).then(|| (n.left as usize, n.right as usize))
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.nodes[v].parent;
        (p != NONE).then_some(p as usize)
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.nodes[v].depth as usize
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.nodes[v].left == NONE
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.len()).filter(|&v| self.is_leaf(v))
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth as usize).max().unwrap_or(0)
    }

    pub fn min_leaf_depth(&self) -> usize {
        self.leaves().map(|v| self.depth(v)).min().unwrap_or(0)
    }

    /// True when `anc` is `v` or one of its ancestors.
    pub fn is_ancestor(&self, anc: NodeId, v: NodeId) -> bool {
        let mut cur = v;
        let target_depth = self.depth(anc);
        while self.depth(cur) > target_depth {
            cur = self.parent(cur).expect("non-root has a parent");
        }
        cur == anc
    }

    /// Left/right descent string from the root; the root is `""`.
    pub fn path_id(&self, v: NodeId) -> String {
        let mut s = Vec::with_capacity(self.depth(v));
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            s.push(if self.nodes[p].left as usize == cur { b'L' } else { b'R' });
            cur = p;
        }
        s.reverse();
        String::from_utf8(s).unwrap()
    }

    /// All path ids, indexed by node.
    pub fn path_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = Vec::with_capacity(self.len());
        for v in 0..self.len() {
            let id = match self.parent(v) {
                None => String::new(),
                Some(p) => {
                    let mut s = String::with_capacity(self.depth(v));
                    s.push_str(&ids[p]);
                    s.push(if self.nodes[p].left as usize == v { 'L' } else { 'R' });
                    s
                }
            };
            ids.push(id);
        }
        ids
    }

    /// Looks a node up by its path id.
    pub fn node_at(&self, path: &str) -> Option<NodeId> {
        let mut cur = 0;
        for c in path.chars() {
            let (l, r) = self.children(cur)?;
            cur = match c {
                'L' => l,
                'R' => r,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Preorder node list of the subtree rooted at `v`.
    pub fn subtree(&self, v: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            if let Some((l, r)) = self.children(u) {
                stack.push(r);
                stack.push(l);
            }
        }
        out
    }

    /// Number of leaf descendants of `v` at each distance `0..horizon`.
    pub fn leaf_distance_counts(&self, v: NodeId, horizon: usize) -> Vec<u64> {
        let mut counts = vec![0u64; horizon];
        let base = self.depth(v);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            let d = self.depth(u) - base;
            if d >= horizon {
                continue;
            }
            match self.children(u) {
                None => counts[d] += 1,
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        counts
    }

    pub fn to_json(&self) -> String {
        let ids = self.path_ids();
        let mut out = String::with_capacity(self.len() * 32);
        self.write_json(0, &ids, &mut out);
        out
    }

    fn write_json(&self, v: NodeId, ids: &[String], out: &mut String) {
        let _ = write!(out, "{{\"id\":{}", serde_json::Value::String(ids[v].clone()));
        match self.children(v) {
            None => out.push_str(",\"left\":null,\"right\":null}"),
            Some((l, r)) => {
                out.push_str(",\"left\":");
                self.write_json(l, ids, out);
                out.push_str(",\"right\":");
                self.write_json(r, ids, out);
                out.push('}');
            }
        }
    }

    /// Parses the nested tree format and checks that ids are descent strings
    /// and that every node has zero or two children.
    pub fn from_json(json: &str) -> Result<Self> {
        let root: TreeNodeJson = serde_json::from_str(json)?;
        let mut b = TreeBuilder::new();
        let mut stack = vec![(0usize, &root, String::new())];
        while let Some((v, node, expected)) = stack.pop() {
            if node.id != expected {
                return Err(Error::InvalidTree(format!(
                    "node id `{}` does not match its position `{expected}`",
                    node.id
                )));
            }
            match (&node.left, &node.right) {
                (None, None) => {}
                (Some(l), Some(r)) => {
                    let (lv, rv) = b.split(v);
                    stack.push((rv, r, format!("{expected}R")));
                    stack.push((lv, l, format!("{expected}L")));
                }
                _ => {
                    return Err(Error::InvalidTree(format!(
                        "node `{expected}` has exactly one child"
                    )))
                }
            }
        }
        Ok(b.finish())
    }

    pub fn to_dot(&self) -> String {
        let ids = self.path_ids();
        let mut out = String::from("digraph tree {\n  node [shape=circle, fontsize=9];\n");
        for (v, id) in ids.iter().enumerate() {
            let _ = writeln!(out, "  n{v} [label=\"{}\"];", dot_escape(display_name(id)));
        }
        for v in 0..self.len() {
            if let Some((l, r)) = self.children(v) {
                let _ = writeln!(out, "  n{v} -> n{l};\n  n{v} -> n{r};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TreeNodeJson {
    id: String,
    left: Option<Box<TreeNodeJson>>,
    right: Option<Box<TreeNodeJson>>,
}

/// Mutable tree under construction; [`TreeBuilder::finish`] renumbers into preorder.
#[derive(Clone, Debug)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
}

impl Default for TreeBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl TreeBuilder {
    pub fn new() -> Self {
        TreeBuilder {
            nodes: BinaryTree::single().nodes,
        }
    }

    pub fn from_tree(t: &BinaryTree) -> Self {
        TreeBuilder { nodes: t.nodes.clone() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.nodes[v].depth as usize
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].left == NONE).collect()
    }

    /// Leaves in left-to-right order.
    pub fn leaves_in_order(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            let n = self.nodes[u];
            if n.left == NONE {
                out.push(u);
            } else {
                stack.push(n.right as usize);
                stack.push(n.left as usize);
            }
        }
        out
    }

    /// Gives leaf `v` two new leaf children.
    pub fn split(&mut self, v: NodeId) -> (NodeId, NodeId) {
        assert_eq!(self.nodes[v].left, NONE, "split of an internal node");
        let depth = self.nodes[v].depth + 1;
        let l = self.nodes.len();
        for _ in 0..2 {
            self.nodes.push(Node {
                parent: v as u32,
                left: NONE,
                right: NONE,
                depth,
            });
        }
        self.nodes[v].left = l as u32;
        self.nodes[v].right = l as u32 + 1;
        (l, l + 1)
    }

    /// Replaces leaf `v` by a copy of `t` (the root of `t` becomes `v`).
    pub fn graft(&mut self, v: NodeId, t: &BinaryTree) {
        assert_eq!(self.nodes[v].left, NONE, "graft onto an internal node");
        let offset = self.nodes.len() as u32 - 1;
        let base = self.nodes[v].depth;
        let map = |u: u32| if u == 0 { v as u32 } else { u + offset };
        if let Some((l, r)) = t.children(0) {
            self.nodes[v].left = map(l as u32);
            self.nodes[v].right = map(r as u32);
        }
        for n in &t.nodes[1..] {
            self.nodes.push(Node {
                parent: map(n.parent),
                left: if n.left == NONE { NONE } else { map(n.left) },
                right: if n.right == NONE { NONE } else { map(n.right) },
                depth: n.depth + base,
            });
        }
    }

    pub fn finish(self) -> BinaryTree {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0u32];
        while let Some(u) = stack.pop() {
            order.push(u);
            let n = self.nodes[u as usize];
            if n.left != NONE {
                stack.push(n.right);
                stack.push(n.left);
            }
        }
        let mut new_index = vec![NONE; self.nodes.len()];
        for (i, &u) in order.iter().enumerate() {
            new_index[u as usize] = i as u32;
        }
        let remap = |u: u32| if u == NONE { NONE } else { new_index[u as usize] };
        let nodes = order
            .iter()
            .map(|&u| {
                let n = self.nodes[u as usize];
                Node {
                    parent: remap(n.parent),
                    left: remap(n.left),
                    right: remap(n.right),
                    depth: n.depth,
                }
            })
            .collect();
        BinaryTree { nodes }
    }
}

/// `H_T(n)` together with the `C_n` membership flag.
#[derive(Clone, Debug)]
pub struct TreeHypergraph {
    pub hypergraph: Hypergraph,
    /// Every leaf has depth at least `n - 1`.
    pub in_class: bool,
}

/// The `n`-uniform hypergraph whose edges are the downward paths of `n`
/// vertices ending at a leaf. Vertices are the tree nodes, named by path id.
pub fn hyperedges_of_tree(t: &BinaryTree, n: usize) -> Result<TreeHypergraph> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let mut edges = Vec::new();
    let mut in_class = true;
    for leaf in t.leaves() {
        if t.depth(leaf) + 1 < n {
            in_class = false;
            continue;
        }
        let mut e = Vec::with_capacity(n);
        let mut cur = leaf;
        e.push(cur);
        for _ in 1..n {
            cur = t.parent(cur).unwrap();
            e.push(cur);
        }
        edges.push(e);
    }
    Ok(TreeHypergraph {
        hypergraph: Hypergraph::new(t.path_ids(), edges)?,
        in_class,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeReport {
    pub n: usize,
    pub s: u64,
    pub nodes: usize,
    pub min_leaf_depth: usize,
    /// Largest number of leaf descendants within distance `n - 1` of a node.
    pub max_degree_within_horizon: u64,
    pub argmax_node: String,
    pub all_degbar_ok: bool,
    pub leaf_depth_ok: bool,
    pub passes: bool,
}

/// Per-node count of leaf descendants within distance `n - 1`.
pub fn horizon_degrees(t: &BinaryTree, n: usize) -> Vec<u64> {
    let mut deg = vec![0u64; t.len()];
    for leaf in t.leaves() {
        let mut cur = leaf;
        deg[cur] += 1;
        for _ in 1..n {
            match t.parent(cur) {
                Some(p) => {
                    cur = p;
                    deg[cur] += 1;
                }
                None => break,
            }
        }
    }
    deg
}

/// Checks the two tree conditions: every leaf has depth at least `n - 1`,
/// and every node has at most `s` leaf descendants within distance `n - 1`.
pub fn verify_tree(t: &BinaryTree, n: usize, s: u64) -> TreeReport {
    let deg = horizon_degrees(t, n);
    let (argmax, max) = deg
        .iter()
        .enumerate()
        .fold((0usize, 0u64), |best, (v, &d)| if d > best.1 { (v, d) } else { best });
    let min_leaf_depth = t.min_leaf_depth();
    let leaf_depth_ok = min_leaf_depth + 1 >= n;
    let all_degbar_ok = max <= s;
    TreeReport {
        n,
        s,
        nodes: t.len(),
        min_leaf_depth,
        max_degree_within_horizon: max,
        argmax_node: t.path_id(argmax),
        all_degbar_ok,
        leaf_depth_ok,
        passes: leaf_depth_ok && all_degbar_ok,
    }
}

/// Root as first move, every non-root node paired with its sibling.
pub fn sibling_pairing(t: &BinaryTree) -> PairingStrategy {
    let pairs = (0..t.len()).filter_map(|v| t.children(v)).collect();
    PairingStrategy {
        first_move: Some(t.root()),
        pairing: Pairing::new(pairs, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_tree_shape() {
        let t = BinaryTree::full(2);
        assert_eq!(t.len(), 7);
        assert_eq!(t.leaves().count(), 4);
        assert_eq!(t.path_ids(), vec!["", "L", "LL", "LR", "R", "RL", "RR"]);
        assert_eq!(t.node_at("RL"), Some(5));
        assert_eq!(t.path_id(5), "RL");
        assert!(t.is_ancestor(4, 6));
        assert!(!t.is_ancestor(1, 6));
    }

    #[test]
    fn path_hypergraph_of_full_tree() {
        let th = hyperedges_of_tree(&BinaryTree::full(2), 3).unwrap();
        assert!(th.in_class);
        assert_eq!(th.hypergraph.num_edges(), 4);
        assert!(th.hypergraph.is_uniform(3));
    }

    #[test]
    fn single_node_has_no_edges_for_n2() {
        let th = hyperedges_of_tree(&BinaryTree::single(), 2).unwrap();
        assert!(!th.in_class);
        assert_eq!(th.hypergraph.num_edges(), 0);
        assert_eq!(th.hypergraph.num_vertices(), 1);
    }

    #[test]
    fn verify_full_tree() {
        let r = verify_tree(&BinaryTree::full(3), 4, 8);
        assert!(r.passes);
        assert_eq!(r.max_degree_within_horizon, 8);
        assert!(!verify_tree(&BinaryTree::full(3), 4, 7).passes);
        let single = verify_tree(&BinaryTree::single(), 2, 100);
        assert!(!single.passes);
        assert!(!single.leaf_depth_ok);
    }

    #[test]
    fn sibling_pairs() {
        let p = sibling_pairing(&BinaryTree::join(&BinaryTree::single(), &BinaryTree::single()));
        assert_eq!(p.pairing.pairs.len(), 1);
        let p = sibling_pairing(&BinaryTree::full(2));
        assert_eq!(p.pairing.pairs.len(), 3);
        p.validate(7).unwrap();
    }

    #[test]
    fn attach_and_join_sizes() {
        let t = BinaryTree::attach_to_full(&BinaryTree::full(1), 2);
        assert_eq!(t.len(), 3 + 4 * 3);
        assert_eq!(t, BinaryTree::full(3));
        let j = BinaryTree::join(&BinaryTree::full(1), &BinaryTree::single());
        assert_eq!(j.len(), 5);
        assert_eq!(j.min_leaf_depth(), 1);
        assert_eq!(j.height(), 2);
    }

    #[test]
    fn json_round_trip() {
        let t = BinaryTree::join(&BinaryTree::full(2), &BinaryTree::single());
        let back = BinaryTree::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(t.to_json().starts_with("{\"id\":\"\",\"left\":{\"id\":\"L\""));
    }

    #[test]
    fn json_rejects_bad_trees() {
        let one_child = r#"{"id":"","left":{"id":"L","left":null,"right":null},"right":null}"#;
        assert!(matches!(BinaryTree::from_json(one_child), Err(Error::InvalidTree(_))));
        let bad_id = r#"{"id":"","left":{"id":"X","left":null,"right":null},"right":{"id":"R","left":null,"right":null}}"#;
        assert!(matches!(BinaryTree::from_json(bad_id), Err(Error::InvalidTree(_))));
    }

    #[test]
    fn leaf_counts() {
        let t = BinaryTree::join(&BinaryTree::full(1), &BinaryTree::single());
        assert_eq!(t.leaf_distance_counts(0, 4), vec![0, 1, 2, 0]);
        assert_eq!(horizon_degrees(&t, 2), vec![1, 2, 1, 1, 1]);
    }
}
