//! Build plans: recipes of tree combinators annotated with the distance
//! sequence each node is claimed to realise, plus a symbolic checker and a
//! bounded executor.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::runs::RunSequence;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::sequence::distance_sequence_bruteforce;
use crate::tree::{BinaryTree, NodeId, TreeBuilder};

pub const DEFAULT_NODE_LIMIT: u64 = 1 << 27;

/// `count` components of one type placed at one depth below the merge root.
/// A type-`i` component is a full binary tree of height `log s - 1 - i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KraftSlot {
    pub ty: usize,
    pub depth: usize,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum PlanOp {
    BaseFull { height: usize },
    KraftMerge { slots: Vec<KraftSlot> },
    Join { left: usize, right: usize },
    Attach { child: usize, height: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanNode {
    pub op: PlanOp,
    pub claimed: RunSequence,
    pub tag: String,
    /// Set when the node's actual subtree is only dominated by the claim.
    pub deviation: Option<String>,
}

/// Plan nodes in bottom-up order; children always precede their parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildPlan {
    pub n: usize,
    pub log_s: u32,
    pub nodes: Vec<PlanNode>,
    pub root: usize,
}

#[derive(Clone, Debug)]
pub struct PlanBuilder {
    n: usize,
    log_s: u32,
    nodes: Vec<PlanNode>,
}

impl PlanBuilder {
    pub fn new(n: usize, log_s: u32) -> Self {
        PlanBuilder {
            n,
            log_s,
            nodes: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn log_s(&self) -> u32 {
        self.log_s
    }

    pub fn claimed(&self, id: usize) -> &RunSequence {
        &self.nodes[id].claimed
    }

    fn push(&mut self, op: PlanOp, claimed: RunSequence, tag: &str, deviation: Option<String>) -> usize {
        self.nodes.push(PlanNode {
            op,
            claimed,
            tag: tag.to_string(),
            deviation,
        });
        self.nodes.len() - 1
    }

    pub fn base_full(&mut self, height: usize, tag: &str) -> Result<usize> {
        let claimed = RunSequence::full_tree(self.n, self.log_s, height)?;
        Ok(self.push(PlanOp::BaseFull { height }, claimed, tag, None))
    }

    pub fn kraft(&mut self, y: &RunSequence, tag: &str) -> Result<usize> {
        let node = realize_base(y, self.n, self.log_s)?;
        Ok(self.push(node.op, node.claimed, tag, node.deviation))
    }

    /// Joins two nodes. The claim defaults to the combinator value.
    pub fn join(&mut self, left: usize, right: usize, claimed: Option<RunSequence>, tag: &str) -> Result<usize> {
        let claimed = match claimed {
            Some(c) => c,
            None => RunSequence::join(self.claimed(left), self.claimed(right))?,
        };
        Ok(self.push(PlanOp::Join { left, right }, claimed, tag, None))
    }

    pub fn attach(&mut self, child: usize, height: usize, claimed: Option<RunSequence>, tag: &str) -> Result<usize> {
        let claimed = match claimed {
            Some(c) => c,
            None => self.claimed(child).attach(height)?,
        };
        Ok(self.push(PlanOp::Attach { child, height }, claimed, tag, None))
    }

    pub fn finish(self, root: usize) -> BuildPlan {
        BuildPlan {
            n: self.n,
            log_s: self.log_s,
            nodes: self.nodes,
            root,
        }
    }
}

fn kraft_guard(inequality: String) -> Error {
    Error::GuardFailed {
        step: "kraft-merge".into(),
        case: String::new(),
        inequality,
    }
}

/// Realises `y` (support in the first `log s` entries, integer entries,
/// `Σ y_i ≥ 2^(n - log s)`, degbar at most 1) as a merge of `y_i` type-`i`
/// components below a common skeleton.
///
/// With `Σ y_i = 2^(n - log s)` every component sits at depth
/// `n - log s` and the root sequence is exactly `y`. With a surplus the
/// skeleton is the balanced tree with `Σ y_i` leaves and the
/// highest-index (smallest) components take the deeper slots; the node then
/// carries a deviation note, since leaves only move away from the root.
pub fn realize_base(y: &RunSequence, n: usize, log_s: u32) -> Result<PlanNode> {
    let l = log_s as usize;
    if y.n() != n {
        return Err(Error::SequenceMismatch(format!("sequence length {} ≠ n = {n}", y.n())));
    }
    if l == 0 || l > n {
        return Err(Error::OutOfRange(format!("log s = {l} outside 1..={n}")));
    }
    if !y.is_nonnegative() || !y.all_integers() {
        return Err(kraft_guard(format!("entries of {y} are nonnegative integers")));
    }
    if let Some(k) = y.last_nonzero() {
        if k >= l {
            return Err(kraft_guard(format!("last nonzero index {k} < log s = {l}")));
        }
    }
    let degbar = y.degbar();
    if degbar > Dyadic::one() {
        return Err(kraft_guard(format!("degbar{y} = {degbar} ≤ 1")));
    }
    let d = n - l;
    let total = y.entry_sum().to_bigint().expect("integer entries");
    let needed = num_bigint::BigInt::one() << d;
    if total < needed {
        return Err(kraft_guard(format!("Σ y = {total} ≥ 2^(n - log s) = {needed}")));
    }
    let total: u64 = u64::try_from(&total).map_err(|_| kraft_guard(format!("Σ y = {total} fits in 64 bits")))?;
    // Balanced skeleton with `total` leaves: `shallow` at depth `top`, the
    // rest one level deeper.
    let top = 63 - total.leading_zeros() as usize;
    let shallow = (2u64 << top) - total;
    let mut slots = Vec::new();
    let mut placed = 0u64;
    let mut k = 0;
    for run in y.runs() {
        let count = run.value.to_i64().expect("integer entries") as u64;
        for ty in k..k + run.len {
            if count == 0 {
                continue;
            }
            let at_top = count.min(shallow.saturating_sub(placed));
            if at_top > 0 {
                slots.push(KraftSlot { ty, depth: top, count: at_top });
            }
            if count > at_top {
                slots.push(KraftSlot {
                    ty,
                    depth: top + 1,
                    count: count - at_top,
                });
            }
            placed += count;
        }
        k += run.len;
    }
    let deviation = (total != 1 << d).then(|| {
        let deep: u64 = slots.iter().filter(|s| s.depth > d).map(|s| s.count).sum();
        format!(
            "surplus merge: Σ y = {total} > 2^(n - log s) = {}; {deep} components below depth {d}; actual sequence dominated by the claim",
            1u64 << d
        )
    });
    Ok(PlanNode {
        op: PlanOp::KraftMerge { slots },
        claimed: y.clone(),
        tag: "kraft-merge".into(),
        deviation,
    })
}

/// Node count of a plan subtree: exact while it fits in 512 bits, a base-2
/// logarithm beyond that.
#[derive(Clone, Debug, PartialEq)]
pub enum NodeCount {
    Exact(BigUint),
    Log2(f64),
}

const EXACT_BITS: u64 = 512;

impl NodeCount {
    fn exact(x: BigUint) -> Self {
        if x.bits() <= EXACT_BITS {
            NodeCount::Exact(x)
        } else {
            NodeCount::Log2(log2_big(&x))
        }
    }

    pub fn log2(&self) -> f64 {
        match self {
            NodeCount::Exact(x) => log2_big(x),
            NodeCount::Log2(l) => *l,
        }
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            NodeCount::Exact(x) => Some(x),
            NodeCount::Log2(_) => None,
        }
    }

    pub fn exceeds(&self, limit: u64) -> bool {
        match self {
            NodeCount::Exact(x) => *x > BigUint::from(limit),
            NodeCount::Log2(_) => true,
        }
    }

    fn join(a: &Self, b: &Self) -> Self {
        match (a, b) {
            (NodeCount::Exact(x), NodeCount::Exact(y)) => Self::exact(BigUint::one() + x + y),
            _ => {
                let (hi, lo) = if a.log2() >= b.log2() { (a.log2(), b.log2()) } else { (b.log2(), a.log2()) };
                NodeCount::Log2(hi + (1.0 + (lo - hi).exp2()).log2())
            }
        }
    }

    fn attach(c: &Self, h: usize) -> Self {
        match c {
            NodeCount::Exact(x) if (h as u64) + x.bits() <= EXACT_BITS => {
                let leaves = BigUint::one() << h;
                Self::exact(&leaves - 1u32 + leaves * x)
            }
            _ => NodeCount::Log2(h as f64 + c.log2()),
        }
    }
}

impl std::fmt::Display for NodeCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeCount::Exact(x) if x.bits() <= 96 => write!(f, "{x}"),
            other => write!(f, "~2^{:.0}", other.log2().floor()),
        }
    }
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64_digits().first().copied().unwrap_or(0) as f64).log2();
    }
    let top = (x >> (bits - 64) as usize).to_u64_digits()[0] as f64;
    top.log2() + (bits - 64) as f64
}

/// Node count of every plan node's subtree.
pub fn predicted_sizes(plan: &BuildPlan) -> Vec<NodeCount> {
    let l = plan.log_s as usize;
    let mut sizes: Vec<NodeCount> = Vec::with_capacity(plan.nodes.len());
    for node in &plan.nodes {
        let size = match &node.op {
            PlanOp::BaseFull { height } => NodeCount::attach(&NodeCount::Exact(BigUint::one()), *height),
            PlanOp::KraftMerge { slots } => {
                let mut comps = 0u64;
                let mut size = BigUint::zero();
                for s in slots {
                    comps += s.count;
                    size += ((BigUint::one() << (l - s.ty)) - 1u32) * s.count;
                }
                NodeCount::exact(size + comps.saturating_sub(1))
            }
            PlanOp::Join { left, right } => NodeCount::join(&sizes[*left], &sizes[*right]),
            PlanOp::Attach { child, height } => NodeCount::attach(&sizes[*child], *height),
        };
        sizes.push(size);
    }
    sizes
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeCheck {
    pub id: usize,
    pub tag: String,
    pub op: String,
    pub claimed: String,
    pub degbar: String,
    pub predicted_nodes: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanReport {
    pub n: usize,
    pub log_s: u32,
    pub plan_nodes: usize,
    pub root_claimed: String,
    /// Root entries `x_1..x_{n-1}` vanish, so every leaf has depth at least `n - 1`.
    pub root_leaf_depth_ok: bool,
    pub exact: bool,
    pub predicted_nodes: String,
    pub predicted_nodes_log2: f64,
    pub ok: bool,
    pub violations: Vec<String>,
    pub nodes: Vec<NodeCheck>,
}

/// Recomputes every claim bottom-up from the combinator algebra and checks
/// plausibility, degbar ≤ 1 at every node and at every level of every
/// attach, the join precondition `x_0 = 0`, the merge conditions, and the
/// root condition. Nothing is materialised.
pub fn check_plan_symbolic(plan: &BuildPlan) -> PlanReport {
    let (n, log_s) = (plan.n, plan.log_s);
    let l = log_s as usize;
    let one = Dyadic::one();
    let sizes = predicted_sizes(plan);
    let mut checks = Vec::with_capacity(plan.nodes.len());
    let mut all_violations = Vec::new();
    let mut exact = true;
    for (id, node) in plan.nodes.iter().enumerate() {
        let mut v = Vec::new();
        let claimed = &node.claimed;
        if claimed.n() != n {
            v.push(format!("claimed length {} ≠ n = {n}", claimed.n()));
        }
        let (op, recomputed) = match &node.op {
            PlanOp::BaseFull { height } => (format!("base-full({height})"), RunSequence::full_tree(n, log_s, *height).ok()),
            PlanOp::KraftMerge { slots } => {
                let d = n.saturating_sub(l);
                let mut kraft = Dyadic::zero();
                let mut counts = vec![0i64; n];
                for s in slots {
                    if s.ty >= l {
                        v.push(format!("component type {} < log s = {l}", s.ty));
                        continue;
                    }
                    if s.depth < d {
                        v.push(format!("component depth {} ≥ n - log s = {d}", s.depth));
                    }
                    kraft += &Dyadic::pow2(-(s.depth as i64)).mul_int(s.count as i64);
                    counts[s.ty] += s.count as i64;
                }
                if kraft != one {
                    v.push(format!("Kraft sum {kraft} = 1"));
                }
                let total: i64 = counts.iter().sum();
                if total < 1i64 << d.min(62) {
                    v.push(format!("Σ y = {total} ≥ 2^(n - log s)"));
                }
                if slots.iter().any(|s| s.depth > d) {
                    exact = false;
                }
                let y = RunSequence::from_entries(&counts.iter().map(|&c| Dyadic::from_int(c)).collect::<Vec<_>>());
                (format!("kraft-merge({} components)", total), Some(y))
            }
            PlanOp::Join { left, right } => {
                for (side, c) in [("left", *left), ("right", *right)] {
                    let x0 = plan.nodes[c].claimed.first();
                    if !x0.is_zero() {
                        v.push(format!("join {side} child #{c} has x_0 = {x0} ≠ 0"));
                    }
                }
                (
                    format!("join(#{left}, #{right})"),
                    RunSequence::join(&plan.nodes[*left].claimed, &plan.nodes[*right].claimed).ok(),
                )
            }
            PlanOp::Attach { child, height } => {
                let c = &plan.nodes[*child].claimed;
                let (k, worst) = c.max_attach_level(*height);
                if worst > one {
                    v.push(format!(
                        "attach level {}: degbar = {worst} ≤ 1",
                        height.saturating_sub(k)
                    ));
                }
                (format!("attach(#{child}, {height})"), c.attach(*height).ok())
            }
        };
        match recomputed {
            None => v.push("combinator undefined for these arguments".into()),
            Some(r) if &r != claimed => v.push(format!("claimed {claimed} ≠ combinator value {r}")),
            _ => {}
        }
        if !claimed.is_plausible(log_s) {
            v.push(format!("{claimed} is not plausible"));
        }
        let degbar = claimed.degbar();
        if degbar > one {
            v.push(format!("degbar = {degbar} ≤ 1"));
        }
        all_violations.extend(v.iter().map(|m| format!("#{id} [{}]: {m}", node.tag)));
        checks.push(NodeCheck {
            id,
            tag: node.tag.clone(),
            op,
            claimed: claimed.to_string(),
            degbar: if degbar.exponent() > 64 { format!("{:.6}", degbar.to_f64()) } else { degbar.to_string() },
            predicted_nodes: sizes[id].to_string(),
            ok: v.is_empty(),
            violations: v,
            deviation: node.deviation.clone(),
        });
    }
    let root = &plan.nodes[plan.root].claimed;
    let root_leaf_depth_ok = root.shift(1).last_nonzero().is_none();
    if !root_leaf_depth_ok {
        all_violations.push(format!("root {root}: entries 1..n-1 vanish"));
    }
    PlanReport {
        n,
        log_s,
        plan_nodes: plan.nodes.len(),
        root_claimed: root.to_string(),
        root_leaf_depth_ok,
        exact,
        predicted_nodes: sizes[plan.root].to_string(),
        predicted_nodes_log2: sizes[plan.root].log2(),
        ok: all_violations.is_empty(),
        violations: all_violations,
        nodes: checks,
    }
}

/// Materialises the plan, refusing when the root would exceed `limit` nodes.
pub fn execute_plan(plan: &BuildPlan, limit: u64) -> Result<BinaryTree> {
    execute(plan, limit, false).map(|(t, _)| t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceCheck {
    pub id: usize,
    pub tag: String,
    /// `None` when the subtree contains a surplus merge, so only domination is claimed.
    pub matches: Option<bool>,
}

/// As [`execute_plan`], additionally comparing every exact node's claim with
/// the brute-force sequence of the subtree it produced.
pub fn execute_plan_checked(plan: &BuildPlan, limit: u64) -> Result<(BinaryTree, Vec<SequenceCheck>)> {
    execute(plan, limit, true)
}

fn execute(plan: &BuildPlan, limit: u64, check: bool) -> Result<(BinaryTree, Vec<SequenceCheck>)> {
    let sizes = predicted_sizes(plan);
    let needed = &sizes[plan.root];
    if needed.exceeds(limit) {
        return Err(Error::LimitExceeded {
            what: "plan execution".into(),
            needed: format!("{needed} nodes"),
            limit: format!("{limit} nodes"),
        });
    }
    let l = plan.log_s as usize;
    let mut trees: Vec<Option<BinaryTree>> = vec![None; plan.nodes.len()];
    let mut exact = vec![true; plan.nodes.len()];
    let mut checks = Vec::new();
    for (id, node) in plan.nodes.iter().enumerate() {
        let (tree, ex) = match &node.op {
            PlanOp::BaseFull { height } => (BinaryTree::full(*height), true),
            PlanOp::KraftMerge { slots } => (materialize_merge(slots, l)?, node.deviation.is_none()),
            PlanOp::Join { left, right } => {
                let a = trees[*left].take().ok_or_else(|| reused(*left))?;
                let b = trees[*right].take().ok_or_else(|| reused(*right))?;
                (BinaryTree::join(&a, &b), exact[*left] && exact[*right])
            }
            PlanOp::Attach { child, height } => {
                let c = trees[*child].take().ok_or_else(|| reused(*child))?;
                (BinaryTree::attach_to_full(&c, *height), exact[*child])
            }
        };
        if check {
            let matches = ex.then(|| {
                let brute = distance_sequence_bruteforce(&tree, tree.root(), plan.n, plan.log_s);
                RunSequence::from_distance_sequence(&brute) == node.claimed
            });
            checks.push(SequenceCheck {
                id,
                tag: node.tag.clone(),
                matches,
            });
        }
        exact[id] = ex;
        trees[id] = Some(tree);
    }
    let tree = trees[plan.root].take().ok_or_else(|| reused(plan.root))?;
    Ok((tree, checks))
}

fn reused(id: usize) -> Error {
    Error::Precondition(format!("plan node #{id} is used twice or after the root"))
}

/// Skeleton whose leaves, left to right, sit at the slot depths in
/// nondecreasing order, each replaced by its component.
fn materialize_merge(slots: &[KraftSlot], log_s: usize) -> Result<BinaryTree> {
    let mut items: Vec<(usize, usize)> = Vec::new();
    for s in slots {
        items.extend(std::iter::repeat((s.depth, s.ty)).take(s.count as usize));
    }
    items.sort_by_key(|&(d, ty)| (d, ty));
    let max_depth = items.last().map_or(0, |&(d, _)| d);
    if max_depth >= 127 {
        return Err(Error::LimitExceeded {
            what: "merge skeleton depth".into(),
            needed: max_depth.to_string(),
            limit: "126".into(),
        });
    }
    let weight = |d: usize| 1u128 << (max_depth - d);
    if items.iter().map(|&(d, _)| weight(d)).sum::<u128>() != 1u128 << max_depth {
        return Err(Error::Precondition("merge slots do not have Kraft sum 1".into()));
    }
    let comps: Vec<BinaryTree> = (0..log_s).map(|ty| BinaryTree::full(log_s - 1 - ty)).collect();
    let mut b = TreeBuilder::new();
    let mut stack: Vec<(NodeId, usize, usize, usize)> = vec![(0, 0, 0, items.len())];
    while let Some((v, depth, lo, hi)) = stack.pop() {
        if hi - lo == 1 && items[lo].0 == depth {
            b.graft(v, &comps[items[lo].1]);
            continue;
        }
        let half = 1u128 << (max_depth - depth - 1);
        let mut acc = 0u128;
        let mut mid = lo;
        while acc < half {
            acc += weight(items[mid].0);
            mid += 1;
        }
        if acc != half || mid >= hi {
            return Err(Error::Precondition("merge slots cannot be arranged".into()));
        }
        let (left, right) = b.split(v);
        stack.push((right, depth + 1, mid, hi));
        stack.push((left, depth + 1, lo, mid));
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::verify_tree;

    #[test]
    fn exact_merge_is_full_tree_over_singles() {
        // n = 4, log s = 2: two single-node components per slot level 2.
        let y = RunSequence::from_ints(&[(0, 1), (4, 1), (0, 2)]);
        let node = realize_base(&y, 4, 2).unwrap();
        assert!(node.deviation.is_none());
        let mut b = PlanBuilder::new(4, 2);
        let k = b.kraft(&y, "merge").unwrap();
        let plan = b.finish(k);
        let (t, checks) = execute_plan_checked(&plan, 1000).unwrap();
        assert_eq!(t.len(), 7);
        assert!(checks.iter().all(|c| c.matches == Some(true)));
    }

    #[test]
    fn merge_guards() {
        let over = RunSequence::from_ints(&[(2, 2), (0, 2)]);
        assert!(matches!(realize_base(&over, 4, 2), Err(Error::GuardFailed { .. })));
        let short = RunSequence::from_ints(&[(0, 1), (2, 1), (0, 2)]);
        assert!(matches!(realize_base(&short, 4, 2), Err(Error::GuardFailed { .. })));
        let support = RunSequence::from_ints(&[(0, 2), (4, 1), (0, 1)]);
        assert!(matches!(realize_base(&support, 4, 2), Err(Error::GuardFailed { .. })));
    }

    #[test]
    fn surplus_merge_deepens_small_components() {
        // n = 5, log s = 3, 2^(n - log s) = 4 slots, 6 components.
        let y = RunSequence::from_ints(&[(0, 1), (2, 1), (4, 1), (0, 2)]);
        let node = realize_base(&y, 5, 3).unwrap();
        assert!(node.deviation.is_some());
        let PlanOp::KraftMerge { slots } = &node.op else { panic!() };
        assert!(slots.iter().filter(|s| s.depth == 3).all(|s| s.ty == 2));
        let plan = BuildPlan {
            n: 5,
            log_s: 3,
            nodes: vec![node],
            root: 0,
        };
        let rep = check_plan_symbolic(&plan);
        assert!(!rep.exact);
        let t = execute_plan(&plan, 10_000).unwrap();
        assert_eq!(Some(&BigUint::from(t.len())), predicted_sizes(&plan)[0].as_exact());
        assert!(verify_tree(&t, 5, 8).all_degbar_ok);
    }

    #[test]
    fn join_precondition_flagged() {
        let mut b = PlanBuilder::new(3, 2);
        let a = b.base_full(2, "full").unwrap();
        let c = b.base_full(0, "single").unwrap();
        let j = b.join(a, c, None, "join").unwrap();
        let rep = check_plan_symbolic(&b.finish(j));
        assert!(!rep.ok);
        assert!(rep.violations.iter().any(|v| v.contains("x_0")));
    }

    #[test]
    fn memory_guard_reports_size() {
        let mut b = PlanBuilder::new(40, 30);
        let c = b.base_full(20, "full").unwrap();
        let a = b.attach(c, 20, None, "attach").unwrap();
        let plan = b.finish(a);
        match execute_plan(&plan, DEFAULT_NODE_LIMIT) {
            Err(Error::LimitExceeded { needed, .. }) => assert_eq!(needed, "2199023255551 nodes"),
            other => panic!("{other:?}"),
        }
    }
}
