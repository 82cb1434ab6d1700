//! Does a pairing strategy win? Three independent checks.
//!
//! Under a pairing strategy Maker ends with the first move and at least one
//! vertex of every pair, whatever Breaker does. The strategy wins when every
//! Breaker selection (one vertex per pair, plus the leftover) leaves Maker
//! an edge.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, PairingStrategy, VertexId};
use crate::sat::{dpll_sat_with, pairing_formula, DpllLimits, SatResult};
use crate::tree::{sibling_pairing, BinaryTree};

/// Largest number of pairs for the selection enumeration.
pub const DEFAULT_ENUMERATION_PAIRS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyLimits {
    pub enumeration_pairs: usize,
    pub dpll: DpllLimits,
}

impl Default for VerifyLimits {
    fn default() -> Self {
        VerifyLimits {
            enumeration_pairs: DEFAULT_ENUMERATION_PAIRS,
            dpll: DpllLimits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingCertificate {
    pub wins: bool,
    /// All checkers that ran returned the same answer.
    pub consensus: bool,
    /// Sibling pairing on a tree with every leaf at depth ≥ n − 1.
    pub structural: Option<bool>,
    pub enumeration: Option<bool>,
    pub selections_checked: u64,
    /// The selection formula is unsatisfiable.
    pub reduction: Option<bool>,
    pub formula_vars: usize,
    pub formula_clauses: usize,
    /// A Breaker selection that blocks every edge, when one was found.
    pub breaker_selection: Option<Vec<String>>,
    pub notes: Vec<String>,
}

/// A path board together with its tree, for the structural check.
#[derive(Clone, Copy)]
pub struct TreeContext<'a> {
    pub tree: &'a BinaryTree,
    pub n: usize,
}

pub fn verify_pairing_wins(
    board: &Hypergraph,
    strategy: &PairingStrategy,
    tree: Option<TreeContext<'_>>,
    limits: VerifyLimits,
) -> Result<PairingCertificate> {
    strategy.validate(board.num_vertices())?;
    let mut notes = Vec::new();

    let structural = match tree {
        Some(ctx) if ctx.tree.len() != board.num_vertices() => {
            notes.push("structural: tree does not match the board".into());
            None
        }
        Some(ctx) if same_strategy(strategy, &sibling_pairing(ctx.tree)) => {
            if ctx.tree.min_leaf_depth() + 1 >= ctx.n {
                Some(true)
            } else {
                notes.push("structural: some leaf is shallower than n - 1; no claim".into());
                None
            }
        }
        Some(_) => {
            notes.push("structural: strategy is not the sibling pairing".into());
            None
        }
        None => {
            notes.push("structural: not a tree board".into());
            None
        }
    };

    let pf = pairing_formula(board, strategy)?;
    let mut breaker_selection: Option<Vec<VertexId>> = None;

    let (enumeration, selections_checked) = if pf.pairs.len() <= limits.enumeration_pairs.min(31) {
        let (wins, checked, witness) = enumerate_selections(board, strategy, &pf.pairs);
        if let Some(w) = witness {
            breaker_selection.get_or_insert(w);
        }
        (Some(wins), checked)
    } else {
        notes.push(format!(
            "enumeration: {} pairs exceed the limit of {}",
            pf.pairs.len(),
            limits.enumeration_pairs
        ));
        (None, 0)
    };

    let reduction = match dpll_sat_with(&pf.formula, limits.dpll) {
        Ok(SatResult::Unsat) => Some(true),
        Ok(SatResult::Sat(model)) => {
            let sel = pf.breaker_selection(&model, strategy.pairing.leftover);
            breaker_selection = Some(sel);
            Some(false)
        }
        Err(Error::LimitExceeded { what, needed, limit }) => {
            notes.push(format!("reduction: {what} {needed} exceed the limit of {limit}"));
            None
        }
        Err(e) => return Err(e),
    };

    let answers: Vec<bool> = [structural, enumeration, reduction].into_iter().flatten().collect();
    let Some(&first) = answers.first() else {
        return Err(Error::LimitExceeded {
            what: "pairing verification".into(),
            needed: format!("{} pairs", pf.pairs.len()),
            limit: "no checker applicable".into(),
        });
    };
    let consensus = answers.iter().all(|&a| a == first);
    if !consensus {
        notes.push(format!(
            "checkers disagree: structural {structural:?}, enumeration {enumeration:?}, reduction {reduction:?}"
        ));
    }
    Ok(PairingCertificate {
        wins: consensus && first,
        consensus,
        structural,
        enumeration,
        selections_checked,
        reduction,
        formula_vars: pf.formula.num_vars(),
        formula_clauses: pf.formula.num_clauses(),
        breaker_selection: breaker_selection.map(|s| s.iter().map(|&v| board.name(v).to_string()).collect()),
        notes,
    })
}

fn same_strategy(a: &PairingStrategy, b: &PairingStrategy) -> bool {
    let norm = |s: &PairingStrategy| {
        let mut p: Vec<(VertexId, VertexId)> =
            s.pairing.pairs.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect();
        p.sort_unstable();
        (s.first_move, s.pairing.leftover, p)
    };
    norm(a) == norm(b)
}

/// Every selection, as a bitmask over `pairs` (bit set: Breaker takes `.0`).
/// Returns whether Maker always completes an edge, the number of selections
/// tried and a blocking selection if found.
fn enumerate_selections(
    board: &Hypergraph,
    strategy: &PairingStrategy,
    pairs: &[(VertexId, VertexId)],
) -> (bool, u64, Option<Vec<VertexId>>) {
    let nv = board.num_vertices();
    // role[v] = (pair index, taken-by-Breaker-when-bit-is) for paired vertices.
    let mut role: Vec<Option<(usize, bool)>> = vec![None; nv];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        role[a] = Some((i, true));
        role[b] = Some((i, false));
    }
    // Maker completes edge e under `sel` iff (sel & mask) == want.
    let mut conditions: Vec<(u32, u32)> = Vec::new();
    'edges: for e in board.edges() {
        let (mut mask, mut want) = (0u32, 0u32);
        for &v in &e {
            if Some(v) == strategy.pairing.leftover {
                continue 'edges;
            }
            if let Some((i, breaker_on_set)) = role[v] {
                let bit = 1u32 << i;
                // Maker owns v when Breaker takes the partner.
                let need_set = !breaker_on_set;
                if mask & bit != 0 && ((want & bit != 0) != need_set) {
                    continue 'edges;
                }
                mask |= bit;
                if need_set {
                    want |= bit;
                }
            }
        }
        conditions.push((mask, want));
    }
    conditions.sort_unstable();
    conditions.dedup();
    let total = 1u64 << pairs.len();
    for sel in 0..total {
        let sel = sel as u32;
        if !conditions.iter().any(|&(mask, want)| sel & mask == want) {
            let mut chosen: Vec<VertexId> = pairs
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| if sel >> i & 1 == 1 { a } else { b })
                .collect();
            chosen.extend(strategy.pairing.leftover);
            chosen.sort_unstable();
            return (false, sel as u64 + 1, Some(chosen));
        }
    }
    (true, total, None)
}
