//! Exact minimax over claimed-set positions with a transposition table.
//!
//! Positions are `(maker_mask, breaker_mask)` bitsets; whose turn it is
//! follows from the counts and the starter. Two sound reductions keep the
//! search small: a player never needs to claim a vertex outside every
//! Breaker-free edge (an extra vertex never hurts its owner), and a
//! one-vertex Maker threat is answered (or, if there are two, wins) at once.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

use super::state::Player;

pub const DEFAULT_SOLVER_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveOutcome {
    pub winner: Player,
    pub starter: Player,
    pub positions: usize,
}

pub fn solve_exhaustive(board: &Hypergraph) -> Result<SolveOutcome> {
    solve_exhaustive_with(board, Player::Maker, DEFAULT_SOLVER_LIMIT)
}

pub fn solve_exhaustive_with(board: &Hypergraph, starter: Player, limit: usize) -> Result<SolveOutcome> {
    let nv = board.num_vertices();
    if nv > limit.min(32) {
        return Err(Error::LimitExceeded {
            what: "solver vertices".into(),
            needed: nv.to_string(),
            limit: limit.min(32).to_string(),
        });
    }
    let edges: Vec<u32> = board.edges().map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
    let mut s = Solver {
        edges,
        full: if nv == 32 { u32::MAX } else { (1u32 << nv) - 1 },
        starter,
        memo: HashMap::new(),
    };
    let maker_wins = s.value(0, 0);
    Ok(SolveOutcome {
        winner: if maker_wins { Player::Maker } else { Player::Breaker },
        starter,
        positions: s.memo.len(),
    })
}

struct Solver {
    edges: Vec<u32>,
    full: u32,
    starter: Player,
    memo: HashMap<(u32, u32), bool>,
}

impl Solver {
    fn maker_to_move(&self, m: u32, b: u32) -> bool {
        let (cm, cb) = (m.count_ones(), b.count_ones());
        match self.starter {
            Player::Maker => cm == cb,
            Player::Breaker => cm < cb,
        }
    }

    /// Maker wins from this position with best play.
    fn value(&mut self, m: u32, b: u32) -> bool {
        if let Some(&v) = self.memo.get(&(m, b)) {
            return v;
        }
        let v = self.compute(m, b);
        self.memo.insert((m, b), v);
        v
    }

    fn compute(&mut self, m: u32, b: u32) -> bool {
        let free = self.full & !m & !b;
        let mut live = 0u32;
        let mut threats = 0u32;
        let mut multiple_threats = false;
        for &e in &self.edges {
            if e & b != 0 {
                continue;
            }
            let missing = e & !m;
            if missing == 0 {
                return true;
            }
            live |= missing;
            if missing.count_ones() == 1 {
                if threats != 0 && threats != missing {
                    multiple_threats = true;
                }
                threats |= missing;
            }
        }
        if live == 0 {
            return false;
        }
        debug_assert_eq!(live & !free, 0);
        if self.maker_to_move(m, b) {
            if threats != 0 {
                return true;
            }
            let mut moves = live;
            while moves != 0 {
                let v = moves & moves.wrapping_neg();
                moves ^= v;
                if self.value(m | v, b) {
                    return true;
                }
            }
            false
        } else {
            if multiple_threats {
                return true;
            }
            if threats != 0 {
                return self.value(m, b | threats);
            }
            let mut moves = live;
            while moves != 0 {
                let v = moves & moves.wrapping_neg();
                moves ^= v;
                if !self.value(m, b | v) {
                    return false;
                }
            }
            true
        }
    }
}
