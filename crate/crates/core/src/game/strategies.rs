use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::hypergraph::{PairingStrategy, VertexId};
use crate::tree::{BinaryTree, NodeId};

use super::state::{GameState, Player};

/// A player's policy. `choose` is called only when it is this player's turn
/// and some vertex is unclaimed; a total strategy always returns one.
pub trait Strategy {
    fn name(&self) -> String;

    fn choose(&mut self, state: &GameState<'_>) -> Option<VertexId>;

    /// For Maker strategies: whether Maker opens the game. Pure pairing
    /// strategies let Breaker start.
    fn moves_first(&self) -> bool {
        true
    }

    fn boxed_clone(&self) -> Box<dyn Strategy>;
}

fn lowest_unclaimed(state: &GameState<'_>) -> Option<VertexId> {
    state.unclaimed().next()
}

/// Root first, then the child of Maker's last node whose subtree holds no
/// Breaker vertex. Vertex ids are tree node ids, as in the path board.
#[derive(Clone, Debug)]
pub struct TreeDescent {
    tree: BinaryTree,
    current: Option<NodeId>,
}

pub fn tree_descent_strategy(t: &BinaryTree, n: usize) -> Result<TreeDescent> {
    if n == 0 || t.min_leaf_depth() + 1 < n {
        return Err(Error::Precondition(format!(
            "tree descent needs every leaf at depth ≥ n - 1 = {}, minimum is {}",
            n.saturating_sub(1),
            t.min_leaf_depth()
        )));
    }
    Ok(TreeDescent {
        tree: t.clone(),
        current: None,
    })
}

impl TreeDescent {
    fn subtree_is_free(&self, state: &GameState<'_>, c: NodeId) -> bool {
        state.is_unclaimed(c)
            && state
                .vertices_of(Player::Breaker)
                .all(|b| b != c && !self.tree.is_ancestor(c, b))
    }
}

impl Strategy for TreeDescent {
    fn name(&self) -> String {
        "tree-descent".into()
    }

    fn choose(&mut self, state: &GameState<'_>) -> Option<VertexId> {
        let pick = match self.current {
            None if state.is_unclaimed(self.tree.root()) => Some(self.tree.root()),
            Some(cur) => self
                .tree
                .children(cur)
                .and_then(|(l, r)| [l, r].into_iter().find(|&c| self.subtree_is_free(state, c))),
            None => None,
        };
        match pick {
            Some(v) => {
                self.current = Some(v);
                Some(v)
            }
            None => lowest_unclaimed(state),
        }
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Answers Breaker's move with its partner. Otherwise: the first move, then
/// the leftover vertex, then the lowest-id vertex of an untouched pair, then
/// the lowest unclaimed vertex.
#[derive(Clone, Debug)]
pub struct PairingMaker {
    strategy: PairingStrategy,
    partner: Vec<Option<VertexId>>,
}

pub fn pairing_maker_strategy(p: &PairingStrategy, num_vertices: usize) -> Result<PairingMaker> {
    p.validate(num_vertices)?;
    Ok(PairingMaker {
        partner: p.pairing.partner_map(num_vertices),
        strategy: p.clone(),
    })
}

impl Strategy for PairingMaker {
    fn name(&self) -> String {
        if self.strategy.first_move.is_some() {
            "pairing".into()
        } else {
            "pure-pairing".into()
        }
    }

    fn choose(&mut self, state: &GameState<'_>) -> Option<VertexId> {
        if let Some(f) = self.strategy.first_move {
            if state.moves_of(Player::Maker) == 0 && state.is_unclaimed(f) {
                return Some(f);
            }
        }
        if let Some(b) = state.last_move_of(Player::Breaker) {
            if let Some(p) = self.partner[b] {
                if state.is_unclaimed(p) {
                    return Some(p);
                }
            }
        }
        if let Some(l) = self.strategy.pairing.leftover {
            if state.is_unclaimed(l) {
                return Some(l);
            }
        }
        state
            .unclaimed()
            .find(|&v| self.partner[v].is_some_and(|p| state.is_unclaimed(p)))
            .or_else(|| lowest_unclaimed(state))
    }

    fn moves_first(&self) -> bool {
        self.strategy.first_move.is_some()
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Uniformly random unclaimed vertex from a seeded generator.
#[derive(Clone, Debug)]
pub struct RandomStrategy {
    rng: ChaCha8Rng,
    seed: u64,
}

pub fn random_strategy(seed: u64) -> RandomStrategy {
    RandomStrategy {
        rng: ChaCha8Rng::seed_from_u64(seed),
        seed,
    }
}

impl Strategy for RandomStrategy {
    fn name(&self) -> String {
        format!("random(seed={})", self.seed)
    }

    fn choose(&mut self, state: &GameState<'_>) -> Option<VertexId> {
        state.unclaimed().choose(&mut self.rng)
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Breaker claiming the vertex of largest danger
/// `Σ_{e ∋ v, e untouched by Breaker} 2^(−unclaimed(e))`; ties to the lowest id.
#[derive(Clone, Debug, Default)]
pub struct ErdosSelfridgeBreaker;

pub fn erdos_selfridge_breaker() -> ErdosSelfridgeBreaker {
    ErdosSelfridgeBreaker
}

impl ErdosSelfridgeBreaker {
    pub fn danger(state: &GameState<'_>, v: VertexId) -> Dyadic {
        let mut d = Dyadic::zero();
        for &e in &state.incidence()[v] {
            let e = e as usize;
            if state.is_alive(e) {
                d += &Dyadic::pow2(-(state.unclaimed_in_edge(e) as i64));
            }
        }
        d
    }
}

impl Strategy for ErdosSelfridgeBreaker {
    fn name(&self) -> String {
        "erdos-selfridge".into()
    }

    fn choose(&mut self, state: &GameState<'_>) -> Option<VertexId> {
        let mut best: Option<(VertexId, Dyadic)> = None;
        for v in state.unclaimed() {
            let d = Self::danger(state, v);
            if best.as_ref().is_none_or(|(_, b)| d > *b) {
                best = Some((v, d));
            }
        }
        best.map(|(v, _)| v)
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Claims the listed vertices in order while available, then the lowest
/// unclaimed vertex. Used to let Breaker play a fixed selection, such as a
/// satisfying assignment.
#[derive(Clone, Debug)]
pub struct ScriptedStrategy {
    script: Vec<VertexId>,
}

pub fn scripted_strategy(script: Vec<VertexId>) -> ScriptedStrategy {
    ScriptedStrategy { script }
}

impl Strategy for ScriptedStrategy {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn choose(&mut self, state: &GameState<'_>) -> Option<VertexId> {
        self.script
            .iter()
            .copied()
            .find(|&v| state.is_unclaimed(v))
            .or_else(|| lowest_unclaimed(state))
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
