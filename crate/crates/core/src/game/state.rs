use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Maker => "maker",
            Player::Breaker => "breaker",
        })
    }
}

/// A position: who owns what and who moves next. Maker wins as soon as he
/// owns every vertex of some edge.
#[derive(Clone, Debug)]
pub struct GameState<'a> {
    board: &'a Hypergraph,
    incidence: Vec<Vec<u32>>,
    owner: Vec<Option<Player>>,
    /// Per edge: Maker vertices, and whether Breaker touched it.
    maker_count: Vec<u32>,
    blocked: Vec<bool>,
    to_move: Player,
    history: Vec<(Player, VertexId)>,
    completed_edge: Option<usize>,
    unclaimed: usize,
}

impl<'a> GameState<'a> {
    pub fn new(board: &'a Hypergraph, starter: Player) -> Self {
        GameState {
            board,
            incidence: board.incidence(),
            owner: vec![None; board.num_vertices()],
            maker_count: vec![0; board.num_edges()],
            blocked: vec![false; board.num_edges()],
            to_move: starter,
            history: Vec::new(),
            completed_edge: None,
            unclaimed: board.num_vertices(),
        }
    }

    pub fn board(&self) -> &'a Hypergraph {
        self.board
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn owner(&self, v: VertexId) -> Option<Player> {
        self.owner[v]
    }

    pub fn is_unclaimed(&self, v: VertexId) -> bool {
        v < self.owner.len() && self.owner[v].is_none()
    }

    pub fn unclaimed(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.owner.len()).filter(|&v| self.owner[v].is_none())
    }

    pub fn num_unclaimed(&self) -> usize {
        self.unclaimed
    }

    pub fn vertices_of(&self, p: Player) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.owner.len()).filter(move |&v| self.owner[v] == Some(p))
    }

    pub fn history(&self) -> &[(Player, VertexId)] {
        &self.history
    }

    pub fn last_move_of(&self, p: Player) -> Option<VertexId> {
        self.history.iter().rev().find(|(q, _)| *q == p).map(|&(_, v)| v)
    }

    pub fn moves_of(&self, p: Player) -> usize {
        self.history.iter().filter(|(q, _)| *q == p).count()
    }

    pub fn incidence(&self) -> &[Vec<u32>] {
        &self.incidence
    }

    /// Edge not yet touched by Breaker.
    pub fn is_alive(&self, e: usize) -> bool {
        !self.blocked[e]
    }

    pub fn unclaimed_in_edge(&self, e: usize) -> usize {
        self.board.edge_len(e) - self.maker_count[e] as usize
    }

    /// An edge fully owned by Maker, if any.
    pub fn completed_edge(&self) -> Option<usize> {
        self.completed_edge
    }

    /// Maker has won, or no vertex is left.
    pub fn is_over(&self) -> bool {
        self.completed_edge.is_some() || self.unclaimed == 0
    }

    /// Claims `v` for the player to move.
    pub fn claim(&mut self, v: VertexId) -> Result<()> {
        if v >= self.owner.len() {
            return Err(Error::IllegalMove(format!("vertex #{v} is not on the board")));
        }
        if let Some(p) = self.owner[v] {
            return Err(Error::IllegalMove(format!(
                "vertex `{}` already claimed by {p}",
                self.board.name(v)
            )));
        }
        if self.is_over() {
            return Err(Error::IllegalMove("game is over".into()));
        }
        let p = self.to_move;
        self.owner[v] = Some(p);
        self.unclaimed -= 1;
        for &e in &self.incidence[v] {
            let e = e as usize;
            match p {
                Player::Maker => {
                    self.maker_count[e] += 1;
                    if self.maker_count[e] as usize == self.board.edge_len(e) && self.completed_edge.is_none() {
                        self.completed_edge = Some(e);
                    }
                }
                Player::Breaker => self.blocked[e] = true,
            }
        }
        self.history.push((p, v));
        self.to_move = p.other();
        Ok(())
    }
}

/// SHA-256 over the vertex names and the edges, one per line.
pub fn board_digest(h: &Hypergraph) -> String {
    let mut hasher = Sha256::new();
    for name in h.names() {
        hasher.update(name.as_bytes());
        hasher.update(b"\n");
    }
    hasher.update(b"--\n");
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        hasher.update(line.join(" ").as_bytes());
        hasher.update(b"\n");
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
