use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};

use super::state::{board_digest, GameState, Player};
use super::strategies::Strategy;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub player: Player,
    pub vertex: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forfeit {
    pub player: Player,
    pub reason: String,
}

/// The transcript of one game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub board_digest: String,
    pub maker: String,
    pub breaker: String,
    pub starter: Player,
    pub moves: Vec<Move>,
    pub winner: Player,
    /// Vertex names of the edge Maker completed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winning_edge: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forfeit: Option<Forfeit>,
}

/// Plays to the end: until Maker owns an edge or no vertex is left. Maker
/// starts unless its strategy is a pure pairing. A strategy that returns
/// no vertex or an illegal one forfeits.
pub fn play(board: &Hypergraph, maker: &mut dyn Strategy, breaker: &mut dyn Strategy) -> GameRecord {
    let starter = if maker.moves_first() { Player::Maker } else { Player::Breaker };
    let mut state = GameState::new(board, starter);
    let mut forfeit = None;
    while !state.is_over() {
        let p = state.to_move();
        let s: &mut dyn Strategy = match p {
            Player::Maker => maker,
            Player::Breaker => breaker,
        };
        let reason = match s.choose(&state) {
            None => Some("returned no vertex while some were unclaimed".to_string()),
            Some(v) => state.claim(v).err().map(|e| e.to_string()),
        };
        if let Some(reason) = reason {
            forfeit = Some(Forfeit { player: p, reason });
            break;
        }
    }
    let winner = match (&forfeit, state.completed_edge()) {
        (Some(f), _) => f.player.other(),
        (None, Some(_)) => Player::Maker,
        (None, None) => Player::Breaker,
    };
    GameRecord {
        board_digest: board_digest(board),
        maker: maker.name(),
        breaker: breaker.name(),
        starter,
        moves: names_of(board, state.history()),
        winner,
        winning_edge: state
            .completed_edge()
            .map(|e| board.edge(e).map(|v| board.name(v).to_string()).collect()),
        forfeit,
    }
}

fn names_of(board: &Hypergraph, history: &[(Player, VertexId)]) -> Vec<Move> {
    history
        .iter()
        .map(|&(player, v)| Move {
            player,
            vertex: board.name(v).to_string(),
        })
        .collect()
}

/// Replays a transcript on the board, checking the digest, alternation,
/// legality and the recorded winner.
pub fn replay(board: &Hypergraph, record: &GameRecord) -> Result<Player> {
    if record.board_digest != board_digest(board) {
        return Err(Error::IllegalMove("transcript belongs to a different board".into()));
    }
    let index = board.name_index();
    let mut state = GameState::new(board, record.starter);
    for (i, m) in record.moves.iter().enumerate() {
        if m.player != state.to_move() {
            return Err(Error::IllegalMove(format!("move {i}: {} moved out of turn", m.player)));
        }
        let v = *index
            .get(m.vertex.as_str())
            .ok_or_else(|| Error::IllegalMove(format!("move {i}: unknown vertex `{}`", m.vertex)))?;
        state
            .claim(v)
            .map_err(|e| Error::IllegalMove(format!("move {i}: {e}")))?;
    }
    let winner = match (&record.forfeit, state.completed_edge()) {
        (Some(f), _) => f.player.other(),
        (None, Some(_)) => Player::Maker,
        (None, None) if state.is_over() => Player::Breaker,
        (None, None) => return Err(Error::IllegalMove("transcript ends before the game does".into())),
    };
    if winner != record.winner {
        return Err(Error::IllegalMove(format!(
            "recorded winner {} but replay gives {winner}",
            record.winner
        )));
    }
    Ok(winner)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdversaryReport {
    /// The fixed strategy won every game.
    pub always_wins: bool,
    pub games: u64,
    /// Moves of a game the fixed strategy lost (or forfeited).
    pub counterexample: Option<Vec<Move>>,
}

/// Plays `fixed` (for `fixed_player`) against every possible sequence of
/// opponent moves.
pub fn exhaustive_adversary(
    board: &Hypergraph,
    fixed: &dyn Strategy,
    fixed_player: Player,
    starter: Player,
) -> AdversaryReport {
    let mut report = AdversaryReport {
        always_wins: true,
        games: 0,
        counterexample: None,
    };
    let state = GameState::new(board, starter);
    walk(board, state, fixed.boxed_clone(), fixed_player, &mut report);
    report
}

fn walk(
    board: &Hypergraph,
    mut state: GameState<'_>,
    mut fixed: Box<dyn Strategy>,
    me: Player,
    report: &mut AdversaryReport,
) {
    if !report.always_wins {
        return;
    }
    // Let the fixed strategy move until it is the opponent's turn.
    while !state.is_over() && state.to_move() == me {
        let ok = match fixed.choose(&state) {
            Some(v) => state.claim(v).is_ok(),
            None => false,
        };
        if !ok {
            report.games += 1;
            report.always_wins = false;
            report.counterexample = Some(names_of(board, state.history()));
            return;
        }
    }
    if state.is_over() {
        report.games += 1;
        let winner = if state.completed_edge().is_some() { Player::Maker } else { Player::Breaker };
        if winner != me {
            report.always_wins = false;
            report.counterexample = Some(names_of(board, state.history()));
        }
        return;
    }
    let options: Vec<VertexId> = state.unclaimed().collect();
    for v in options {
        let mut next = state.clone();
        next.claim(v).expect("unclaimed vertex");
        walk(board, next, fixed.boxed_clone(), me, report);
        if !report.always_wins {
            return;
        }
    }
}
