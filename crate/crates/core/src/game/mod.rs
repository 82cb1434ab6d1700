//! Maker/Breaker games: positions, strategies, transcripts, an exact
//! solver for small boards and the pairing-strategy verifier.

mod play;
mod solver;
mod state;
mod strategies;
mod verify;

pub use play::{exhaustive_adversary, play, replay, AdversaryReport, Forfeit, GameRecord, Move};
pub use solver::{solve_exhaustive, solve_exhaustive_with, SolveOutcome, DEFAULT_SOLVER_LIMIT};
pub use state::{board_digest, GameState, Player};
pub use strategies::{
    erdos_selfridge_breaker, pairing_maker_strategy, random_strategy, scripted_strategy, tree_descent_strategy,
    ErdosSelfridgeBreaker, PairingMaker, RandomStrategy, ScriptedStrategy, Strategy, TreeDescent,
};
pub use verify::{verify_pairing_wins, PairingCertificate, TreeContext, VerifyLimits, DEFAULT_ENUMERATION_PAIRS};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_tree_game, neighborhood_counterexample};
    use crate::hypergraph::{Hypergraph, Pairing, PairingStrategy};
    use crate::tree::{hyperedges_of_tree, sibling_pairing, BinaryTree};

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_vertex_edge() {
        let h = Hypergraph::new(names(&["a"]), vec![vec![0]]).unwrap();
        let rec = play(&h, &mut random_strategy(1), &mut random_strategy(2));
        assert_eq!(rec.winner, Player::Maker);
        assert_eq!(rec.moves.len(), 1);
        assert_eq!(replay(&h, &rec).unwrap(), Player::Maker);
    }

    #[test]
    fn tree_descent_wins() {
        let t = BinaryTree::full(1);
        let h = complete_tree_game(2).unwrap();
        let rec = play(&h, &mut tree_descent_strategy(&t, 2).unwrap(), &mut random_strategy(0));
        assert_eq!(rec.winner, Player::Maker);
        assert_eq!(rec.moves.iter().filter(|m| m.player == Player::Maker).count(), 2);
        let t3 = BinaryTree::full(3);
        let h4 = complete_tree_game(4).unwrap();
        for seed in 0..50 {
            let rec = play(&h4, &mut tree_descent_strategy(&t3, 4).unwrap(), &mut random_strategy(seed));
            assert_eq!(rec.winner, Player::Maker);
            replay(&h4, &rec).unwrap();
        }
        let adv = exhaustive_adversary(
            &complete_tree_game(3).unwrap(),
            &tree_descent_strategy(&BinaryTree::full(2), 3).unwrap(),
            Player::Maker,
            Player::Maker,
        );
        assert!(adv.always_wins, "{adv:?}");
        assert!(tree_descent_strategy(&BinaryTree::full(1), 3).is_err());
    }

    #[test]
    fn sibling_pairing_vs_all_breakers() {
        let t = BinaryTree::full(2);
        let h = hyperedges_of_tree(&t, 3).unwrap().hypergraph;
        let m = pairing_maker_strategy(&sibling_pairing(&t), h.num_vertices()).unwrap();
        let adv = exhaustive_adversary(&h, &m, Player::Maker, Player::Maker);
        assert!(adv.always_wins);
        let t = neighborhood_counterexample(3).unwrap();
        let h = hyperedges_of_tree(&t, 3).unwrap().hypergraph;
        let m = pairing_maker_strategy(&sibling_pairing(&t), h.num_vertices()).unwrap();
        assert!(exhaustive_adversary(&h, &m, Player::Maker, Player::Maker).always_wins);
    }

    #[test]
    fn erdos_selfridge_blocks_single_pair() {
        let h = Hypergraph::new(names(&["a", "b"]), vec![vec![0, 1]]).unwrap();
        let rec = play(&h, &mut scripted_strategy(vec![0]), &mut erdos_selfridge_breaker());
        assert_eq!(rec.winner, Player::Breaker);
        assert_eq!(rec.moves[1].vertex, "b");
    }

    #[test]
    fn forfeit_on_illegal_move() {
        let h = Hypergraph::new(names(&["a", "b", "c"]), vec![vec![0, 1, 2]]).unwrap();
        // Breaker insists on `a` after Maker took it.
        struct Stubborn;
        impl Strategy for Stubborn {
            fn name(&self) -> String {
                "stubborn".into()
            }
            fn choose(&mut self, _: &GameState<'_>) -> Option<usize> {
                Some(0)
            }
            fn boxed_clone(&self) -> Box<dyn Strategy> {
                Box::new(Stubborn)
            }
        }
        let rec = play(&h, &mut scripted_strategy(vec![0]), &mut Stubborn);
        let f = rec.forfeit.as_ref().unwrap();
        assert_eq!(f.player, Player::Breaker);
        assert!(f.reason.contains("already claimed"));
        assert_eq!(rec.winner, Player::Maker);
        replay(&h, &rec).unwrap();
    }

    #[test]
    fn solver_ground_truth() {
        for n in 1..=4 {
            let h = complete_tree_game(n).unwrap();
            assert_eq!(solve_exhaustive(&h).unwrap().winner, Player::Maker, "n = {n}");
        }
        // Complete game at n = 2 minus one edge: a single 2-edge.
        let h = Hypergraph::new(names(&["", "L", "R"]), vec![vec![0, 1]]).unwrap();
        assert_eq!(solve_exhaustive(&h).unwrap().winner, Player::Breaker);
        let t = neighborhood_counterexample(3).unwrap();
        let h = hyperedges_of_tree(&t, 3).unwrap().hypergraph;
        assert_eq!(solve_exhaustive(&h).unwrap().winner, Player::Maker);
        let big = complete_tree_game(5).unwrap();
        assert!(solve_exhaustive(&big).is_err());
    }

    #[test]
    fn certificate_for_tree_boards() {
        let t = neighborhood_counterexample(3).unwrap();
        let h = hyperedges_of_tree(&t, 3).unwrap().hypergraph;
        let c = verify_pairing_wins(
            &h,
            &sibling_pairing(&t),
            Some(TreeContext { tree: &t, n: 3 }),
            VerifyLimits::default(),
        )
        .unwrap();
        assert_eq!((c.structural, c.enumeration, c.reduction), (Some(true), Some(true), Some(true)));
        assert!(c.wins && c.consensus);
    }

    #[test]
    fn losing_pairing_gives_selection() {
        // Two disjoint 2-edges with cross pairs: Breaker takes a and b'.
        let h = Hypergraph::new(names(&["a", "b", "a'", "b'"]), vec![vec![0, 1], vec![2, 3]]).unwrap();
        let p = PairingStrategy::pure(Pairing::new(vec![(0, 2), (1, 3)], None));
        let c = verify_pairing_wins(&h, &p, None, VerifyLimits::default()).unwrap();
        assert!(!c.wins && c.consensus);
        let sel = c.breaker_selection.unwrap();
        let idx: Vec<usize> = sel.iter().map(|s| h.index_of(s).unwrap()).collect();
        let rec = play(
            &h,
            &mut pairing_maker_strategy(&p, 4).unwrap(),
            &mut scripted_strategy(idx),
        );
        assert_eq!(rec.starter, Player::Breaker);
        assert_eq!(rec.winner, Player::Breaker);
    }

    #[test]
    fn leftover_keeps_strategy_total() {
        let h = Hypergraph::new(names(&["a", "b", "c"]), vec![vec![0, 1]]).unwrap();
        let p = PairingStrategy::pure(Pairing::new(vec![(0, 1)], Some(2)));
        for seed in 0..20 {
            let rec = play(&h, &mut pairing_maker_strategy(&p, 3).unwrap(), &mut random_strategy(seed));
            assert!(rec.forfeit.is_none());
        }
    }
}
