//! Browser bindings: build a small tree family, play a game on its board,
//! and run DPLL plus the MU(1) check on DIMACS text. Every function returns
//! a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use egw_core::constructions::{neighborhood_counterexample, regular_weak, ConstructionParams};
use egw_core::game::{
    erdos_selfridge_breaker, pairing_maker_strategy, play, random_strategy, solve_exhaustive_with, verify_pairing_wins,
    Player, Strategy, TreeContext, VerifyLimits,
};
use egw_core::sat::{clause_neighborhood_stats, dpll_sat, mu1_check, occurrence_and_balance_stats, parse_dimacs, SatResult};
use egw_core::tree::{hyperedges_of_tree, horizon_degrees, sibling_pairing, BinaryTree};

/// Largest tree the page will draw.
pub const MAX_DEMO_NODES: usize = 4096;

fn family_tree(family: &str, n: usize) -> Result<BinaryTree, String> {
    let t = match family {
        "neighborhood" => neighborhood_counterexample(n),
        "regular-weak" => regular_weak(n),
        "complete-game" if n >= 1 => Ok(BinaryTree::full(n - 1)),
        "complete-game" => return Err("n must be at least 1".into()),
        other => return Err(format!("unknown family `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    if t.len() > MAX_DEMO_NODES {
        return Err(format!("{} nodes is too many to draw (limit {MAX_DEMO_NODES})", t.len()));
    }
    Ok(t)
}

/// Nodes with parent links, depth and horizon degree, plus the board report.
pub fn construct_json(family: &str, n: usize) -> Result<String, String> {
    let t = family_tree(family, n)?;
    let th = hyperedges_of_tree(&t, n).map_err(|e| e.to_string())?;
    let h = &th.hypergraph;
    let deg = horizon_degrees(&t, n);
    let nodes: Vec<Value> = (0..t.len())
        .map(|v| {
            json!({
                "id": t.path_id(v),
                "parent": t.parent(v),
                "depth": t.depth(v),
                "leaf": t.is_leaf(v),
                "degree": deg[v],
            })
        })
        .collect();
    let cert = verify_pairing_wins(h, &sibling_pairing(&t), Some(TreeContext { tree: &t, n }), VerifyLimits::default())
        .ok()
        .map(|c| json!({ "wins": c.wins, "consensus": c.consensus, "structural": c.structural, "enumeration": c.enumeration, "reduction": c.reduction }));
    let mut report = json!({
        "family": family,
        "n": n,
        "nodes": t.len(),
        "edges": h.num_edges(),
        "leaf_depth_ok": th.in_class,
        "max_degree": h.max_degree(),
        "max_neighborhood": h.neighborhood_stats().max,
        "pairing": cert,
    });
    if family == "neighborhood" {
        report["expected_max_neighborhood"] = json!(format!("2^{{n-2}}+2^{{n-3}} = {}", (1u64 << (n - 2)) + (1u64 << (n - 3))));
    }
    if family == "regular-weak" {
        if let Some(s) = ConstructionParams::regular_weak(n).ok().and_then(|p| p.s()) {
            report["s"] = json!(s);
            report["max_degree_bound"] = json!(format!("2^{{n+2}}/n = {}", (1u64 << (n + 2)) as f64 / n as f64));
        }
    }
    if family == "complete-game" {
        report["edges_expected"] = json!(format!("2^{{n-1}} = {}", 1u64 << (n - 1)));
    }
    Ok(json!({ "nodes": nodes, "report": report }).to_string())
}

/// One game on the family's path board: Maker follows the sibling pairing,
/// Breaker is random (seeded) or the Erdős–Selfridge potential player.
pub fn play_json(family: &str, n: usize, breaker: &str, seed: u64) -> Result<String, String> {
    let t = family_tree(family, n)?;
    let h = hyperedges_of_tree(&t, n).map_err(|e| e.to_string())?.hypergraph;
    let mut maker = pairing_maker_strategy(&sibling_pairing(&t), h.num_vertices()).map_err(|e| e.to_string())?;
    let mut br: Box<dyn Strategy> = match breaker {
        "random" => Box::new(random_strategy(seed)),
        "erdos-selfridge" => Box::new(erdos_selfridge_breaker()),
        other => return Err(format!("unknown breaker `{other}`")),
    };
    let rec = play(&h, &mut maker, br.as_mut());
    let solved = solve_exhaustive_with(&h, Player::Maker, 24).ok().map(|o| o.winner);
    Ok(json!({ "record": rec, "exact_winner": solved }).to_string())
}

/// DPLL result, occurrence and neighborhood statistics and the MU(1) verdict.
pub fn sat_json(dimacs: &str) -> Result<String, String> {
    let f = parse_dimacs(dimacs).map_err(|e| e.to_string())?;
    let res = dpll_sat(&f).map_err(|e| e.to_string())?;
    let occ = occurrence_and_balance_stats(&f);
    let nb = clause_neighborhood_stats(&f);
    let mu1 = (!res.is_sat() && f.num_clauses() <= 512).then(|| mu1_check(&f));
    let model = match &res {
        SatResult::Sat(m) => Some(
            m.iter()
                .enumerate()
                .map(|(i, &b)| if b { i as i64 + 1 } else { -(i as i64 + 1) })
                .collect::<Vec<_>>(),
        ),
        SatResult::Unsat => None,
    };
    Ok(json!({
        "result": if res.is_sat() { "SAT" } else { "UNSAT" },
        "model": model,
        "vars": f.num_vars(),
        "clauses": f.num_clauses(),
        "deficiency": f.deficiency(),
        "width": f.width(),
        "max_var_occurrences": occ.max_var_occurrences,
        "max_literal_occurrences": occ.max_literal_occurrences,
        "max_sharing_neighborhood": nb.max_sharing,
        "mu1": mu1.map(|r| json!({ "is_mu1": r.is_mu1, "splits": r.trace.as_ref().map(|t| t.splits()), "minimal_unsat": r.minimal_unsat })),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn construct(family: &str, n: usize) -> Result<String, JsError> {
    construct_json(family, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn play_game(family: &str, n: usize, breaker: &str, seed: u64) -> Result<String, JsError> {
    play_json(family, n, breaker, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sat(dimacs: &str) -> Result<String, JsError> {
    sat_json(dimacs).map_err(|e| JsError::new(&e))
}
