use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use egw_core::coloring::{check_coloring, find_proper_2coloring, lll_halving_predicate, ColoringLimits};
use egw_core::constructions::{
    check_plan_symbolic, complete_tree_game, execute_plan_checked, neighborhood_counterexample, plan_and_check,
    regular_weak, sweep, toy_merge_plan, toy_plan, BuildPlan, ConstructionParams, Scale,
};
use egw_core::game::{
    erdos_selfridge_breaker, pairing_maker_strategy, play, random_strategy, replay, solve_exhaustive_with,
    tree_descent_strategy, verify_pairing_wins, Player, Strategy, TreeContext,
};
use egw_core::hypergraph::{Hypergraph, PairingStrategy};
use egw_core::sat::{
    bound_table, bound_table_with_witness, clause_neighborhood_stats, cnf_to_hypergraph, double_for_pure_pairing,
    dpll_sat_with, hypergraph_to_cnf, mu1_check, occurrence_and_balance_stats, write_dimacs, CnfFormula, SatResult,
};
use egw_core::tree::{hyperedges_of_tree, sibling_pairing, verify_tree, BinaryTree};
use egw_core::Error;

use crate::input::{load, load_board, load_cnf, BoardInput, Input};
use crate::limits::Limits;
use crate::{BreakerArg, Command, Common, FamilyArg, Format, MakerArg};

/// Runs one subcommand; `Ok(true)` when the checked property holds.
pub fn run(cmd: &Command, common: &Common, limits: &Limits) -> Result<bool> {
    match cmd {
        Command::Construct {
            family_pos,
            family,
            n,
            c,
            symbolic,
        } => {
            let family = match (family_pos, family) {
                (Some(a), Some(b)) if a != b => bail!("conflicting families {a:?} and {b:?}"),
                (Some(f), _) | (None, Some(f)) => *f,
                (None, None) => bail!("construct needs a family (positional or --family)"),
            };
            construct(common, limits, family, *n, c, *symbolic)
        }
        Command::Verify { input, n, s } => verify(common, limits, input, *n, s.as_deref()),
        Command::Solve { input, n, breaker_first } => solve(common, limits, input, *n, *breaker_first),
        Command::ToCnf {
            input,
            n,
            double,
            allow_tautologies,
        } => to_cnf(common, input, *n, *double, *allow_tautologies),
        Command::FromCnf { input } => from_cnf(common, input),
        Command::Sat { input } => sat(common, limits, input),
        Command::Mu1 { input } => mu1(common, input),
        Command::Color {
            input,
            n,
            halving,
            no_pairing,
        } => color(common, limits, input, *n, *halving, *no_pairing),
        Command::Stats { input, n, k, s } => stats(common, input, *n, *k, s.as_deref()),
        Command::Plan { n, c, sweep, toy } => plan(common, limits, *n, c, *sweep, *toy),
        Command::Bounds { k, witness } => bounds(common, limits, *k, witness.as_deref()),
        Command::Play {
            input,
            n,
            maker,
            breaker,
        } => play_game(common, input, *n, *maker, *breaker),
    }
}

/// With `--out` the artifact goes to the file and the report to stdout;
/// otherwise the artifact goes to stdout and the report to stderr.
fn emit(common: &Common, artifact: Option<String>, report: &Value) -> Result<()> {
    let mut report = serde_json::to_string_pretty(report)?;
    report.push('\n');
    match (&common.out, artifact) {
        (Some(path), Some(a)) => {
            fs::write(path, a).with_context(|| format!("writing {}", path.display()))?;
            write_out(&mut std::io::stdout(), &report)
        }
        (None, Some(mut a)) => {
            if !a.ends_with('\n') {
                a.push('\n');
            }
            write_out(&mut std::io::stdout(), &a)?;
            write_out(&mut std::io::stderr(), &report)
        }
        (_, None) => write_out(&mut std::io::stdout(), &report),
    }
}

/// A closed pipe (`egw ... | head`) is not an error.
fn write_out(w: &mut dyn Write, text: &str) -> Result<()> {
    match w.write_all(text.as_bytes()).and_then(|_| w.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn to_json_line<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// `2^k` as an exact decimal when it fits.
fn pow2(k: usize) -> String {
    1u128.checked_shl(k as u32).map_or_else(|| format!("2^{k}"), |v| v.to_string())
}

fn parse_s(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Some(k) = s.strip_prefix("2^") {
        let k: u32 = k.parse().with_context(|| format!("bad exponent in --s {s}"))?;
        return 1u64.checked_shl(k).filter(|_| k < 64).ok_or_else(|| anyhow!("--s {s} exceeds 64 bits"));
    }
    let v: u64 = s.parse().with_context(|| format!("bad --s {s}"))?;
    if v == 0 {
        bail!("--s must be positive");
    }
    Ok(v)
}

fn tree_artifact(format: Option<Format>, t: &BinaryTree, n: usize) -> Result<String> {
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => t.to_json() + "\n",
        Format::Board => {
            let board = hyperedges_of_tree(t, n)?.hypergraph;
            to_json_line(&board.to_json(Some(n), Some(&sibling_pairing(t))))?
        }
        Format::Dot => t.to_dot(),
        Format::Dimacs => {
            let board = hyperedges_of_tree(t, n)?.hypergraph;
            let (d, s) = double_for_pure_pairing(&board, &sibling_pairing(t))?;
            write_dimacs(&hypergraph_to_cnf(&d, &s, false)?)
        }
    })
}

/// Sibling-pairing certificate for a path board, or the reason none ran.
fn pairing_certificate(board: &Hypergraph, t: &BinaryTree, n: usize, limits: &Limits) -> Result<Value> {
    let ctx = TreeContext { tree: t, n };
    match verify_pairing_wins(board, &sibling_pairing(t), Some(ctx), limits.verify()) {
        Ok(c) => Ok(serde_json::to_value(c)?),
        Err(Error::LimitExceeded { what, needed, limit }) => {
            Ok(json!({ "skipped": format!("{what}: {needed} exceed {limit}") }))
        }
        Err(e) => Err(e.into()),
    }
}

fn construct(common: &Common, limits: &Limits, family: FamilyArg, n: usize, c: &str, symbolic: bool) -> Result<bool> {
    match family {
        FamilyArg::Neighborhood => {
            let t = neighborhood_counterexample(n)?;
            let th = hyperedges_of_tree(&t, n)?;
            let h = &th.hypergraph;
            let nb = h.neighborhood_stats();
            let expected = (1u128 << (n - 2)) + (1u128 << (n - 3));
            let cert = pairing_certificate(h, &t, n, limits)?;
            let wins = cert.get("wins").and_then(Value::as_bool).unwrap_or(th.in_class);
            let uniform = h.is_uniform(n);
            let holds = uniform && th.in_class && nb.max as u128 == expected && wins;
            let report = json!({
                "family": "neighborhood",
                "n": n,
                "nodes": t.len(),
                "edges": h.num_edges(),
                "uniform": uniform,
                "leaf_depth_ok": th.in_class,
                "max_degree": h.max_degree(),
                "max_neighborhood": nb.max,
                "expected_max_neighborhood": format!("2^{{n-2}}+2^{{n-3}} = {expected}"),
                "neighborhood_matches": nb.max as u128 == expected,
                "pairing": cert,
                "holds": holds,
            });
            emit(common, Some(tree_artifact(common.format, &t, n)?), &report)?;
            Ok(holds)
        }
        FamilyArg::RegularWeak => {
            let params = ConstructionParams::regular_weak(n)?;
            let s = params.s().ok_or_else(|| anyhow!("s = 2^{} exceeds 64 bits", params.log_s))?;
            let t = regular_weak(n)?;
            let rep = verify_tree(&t, n, s);
            let root_degree = egw_core::tree::horizon_degrees(&t, n)[t.root()];
            let bound = (1u128 << (n + 2)) / n as u128;
            let degree_ok = (rep.max_degree_within_horizon as u128) * (n as u128) <= 1u128 << (n + 2);
            let holds = rep.passes && root_degree == s / 2 && degree_ok;
            let report = json!({
                "family": "regular-weak",
                "n": n,
                "s": format!("2^{{n+1}}/2^{{floor(log n)}} = {s}"),
                "max_degree_bound": format!("2^{{n+2}}/n = {}", if (1u128 << (n + 2)) % n as u128 == 0 { bound.to_string() } else { format!("{}/{n}", 1u128 << (n + 2)) }),
                "max_degree": rep.max_degree_within_horizon,
                "max_degree_ok": degree_ok,
                "root_degree": root_degree,
                "expected_root_degree": format!("s/2 = {}", s / 2),
                "tree": rep,
                "holds": holds,
            });
            emit(common, Some(tree_artifact(common.format, &t, n)?), &report)?;
            Ok(holds)
        }
        FamilyArg::CompleteGame => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let t = BinaryTree::full(n - 1);
            let h = complete_tree_game(n)?;
            let solved = match solve_exhaustive_with(&h, Player::Maker, limits.solver_vertices) {
                Ok(o) => serde_json::to_value(o)?,
                Err(Error::LimitExceeded { what, needed, limit }) => {
                    json!({ "skipped": format!("{what}: {needed} exceed {limit}") })
                }
                Err(e) => return Err(e.into()),
            };
            let maker_wins = solved.get("winner").map_or(true, |w| w == "maker");
            let report = json!({
                "family": "complete-game",
                "n": n,
                "vertices": h.num_vertices(),
                "edges": h.num_edges(),
                "expected_edges": format!("2^{{n-1}} = {}", pow2(n - 1)),
                "max_degree": h.max_degree(),
                "solver": solved,
                "holds": maker_wins && h.num_edges() as u128 == 1u128 << (n - 1),
            });
            let holds = report["holds"].as_bool().unwrap_or(false);
            emit(common, Some(tree_artifact(common.format, &t, n)?), &report)?;
            Ok(holds)
        }
        FamilyArg::RegularStrong => {
            let scale = Scale::parse(c)?;
            let (plan, prep) = match plan_and_check(n, scale) {
                Ok(r) => r,
                Err(e @ (Error::GuardFailed { .. } | Error::OutOfRange(_))) => {
                    let report = json!({
                        "family": "regular-strong",
                        "n": n,
                        "c": scale.to_string(),
                        "certified": false,
                        "failing_guard": e.to_string(),
                    });
                    emit(common, None, &report)?;
                    return Ok(false);
                }
                Err(e) => return Err(e.into()),
            };
            if symbolic || !prep.ok {
                let artifact = if common.out.is_some() { Some(to_json_line(&plan)?) } else { None };
                let report = json!({
                    "family": "regular-strong",
                    "c": scale.to_string(),
                    "s": format!("2^{{n-1}}/(c·n) = 2^{}", prep.log_s),
                    "certified": prep.ok,
                    "plan_report": prep,
                });
                emit(common, artifact, &report)?;
                return Ok(report["certified"].as_bool().unwrap_or(false));
            }
            let (t, checks) = execute_plan_checked(&plan, limits.executor_nodes)?;
            let s = 1u64
                .checked_shl(plan.log_s)
                .filter(|_| plan.log_s < 64)
                .ok_or_else(|| anyhow!("s = 2^{} exceeds 64 bits", plan.log_s))?;
            let rep = verify_tree(&t, n, s);
            let seq_ok = checks.iter().all(|c| c.matches != Some(false));
            let holds = rep.passes && seq_ok;
            let report = json!({
                "family": "regular-strong",
                "c": scale.to_string(),
                "s": format!("2^{{n-1}}/(c·n) = {s}"),
                "tree": rep,
                "sequence_checks_ok": seq_ok,
                "holds": holds,
            });
            emit(common, Some(tree_artifact(common.format, &t, n)?), &report)?;
            Ok(holds)
        }
    }
}

fn verify(common: &Common, limits: &Limits, path: &Path, n: Option<usize>, s: Option<&str>) -> Result<bool> {
    match load(path)? {
        Input::Tree(t) => {
            let n = n.ok_or_else(|| anyhow!("verifying a tree needs --n"))?;
            let s = parse_s(s.ok_or_else(|| anyhow!("verifying a tree needs --s"))?)?;
            let rep = verify_tree(&t, n, s);
            let board = hyperedges_of_tree(&t, n)?.hypergraph;
            let cert = pairing_certificate(&board, &t, n, limits)?;
            let wins = cert.get("wins").and_then(Value::as_bool);
            let holds = rep.passes && wins != Some(false);
            let report = json!({ "tree": rep, "pairing": cert, "holds": holds });
            emit(common, None, &report)?;
            Ok(holds)
        }
        Input::Board { board, pairing, .. } => {
            let p = pairing.ok_or_else(|| anyhow!("{}: board has no pairing strategy", path.display()))?;
            let cert = verify_pairing_wins(&board, &p, None, limits.verify())?;
            let holds = cert.wins;
            emit(common, None, &json!({ "pairing": cert, "holds": holds }))?;
            Ok(holds)
        }
        Input::Cnf(_) => bail!("{}: verify expects a tree or board JSON file", path.display()),
    }
}

fn solve(common: &Common, limits: &Limits, path: &Path, n: Option<usize>, breaker_first: bool) -> Result<bool> {
    let b = load_board(path, n)?;
    let starter = if breaker_first { Player::Breaker } else { Player::Maker };
    let out = solve_exhaustive_with(&b.board, starter, limits.solver_vertices)?;
    let holds = out.winner == Player::Maker;
    let report = json!({
        "vertices": b.board.num_vertices(),
        "edges": b.board.num_edges(),
        "outcome": out,
        "maker_wins": holds,
    });
    emit(common, None, &report)?;
    Ok(holds)
}

fn board_strategy(b: &BoardInput, path: &Path) -> Result<PairingStrategy> {
    b.pairing
        .clone()
        .ok_or_else(|| anyhow!("{}: board has no pairing strategy", path.display()))
}

fn to_cnf(common: &Common, path: &Path, n: Option<usize>, double: bool, allow_tautologies: bool) -> Result<bool> {
    let b = load_board(path, n)?;
    let s = board_strategy(&b, path)?;
    let (board, strategy) = if double {
        double_for_pure_pairing(&b.board, &s)?
    } else {
        (b.board.clone(), s)
    };
    let f = hypergraph_to_cnf(&board, &strategy, allow_tautologies)?;
    let occ = occurrence_and_balance_stats(&f);
    let delta = board.max_degree();
    let report = json!({
        "doubled": double,
        "board_vertices": board.num_vertices(),
        "board_max_degree": delta,
        "vars": f.num_vars(),
        "clauses": f.num_clauses(),
        "width": f.width(),
        "deficiency": f.deficiency(),
        "max_literal_occurrences": occ.max_literal_occurrences,
        "max_var_occurrences": occ.max_var_occurrences,
        "balance": format!("max literal occurrences {} ≤ Δ = {delta}", occ.max_literal_occurrences),
        "balanced": occ.max_literal_occurrences <= delta,
    });
    let artifact = match common.format.unwrap_or(Format::Dimacs) {
        Format::Dimacs => write_dimacs(&f),
        Format::Board | Format::Json => to_json_line(&board.to_json(None, Some(&strategy)))?,
        Format::Dot => board.to_dot(),
    };
    emit(common, Some(artifact), &report)?;
    Ok(true)
}

fn from_cnf(common: &Common, path: &Path) -> Result<bool> {
    let f = load_cnf(path)?;
    let (h, s) = cnf_to_hypergraph(&f)?;
    let report = json!({
        "vars": f.num_vars(),
        "clauses": f.num_clauses(),
        "vertices": h.num_vertices(),
        "edges": h.num_edges(),
        "max_degree": h.max_degree(),
        "uniformity": h.uniformity(),
    });
    let artifact = match common.format.unwrap_or(Format::Board) {
        Format::Dot => h.to_dot(),
        Format::Dimacs => bail!("from-cnf writes a board; use --format board or dot"),
        _ => to_json_line(&h.to_json(h.uniformity(), Some(&s)))?,
    };
    emit(common, Some(artifact), &report)?;
    Ok(true)
}

fn sat(common: &Common, limits: &Limits, path: &Path) -> Result<bool> {
    let f = load_cnf(path)?;
    let res = dpll_sat_with(&f, limits.dpll())?;
    let report = match &res {
        SatResult::Unsat => json!({ "result": "UNSAT", "vars": f.num_vars(), "clauses": f.num_clauses() }),
        SatResult::Sat(model) => json!({
            "result": "SAT",
            "vars": f.num_vars(),
            "clauses": f.num_clauses(),
            "model": model_literals(model),
        }),
    };
    emit(common, None, &report)?;
    Ok(!res.is_sat())
}

fn model_literals(model: &[bool]) -> Vec<i64> {
    model
        .iter()
        .enumerate()
        .map(|(i, &b)| if b { i as i64 + 1 } else { -(i as i64 + 1) })
        .collect()
}

fn mu1(common: &Common, path: &Path) -> Result<bool> {
    let f = load_cnf(path)?;
    let rep = mu1_check(&f);
    let holds = rep.is_mu1;
    let report = json!({
        "vars": f.num_vars(),
        "clauses": f.num_clauses(),
        "deficiency": format!("m - n = {}", rep.deficiency),
        "mu1": rep,
    });
    emit(common, None, &report)?;
    Ok(holds)
}

fn color(
    common: &Common,
    limits: &Limits,
    path: &Path,
    n: Option<usize>,
    halving: bool,
    no_pairing: bool,
) -> Result<bool> {
    let b = load_board(path, n)?;
    let mut note = None;
    let pairing = match (&b.pairing, no_pairing) {
        (Some(s), false) if s.first_move.is_none() && s.pairing.leftover.is_none() => Some(&s.pairing),
        (Some(_), false) => {
            note = Some("pairing is not pure; colored without it");
            None
        }
        _ => None,
    };
    let lim = ColoringLimits {
        max_nodes: limits.coloring_nodes,
        ..ColoringLimits::default()
    };
    let found = find_proper_2coloring(&b.board, pairing, halving, lim)?;
    let lll = lll_halving_predicate(&b.board).ok();
    let mut report = json!({
        "vertices": b.board.num_vertices(),
        "edges": b.board.num_edges(),
        "halving_requested": halving,
        "pairing_used": pairing.is_some(),
        "note": note,
        "found": found.is_some(),
        "local_lemma_hypotheses": lll,
    });
    let artifact = match &found {
        Some(c) => {
            report["check"] = serde_json::to_value(check_coloring(&b.board, c, pairing))?;
            Some(to_json_line(&c.to_json(&b.board))?)
        }
        None => None,
    };
    emit(common, artifact, &report)?;
    Ok(found.is_some())
}

fn stats(common: &Common, path: &Path, n: Option<usize>, k: Option<usize>, s: Option<&str>) -> Result<bool> {
    match load(path)? {
        Input::Cnf(f) => {
            let occ = occurrence_and_balance_stats(&f);
            let nb = clause_neighborhood_stats(&f);
            let mut report = json!({
                "vars": f.num_vars(),
                "clauses": f.num_clauses(),
                "occurring_vars": occ.num_occurring_vars,
                "deficiency": occ.deficiency,
                "width": occ.width,
                "max_var_occurrences": occ.max_var_occurrences,
                "max_literal_occurrences": occ.max_literal_occurrences,
                "balanced_s": occ.balanced_s(),
                "max_sharing_neighborhood": nb.max_sharing,
                "max_conflict_neighborhood": nb.max_conflict,
            });
            let mut holds = true;
            if let Some(w) = f.width() {
                let bound = (1usize << (w - 1)) + (1usize << w.saturating_sub(2));
                if w >= 2 && w < 60 {
                    report["sharing_bound"] = json!(format!("2^{{k-1}}+2^{{k-2}} = {bound}"));
                    report["sharing_within_bound"] = json!(nb.max_sharing <= bound);
                }
            }
            if let Some(s) = s {
                let s = parse_s(s)? as usize;
                let k = k.or(occ.width).unwrap_or(0);
                let ks = occ.is_ks(k, s);
                let bal = occ.is_balanced(s);
                report["is_ks"] = json!({ "k": k, "s": s, "holds": ks });
                report["is_balanced"] = json!({ "s": s, "rule": "2·max literal occurrences ≤ s", "holds": bal });
                holds = ks && bal;
            }
            emit(common, None, &report)?;
            Ok(holds)
        }
        Input::Tree(t) => {
            let n = n.ok_or_else(|| anyhow!("tree statistics need --n"))?;
            let th = hyperedges_of_tree(&t, n)?;
            let report = json!({
                "nodes": t.len(),
                "height": t.height(),
                "min_leaf_depth": t.min_leaf_depth(),
                "leaf_depth_ok": th.in_class,
                "board": board_stats(&th.hypergraph),
            });
            let mut holds = true;
            let mut report = report;
            if let Some(s) = s {
                let rep = verify_tree(&t, n, parse_s(s)?);
                holds = rep.passes;
                report["tree"] = serde_json::to_value(rep)?;
            }
            emit(common, None, &report)?;
            Ok(holds)
        }
        Input::Board { board, .. } => {
            emit(common, None, &board_stats(&board))?;
            Ok(true)
        }
    }
}

fn board_stats(h: &Hypergraph) -> Value {
    let deg = h.degree_stats();
    let nb = h.neighborhood_stats();
    json!({
        "vertices": h.num_vertices(),
        "edges": h.num_edges(),
        "uniformity": h.uniformity(),
        "max_degree": deg.max,
        "argmax_degree": deg.argmax.map(|v| h.name(v).to_string()),
        "max_neighborhood": nb.max,
        "local_lemma_hypotheses": lll_halving_predicate(h).ok(),
    })
}

fn sweep_ns(scale: Scale) -> Vec<usize> {
    match scale {
        Scale::One => (6..=12).map(|k| 1usize << k).collect(),
        Scale::SixtyFourOverSixtyThree => (0..=6).map(|k| 63usize << k).collect(),
    }
}

fn plan(common: &Common, limits: &Limits, n: Option<usize>, c: &str, do_sweep: bool, toy: bool) -> Result<bool> {
    let scale = Scale::parse(c)?;
    if toy {
        let mut entries = Vec::new();
        let mut holds = true;
        // The merge instance is a subtree: only its sequence and degrees are claimed.
        for (name, p, complete) in [("toy", toy_plan(), true), ("toy-merge", toy_merge_plan(), false)] {
            let prep = check_plan_symbolic(&p);
            let (t, checks) = execute_plan_checked(&p, limits.executor_nodes)?;
            let rep = verify_tree(&t, p.n, 1u64 << p.log_s);
            let seq_ok = checks.iter().all(|c| c.matches == Some(true));
            let ok = if complete { prep.ok && rep.passes } else { rep.all_degbar_ok };
            holds &= ok && seq_ok;
            entries.push(json!({
                "name": name,
                "complete_tree": complete,
                "certified": prep.ok,
                "root_claimed": prep.root_claimed,
                "tree": rep,
                "sequence_checks": checks,
                "sequences_match": seq_ok,
            }));
        }
        emit(common, None, &json!({ "toy": entries, "holds": holds }))?;
        return Ok(holds);
    }
    if do_sweep {
        let entries = sweep(&sweep_ns(scale), scale);
        let certified: Vec<usize> = entries.iter().filter(|e| e.certified).map(|e| e.n).collect();
        let report = json!({
            "c": scale.to_string(),
            "s": "2^{n-1}/(c·n)",
            "entries": entries,
            "smallest_certified": certified.first(),
        });
        emit(common, None, &report)?;
        return Ok(!certified.is_empty());
    }
    let n = n.ok_or_else(|| anyhow!("plan needs --n, --sweep or --toy"))?;
    match plan_and_check(n, scale) {
        Ok((p, rep)) => {
            let ok = rep.ok;
            let artifact: Option<String> = if common.out.is_some() { Some(plan_json(&p)?) } else { None };
            emit(common, artifact, &serde_json::to_value(rep)?)?;
            Ok(ok)
        }
        Err(e @ (Error::GuardFailed { .. } | Error::OutOfRange(_))) => {
            let report = json!({ "n": n, "c": scale.to_string(), "certified": false, "failing_guard": e.to_string() });
            emit(common, None, &report)?;
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

fn plan_json(p: &BuildPlan) -> Result<String> {
    to_json_line(p)
}

fn bounds(common: &Common, limits: &Limits, k: u32, witness: Option<&Path>) -> Result<bool> {
    let table = match witness {
        Some(path) => {
            let f: CnfFormula = load_cnf(path)?;
            if f.num_occurring_vars() > limits.dpll_vars {
                bail!(
                    "witness has {} variables, above the DPLL limit of {}",
                    f.num_occurring_vars(),
                    limits.dpll_vars
                );
            }
            bound_table_with_witness(k, &f)?
        }
        None => bound_table(k)?,
    };
    emit(common, None, &serde_json::to_value(table)?)?;
    Ok(true)
}

fn play_game(common: &Common, path: &Path, n: Option<usize>, maker: MakerArg, breaker: BreakerArg) -> Result<bool> {
    let b = load_board(path, n)?;
    let mut m: Box<dyn Strategy> = match maker {
        MakerArg::Pairing => Box::new(pairing_maker_strategy(&board_strategy(&b, path)?, b.board.num_vertices())?),
        MakerArg::Descent => {
            let t = b.tree.as_ref().ok_or_else(|| anyhow!("the descent strategy needs a tree input"))?;
            Box::new(tree_descent_strategy(t, b.n.unwrap_or(0))?)
        }
        MakerArg::Random => Box::new(random_strategy(common.seed)),
    };
    let mut br: Box<dyn Strategy> = match breaker {
        BreakerArg::Random => Box::new(random_strategy(common.seed.wrapping_add(1))),
        BreakerArg::ErdosSelfridge => Box::new(erdos_selfridge_breaker()),
    };
    let rec = play(&b.board, m.as_mut(), br.as_mut());
    let replayed = replay(&b.board, &rec)?;
    let report = json!({
        "winner": rec.winner,
        "moves": rec.moves.len(),
        "forfeit": rec.forfeit,
        "replay_agrees": replayed == rec.winner,
        "seed": common.seed,
    });
    let holds = rec.winner == Player::Maker;
    emit(common, Some(to_json_line(&rec)?), &report)?;
    Ok(holds)
}
