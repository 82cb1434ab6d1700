//! Translations between boards with a pairing strategy and CNF formulas.
//!
//! A pair `(a, b)` becomes a variable `x` with `a ↦ x` and `b ↦ ¬x`;
//! `x = true` reads "Breaker claims `a`". An edge becomes the clause of its
//! translated vertices, which is satisfied exactly when Breaker owns a
//! vertex of the edge. A satisfying assignment is therefore a Breaker
//! selection, one vertex per pair, that blocks every edge.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Pairing, PairingStrategy, VertexId};

use super::formula::{CnfFormula, Literal};

/// Pairs in variable order: sorted by the lexicographically smaller vertex
/// name, which becomes the positive literal.
fn canonical_pairs(h: &Hypergraph, pairing: &Pairing) -> Vec<(VertexId, VertexId)> {
    let mut pairs: Vec<(VertexId, VertexId)> = pairing
        .pairs
        .iter()
        .map(|&(a, b)| if h.name(a) <= h.name(b) { (a, b) } else { (b, a) })
        .collect();
    pairs.sort_by(|x, y| h.name(x.0).cmp(h.name(y.0)));
    pairs
}

/// `lit[v]`: the literal of vertex `v`, if it is paired.
fn literal_map(h: &Hypergraph, pairs: &[(VertexId, VertexId)]) -> Vec<Option<Literal>> {
    let mut lit = vec![None; h.num_vertices()];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        lit[a] = Some(i as Literal + 1);
        lit[b] = Some(-(i as Literal + 1));
    }
    lit
}

/// One clause per edge of a board with a pure pairing.
///
/// Requires every vertex to be paired and the board to be uniform. An edge
/// containing both members of a pair gives a tautological clause, which is
/// an error unless `allow_tautologies` is set.
pub fn hypergraph_to_cnf(h: &Hypergraph, p: &PairingStrategy, allow_tautologies: bool) -> Result<CnfFormula> {
    if p.first_move.is_some() {
        return Err(Error::InvalidPairing("expected a pure pairing (no first move)".into()));
    }
    if p.pairing.leftover.is_some() {
        return Err(Error::InvalidPairing("pure pairing must not leave a vertex unpaired".into()));
    }
    p.validate(h.num_vertices())?;
    if h.num_edges() > 0 && h.uniformity().is_none() {
        return Err(Error::Precondition("board is not uniform".into()));
    }
    let pairs = canonical_pairs(h, &p.pairing);
    let lit = literal_map(h, &pairs);
    let mut clauses = Vec::with_capacity(h.num_edges());
    for (i, e) in h.edges().enumerate() {
        let clause: Vec<Literal> = e.iter().map(|&v| lit[v].unwrap()).collect();
        let mut vars: Vec<u32> = clause.iter().map(|l| l.unsigned_abs()).collect();
        vars.sort_unstable();
        if vars.windows(2).any(|w| w[0] == w[1]) && !allow_tautologies {
            return Err(Error::InvalidPairing(format!(
                "edge {i} contains both members of a pair (tautological clause)"
            )));
        }
        clauses.push(clause);
    }
    if allow_tautologies {
        CnfFormula::new_permissive(pairs.len(), clauses)
    } else {
        CnfFormula::new(pairs.len(), clauses)
    }
}

/// Literal vertices `x{i}` and `~x{i}`, one edge per clause, and the pure
/// pairing `x{i} ↔ ~x{i}`. Requires an exact clause width and no tautologies.
pub fn cnf_to_hypergraph(f: &CnfFormula) -> Result<(Hypergraph, PairingStrategy)> {
    if f.num_clauses() > 0 && f.width().is_none() {
        return Err(Error::InvalidFormula("clauses have different widths".into()));
    }
    if f.has_tautology() {
        return Err(Error::InvalidFormula("tautological clause".into()));
    }
    let n = f.num_vars();
    let mut names = Vec::with_capacity(2 * n);
    for i in 1..=n {
        names.push(format!("x{i}"));
        names.push(format!("~x{i}"));
    }
    let vertex = |l: Literal| 2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0);
    let edges = f.clauses().iter().map(|c| c.iter().map(|&l| vertex(l)).collect()).collect();
    let h = Hypergraph::new_multi(names, edges)?;
    let pairs = (0..n).map(|i| (2 * i, 2 * i + 1)).collect();
    Ok((h, PairingStrategy::pure(Pairing::new(pairs, None))))
}

/// Two disjoint copies of the board with a pure pairing: the pairs of the
/// strategy in each copy, plus the first move paired with its copy (and
/// likewise a leftover vertex).
pub fn double_for_pure_pairing(h: &Hypergraph, s: &PairingStrategy) -> Result<(Hypergraph, PairingStrategy)> {
    s.validate(h.num_vertices())?;
    let (doubled, copy) = h.disjoint_double();
    let mut pairs = s.pairing.pairs.clone();
    pairs.extend(s.pairing.pairs.iter().map(|&(a, b)| (copy[a], copy[b])));
    for v in s.first_move.iter().chain(&s.pairing.leftover) {
        pairs.push((*v, copy[*v]));
    }
    Ok((doubled, PairingStrategy::pure(Pairing::new(pairs, None))))
}

/// The formula that is satisfiable exactly when some Breaker selection
/// (one vertex per pair, plus the leftover) leaves Maker without an edge.
#[derive(Clone, Debug, Serialize)]
pub struct PairingFormula {
    #[serde(skip)]
    pub formula: CnfFormula,
    /// Variable `i + 1` is pair `pairs[i]`; true means Breaker takes `.0`.
    pub pairs: Vec<(VertexId, VertexId)>,
    /// Edges already blocked: through the leftover or both members of a pair.
    pub blocked_edges: usize,
}

impl PairingFormula {
    /// Breaker's vertices under an assignment.
    pub fn breaker_selection(&self, model: &[bool], leftover: Option<VertexId>) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .pairs
            .iter()
            .zip(model)
            .map(|(&(a, b), &t)| if t { a } else { b })
            .collect();
        out.extend(leftover);
        out.sort_unstable();
        out
    }
}

/// Maker owns the first move; Breaker is given the leftover.
pub fn pairing_formula(h: &Hypergraph, s: &PairingStrategy) -> Result<PairingFormula> {
    s.validate(h.num_vertices())?;
    let pairs = canonical_pairs(h, &s.pairing);
    let lit = literal_map(h, &pairs);
    let mut clauses = Vec::new();
    let mut blocked_edges = 0;
    'edges: for e in h.edges() {
        let mut clause: Vec<Literal> = Vec::with_capacity(e.len());
        for &v in &e {
            if Some(v) == s.pairing.leftover {
                blocked_edges += 1;
                continue 'edges;
            }
            if let Some(l) = lit[v] {
                clause.push(l);
            }
        }
        clause.sort_by_key(|&l| (l.unsigned_abs(), l));
        if CnfFormula::is_tautological(&clause) {
            blocked_edges += 1;
            continue;
        }
        clauses.push(clause);
    }
    Ok(PairingFormula {
        formula: CnfFormula::new(pairs.len(), clauses)?,
        pairs,
        blocked_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::dpll::{dpll_sat, SatResult};
    use crate::sat::formula::complete_formula;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_disjoint_edges() {
        let h = Hypergraph::new(names(&["a", "a'", "b", "b'"]), vec![vec![0, 2], vec![1, 3]]).unwrap();
        let p = PairingStrategy::pure(Pairing::new(vec![(0, 1), (2, 3)], None));
        let f = hypergraph_to_cnf(&h, &p, false).unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2], vec![-1, -2]]);
        assert!(dpll_sat(&f).unwrap().is_sat());
    }

    #[test]
    fn tautology_rejected_unless_flagged() {
        let h = Hypergraph::new(names(&["a", "b"]), vec![vec![0, 1]]).unwrap();
        let p = PairingStrategy::pure(Pairing::new(vec![(0, 1)], None));
        assert!(hypergraph_to_cnf(&h, &p, false).is_err());
        assert!(hypergraph_to_cnf(&h, &p, true).unwrap().has_tautology());
    }

    #[test]
    fn literal_board_of_unit_pair() {
        let f = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        let (h, p) = cnf_to_hypergraph(&f).unwrap();
        assert_eq!((h.num_vertices(), h.num_edges()), (2, 2));
        assert_eq!(h.names(), &["x1".to_string(), "~x1".to_string()]);
        let pf = pairing_formula(&h, &p).unwrap();
        assert_eq!(dpll_sat(&pf.formula).unwrap(), SatResult::Unsat);
        assert_eq!(hypergraph_to_cnf(&h, &p, false).unwrap(), f);
    }

    #[test]
    fn complete_formula_round_trip() {
        let f = complete_formula(2);
        let (h, p) = cnf_to_hypergraph(&f).unwrap();
        assert_eq!(h.num_edges(), 4);
        let g = hypergraph_to_cnf(&h, &p, false).unwrap();
        assert_eq!(dpll_sat(&g).unwrap(), SatResult::Unsat);
    }

    #[test]
    fn first_move_and_leftover_in_pairing_formula() {
        // Edges {r, a}, {r, b}, {c}; r first move, (a, b) paired, c leftover.
        let h2 = Hypergraph::new(names(&["r", "a", "b", "c"]), vec![vec![0, 1], vec![0, 2], vec![3]]).unwrap();
        let s2 = PairingStrategy {
            first_move: Some(0),
            pairing: Pairing::new(vec![(1, 2)], Some(3)),
        };
        let pf = pairing_formula(&h2, &s2).unwrap();
        assert_eq!(pf.blocked_edges, 1);
        assert_eq!(pf.formula.clauses(), &[vec![1], vec![-1]]);
    }
}
