//! Recognition of MU(1), the minimally unsatisfiable formulas with one
//! more clause than variables, through the recursive splitting
//! characterization: `F ∈ MU(1)` iff `F = {∅}` or, for some variable `x`
//! occurring in both polarities, `F` splits into `F'₁ ∋ x`-clauses and
//! `F'₂ ∋ ¬x`-clauses sharing only `x`, with both stripped parts in MU(1).

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::dpll::{dpll_sat_with, DpllLimits, SatResult};
use super::formula::{CnfFormula, Literal};

/// The split tree found by the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mu1Trace {
    /// `{∅}`.
    EmptyClause,
    Split {
        var: u32,
        /// Clauses on the `x` side.
        positive_clauses: usize,
        negative_clauses: usize,
        positive: Arc<Mu1Trace>,
        negative: Arc<Mu1Trace>,
    },
}

impl Mu1Trace {
    pub fn depth(&self) -> usize {
        match self {
            Mu1Trace::EmptyClause => 0,
            Mu1Trace::Split { positive, negative, .. } => 1 + positive.depth().max(negative.depth()),
        }
    }

    pub fn splits(&self) -> usize {
        match self {
            Mu1Trace::EmptyClause => 0,
            Mu1Trace::Split { positive, negative, .. } => 1 + positive.splits() + negative.splits(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mu1Report {
    pub is_mu1: bool,
    pub trace: Option<Arc<Mu1Trace>>,
    pub deficiency: i64,
    /// Unsatisfiable and every one-clause deletion satisfiable; `None` when
    /// the formula exceeds the DPLL limits.
    pub minimal_unsat: Option<bool>,
    /// `is_mu1 ⇔ (deficiency = 1 ∧ minimal_unsat)` where the latter is known.
    pub consistent: bool,
    pub subformulas_examined: usize,
}

/// Canonical multiset of clauses.
type Key = Vec<Vec<Literal>>;

struct Search {
    memo: HashMap<Key, Option<Arc<Mu1Trace>>>,
}

impl Search {
    fn check(&mut self, mut f: Key) -> Option<Arc<Mu1Trace>> {
        f.sort();
        if let Some(r) = self.memo.get(&f) {
            return r.clone();
        }
        let r = self.check_uncached(&f);
        self.memo.insert(f, r.clone());
        r
    }

    fn check_uncached(&mut self, f: &Key) -> Option<Arc<Mu1Trace>> {
        if f.len() == 1 && f[0].is_empty() {
            return Some(Arc::new(Mu1Trace::EmptyClause));
        }
        if f.iter().any(|c| c.is_empty() || CnfFormula::is_tautological(c)) {
            return None;
        }
        let mut vars: Vec<u32> = f.iter().flatten().map(|l| l.unsigned_abs()).collect();
        vars.sort_unstable();
        vars.dedup();
        if f.len() != vars.len() + 1 {
            return None;
        }
        for &x in &vars {
            let xl = x as Literal;
            let has_pos = f.iter().any(|c| c.contains(&xl));
            let has_neg = f.iter().any(|c| c.contains(&-xl));
            if !(has_pos && has_neg) {
                continue;
            }
            let Some((pos, neg)) = split_on(f, x, &vars) else {
                continue;
            };
            let (np, nn) = (pos.len(), neg.len());
            let Some(tp) = self.check(pos) else { continue };
            let Some(tn) = self.check(neg) else { continue };
            return Some(Arc::new(Mu1Trace::Split {
                var: x,
                positive_clauses: np,
                negative_clauses: nn,
                positive: tp,
                negative: tn,
            }));
        }
        None
    }
}

/// Components of the clause/variable graph with `x` removed. Returns the
/// stripped `x`-side and `¬x`-side when every component touches exactly
/// one polarity of `x`.
fn split_on(f: &Key, x: u32, vars: &[u32]) -> Option<(Key, Key)> {
    let var_index: HashMap<u32, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = f.len();
    // Union-find over clauses, then over variables at offset m.
    let mut parent: Vec<usize> = (0..m + vars.len()).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for (i, c) in f.iter().enumerate() {
        for &l in c {
            if l.unsigned_abs() != x {
                let (a, b) = (find(&mut parent, i), find(&mut parent, m + var_index[&l.unsigned_abs()]));
                parent[a] = b;
            }
        }
    }
    // Polarity of x seen in each component: bit 0 positive, bit 1 negative.
    let mut seen: HashMap<usize, u8> = HashMap::new();
    for (i, c) in f.iter().enumerate() {
        let r = find(&mut parent, i);
        let e = seen.entry(r).or_insert(0);
        if c.contains(&(x as Literal)) {
            *e |= 1;
        }
        if c.contains(&-(x as Literal)) {
            *e |= 2;
        }
    }
    if seen.values().any(|&b| b != 1 && b != 2) {
        return None;
    }
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (i, c) in f.iter().enumerate() {
        let r = find(&mut parent, i);
        let stripped: Vec<Literal> = c.iter().copied().filter(|l| l.unsigned_abs() != x).collect();
        if seen[&r] == 1 {
            pos.push(stripped);
        } else {
            neg.push(stripped);
        }
    }
    Some((pos, neg))
}

/// Default clause bound for the minimality cross-check.
pub const MINIMALITY_CHECK_MAX_CLAUSES: usize = 256;

pub fn mu1_check(f: &CnfFormula) -> Mu1Report {
    let mut search = Search { memo: HashMap::new() };
    let trace = search.check(f.clauses().to_vec());
    let deficiency = f.deficiency();
    let minimal_unsat = minimal_unsat(f);
    let is_mu1 = trace.is_some();
    let consistent = match minimal_unsat {
        Some(mu) => is_mu1 == (mu && deficiency == 1),
        None => !is_mu1 || deficiency == 1,
    };
    Mu1Report {
        is_mu1,
        trace,
        deficiency,
        minimal_unsat,
        consistent,
        subformulas_examined: search.memo.len(),
    }
}

/// `F` unsatisfiable and `F − C` satisfiable for every clause `C`.
pub fn minimal_unsat(f: &CnfFormula) -> Option<bool> {
    if f.num_clauses() > MINIMALITY_CHECK_MAX_CLAUSES {
        return None;
    }
    let limits = DpllLimits::default();
    match dpll_sat_with(f, limits).ok()? {
        SatResult::Sat(_) => return Some(false),
        SatResult::Unsat => {}
    }
    for i in 0..f.num_clauses() {
        if !dpll_sat_with(&f.without_clause(i), limits).ok()?.is_sat() {
            return Some(false);
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::formula::complete_formula;

    fn f(n: usize, cs: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, cs.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn base_cases() {
        let r = mu1_check(&f(0, &[&[]]));
        assert!(r.is_mu1 && r.consistent);
        assert_eq!(*r.trace.unwrap(), Mu1Trace::EmptyClause);
        let r = mu1_check(&f(1, &[&[1], &[-1]]));
        assert!(r.is_mu1 && r.consistent);
        assert!(matches!(*r.trace.unwrap(), Mu1Trace::Split { var: 1, .. }));
    }

    #[test]
    fn complete_formulas_are_mu1_only_for_k_one() {
        // The complete formula on k variables has 2^k clauses; deficiency 1 only at k = 1.
        assert!(mu1_check(&complete_formula(1)).is_mu1);
        for k in 2..=4 {
            let r = mu1_check(&complete_formula(k));
            assert!(!r.is_mu1 && r.consistent && r.minimal_unsat == Some(true));
        }
    }

    #[test]
    fn rejects_non_minimal_and_satisfiable() {
        let r = mu1_check(&f(2, &[&[1], &[-1], &[2]]));
        assert!(!r.is_mu1 && r.consistent);
        let r = mu1_check(&f(2, &[&[1, 2], &[-1]]));
        assert!(!r.is_mu1 && r.consistent);
        // (x)(¬x ∨ y)(¬y) is MU(1).
        let r = mu1_check(&f(2, &[&[1], &[-1, 2], &[-2]]));
        assert!(r.is_mu1 && r.consistent);
        assert_eq!(r.trace.unwrap().splits(), 2);
    }
}
