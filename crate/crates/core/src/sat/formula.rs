use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// A literal: `v` or `-v` for a variable `v ≥ 1`.
pub type Literal = i32;

/// A CNF formula over variables `1..=num_vars`.
///
/// Clauses keep their construction order; literals inside a clause are
/// sorted by variable, so two formulas with the same clauses compare equal
/// and DIMACS output is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
    tautologies_allowed: bool,
}

impl CnfFormula {
    /// Rejects zero literals, out-of-range variables, repeated literals and
    /// tautological clauses.
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        Self::build(num_vars, clauses, false)
    }

    /// As [`CnfFormula::new`] but admits clauses containing `x` and `¬x`.
    pub fn new_permissive(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        Self::build(num_vars, clauses, true)
    }

    fn build(num_vars: usize, mut clauses: Vec<Vec<Literal>>, tautologies_allowed: bool) -> Result<Self> {
        if num_vars > i32::MAX as usize {
            return Err(Error::InvalidFormula(format!("{num_vars} variables")));
        }
        for (i, clause) in clauses.iter_mut().enumerate() {
            clause.sort_by_key(|&l| (l.unsigned_abs(), l));
            for &l in clause.iter() {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::InvalidFormula(format!(
                        "clause {i}: literal {l} outside 1..={num_vars}"
                    )));
                }
            }
            for w in clause.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidFormula(format!("clause {i}: literal {} repeated", w[0])));
                }
                if w[0] == -w[1] && !tautologies_allowed {
                    return Err(Error::InvalidFormula(format!(
                        "clause {i}: tautological (contains {} and {})",
                        w[1],
                        w[0]
                    )));
                }
            }
        }
        Ok(CnfFormula {
            num_vars,
            clauses,
            tautologies_allowed,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// `m(F)`.
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn tautologies_allowed(&self) -> bool {
        self.tautologies_allowed
    }

    pub fn is_tautological(clause: &[Literal]) -> bool {
        clause.windows(2).any(|w| w[0] == -w[1])
    }

    pub fn has_tautology(&self) -> bool {
        self.clauses.iter().any(|c| Self::is_tautological(c))
    }

    /// `vbl(F)`: the variables that occur in some clause.
    pub fn variables(&self) -> BTreeSet<u32> {
        self.clauses.iter().flatten().map(|l| l.unsigned_abs()).collect()
    }

    /// `n(F) = |vbl(F)|`.
    pub fn num_occurring_vars(&self) -> usize {
        self.variables().len()
    }

    /// `m(F) - n(F)`.
    pub fn deficiency(&self) -> i64 {
        self.num_clauses() as i64 - self.num_occurring_vars() as i64
    }

    /// The common clause length, if all clauses have the same length.
    pub fn width(&self) -> Option<usize> {
        let k = self.clauses.first()?.len();
        self.clauses.iter().all(|c| c.len() == k).then_some(k)
    }

    /// Every clause has exactly `k` distinct literals.
    pub fn is_k_cnf(&self, k: usize) -> bool {
        self.clauses.iter().all(|c| c.len() == k)
    }

    /// Truth value under `assignment[v - 1]`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment.get(l.unsigned_abs() as usize - 1).copied().unwrap_or(false) == (l > 0))
        })
    }

    /// The formula with clause `i` removed.
    pub fn without_clause(&self, i: usize) -> Self {
        let mut clauses = self.clauses.clone();
        clauses.remove(i);
        CnfFormula {
            num_vars: self.num_vars,
            clauses,
            tautologies_allowed: self.tautologies_allowed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OccurrenceStats {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub num_occurring_vars: usize,
    pub deficiency: i64,
    pub width: Option<usize>,
    /// Indexed by variable - 1.
    pub var_occurrences: Vec<usize>,
    pub pos_occurrences: Vec<usize>,
    pub neg_occurrences: Vec<usize>,
    pub max_var_occurrences: usize,
    pub max_literal_occurrences: usize,
}

impl OccurrenceStats {
    /// Exactly `k` literals per clause and at most `s` occurrences per variable.
    pub fn is_ks(&self, k: usize, s: usize) -> bool {
        self.width.map_or(self.num_clauses == 0, |w| w == k) && self.max_var_occurrences <= s
    }

    /// Every literal occurs in at most `s / 2` clauses.
    pub fn is_balanced(&self, s: usize) -> bool {
        2 * self.max_literal_occurrences <= s
    }

    /// Smallest `s` for which the formula is a balanced `(k, s)`-CNF.
    pub fn balanced_s(&self) -> usize {
        self.max_var_occurrences.max(2 * self.max_literal_occurrences)
    }
}

pub fn occurrence_and_balance_stats(f: &CnfFormula) -> OccurrenceStats {
    let n = f.num_vars();
    let mut pos = vec![0usize; n];
    let mut neg = vec![0usize; n];
    for &l in f.clauses().iter().flatten() {
        let v = l.unsigned_abs() as usize - 1;
        if l > 0 {
            pos[v] += 1;
        } else {
            neg[v] += 1;
        }
    }
    let var_occurrences: Vec<usize> = pos.iter().zip(&neg).map(|(a, b)| a + b).collect();
    OccurrenceStats {
        num_vars: n,
        num_clauses: f.num_clauses(),
        num_occurring_vars: f.num_occurring_vars(),
        deficiency: f.deficiency(),
        width: f.width(),
        max_var_occurrences: var_occurrences.iter().copied().max().unwrap_or(0),
        max_literal_occurrences: pos.iter().chain(&neg).copied().max().unwrap_or(0),
        var_occurrences,
        pos_occurrences: pos,
        neg_occurrences: neg,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseNeighborhoodStats {
    /// Per clause: other clauses sharing at least one variable.
    pub sharing: Vec<usize>,
    /// Per clause: other clauses containing the negation of one of its literals.
    pub conflict: Vec<usize>,
    pub max_sharing: usize,
    pub max_conflict: usize,
    pub argmax_sharing: Option<usize>,
}

pub fn clause_neighborhood_stats(f: &CnfFormula) -> ClauseNeighborhoodStats {
    let m = f.num_clauses();
    let n = f.num_vars();
    // occ[2(v-1)] lists clauses with +v, occ[2(v-1)+1] those with -v.
    let mut occ: Vec<Vec<u32>> = vec![Vec::new(); 2 * n];
    for (i, c) in f.clauses().iter().enumerate() {
        for &l in c {
            occ[lit_slot(l)].push(i as u32);
        }
    }
    let mut share_stamp = vec![u32::MAX; m];
    let mut conflict_stamp = vec![u32::MAX; m];
    let mut sharing = Vec::with_capacity(m);
    let mut conflict = Vec::with_capacity(m);
    for (i, c) in f.clauses().iter().enumerate() {
        let me = i as u32;
        share_stamp[i] = me;
        conflict_stamp[i] = me;
        let (mut s, mut k) = (0, 0);
        for &l in c {
            for &j in occ[lit_slot(l)].iter().chain(&occ[lit_slot(-l)]) {
                if share_stamp[j as usize] != me {
                    share_stamp[j as usize] = me;
                    s += 1;
                }
            }
            for &j in &occ[lit_slot(-l)] {
                if conflict_stamp[j as usize] != me {
                    conflict_stamp[j as usize] = me;
                    k += 1;
                }
            }
        }
        sharing.push(s);
        conflict.push(k);
    }
    let argmax_sharing = (0..m).fold(None, |best: Option<usize>, i| match best {
        Some(b) if sharing[b] >= sharing[i] => Some(b),
        _ => Some(i),
    });
    ClauseNeighborhoodStats {
        max_sharing: sharing.iter().copied().max().unwrap_or(0),
        max_conflict: conflict.iter().copied().max().unwrap_or(0),
        argmax_sharing,
        sharing,
        conflict,
    }
}

fn lit_slot(l: Literal) -> usize {
    2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0)
}

/// All `2^k` sign patterns over `x_1..x_k`.
pub fn complete_formula(k: usize) -> CnfFormula {
    let clauses = (0..1u32 << k)
        .map(|mask| {
            (0..k)
                .map(|i| if mask >> i & 1 == 1 { -(i as i32 + 1) } else { i as i32 + 1 })
                .collect()
        })
        .collect();
    CnfFormula::new(k, clauses).expect("complete formula is well formed")
}
