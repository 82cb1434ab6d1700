//! A small DPLL solver: occurrence-list unit propagation and
//! shortest-clause branching. Meant as an oracle at desk scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::formula::{CnfFormula, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpllLimits {
    /// Bound on the number of variables that occur in the formula.
    pub max_vars: usize,
    pub max_clauses: usize,
}

impl Default for DpllLimits {
    fn default() -> Self {
        DpllLimits {
            max_vars: 64,
            max_clauses: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// `model[v - 1]` is the value of variable `v`.
    Sat(Vec<bool>),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn model(&self) -> Option<&[bool]> {
        match self {
            SatResult::Sat(m) => Some(m),
            SatResult::Unsat => None,
        }
    }
}

pub fn dpll_sat(f: &CnfFormula) -> Result<SatResult> {
    dpll_sat_with(f, DpllLimits::default())
}

pub fn dpll_sat_with(f: &CnfFormula, limits: DpllLimits) -> Result<SatResult> {
    let occurring = f.num_occurring_vars();
    if occurring > limits.max_vars {
        return Err(Error::LimitExceeded {
            what: "DPLL variables".into(),
            needed: occurring.to_string(),
            limit: limits.max_vars.to_string(),
        });
    }
    if f.num_clauses() > limits.max_clauses {
        return Err(Error::LimitExceeded {
            what: "DPLL clauses".into(),
            needed: f.num_clauses().to_string(),
            limit: limits.max_clauses.to_string(),
        });
    }
    let mut s = Solver::new(f);
    let result = if s.solve() {
        let model: Vec<bool> = s.assign.iter().map(|&v| v == 1).collect();
        if !f.evaluate(&model) {
            return Err(Error::Precondition("DPLL produced a model that fails evaluation".into()));
        }
        SatResult::Sat(model)
    } else {
        SatResult::Unsat
    };
    Ok(result)
}

struct Solver<'a> {
    clauses: &'a [Vec<Literal>],
    occ: Vec<Vec<u32>>,
    /// `1` true, `-1` false, `0` unassigned; indexed by variable - 1.
    assign: Vec<i8>,
    trail: Vec<usize>,
}

fn slot(l: Literal) -> usize {
    2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0)
}

impl<'a> Solver<'a> {
    fn new(f: &'a CnfFormula) -> Self {
        let mut occ = vec![Vec::new(); 2 * f.num_vars()];
        for (i, c) in f.clauses().iter().enumerate() {
            for &l in c {
                occ[slot(l)].push(i as u32);
            }
        }
        Solver {
            clauses: f.clauses(),
            occ,
            assign: vec![0; f.num_vars()],
            trail: Vec::new(),
        }
    }

    fn value(&self, l: Literal) -> i8 {
        let v = self.assign[l.unsigned_abs() as usize - 1];
        if l > 0 {
            v
        } else {
            -v
        }
    }

    fn set(&mut self, l: Literal) {
        self.assign[l.unsigned_abs() as usize - 1] = if l > 0 { 1 } else { -1 };
        self.trail.push(l.unsigned_abs() as usize - 1);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().unwrap();
            self.assign[v] = 0;
        }
    }

    /// Unit state of a clause: `Err(())` if falsified, `Ok(Some(l))` if
    /// unit on `l`, `Ok(None)` otherwise.
    fn unit(&self, c: &[Literal]) -> std::result::Result<Option<Literal>, ()> {
        let mut free = None;
        let mut n_free = 0;
        for &l in c {
            match self.value(l) {
                1 => return Ok(None),
                0 => {
                    n_free += 1;
                    free = Some(l);
                }
                _ => {}
            }
        }
        match n_free {
            0 => Err(()),
            1 => Ok(free),
            _ => Ok(None),
        }
    }

    /// Propagates the trail from position `from`; false on conflict.
    fn propagate(&mut self, mut from: usize) -> bool {
        while from < self.trail.len() {
            let v = self.trail[from];
            from += 1;
            let falsified: Literal = if self.assign[v] == 1 { -(v as i32 + 1) } else { v as i32 + 1 };
            for k in 0..self.occ[slot(falsified)].len() {
                let ci = self.occ[slot(falsified)][k] as usize;
                match self.unit(&self.clauses[ci]) {
                    Err(()) => return false,
                    Ok(Some(l)) => self.set(l),
                    Ok(None) => {}
                }
            }
        }
        true
    }

    fn solve(&mut self) -> bool {
        let start = self.trail.len();
        for ci in 0..self.clauses.len() {
            match self.unit(&self.clauses[ci]) {
                Err(()) => return false,
                Ok(Some(l)) if self.value(l) == 0 => self.set(l),
                _ => {}
            }
        }
        self.propagate(start) && self.search()
    }

    fn search(&mut self) -> bool {
        // Branch on a literal of the shortest unsatisfied clause.
        let mut best: Option<(usize, Literal)> = None;
        for c in self.clauses {
            let mut free = 0;
            let mut pick = 0;
            let mut sat = false;
            for &l in c {
                match self.value(l) {
                    1 => {
                        sat = true;
                        break;
                    }
                    0 => {
                        free += 1;
                        if pick == 0 {
                            pick = l;
                        }
                    }
                    _ => {}
                }
            }
            if !sat && best.map_or(true, |(b, _)| free < b) {
                best = Some((free, pick));
                if free <= 2 {
                    break;
                }
            }
        }
        let Some((_, lit)) = best else {
            return true;
        };
        for l in [lit, -lit] {
            let mark = self.trail.len();
            self.set(l);
            if self.propagate(mark) && self.search() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::formula::complete_formula;

    #[test]
    fn small_cases() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1], vec![-2]]).unwrap();
        assert_eq!(dpll_sat(&f).unwrap(), SatResult::Unsat);
        let empty = CnfFormula::new(0, vec![]).unwrap();
        assert!(dpll_sat(&empty).unwrap().is_sat());
        let empty_clause = CnfFormula::new(0, vec![vec![]]).unwrap();
        assert_eq!(dpll_sat(&empty_clause).unwrap(), SatResult::Unsat);
        for k in 1..=6 {
            assert_eq!(dpll_sat(&complete_formula(k)).unwrap(), SatResult::Unsat);
            let minus_one = complete_formula(k).without_clause(0);
            assert!(dpll_sat(&minus_one).unwrap().is_sat());
        }
    }

    #[test]
    fn limits_refuse() {
        let f = CnfFormula::new(70, (1..=70).map(|v| vec![v]).collect()).unwrap();
        assert!(matches!(dpll_sat(&f), Err(Error::LimitExceeded { .. })));
        let lim = DpllLimits {
            max_vars: 100,
            max_clauses: 10,
        };
        assert!(matches!(dpll_sat_with(&f, lim), Err(Error::LimitExceeded { .. })));
    }
}
