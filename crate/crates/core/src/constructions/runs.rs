//! Run-length distance sequences.
//!
//! The planner's sequences are a handful of constant blocks
//! (`0, 2×14, 0, 4×13, 0×34`), so storing `(value, length)` runs keeps
//! every combinator linear in the number of runs rather than in `n`.

use std::fmt;

use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::sequence::DistanceSequence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Run {
    pub value: Dyadic,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunSequence {
    n: usize,
    runs: Vec<Run>,
}

impl RunSequence {
    pub fn new(runs: impl IntoIterator<Item = (Dyadic, usize)>) -> Self {
        let mut out: Vec<Run> = Vec::new();
        let mut n = 0;
        for (value, len) in runs {
            if len == 0 {
                continue;
            }
            n += len;
            match out.last_mut() {
                Some(last) if last.value == value => last.len += len,
                _ => out.push(Run { value, len }),
            }
        }
        RunSequence { n, runs: out }
    }

    pub fn from_ints(runs: &[(i64, usize)]) -> Self {
        Self::new(runs.iter().map(|&(v, l)| (Dyadic::from_int(v), l)))
    }

    pub fn zeros(n: usize) -> Self {
        Self::new([(Dyadic::zero(), n)])
    }

    pub fn from_entries(entries: &[Dyadic]) -> Self {
        Self::new(entries.iter().map(|x| (x.clone(), 1)))
    }

    pub fn from_distance_sequence(d: &DistanceSequence) -> Self {
        Self::from_entries(d.entries())
    }

    /// Root sequence of a full binary tree of height `h`: `2^h` leaves at
    /// distance `h`, i.e. `2^(n - log s)` at index `n - 1 - h`.
    pub fn full_tree(n: usize, log_s: u32, h: usize) -> Result<Self> {
        if h >= n {
            return Err(Error::OutOfRange(format!("full tree height {h} with n = {n}")));
        }
        let v = Dyadic::pow2(n as i64 - log_s as i64);
        Ok(Self::new([(Dyadic::zero(), n - 1 - h), (v, 1), (Dyadic::zero(), h)]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn get(&self, i: usize) -> Dyadic {
        let mut start = 0;
        for run in &self.runs {
            if i < start + run.len {
                return run.value.clone();
            }
            start += run.len;
        }
        Dyadic::zero()
    }

    pub fn to_entries(&self) -> Vec<Dyadic> {
        let mut out = Vec::with_capacity(self.n);
        for run in &self.runs {
            out.extend(std::iter::repeat(run.value.clone()).take(run.len));
        }
        out
    }

    pub fn to_distance_sequence(&self, log_s: u32) -> Result<DistanceSequence> {
        DistanceSequence::new(self.n, log_s, self.to_entries())
    }

    /// `(start, end, value)` for every run.
    fn spans(&self) -> impl Iterator<Item = (usize, usize, &Dyadic)> {
        let mut start = 0;
        self.runs.iter().map(move |r| {
            let s = start;
            start += r.len;
            (s, start, &r.value)
        })
    }

    /// Drops the first `k` entries and pads with `k` zeros: the root of a
    /// full tree of height `k` with this sequence on every leaf.
    pub fn shift(&self, k: usize) -> Self {
        let k = k.min(self.n);
        let mut runs = Vec::with_capacity(self.runs.len() + 1);
        for (a, b, v) in self.spans() {
            if b > k {
                runs.push((v.clone(), b - a.max(k)));
            }
        }
        runs.push((Dyadic::zero(), k));
        Self::new(runs)
    }

    pub fn attach(&self, h: usize) -> Result<Self> {
        if h >= self.n.max(1) {
            return Err(Error::OutOfRange(format!(
                "attach height {h} outside 0..={}",
                self.n.saturating_sub(1)
            )));
        }
        Ok(self.shift(h))
    }

    pub fn join(left: &Self, right: &Self) -> Result<Self> {
        if left.n != right.n {
            return Err(Error::SequenceMismatch(format!("n = {} vs {}", left.n, right.n)));
        }
        let (a, b) = (left.shift(1), right.shift(1));
        let mut cuts: Vec<usize> = a.spans().chain(b.spans()).map(|(_, e, _)| e).collect();
        cuts.sort_unstable();
        cuts.dedup();
        let mut runs = Vec::with_capacity(cuts.len());
        let mut start = 0;
        for end in cuts {
            // The zero padded by `shift` is exactly the trailing 0 of the join.
            let v = (&a.get(start) + &b.get(start)).half();
            runs.push((v, end - start));
            start = end;
        }
        Ok(Self::new(runs))
    }

    /// `Σ x_i / 2^(i+1)`.
    pub fn degbar(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for (a, b, v) in self.spans() {
            if !v.is_zero() {
                let w = &Dyadic::pow2(-(a as i64)) - &Dyadic::pow2(-(b as i64));
                acc += &mul(v, &w);
            }
        }
        acc
    }

    /// Degree ratio of the node at depth `h - k` of a full tree of height
    /// `h` with this sequence attached at its leaves, for the `k` in `0..=h`
    /// maximising it; returns `(k, degbar)`.
    ///
    /// Between the ends of a run the ratio `2^k · Σ_{i≥k} x_i / 2^(i+1)` is
    /// monotone in `k`, so the run endpoints suffice.
    pub fn max_attach_level(&self, h: usize) -> (usize, Dyadic) {
        let mut candidates: Vec<usize> = self
            .spans()
            .flat_map(|(a, b, _)| [a, b])
            .filter(|&k| k <= h)
            .collect();
        candidates.push(h.min(self.n));
        candidates.sort_unstable();
        candidates.dedup();
        let mut best: Option<(usize, Dyadic)> = None;
        for k in candidates {
            let d = self.shift(k).degbar();
            if best.as_ref().map_or(true, |(_, b)| d > *b) {
                best = Some((k, d));
            }
        }
        best.unwrap_or((0, Dyadic::zero()))
    }

    /// Every `x_i · 2^(log s - i - 1)` is a nonnegative integer.
    pub fn is_plausible(&self, log_s: u32) -> bool {
        self.spans().all(|(_, b, v)| {
            v.is_zero() || (!v.is_negative() && v.shl(log_s as i64 - b as i64).is_integer())
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.runs.iter().all(|r| !r.value.is_negative())
    }

    pub fn all_integers(&self) -> bool {
        self.runs.iter().all(|r| r.value.is_integer())
    }

    /// `Σ x_i`.
    pub fn entry_sum(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for r in &self.runs {
            acc += &r.value.mul_int(r.len as i64);
        }
        acc
    }

    pub fn last_nonzero(&self) -> Option<usize> {
        self.spans().filter(|(_, _, v)| !v.is_zero()).map(|(_, b, _)| b - 1).last()
    }

    pub fn first(&self) -> Dyadic {
        self.get(0)
    }
}

fn mul(a: &Dyadic, b: &Dyadic) -> Dyadic {
    let exp = a.exponent() + b.exponent();
    Dyadic::new(a.mantissa() * b.mantissa(), exp)
}

impl fmt::Display for RunSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if r.len == 1 {
                write!(f, "{}", r.value)?;
            } else {
                write!(f, "{}×{}", r.value, r.len)?;
            }
        }
        write!(f, ")")
    }
}
