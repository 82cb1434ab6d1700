//! Goal-directed planner for trees with every leaf at depth at least
//! `n - 1` and every horizon degree at most `s = 2^(n-1) / (c·n)`.
//!
//! The plan follows the three rewrite stages literally:
//!
//! * seed: realise `(0, 2×⌈r/2⌉, 0, 4×⌊r/2⌋, 0…)`;
//! * widen-twos: trade one block of fours for a two, `j = ⌊r/2⌋-1 … 0`;
//! * shrink-twos: remove one two at a time, `i = r-1 … 0`,
//!
//! ending at the all-zero sequence. Every printed intermediate sequence is
//! stored as the node's claim, and every arithmetic side condition is
//! checked at plan time with its concrete instantiation.

use serde::Serialize;

use super::families::{ConstructionParams, Family, Scale};
use super::plan::{check_plan_symbolic, BuildPlan, PlanBuilder, PlanReport};
use super::runs::RunSequence;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Smallest power of two `n` for which the `c = 1` plan passes every guard
/// and the symbolic check (found by [`sweep`] over `2^6 ..= 2^12`).
pub const SMALLEST_CERTIFIED_N: usize = 512;

/// Same for `c = 64/63`, over `n = 63·2^k`.
pub const SMALLEST_CERTIFIED_N_SCALED: usize = 1008;

struct Planner {
    b: PlanBuilder,
    n: i64,
    l: i64,
    m: i64,
    scale: Scale,
    step: String,
    case: String,
}

/// A printed run: value, count, and the count's expression for reports.
type Part<'a> = (i64, i64, &'a str);

impl Planner {
    fn guard(&self, inequality: String) -> Error {
        Error::GuardFailed {
            step: self.step.clone(),
            case: self.case.clone(),
            inequality,
        }
    }

    fn at(&mut self, step: String, case: &str) {
        self.step = step;
        self.case = case.to_string();
    }

    /// Builds a printed sequence; the implicit `0, …, 0` tail fills up to `n`.
    fn printed(&self, what: &str, parts: &[Part]) -> Result<RunSequence> {
        let mut runs = Vec::with_capacity(parts.len() + 1);
        let mut total = 0i64;
        for &(value, count, expr) in parts {
            if count < 0 {
                return Err(self.guard(format!("{what}: {expr} = {count} ≥ 0")));
            }
            total += count;
            runs.push((Dyadic::from_int(value), count as usize));
        }
        if total > self.n {
            return Err(self.guard(format!("{what}: printed length {total} ≤ n = {}", self.n)));
        }
        runs.push((Dyadic::zero(), (self.n - total) as usize));
        Ok(RunSequence::new(runs))
    }

    fn tag(&self, role: &str) -> String {
        if self.case.is_empty() {
            format!("{}: {role}", self.step)
        } else {
            format!("{} {}: {role}", self.step, self.case)
        }
    }

    fn kraft(&mut self, y: &RunSequence, what: &str) -> Result<usize> {
        let tag = self.tag(&format!("kraft-merge {what}"));
        self.b.kraft(y, &tag).map_err(|e| match e {
            Error::GuardFailed { inequality, .. } => self.guard(format!("{what} = {y} via kraft-merge: {inequality}")),
            other => other,
        })
    }

    fn check_degbar(&self, what: &str, seq: &RunSequence) -> Result<()> {
        let d = seq.degbar();
        if d > Dyadic::one() {
            return Err(self.guard(format!("degbar of {what} = {:.6} ≤ 1", d.to_f64())));
        }
        if !seq.is_plausible(self.l as u32) {
            return Err(self.guard(format!("{what} = {seq} is plausible")));
        }
        Ok(())
    }

    /// Joins `left` and `right` under a new root claimed to realise `target`.
    fn join(&mut self, left: usize, right: usize, target: RunSequence, what: &str) -> Result<usize> {
        for side in [left, right] {
            let x0 = self.b.claimed(side).first();
            if !x0.is_zero() {
                return Err(self.guard(format!("join child of {what} starts with x_0 = {x0} = 0")));
            }
        }
        let value = RunSequence::join(self.b.claimed(left), self.b.claimed(right))?;
        if value != target {
            return Err(self.guard(format!("join gives {value} = printed {what} {target}")));
        }
        self.check_degbar(what, &target)?;
        let tag = self.tag(&format!("join → {what}"));
        self.b.join(left, right, Some(target), &tag)
    }

    /// Strips `h` leading ones: a full tree of height `h` over `child`.
    fn attach(&mut self, child: usize, h: i64, target: RunSequence, what: &str) -> Result<usize> {
        if h < 0 || h >= self.n {
            return Err(self.guard(format!("attach height for {what}: 0 ≤ {h} ≤ n - 1")));
        }
        let c = self.b.claimed(child).clone();
        let value = c.attach(h as usize)?;
        if value != target {
            return Err(self.guard(format!("attach({h}) gives {value} = printed {what} {target}")));
        }
        let (k, worst) = c.max_attach_level(h as usize);
        if worst > Dyadic::one() {
            return Err(self.guard(format!(
                "strip-ones level {} of {what}: degbar = {:.6} ≤ 1",
                h as usize - k,
                worst.to_f64()
            )));
        }
        self.check_degbar(what, &target)?;
        let tag = self.tag(&format!("strip-ones ×{h} → {what}"));
        self.b.attach(child, h as usize, Some(target), &tag)
    }

    fn seed(&mut self) -> Result<usize> {
        let (n, l, m) = (self.n, self.l, self.m);
        let r = l / 2 - 1;
        let (fr, cr) = (r / 2, (r + 1) / 2);
        self.at("seed".into(), "");
        let x = cr + 2 * fr - m / 2;
        let goal = self.printed("goal", &[(0, 1, "1"), (2, cr, "⌈r/2⌉"), (0, 1, "1"), (4, fr, "⌊r/2⌋")])?;
        self.check_degbar("goal", &goal)?;
        let a = self.printed(
            "A",
            &[
                (1, l - r - 4, "log s - r - 4"),
                (0, 1, "1"),
                (2, cr, "⌈r/2⌉"),
                (0, 1, "1"),
                (4, fr, "⌊r/2⌋"),
                (0, n - l + 2, "n - log s + 2"),
            ],
        )?;
        let t = self.printed(
            "T",
            &[
                (0, l - r - 3, "log s - r - 3"),
                (0, 1, "1"),
                (0, x, "⌈r/2⌉ + 2⌊r/2⌋ - cn/2"),
                (4, m / 2 - 2 * fr, "cn/2 - 2⌊r/2⌋"),
                (0, 1, "1"),
                (8, fr, "⌊r/2⌋"),
                (0, n - l + 1, "n - log s + 1"),
            ],
        )?;
        let tp = self.printed(
            "T'",
            &[(0, 1, "1"), (2, l - r - 4, "log s - r - 4"), (0, 1, "1"), (4, x, "⌈r/2⌉ + 2⌊r/2⌋ - cn/2")],
        )?;
        let h = m / 2 - fr;
        let tpp = self.printed(
            "T''",
            &[
                (1, h, "cn/2 - ⌊r/2⌋"),
                (0, 1, "1"),
                (2, l - r - 4, "log s - r - 4"),
                (0, 1, "1"),
                (4, x, "⌈r/2⌉ + 2⌊r/2⌋ - cn/2"),
                (0, n - l + 2, "n - log s + 2"),
            ],
        )?;
        let t_id = self.kraft(&t, "T")?;
        let tpp_id = self.kraft(&tpp, "T''")?;
        let tp_id = self.attach(tpp_id, h, tp, "T'")?;
        let a_id = self.join(t_id, tp_id, a, "A")?;
        self.attach(a_id, l - r - 4, goal, "goal")
    }

    /// From `(0, 2×(r-j-1), 0, 4×(j+1), 0…)` to `(0, 2×(r-j), 0, 4×j, 0…)`.
    fn widen(&mut self, prev: usize, j: i64) -> Result<usize> {
        let (l, m) = (self.l, self.m);
        let r = l / 2 - 1;
        let case1 = 8 * j <= m;
        self.at(
            format!("widen-twos j={j}"),
            if case1 { "case 1 (j ≤ cn/8)" } else { "case 2 (j ≥ cn/8)" },
        );
        let goal = self.printed("goal", &[(0, 1, "1"), (2, r - j, "r - j"), (0, 1, "1"), (4, j, "j")])?;
        let b = self.printed(
            "B",
            &[(1, r - j - 1, "r - j - 1"), (0, 1, "1"), (2, r - j, "r - j"), (0, 1, "1"), (4, j, "j")],
        )?;
        let q = self.printed(
            "Q",
            &[
                (0, 1, "1"),
                (0, r - j - 1, "r - j - 1"),
                (0, 1, "1"),
                (0, j + 1, "j + 1"),
                (4, r - 2 * j - 1, "r - 2j - 1"),
                (0, 1, "1"),
                (8, j, "j"),
            ],
        )?;
        let (t, tp, tpp, h) = if case1 {
            let h = 4 * m - 8 * r + 8;
            (
                self.printed(
                    "T",
                    &[
                        (0, r + 3, "r + 3"),
                        (0, r - m / 4 - 1, "r - cn/4 - 1"),
                        (8, m / 4 - 2 * j, "cn/4 - 2j"),
                        (0, 1, "1"),
                        (16, j, "j"),
                    ],
                )?,
                self.printed("T'", &[(0, r + 3, "r + 3"), (8, r - m / 4 - 1, "r - cn/4 - 1")])?,
                self.printed(
                    "T''",
                    &[(1, h, "4cn - 8r + 8"), (0, r + 3, "r + 3"), (8, r - m / 4 - 1, "r - cn/4 - 1")],
                )?,
                h,
            )
        } else {
            let h = m / 8;
            (
                self.printed(
                    "T",
                    &[
                        (0, r + 3, "r + 3"),
                        (0, r - 2 * j - 1, "r - 2j - 1"),
                        (0, 1, "1"),
                        (0, j - m / 8, "j - cn/8"),
                        (16, m / 8, "cn/8"),
                    ],
                )?,
                self.printed(
                    "T'",
                    &[(0, r + 3, "r + 3"), (8, r - 2 * j - 1, "r - 2j - 1"), (0, 1, "1"), (16, j - m / 8, "j - cn/8")],
                )?,
                self.printed(
                    "T''",
                    &[
                        (1, h, "cn/8"),
                        (0, r + 3, "r + 3"),
                        (8, r - 2 * j - 1, "r - 2j - 1"),
                        (0, 1, "1"),
                        (16, j - m / 8, "j - cn/8"),
                    ],
                )?,
                h,
            )
        };
        let t_id = self.kraft(&t, "T")?;
        let tpp_id = self.kraft(&tpp, "T''")?;
        let tp_id = self.attach(tpp_id, h, tp, "T'")?;
        let q_id = self.join(t_id, tp_id, q, "Q")?;
        let b_id = self.join(prev, q_id, b, "B")?;
        self.attach(b_id, r - j - 1, goal, "goal")
    }

    /// From `(0, 2×(i+1), 0…)` to `(0, 2×i, 0…)`.
    fn shrink(&mut self, prev: usize, i: i64) -> Result<usize> {
        let (n, l, m) = (self.n, self.l, self.m);
        let case1 = 4 * i <= m;
        self.at(
            format!("shrink-twos i={i}"),
            if case1 { "case 1 (i ≤ cn/4)" } else { "case 2 (i ≥ cn/4)" },
        );
        let goal = self.printed("goal", &[(0, 1, "1"), (2, i, "i")])?;
        let b = self.printed("B", &[(1, l - i - 3, "log s - i - 3"), (0, 1, "1"), (2, i, "i")])?;
        let q = self.printed(
            "Q",
            &[(0, i + 2, "i + 2"), (2, l - 2 * i - 4, "log s - 2i - 4"), (0, 1, "1"), (4, i, "i")],
        )?;
        let (t, tp, tpp, h) = if case1 {
            // The ones count is printed as n/2 - i + 1 for c = 1 and as
            // cn/2 - i for c = 64/63.
            let (h, h_expr) = match self.scale {
                Scale::One => (n / 2 - i + 1, "n/2 - i + 1"),
                Scale::SixtyFourOverSixtyThree => (m / 2 - i, "cn/2 - i"),
            };
            (
                self.printed(
                    "T",
                    &[
                        (0, i + 3, "i + 3"),
                        (0, l - m / 2 - 4, "log s - cn/2 - 4"),
                        (4, m / 2 - 2 * i, "cn/2 - 2i"),
                        (0, 1, "1"),
                        (8, i, "i"),
                    ],
                )?,
                self.printed("T'", &[(0, i + 3, "i + 3"), (4, l - m / 2 - 4, "log s - cn/2 - 4")])?,
                self.printed(
                    "T''",
                    &[(1, h, h_expr), (0, i + 3, "i + 3"), (4, l - m / 2 - 4, "log s - cn/2 - 4")],
                )?,
                h,
            )
        } else {
            let h = m / 4;
            (
                self.printed(
                    "T",
                    &[
                        (0, i + 3, "i + 3"),
                        (0, l - 2 * i - 4, "log s - 2i - 4"),
                        (0, 1, "1"),
                        (0, i - m / 4, "i - cn/4"),
                        (8, m / 4, "cn/4"),
                    ],
                )?,
                self.printed(
                    "T'",
                    &[(0, i + 3, "i + 3"), (4, l - 2 * i - 4, "log s - 2i - 4"), (0, 1, "1"), (8, i - m / 4, "i - cn/4")],
                )?,
                self.printed(
                    "T''",
                    &[
                        (1, h, "cn/4"),
                        (0, i + 3, "i + 3"),
                        (4, l - 2 * i - 4, "log s - 2i - 4"),
                        (0, 1, "1"),
                        (8, i - m / 4, "i - cn/4"),
                    ],
                )?,
                h,
            )
        };
        let t_id = self.kraft(&t, "T")?;
        let tpp_id = self.kraft(&tpp, "T''")?;
        let tp_id = self.attach(tpp_id, h, tp, "T'")?;
        let q_id = self.join(t_id, tp_id, q, "Q")?;
        let b_id = self.join(prev, q_id, b, "B")?;
        self.attach(b_id, l - i - 3, goal, "goal")
    }
}

/// Plans a tree realising the all-zero sequence for `params`, or reports the
/// first side condition that fails at this concrete `n`.
pub fn plan_strong(params: &ConstructionParams) -> Result<BuildPlan> {
    if params.family != Family::RegularStrong {
        return Err(Error::Precondition("plan_strong needs regular-strong parameters".into()));
    }
    let mut p = Planner {
        b: PlanBuilder::new(params.n, params.log_s),
        n: params.n as i64,
        l: params.log_s as i64,
        m: params.m() as i64,
        scale: params.scale,
        step: "setup".into(),
        case: String::new(),
    };
    let r = params.r();
    if r < 1 {
        return Err(p.guard(format!("r = ⌊log s / 2⌋ - 1 = {r} ≥ 1")));
    }
    if p.m % 8 != 0 {
        return Err(p.guard(format!("cn = {} divisible by 8", p.m)));
    }
    let mut cur = p.seed()?;
    for j in (0..r / 2).rev() {
        cur = p.widen(cur, j)?;
    }
    for i in (0..r).rev() {
        cur = p.shrink(cur, i)?;
    }
    Ok(p.b.finish(cur))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub n: usize,
    pub c: String,
    pub log_s: u32,
    pub r: i64,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_guard: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_nodes: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<usize>,
}

/// Plans and symbolically checks one `n`, keeping the full report.
pub fn plan_and_check(n: usize, scale: Scale) -> Result<(BuildPlan, PlanReport)> {
    let params = ConstructionParams::strong(n, scale)?;
    let plan = plan_strong(&params)?;
    let report = check_plan_symbolic(&plan);
    Ok((plan, report))
}

pub fn sweep_entry(n: usize, scale: Scale) -> SweepEntry {
    let mut e = SweepEntry {
        n,
        c: scale.to_string(),
        log_s: 0,
        r: 0,
        certified: false,
        failing_guard: None,
        plan_nodes: None,
        predicted_nodes: None,
        violations: None,
    };
    let params = match ConstructionParams::strong(n, scale) {
        Ok(p) => p,
        Err(err) => {
            e.failing_guard = Some(err.to_string());
            return e;
        }
    };
    e.log_s = params.log_s;
    e.r = params.r();
    match plan_strong(&params) {
        Err(err) => e.failing_guard = Some(err.to_string()),
        Ok(plan) => {
            let rep = check_plan_symbolic(&plan);
            e.certified = rep.ok;
            e.plan_nodes = Some(rep.plan_nodes);
            e.predicted_nodes = Some(rep.predicted_nodes.clone());
            e.violations = Some(rep.violations.len());
            if !rep.ok {
                e.failing_guard = rep.violations.first().cloned();
            }
        }
    }
    e
}

/// Runs the planner and the symbolic checker for every `n` in `ns`.
pub fn sweep(ns: &[usize], scale: Scale) -> Vec<SweepEntry> {
    ns.iter().map(|&n| sweep_entry(n, scale)).collect()
}

/// Hand-sized exact plan for `n = 4`, `s = 4`: three single nodes and a
/// pair are joined into `(1, 1, 2, 0)`, whose two leading ones are
/// stripped by a full tree of height 2, giving `(2, 0, 0, 0)`.
pub fn toy_plan() -> BuildPlan {
    let mut b = PlanBuilder::new(4, 2);
    let z1 = b.base_full(0, "single").unwrap();
    let z2 = b.base_full(0, "single").unwrap();
    let pair = b.join(z1, z2, None, "join → (0, 0, 4, 0)").unwrap();
    let z3 = b.base_full(0, "single").unwrap();
    let j2 = b.join(pair, z3, None, "join → (0, 2, 2, 0)").unwrap();
    let z4 = b.base_full(0, "single").unwrap();
    let j3 = b.join(j2, z4, None, "join → (1, 1, 2, 0)").unwrap();
    let root = b.attach(j3, 2, None, "strip-ones ×2 → (2, 0, 0, 0)").unwrap();
    b.finish(root)
}

/// Exact merge for `n = 4`, `s = 4`: four single nodes at depth 2.
pub fn toy_merge_plan() -> BuildPlan {
    let mut b = PlanBuilder::new(4, 2);
    let y = RunSequence::from_ints(&[(0, 1), (4, 1), (0, 2)]);
    let k = b.kraft(&y, "kraft-merge (0, 4, 0, 0)").unwrap();
    b.finish(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::plan::{execute_plan_checked, predicted_sizes};
    use crate::tree::verify_tree;

    #[test]
    fn toy_plan_executes_and_verifies() {
        let plan = toy_plan();
        let rep = check_plan_symbolic(&plan);
        assert!(rep.ok, "{:?}", rep.violations);
        let (t, checks) = execute_plan_checked(&plan, 1 << 20).unwrap();
        assert!(checks.iter().all(|c| c.matches == Some(true)), "{checks:?}");
        assert!(verify_tree(&t, 4, 4).passes);
        assert_eq!(Some(&num_bigint::BigUint::from(t.len())), predicted_sizes(&plan)[plan.root].as_exact());
    }

    #[test]
    fn n64_reports_a_guard_or_certifies() {
        let params = ConstructionParams::strong(64, Scale::One).unwrap();
        assert_eq!(params.r(), 27);
        match plan_strong(&params) {
            Ok(plan) => {
                let _ = check_plan_symbolic(&plan);
            }
            Err(Error::GuardFailed { step, inequality, .. }) => {
                assert!(!step.is_empty());
                assert!(!inequality.is_empty());
            }
            Err(e) => panic!("{e}"),
        }
    }
}
