//! Known lower and upper bounds on `f(k)`, `f_bal(k)` and `l(k)` at a
//! concrete `k`, and which upper bounds a given unsatisfiable formula
//! witnesses.

use serde::Serialize;

use crate::error::{Error, Result};

use super::dpll::{dpll_sat, SatResult};
use super::formula::{clause_neighborhood_stats, occurrence_and_balance_stats, CnfFormula};

/// Largest `k` for which the `f64` evaluation of `⌊2^k / (e·k)⌋` is exact.
pub const MAX_TABLE_K: u32 = 48;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    /// `f`, `f_bal` or `l`.
    pub quantity: &'static str,
    /// `lower` or `upper`.
    pub side: &'static str,
    pub expression: &'static str,
    /// Exact value: an integer, or a reduced fraction `p/q`.
    pub value: String,
    pub approx: f64,
    /// Range of `k` for which the bound is claimed.
    pub holds_for: &'static str,
    pub applies_at_k: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundTable {
    pub k: u32,
    pub rows: Vec<BoundRow>,
    pub witness: Option<WitnessReport>,
}

/// What an unsatisfiable `k`-CNF shows: `f(k) < max var occurrences`,
/// `f_bal(k) < balanced s`, `l(k) < max neighborhood`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub width_ok: bool,
    /// `None` when DPLL could not decide within its limits.
    pub unsat: Option<bool>,
    pub max_var_occurrences: usize,
    pub balanced_s: usize,
    pub max_neighborhood: usize,
    /// `(expression, witnessed)` for every upper-bound row.
    pub witnessed: Vec<(String, bool)>,
}

fn floor_f64(x: f64) -> u64 {
    x.floor() as u64
}

/// `p / q` reduced, or `p` when `q` divides it.
fn fraction(p: u128, q: u128) -> String {
    fn gcd(a: u128, b: u128) -> u128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(p, q);
    if q / g == 1 {
        (p / g).to_string()
    } else {
        format!("{}/{}", p / g, q / g)
    }
}

/// `p/q − 1` for `p ≥ q`.
fn fraction_minus_one(p: u128, q: u128) -> String {
    fraction(p - q, q)
}

pub fn bound_table(k: u32) -> Result<BoundTable> {
    if !(3..=MAX_TABLE_K).contains(&k) {
        return Err(Error::OutOfRange(format!("bound table needs 3 ≤ k ≤ {MAX_TABLE_K}, got {k}")));
    }
    let e = std::f64::consts::E;
    let kf = k as f64;
    let p2 = |j: u32| 1u128 << j;
    let pow2_k = (k as u128).is_power_of_two();
    let scaled_pow2 = (64 * k as u128) % 63 == 0 && (64 * k as u128 / 63).is_power_of_two();
    let row = |quantity, side, expression, value: String, approx: f64, holds_for, applies_at_k| BoundRow {
        quantity,
        side,
        expression,
        value,
        approx,
        holds_for,
        applies_at_k,
    };
    let rows = vec![
        {
            let v = p2(k) as f64 / (e * kf);
            row("f", "lower", "⌊2^k/(e·k)⌋", floor_f64(v).to_string(), v.floor(), "k ≥ 3", true)
        },
        {
            let v = p2(k + 1) as f64 / (e * kf);
            row("f_bal", "lower", "⌊2^(k+1)/(e·k)⌋", floor_f64(v).to_string(), v.floor(), "k ≥ 3", true)
        },
        row(
            "f_bal",
            "upper",
            "2^k/k − 1",
            fraction_minus_one(p2(k), k as u128),
            p2(k) as f64 / kf - 1.0,
            "k a sufficiently large power of 2",
            pow2_k,
        ),
        row(
            "f_bal",
            "upper",
            "2·2^k/k − 1",
            fraction_minus_one(p2(k + 1), k as u128),
            p2(k + 1) as f64 / kf - 1.0,
            "k sufficiently large",
            true,
        ),
        row(
            "f",
            "upper",
            "2^(k−1)/(c·k) − 1, c = 64/63",
            fraction_minus_one(63 * p2(k - 1), 64 * k as u128),
            63.0 * p2(k - 1) as f64 / (64.0 * kf) - 1.0,
            "k sufficiently large with 64k/63 a power of 2",
            scaled_pow2,
        ),
        {
            let v = p2(k) as f64 / e;
            row("l", "lower", "⌊2^k/e⌋ − 1", (floor_f64(v) - 1).to_string(), v.floor() - 1.0, "k ≥ 3", true)
        },
        row(
            "l",
            "upper",
            "2^k − 2",
            (p2(k) - 2).to_string(),
            (p2(k) - 2) as f64,
            "k ≥ 1 (complete formula)",
            true,
        ),
        row(
            "l",
            "upper",
            "2^(k−1) − 1",
            (p2(k - 1) - 1).to_string(),
            (p2(k - 1) - 1) as f64,
            "k a sufficiently large power of 2",
            pow2_k,
        ),
        row(
            "l",
            "upper",
            "2^(k−1) + 2^(k−2)",
            (p2(k - 1) + p2(k - 2)).to_string(),
            (p2(k - 1) + p2(k - 2)) as f64,
            "k ≥ 3",
            true,
        ),
        row(
            "l",
            "upper",
            "2^(k−1)/c − 1, c = 64/63",
            fraction_minus_one(63 * p2(k - 1), 64),
            63.0 * p2(k - 1) as f64 / 64.0 - 1.0,
            "k sufficiently large with 64k/63 a power of 2",
            scaled_pow2,
        ),
    ];
    Ok(BoundTable { k, rows, witness: None })
}

/// The table plus the upper bounds witnessed by `f`.
pub fn bound_table_with_witness(k: u32, f: &CnfFormula) -> Result<BoundTable> {
    let mut table = bound_table(k)?;
    let occ = occurrence_and_balance_stats(f);
    let nb = clause_neighborhood_stats(f);
    let width_ok = f.is_k_cnf(k as usize);
    let unsat = match dpll_sat(f) {
        Ok(SatResult::Unsat) => Some(true),
        Ok(SatResult::Sat(_)) => Some(false),
        Err(_) => None,
    };
    let certain = width_ok && unsat == Some(true);
    let witnessed = table
        .rows
        .iter()
        .filter(|r| r.side == "upper")
        .map(|r| {
            let shown = match r.quantity {
                "f" => occ.max_var_occurrences as f64 - 1.0,
                "f_bal" => occ.balanced_s() as f64 - 1.0,
                _ => nb.max_sharing as f64 - 1.0,
            };
            (format!("{} ≤ {}", r.quantity, r.expression), certain && shown <= r.approx)
        })
        .collect();
    table.witness = Some(WitnessReport {
        width_ok,
        unsat,
        max_var_occurrences: occ.max_var_occurrences,
        balanced_s: occ.balanced_s(),
        max_neighborhood: nb.max_sharing,
        witnessed,
    });
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let t = bound_table(8).unwrap();
        assert_eq!(t.rows[0].value, "11");
        assert_eq!(t.rows[2].value, "31");
        assert_eq!(t.rows[8].value, "192");
        let t3 = bound_table(3).unwrap();
        assert_eq!(t3.rows[0].value, "0");
        assert_eq!(t3.rows[2].value, "5/3");
        assert!(bound_table(2).is_err());
    }
}
