//! DIMACS `cnf` reading and writing.

use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};

use super::formula::{CnfFormula, Literal};

/// `p cnf <vars> <clauses>` followed by one zero-terminated line per clause,
/// in clause order, literals ascending by variable.
pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars(), f.num_clauses());
    for c in f.clauses() {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

/// As [`write_dimacs`] with `c ` comment lines before the header.
pub fn write_dimacs_with_comments(f: &CnfFormula, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    out + &write_dimacs(f)
}

pub fn read_dimacs(mut r: impl Read) -> Result<CnfFormula> {
    let mut text = String::new();
    r.read_to_string(&mut text)
        .map_err(|e| Error::Dimacs { line: 0, message: e.to_string() })?;
    parse_dimacs(&text)
}

/// Parses DIMACS text. Clauses may span lines; a `%` line ends the input.
/// Tautological clauses are admitted (the result is permissive).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let err = |line: usize, message: String| Error::Dimacs { line, message };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut current_start = 0;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "second header".into()));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(err(line_no, format!("malformed header `{line}`")));
            }
            let vars = parts[2]
                .parse()
                .map_err(|_| err(line_no, format!("bad variable count `{}`", parts[2])))?;
            let count = parts[3]
                .parse()
                .map_err(|_| err(line_no, format!("bad clause count `{}`", parts[3])))?;
            header = Some((vars, count, line_no));
            continue;
        }
        let Some((vars, _, _)) = header else {
            return Err(err(line_no, "clause before `p cnf` header".into()));
        };
        for tok in line.split_whitespace() {
            let l: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("bad literal `{tok}`")))?;
            if l == 0 {
                let mut c = std::mem::take(&mut current);
                c.sort_by_key(|&l| (l.unsigned_abs(), l));
                if c.windows(2).any(|w| w[0] == w[1]) {
                    return Err(err(line_no, "repeated literal in clause".into()));
                }
                clauses.push(c);
                continue;
            }
            if l.unsigned_abs() as usize > vars {
                return Err(err(line_no, format!("literal {l} exceeds declared {vars} variables")));
            }
            if current.is_empty() {
                current_start = line_no;
            }
            current.push(l as Literal);
        }
    }
    let Some((vars, count, header_line)) = header else {
        return Err(err(last_line.max(1), "missing `p cnf` header".into()));
    };
    if !current.is_empty() {
        return Err(err(current_start, "unterminated clause (missing trailing 0)".into()));
    }
    if clauses.len() != count {
        return Err(err(
            header_line,
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new_permissive(vars, clauses).map_err(|e| err(header_line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_canonical_text() {
        let f = CnfFormula::new(2, vec![vec![-2, 1]]).unwrap();
        assert_eq!(write_dimacs(&f), "p cnf 2 1\n1 -2 0\n");
        let g = CnfFormula::new(0, vec![vec![]]).unwrap();
        assert_eq!(write_dimacs(&g), "p cnf 0 1\n0\n");
    }

    #[test]
    fn reads_multiline_and_comments() {
        let f = parse_dimacs("c hi\np cnf 3 2\n1 -3\n 2 0 -1 0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2, -3], vec![-1]]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("1 0\n", 1),
            ("p cnf x 1\n", 1),
            ("p cnf 2 1\n1 y 0\n", 2),
            ("p cnf 2 1\n1 2\n", 2),
            ("p cnf 2 2\n1 2 0\n", 1),
            ("p cnf 2 1\n\n3 0\n", 3),
            ("p cnf 2 1\n1 1 0\n", 2),
        ];
        for (text, line) in cases {
            match parse_dimacs(text) {
                Err(Error::Dimacs { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
