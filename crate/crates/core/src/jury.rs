//! Classical Jury stability table, in exact or float arithmetic.
//!
//! Rows hold ascending powers `x^0..x^m`. Each reduced row comes from the
//! previous one by `b_k = r_0 r_k - r_m r_{m-k}` (`k = 0..m-1`). Rows are
//! printed in pairs (row, reversed row) down to the final row of length 3,
//! which is not repeated; a degree-`n` table therefore has `2n - 3` rows for
//! `n >= 2`.
//!
//! The polynomial is Schur stable iff `p(1) > 0`, `(-1)^n p(-1) > 0`,
//! `|a_0| < 1` and `|r_0| > |r_m|` for every reduced row of length >= 3.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::engine::{necessary_checks, Condition, NecessaryChecks};
use crate::poly::MonicPolynomial;
use crate::scalar::Coeff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JuryVerdict {
    Stable,
    Unstable,
    /// Some condition holds with equality: a reduced row would start with
    /// zero, or `p` has a root on the unit circle. Never Schur stable.
    Singular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JuryTable<T> {
    pub rows: Vec<Vec<T>>,
    pub necessary: NecessaryChecks,
    /// One entry per reduced row of length >= 3: `|r_0| > |r_m|`.
    pub row_conditions: Vec<Condition>,
    pub verdict: JuryVerdict,
}

pub fn jury_table<T: Coeff>(p: &MonicPolynomial<T>) -> JuryTable<T> {
    let n = p.degree();
    let first: Vec<T> = (0..=n).map(|k| p.coeff(k)).collect();
    let necessary = necessary_checks(p);

    let mut rows = vec![first.clone()];
    let mut row_conditions = Vec::new();
    let mut current = first;
    while current.len() > 3 {
        rows.push(current.iter().rev().cloned().collect());
        let m = current.len() - 1;
        let next: Vec<T> = (0..m)
            .map(|k| current[0].clone() * current[k].clone() - current[m].clone() * current[m - k].clone())
            .collect();
        let (head, tail) = (next[0].abs(), next[m - 1].abs());
        row_conditions.push(if head > tail {
            Condition::Holds
        } else if head == tail {
            Condition::Equality
        } else {
            Condition::Violated
        });
        rows.push(next.clone());
        current = next;
    }
    if n == 1 {
        rows.push(current.iter().rev().cloned().collect());
    }

    let ordered = [necessary.at_one, necessary.at_minus_one, necessary.constant_term]
        .into_iter()
        .chain(row_conditions.iter().copied());
    let mut verdict = JuryVerdict::Stable;
    for c in ordered {
        match c {
            Condition::Holds => continue,
            Condition::Equality => verdict = JuryVerdict::Singular,
            Condition::Violated => verdict = JuryVerdict::Unstable,
        }
        break;
    }

    JuryTable {
        rows,
        necessary,
        row_conditions,
        verdict,
    }
}

pub fn jury_verdict<T: Coeff>(p: &MonicPolynomial<T>) -> JuryVerdict {
    jury_table(p).verdict
}

impl<T: Coeff> JuryTable<T> {
    pub fn degree(&self) -> usize {
        self.rows[0].len() - 1
    }

    /// One row per line, entries comma separated (exact fractions in the
    /// rational backend).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Coeff::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Aligned text table: a `Step` column, one column per power `x^0..x^n`,
    /// and a rule after each row pair.
    pub fn to_text_table(&self) -> String {
        let n = self.degree();
        let mut header = vec!["Step".to_string()];
        header.extend((0..=n).map(|k| format!("x^{k}")));
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut cells = vec![(i + 1).to_string()];
                cells.extend(row.iter().map(Coeff::render));
                cells.resize(n + 2, String::new());
                cells
            })
            .collect();
        let widths: Vec<usize> = (0..n + 2)
            .map(|c| {
                body.iter()
                    .map(|r| r[c].len())
                    .chain(std::iter::once(header[c].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let render = |cells: &[String]| {
            let mut line = format!("{:>w$} |", cells[0], w = widths[0]);
            for (c, cell) in cells.iter().enumerate().skip(1) {
                let _ = write!(line, " {:>w$}", cell, w = widths[c]);
            }
            line.trim_end().to_string()
        };
        let rule = "-".repeat(widths.iter().sum::<usize>() + widths.len() + 1);
        let mut out = String::new();
        out.push_str(&render(&header));
        out.push('\n');
        out.push_str(&rule.replace('-', "="));
        out.push('\n');
        for (i, cells) in body.iter().enumerate() {
            out.push_str(&render(cells));
            out.push('\n');
            if i % 2 == 1 && i + 1 < body.len() {
                out.push_str(&rule);
                out.push('\n');
            }
        }
        out
    }
}
