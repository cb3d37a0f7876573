//! The alist text format for sparse binary matrices.
//!
//! ```text
//! n m
//! max_column_weight max_row_weight
//! <n column weights>
//! <m row weights>
//! <n lines: 1-based row indices of each column, zero padded>
//! <m lines: 1-based column indices of each row, zero padded>
//! ```
//!
//! Columns are variables and rows are checks. Both adjacency lists must
//! describe the same matrix.

use std::fmt::Write as _;

use lpdec_core::ParityCheckCode;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("alist line {line}: {message}")]
pub struct AlistError {
    pub line: usize,
    pub message: String,
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as integers, with its 1-based line number.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>), AlistError> {
        for (idx, text) in self.inner.by_ref() {
            self.last = idx + 1;
            if text.trim().is_empty() {
                continue;
            }
            let nums = text
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| AlistError {
                    line: idx + 1,
                    message: format!("{what}: {e}"),
                })?;
            return Ok((idx + 1, nums));
        }
        Err(AlistError {
            line: self.last + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn err(line: usize, message: impl Into<String>) -> AlistError {
    AlistError {
        line,
        message: message.into(),
    }
}

/// Reads exactly `count` numbers, which may span several lines.
fn read_list(lines: &mut Lines<'_>, count: usize, what: &str) -> Result<(usize, Vec<usize>), AlistError> {
    let (line, mut out) = lines.next_numbers(what)?;
    while out.len() < count {
        let (_, more) = lines.next_numbers(what)?;
        out.extend(more);
    }
    if out.len() != count {
        return Err(err(line, format!("{what}: expected {count} entries, found {}", out.len())));
    }
    Ok((line, out))
}

/// Reads one neighbor line: `degree` 1-based indices in `1..=bound`, then zero padding.
fn read_neighbors(
    lines: &mut Lines<'_>,
    degree: usize,
    bound: usize,
    what: &str,
) -> Result<(usize, Vec<usize>), AlistError> {
    let (line, nums) = lines.next_numbers(what)?;
    if nums.len() < degree {
        return Err(err(line, format!("{what}: expected {degree} indices, found {}", nums.len())));
    }
    if nums[degree..].iter().any(|&v| v != 0) {
        return Err(err(line, format!("{what}: entries beyond the stated degree must be 0")));
    }
    let mut out = Vec::with_capacity(degree);
    for &v in &nums[..degree] {
        if v == 0 || v > bound {
            return Err(err(line, format!("{what}: index {v} outside 1..={bound}")));
        }
        out.push(v - 1);
    }
    Ok((line, out))
}

pub fn load_alist(text: &str) -> Result<ParityCheckCode, AlistError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (hline, header) = lines.next_numbers("header")?;
    let [n, m] = header[..] else {
        return Err(err(hline, "header must be \"n m\""));
    };
    let (mline, maxes) = lines.next_numbers("maximum degrees")?;
    let [max_dv, max_dc] = maxes[..] else {
        return Err(err(mline, "second line must be \"max_dv max_dc\""));
    };
    let (vline, var_deg) = read_list(&mut lines, n, "column weights")?;
    let (cline, check_deg) = read_list(&mut lines, m, "row weights")?;
    if let Some(&d) = var_deg.iter().find(|&&d| d > max_dv) {
        return Err(err(vline, format!("column weight {d} exceeds maximum {max_dv}")));
    }
    if let Some(&d) = check_deg.iter().find(|&&d| d > max_dc) {
        return Err(err(cline, format!("row weight {d} exceeds maximum {max_dc}")));
    }

    let mut var_lists = Vec::with_capacity(n);
    for (i, &d) in var_deg.iter().enumerate() {
        let (line, mut list) = read_neighbors(&mut lines, d, m, &format!("column {}", i + 1))?;
        list.sort_unstable();
        var_lists.push((line, list));
    }
    let mut checks = Vec::with_capacity(m);
    let mut check_lines = Vec::with_capacity(m);
    for (j, &d) in check_deg.iter().enumerate() {
        let (line, list) = read_neighbors(&mut lines, d, n, &format!("row {}", j + 1))?;
        checks.push(list);
        check_lines.push(line);
    }

    let code = ParityCheckCode::from_check_neighbors(n, checks).map_err(|e| {
        let line = check_lines.first().copied().unwrap_or(hline);
        err(line, e.to_string())
    })?;
    for (i, (line, list)) in var_lists.iter().enumerate() {
        if code.var_neighbors(i) != list.as_slice() {
            return Err(err(
                *line,
                format!("column {} disagrees with the row lists", i + 1),
            ));
        }
    }
    Ok(code)
}

/// Writes `code` in alist form with zero padding to the maximum degrees.
pub fn serialize_alist(code: &ParityCheckCode) -> String {
    let (n, m) = (code.n(), code.m());
    let (max_dv, max_dc) = (code.max_var_degree(), code.max_check_degree());
    let mut out = String::new();
    let join = |it: &mut dyn Iterator<Item = usize>| it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(out, "{n} {m}").unwrap();
    writeln!(out, "{max_dv} {max_dc}").unwrap();
    writeln!(out, "{}", join(&mut (0..n).map(|i| code.var_neighbors(i).len()))).unwrap();
    writeln!(out, "{}", join(&mut code.checks().map(|r| r.len()))).unwrap();
    for i in 0..n {
        let list = code.var_neighbors(i);
        let padded = list.iter().map(|&j| j + 1).chain(std::iter::repeat_n(0, max_dv - list.len()));
        writeln!(out, "{}", join(&mut padded.into_iter())).unwrap();
    }
    for row in code.checks() {
        let padded = row.iter().map(|&i| i + 1).chain(std::iter::repeat_n(0, max_dc - row.len()));
        writeln!(out, "{}", join(&mut padded.into_iter())).unwrap();
    }
    out
}
