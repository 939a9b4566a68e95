//! Plain-text structure tables.
//!
//! ```text
//! # so(3)
//! dim 3
//! label 1 A1_2
//! 1 2 3 -1/1
//! 2 1 3 1/1
//! ```
//!
//! Indices are 1-based. Values are rationals (`p`, `p/q` or decimals).
//! Antisymmetric partners are not filled in. `label` lines are optional.

use super::structure::StructureAlgebra;
use crate::arith::{format_rational, parse_rational, Rational, Scalar, ToleranceProfile};
use crate::error::{Error, Result};

/// Parses and validates a structure table.
pub fn ingest_structure_table(source: &str, tol: &ToleranceProfile) -> Result<StructureAlgebra<Rational>> {
    let alg = parse_structure_table(source)?;
    alg.validate(tol)?;
    Ok(alg)
}

/// Parses without validating.
pub fn parse_structure_table(source: &str) -> Result<StructureAlgebra<Rational>> {
    let mut dim: Option<usize> = None;
    let mut entries: Vec<(usize, usize, usize, Rational)> = Vec::new();
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut seen = std::collections::HashSet::new();

    for (lineno, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(line);
        let Some(&(col, first)) = tokens.first() else {
            continue;
        };
        let err = |column: usize, message: String| Error::Parse {
            line: lineno + 1,
            column,
            message,
        };
        match first {
            "dim" => {
                if dim.is_some() {
                    return Err(err(col, "duplicate `dim` header".into()));
                }
                let (c, tok) = expect_count(&tokens, 2, lineno, "dim <d>")?[1];
                let d: usize = tok
                    .parse()
                    .map_err(|_| err(c, format!("expected a dimension, found `{tok}`")))?;
                dim = Some(d);
                labels = vec![None; d];
            }
            "label" => {
                let d = dim.ok_or_else(|| err(col, "`label` before `dim` header".into()))?;
                let toks = expect_count(&tokens, 3, lineno, "label <i> <name>")?;
                let i = parse_index(toks[1], d, lineno)?;
                labels[i] = Some(toks[2].1.to_string());
            }
            _ => {
                let d = dim.ok_or_else(|| err(col, "expected `dim <d>` header first".into()))?;
                let toks = expect_count(&tokens, 4, lineno, "<i> <j> <k> <p>/<q>")?;
                let i = parse_index(toks[0], d, lineno)?;
                let j = parse_index(toks[1], d, lineno)?;
                let k = parse_index(toks[2], d, lineno)?;
                let (vc, vt) = toks[3];
                let v = parse_rational(vt).ok_or_else(|| err(vc, format!("expected a rational, found `{vt}`")))?;
                if !seen.insert((i, j, k)) {
                    return Err(err(col, format!("duplicate entry for ({}, {}, {})", i + 1, j + 1, k + 1)));
                }
                entries.push((i, j, k, v));
            }
        }
    }
    let dim = dim.ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing `dim <d>` header".into(),
    })?;
    let alg = StructureAlgebra::from_entries(dim, entries)?;
    let labels: Vec<String> = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.unwrap_or_else(|| format!("e{}", i + 1)))
        .collect();
    alg.with_labels(labels)
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn expect_count<'a>(
    tokens: &'a [(usize, &'a str)],
    n: usize,
    lineno: usize,
    shape: &str,
) -> Result<&'a [(usize, &'a str)]> {
    if tokens.len() != n {
        let column = tokens.get(n).map_or_else(|| tokens.last().map_or(1, |t| t.0), |t| t.0);
        return Err(Error::Parse {
            line: lineno + 1,
            column,
            message: format!("expected `{shape}`"),
        });
    }
    Ok(tokens)
}

fn parse_index((col, tok): (usize, &str), dim: usize, lineno: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(i) if i >= 1 && i <= dim => Ok(i - 1),
        _ => Err(Error::Parse {
            line: lineno + 1,
            column: col,
            message: format!("index `{tok}` is not in 1..={dim}"),
        }),
    }
}

/// Emits the table format. Values are always written as `p/q`, so
/// parsing the output reproduces the tensor exactly.
pub fn emit_structure_table<S: Scalar>(alg: &StructureAlgebra<S>) -> String {
    let mut out = format!("dim {}\n", alg.dim());
    for (i, l) in alg.labels().iter().enumerate() {
        out.push_str(&format!("label {} {}\n", i + 1, l));
    }
    for (i, j, k, v) in alg.entries() {
        out.push_str(&format!("{} {} {} {}\n", i + 1, j + 1, k + 1, format_rational(&v.to_rational())));
    }
    out
}
