//! Edge-list text format.
//!
//! ```text
//! # comment lines start with '#'
//! 4 3
//! 0 1 2.5
//! 1 2
//! 2 3 0.75
//! ```
//!
//! The first non-comment line is `n m`, followed by exactly `m` pair lines
//! `u v [w]` with `0 <= u < v < n` and `w >= 0`; a missing weight means 1.
//! Repeated pairs are rejected.

use std::fmt::Write as _;

use hc_core::SimilarityGraph;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line 'n m'")]
    MissingHeader,
    #[error("header declares {declared} pairs but {found} were given")]
    PairCount { declared: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] hc_core::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, FormatError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} '{tok}'")))
}

/// Parses the edge-list format.
pub fn parse_edge_list(text: &str) -> Result<SimilarityGraph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hline, "vertex count")?;
    let m: usize = field(toks.next(), hline, "pair count")?;
    if toks.next().is_some() {
        return Err(syntax(hline, "header must be 'n m'"));
    }
    if n == 0 {
        return Err(syntax(hline, "vertex count must be positive"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashMap::with_capacity(m);
    for (line, text) in lines {
        let mut toks = text.split_whitespace();
        let u: usize = field(toks.next(), line, "vertex")?;
        let v: usize = field(toks.next(), line, "vertex")?;
        let w: f64 = match toks.next() {
            Some(tok) => field(Some(tok), line, "weight")?,
            None => 1.0,
        };
        if toks.next().is_some() {
            return Err(syntax(line, "expected 'u v [w]'"));
        }
        if u >= v || v >= n {
            return Err(syntax(line, format!("pair ({u}, {v}) needs 0 <= u < v < {n}")));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(syntax(line, format!("weight {w} must be finite and nonnegative")));
        }
        if let Some(first) = seen.insert((u, v), line) {
            return Err(syntax(
                line,
                format!("pair ({u}, {v}) given more than once (first on line {first})"),
            ));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(FormatError::PairCount {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(SimilarityGraph::from_edges(n, edges)?)
}

/// Writes the positive-weight pairs; weights are omitted when all are 1.
pub fn write_edge_list(g: &SimilarityGraph) -> String {
    let unit = g.pairs().all(|(_, _, w)| w == 1.0);
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.pair_count());
    for (u, v, w) in g.pairs() {
        if unit {
            let _ = writeln!(out, "{u} {v}");
        } else {
            let _ = writeln!(out, "{u} {v} {w}");
        }
    }
    out
}
