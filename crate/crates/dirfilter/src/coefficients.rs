//! The minimax coefficient table as a text file.
//!
//! One polynomial per line: `role q epsilon a0 .. aq`, whitespace separated.
//! Blank lines and `#` comments are ignored.

use std::path::Path;

use anyhow::{bail, Context, Result};
use dirfilter_core::{MinimaxPoly, MinimaxRole};

/// The table shipped in `data/minimax_coefficients.txt`.
pub const SHIPPED_TABLE: &str = include_str!("../data/minimax_coefficients.txt");

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientRow {
    pub degree: usize,
    pub poly: MinimaxPoly,
}

pub fn parse_table(text: &str) -> Result<Vec<CoefficientRow>> {
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ctx = || format!("coefficient table line {}", n + 1);
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 4 {
            bail!("{}: expected `role q epsilon a0 ..`", ctx());
        }
        let role: MinimaxRole = fields[0].parse().with_context(ctx)?;
        let degree: usize = fields[1].parse().with_context(ctx)?;
        let bound: f64 = fields[2].parse().with_context(ctx)?;
        let coeffs = fields[3..]
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(ctx)?;
        if coeffs.len() != degree + 1 {
            bail!(
                "{}: degree {degree} needs {} coefficients, found {}",
                ctx(),
                degree + 1,
                coeffs.len()
            );
        }
        let poly = MinimaxPoly::new(role, &coeffs, bound).with_context(ctx)?;
        rows.push(CoefficientRow { degree, poly });
    }
    Ok(rows)
}

pub fn read_table(path: &Path) -> Result<Vec<CoefficientRow>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_table(&text)
}

pub fn shipped_table() -> Vec<CoefficientRow> {
    parse_table(SHIPPED_TABLE).expect("shipped coefficient table parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_table_matches_embedded_constants() {
        let rows = shipped_table();
        assert_eq!(rows.len(), 6);
        for row in rows {
            let builtin = MinimaxPoly::builtin(row.poly.role(), row.degree).unwrap();
            assert_eq!(row.poly, builtin, "{} q={}", row.poly.role(), row.degree);
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_table("acos 2 1e-3 1 2").is_err());
        assert!(parse_table("atan 2 1e-3 1 2 3").is_err());
        assert!(parse_table("acos two 1e-3 1 2 3").is_err());
        assert!(parse_table("# only a comment\n\n").unwrap().is_empty());
    }
}
