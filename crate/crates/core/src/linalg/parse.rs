//! CSV input for exact rational matrices: comma-separated `p/q` or integer
//! tokens, one matrix row per line, blank lines separating matrices.
//! Malformed tokens are reported with their line and column.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::matrix::{Rational, RationalMatrix};

/// Parses a single token: an optionally signed integer, or `p/q` with a
/// nonzero denominator. Returns `None` on anything else.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    match t.split_once('/') {
        None => BigInt::from_str(t).ok().map(Rational::from_integer),
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).ok()?;
            let d = BigInt::from_str(den.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
    }
}

/// Parses whole input into matrices. Rows of one matrix must have equal
/// length; the reported column is the 1-based byte offset of the bad token
/// within its line.
pub fn parse_matrices(input: &str) -> Result<Vec<RationalMatrix>> {
    let mut matrices = Vec::new();
    let mut current: Vec<Vec<Rational>> = Vec::new();

    let mut flush = |current: &mut Vec<Vec<Rational>>| -> Result<()> {
        if !current.is_empty() {
            matrices.push(RationalMatrix::from_rows(std::mem::take(current))?);
        }
        Ok(())
    };

    for (line_idx, line) in input.lines().enumerate() {
        let line_no = line_idx + 1;
        if line.trim().is_empty() {
            flush(&mut current)?;
            continue;
        }
        let mut row = Vec::new();
        let mut offset = 0usize;
        for token in line.split(',') {
            let column = offset + 1;
            let value = parse_rational(token).ok_or_else(|| Error::MalformedRational {
                line: line_no,
                column,
                token: token.trim().to_string(),
            })?;
            row.push(value);
            offset += token.len() + 1;
        }
        if !current.is_empty() && row.len() != current[0].len() {
            return Err(Error::RaggedCsvRow {
                line: line_no,
                expected: current[0].len(),
                found: row.len(),
            });
        }
        current.push(row);
    }
    flush(&mut current)?;
    Ok(matrices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn tokens() {
        assert_eq!(parse_rational("3"), Some(q(3, 1)));
        assert_eq!(parse_rational(" -2 "), Some(q(-2, 1)));
        assert_eq!(parse_rational("3/4"), Some(q(3, 4)));
        assert_eq!(parse_rational("6/4"), Some(q(3, 2)));
        assert_eq!(parse_rational("1/-2"), Some(q(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("a"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(parse_rational("1.5"), None);
    }

    #[test]
    fn single_matrix() {
        let ms = parse_matrices("1,2\n3/2, 4\n").unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].rows(), 2);
        assert_eq!(*ms[0].get(1, 0), q(3, 2));
    }

    #[test]
    fn blank_lines_split_matrices() {
        let ms = parse_matrices("1,2\n\n3,4\n5,6\n\n\n7\n").unwrap();
        assert_eq!(ms.len(), 3);
        assert_eq!(ms[1].rows(), 2);
        assert_eq!(ms[2].cols(), 1);
    }

    #[test]
    fn malformed_token_position() {
        let err = parse_matrices("1,2\n3,x4\n").unwrap_err();
        assert_eq!(
            err,
            Error::MalformedRational {
                line: 2,
                column: 3,
                token: "x4".into()
            }
        );
    }

    #[test]
    fn ragged_row_rejected() {
        let err = parse_matrices("1,2\n3\n").unwrap_err();
        assert_eq!(
            err,
            Error::RaggedCsvRow {
                line: 2,
                expected: 2,
                found: 1
            }
        );
    }
}
