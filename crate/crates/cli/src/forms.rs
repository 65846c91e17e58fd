//! Parsing quadratic forms from the command line.
//!
//! Two notations are accepted:
//! - named forms joined by `+`, e.g. `X`, `X+O1`, `Y+X+I` (`O<n>` is the zero
//!   form in `n` variables);
//! - an upper-triangular coefficient matrix, rows separated by `;`, entries
//!   optionally separated by `,` or spaces, e.g. `01;00` or `1,1;0,1`.

use redei8_core::gf2::BitMatrix;
use redei8_core::quadform::{QuadForm, QuadFormError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormParseError {
    #[error("empty form specification")]
    Empty,
    #[error("unknown form name {0:?}")]
    UnknownName(String),
    #[error("bad matrix entry {0:?}")]
    BadEntry(char),
    #[error("matrix must be square, got {rows} rows of lengths {lengths:?}")]
    NotSquare { rows: usize, lengths: Vec<usize> },
    #[error(transparent)]
    Form(#[from] QuadFormError),
}

fn named(token: &str) -> Result<QuadForm, FormParseError> {
    match token {
        "X" => Ok(QuadForm::x()),
        "Y" => Ok(QuadForm::y()),
        "I" => Ok(QuadForm::i()),
        _ => token
            .strip_prefix('O')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n <= 64)
            .map(QuadForm::zero)
            .ok_or_else(|| FormParseError::UnknownName(token.to_string())),
    }
}

fn parse_matrix(spec: &str) -> Result<QuadForm, FormParseError> {
    let rows: Vec<Vec<u8>> = spec
        .split(';')
        .map(|row| {
            row.chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(FormParseError::BadEntry(other)),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(FormParseError::NotSquare { rows: n, lengths: rows.iter().map(Vec::len).collect() });
    }
    let m = BitMatrix::from_rows(&rows).map_err(QuadFormError::from)?;
    Ok(QuadForm::new(m)?)
}

pub fn parse_form(spec: &str) -> Result<QuadForm, FormParseError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(FormParseError::Empty);
    }
    if spec.chars().all(|c| matches!(c, '0' | '1' | ';' | ',' | ' ')) {
        return parse_matrix(spec);
    }
    spec.split('+').map(|t| named(t.trim())).try_fold(QuadForm::zero(0), |acc, q| Ok(acc.direct_sum(&q?)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_forms() {
        assert_eq!(parse_form("X"), Ok(QuadForm::x()));
        assert_eq!(parse_form("O3"), Ok(QuadForm::zero(3)));
        assert_eq!(parse_form("X + O1").unwrap().dim(), 3);
        assert!(matches!(parse_form("Z"), Err(FormParseError::UnknownName(_))));
        assert!(matches!(parse_form("Ox"), Err(FormParseError::UnknownName(_))));
    }

    #[test]
    fn matrix_forms() {
        assert_eq!(parse_form("01;00"), Ok(QuadForm::x()));
        assert_eq!(parse_form("1,1;0,1"), Ok(QuadForm::y()));
        assert_eq!(parse_form("1"), Ok(QuadForm::i()));
        assert!(matches!(parse_form("01;10"), Err(FormParseError::Form(QuadFormError::NotUpperTriangular))));
        assert!(matches!(parse_form("01;0"), Err(FormParseError::NotSquare { .. })));
        assert_eq!(parse_form(""), Err(FormParseError::Empty));
    }
}
