//! Matrix text format: a JSON array of rows whose entries are integers,
//! decimals, or exact rationals written as strings `"p/q"`.
//!
//! ```text
//! [[2, 1], [1, 1]]
//! [["1/2", 0], [0, 2.0]]
//! ```
//!
//! Matrix lists hold one matrix per line; blank lines and lines starting
//! with `#` are skipped.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::intmat::IntMatrix;
use crate::matgeo::RealMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

/// Parses `[-]digits[.digits][e[+-]digits]` or `p/q` exactly.
pub fn parse_exact(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], i64::from_str(&t[i + 1..]).ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    let scale = exp - frac_part.len() as i64;
    let mut den = BigInt::one();
    if scale >= 0 {
        num *= BigInt::from(10).pow(scale as u32);
    } else {
        den = BigInt::from(10).pow((-scale) as u32);
    }
    if neg {
        num = -num;
    }
    Some(BigRational::new(num, den))
}

fn exact_entry(v: &Value, line: usize) -> Result<BigRational, ParseError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(err(line, format!("unsupported entry {other}"))),
    };
    parse_exact(&text).ok_or_else(|| err(line, format!("bad number {text:?}")))
}

fn rows_of(text: &str, line: usize) -> Result<Vec<Vec<Value>>, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| err(line + e.line() - 1, e.to_string()))?;
    let rows = doc.as_array().ok_or_else(|| err(line, "expected an array of rows"))?;
    rows.iter().map(|r| r.as_array().cloned().ok_or_else(|| err(line, "each row must be an array"))).collect()
}

fn exact_rows(text: &str, line: usize) -> Result<Vec<Vec<BigRational>>, ParseError> {
    rows_of(text, line)?.iter().map(|r| r.iter().map(|v| exact_entry(v, line)).collect()).collect()
}

fn int_matrix_at(text: &str, line: usize) -> Result<IntMatrix, ParseError> {
    let rows = exact_rows(text, line)?
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(err(line, format!("entry {x} is not an integer")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    IntMatrix::new(rows).map_err(|e| err(line, e.to_string()))
}

pub fn parse_int_matrix(text: &str) -> Result<IntMatrix, ParseError> {
    int_matrix_at(text, 1)
}

pub fn parse_real_matrix(text: &str) -> Result<RealMatrix, ParseError> {
    let rows: Vec<Vec<f64>> = rows_of(text, 1)?
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| match v {
                    Value::Number(n) => n.to_string().parse::<f64>().map_err(|e| err(1, e.to_string())),
                    _ => exact_entry(v, 1).map(|x| x.to_f64().unwrap_or(f64::NAN)),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    RealMatrix::from_rows(&rows).map_err(|e| err(1, e.to_string()))
}

/// One integer matrix per non-blank, non-comment line.
pub fn parse_int_matrix_list(text: &str) -> Result<Vec<IntMatrix>, ParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| int_matrix_at(l, i + 1))
        .collect()
}

/// A JSON array of matrices on a single document, e.g. `[[[1,1],[0,1]]]`.
pub fn parse_int_matrix_array(text: &str) -> Result<Vec<IntMatrix>, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| err(e.line(), e.to_string()))?;
    let items = doc.as_array().ok_or_else(|| err(1, "expected an array of matrices"))?;
    items.iter().map(|m| int_matrix_at(&m.to_string(), 1)).collect()
}
