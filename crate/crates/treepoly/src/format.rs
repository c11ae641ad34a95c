//! Pipe-separated text form of a [`TreeRecord`]:
//!
//! ```text
//! uid|n|degrees|coeffs|unimodal|log_concave|symmetric|fibonacci|argmax
//! ```
//!
//! Lists are comma-separated decimals, booleans are `0`/`1`, and the empty
//! tree's uid is the empty string. Lines are ASCII and end in `\n`.

use std::fmt::Write as _;

use thiserror::Error;
use treepoly_core::{CanonicalCode, Polynomial, TreeRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason}")]
pub struct ParseError {
    pub reason: String,
}

fn bad(reason: impl Into<String>) -> ParseError {
    ParseError {
        reason: reason.into(),
    }
}

pub fn join<T: std::fmt::Display>(items: &[T]) -> String {
    let mut out = String::new();
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{x}");
    }
    out
}

/// One record as a line, without the trailing newline.
pub fn format_record(rec: &TreeRecord) -> String {
    let flag = |b: bool| if b { '1' } else { '0' };
    format!(
        "{}|{}|{}|{}|{}|{}|{}|{}|{}",
        rec.uid,
        rec.n,
        join(&rec.degrees),
        rec.poly,
        flag(rec.unimodal),
        flag(rec.log_concave),
        flag(rec.symmetric),
        flag(rec.fibonacci),
        rec.argmax,
    )
}

fn parse_list(field: &str, what: &str) -> Result<Vec<u64>, ParseError> {
    if field.is_empty() {
        return Ok(Vec::new());
    }
    field
        .split(',')
        .map(|x| {
            x.parse::<u64>()
                .map_err(|_| bad(format!("bad {what} entry {x:?}")))
        })
        .collect()
}

fn parse_flag(field: &str, what: &str) -> Result<bool, ParseError> {
    match field {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(bad(format!("bad {what} flag {field:?}"))),
    }
}

/// Parses one line. Field syntax is checked here; semantic consistency is
/// left to [`TreeRecord::validate`].
pub fn parse_record(line: &str) -> Result<TreeRecord, ParseError> {
    let fields: Vec<&str> = line.split('|').collect();
    let [uid, n, degrees, coeffs, uni, lc, sym, fib, argmax] = fields[..] else {
        return Err(bad(format!("expected 9 fields, found {}", fields.len())));
    };
    let uid = CanonicalCode::parse(uid).map_err(|e| bad(format!("bad uid: {e}")))?;
    let n = n
        .parse::<usize>()
        .map_err(|_| bad(format!("bad vertex count {n:?}")))?;
    let degrees = parse_list(degrees, "degree")?
        .into_iter()
        .map(|d| d as usize)
        .collect();
    let poly = Polynomial::new(parse_list(coeffs, "coefficient")?)
        .map_err(|e| bad(format!("bad coefficients: {e}")))?;
    Ok(TreeRecord {
        uid,
        n,
        degrees,
        poly,
        unimodal: parse_flag(uni, "unimodal")?,
        log_concave: parse_flag(lc, "log_concave")?,
        symmetric: parse_flag(sym, "symmetric")?,
        fibonacci: parse_flag(fib, "fibonacci")?,
        argmax: argmax
            .parse()
            .map_err(|_| bad(format!("bad argmax {argmax:?}")))?,
    })
}
