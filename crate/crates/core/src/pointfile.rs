//! Plain-text point files.
//!
//! ```text
//! # optional comments
//! ordertype-points 2
//! 1 1
//! 2 4
//! 3/2 -7/3
//! ```
//!
//! The first non-comment line is the header with the dimension. Each further
//! non-blank line holds one point as whitespace-separated integers or `p/q`
//! rationals. Lines starting with `#` are ignored everywhere.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{Point, PointSequence, Rational};

pub const HEADER_TAG: &str = "ordertype-points";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing '{HEADER_TAG} <dim>' header")]
    MissingHeader,
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
}

fn line_err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        msg: msg.into(),
    }
}

pub fn parse(text: &str) -> Result<PointSequence, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let mut words = header.split_whitespace();
    if words.next() != Some(HEADER_TAG) {
        return Err(ParseError::MissingHeader);
    }
    let dim: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .filter(|&d| d >= 1)
        .ok_or_else(|| line_err(hline, "header needs a positive dimension"))?;
    if words.next().is_some() {
        return Err(line_err(hline, "unexpected text after the dimension"));
    }

    let mut points = Vec::new();
    for (n, l) in lines {
        let coords = l
            .split_whitespace()
            .map(|w| {
                Rational::from_str(w).map_err(|_| line_err(n, format!("bad coordinate '{w}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != dim {
            return Err(line_err(
                n,
                format!("expected {dim} coordinates, found {}", coords.len()),
            ));
        }
        points.push(Point::new(coords));
    }
    PointSequence::new(dim, points).map_err(|e| line_err(hline, e.to_string()))
}

pub fn format(seq: &PointSequence) -> String {
    let mut out = format!("{HEADER_TAG} {}\n", seq.dim());
    for p in seq.points() {
        writeln!(out, "{p}").unwrap();
    }
    out
}
