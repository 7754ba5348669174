//! The `.scx` text format.
//!
//! ```text
//! # comment
//! m 5
//! 1 2
//! 3
//! -
//! ```
//!
//! The first non-comment line is `m <int>`; each further line lists one facet
//! as increasing 1-based vertex labels, and a lone `-` is the empty facet.
//! Everything after `#` on a line is ignored. [`to_scx`] writes facets in
//! canonical order with no comments, and parsing that output and printing it
//! again reproduces it byte for byte.

use std::fmt::Write as _;

use super::SimplicialComplex;
use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_VERTICES};

pub fn parse_scx(text: &str) -> Result<SimplicialComplex> {
    let mut m: Option<usize> = None;
    let mut facets = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(m) = m else {
            let mut words = line.split_whitespace();
            if words.next() != Some("m") {
                return Err(err(format!("expected `m <int>`, found {line:?}")));
            }
            let value = words
                .next()
                .and_then(|w| w.parse::<usize>().ok())
                .ok_or_else(|| err("`m` needs a non-negative integer".into()))?;
            if words.next().is_some() {
                return Err(err("trailing tokens after `m <int>`".into()));
            }
            if value > MAX_VERTICES {
                return Err(err(format!("m = {value} exceeds {MAX_VERTICES}")));
            }
            m = Some(value);
            continue;
        };
        if line == "-" {
            facets.push(Subset::EMPTY);
            continue;
        }
        let mut prev = 0usize;
        let mut facet = Subset::EMPTY;
        for word in line.split_whitespace() {
            let v: usize = word
                .parse()
                .map_err(|_| err(format!("bad vertex label {word:?}")))?;
            if v == 0 || v > m {
                return Err(err(format!("vertex {v} outside 1..={m}")));
            }
            if v <= prev {
                return Err(err("vertex labels must be strictly increasing".into()));
            }
            prev = v;
            facet = facet.with(v);
        }
        facets.push(facet);
    }
    let m = m.ok_or(Error::Parse {
        line: 0,
        message: "missing `m <int>` header".into(),
    })?;
    SimplicialComplex::from_facets(m, facets).map_err(|e| match e {
        Error::VoidComplex => Error::Parse {
            line: 0,
            message: "no facets given (use `-` for the empty facet)".into(),
        },
        other => other,
    })
}

pub fn to_scx(k: &SimplicialComplex) -> String {
    let mut out = format!("m {}\n", k.ground_size());
    for f in k.facets() {
        if f.is_empty() {
            out.push_str("-\n");
            continue;
        }
        for (i, v) in f.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}
