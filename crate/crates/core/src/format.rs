//! Text and JSON forms of series maps.
//!
//! ```text
//! # comment
//! vars 2
//! degree 4
//! comp 1: 1 0 -> 1
//! comp 1: 0 2 -> 1
//! comp 2: 0 1 -> -3/2
//! ```
//!
//! Components are 1-based, unlisted coefficients are zero. Emission orders the
//! lines by component and then by the graded multi-index order.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::multiindex::{MultiIndex, SeriesContext};
use crate::poly::{self, Terms};
use crate::series::TruncatedSeriesMap;

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

/// Parses the text form into a truncated map.
pub fn parse_series(text: &str) -> Result<TruncatedSeriesMap> {
    let mut nvars: Option<usize> = None;
    let mut degree: Option<u32> = None;
    let mut seen: HashSet<(usize, MultiIndex)> = HashSet::new();
    let mut comps: Vec<Terms> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("vars") => {
                if nvars.is_some() {
                    return Err(format_err(line_no, "repeated vars header"));
                }
                let n = parse_header_value(words, line_no, "vars")?;
                if n == 0 {
                    return Err(format_err(line_no, "vars must be at least 1"));
                }
                nvars = Some(n as usize);
                comps = vec![Terms::new(); n as usize];
            }
            Some("degree") => {
                if degree.is_some() {
                    return Err(format_err(line_no, "repeated degree header"));
                }
                let d = parse_header_value(words, line_no, "degree")?;
                if d == 0 {
                    return Err(format_err(line_no, "degree must be at least 1"));
                }
                degree = Some(d);
            }
            Some("comp") => {
                let (Some(n), Some(d)) = (nvars, degree) else {
                    return Err(format_err(
                        line_no,
                        "term before the vars and degree headers",
                    ));
                };
                let (comp, idx, c) = parse_term(line, line_no, n)?;
                let w = idx.weight();
                if w == 0 {
                    return Err(format_err(line_no, "constant terms are not allowed"));
                }
                if w > d {
                    return Err(Error::DegreeOverflow {
                        line: line_no,
                        degree: w,
                        cap: d,
                    });
                }
                if !seen.insert((comp, idx.clone())) {
                    return Err(Error::DuplicateTerm {
                        line: line_no,
                        component: comp + 1,
                    });
                }
                poly::add_term(&mut comps[comp], &idx, c);
            }
            Some(other) => return Err(format_err(line_no, format!("unknown keyword {other:?}"))),
            None => unreachable!("blank lines are skipped"),
        }
    }
    let n = nvars.ok_or_else(|| format_err(0, "missing vars header"))?;
    let d = degree.ok_or_else(|| format_err(0, "missing degree header"))?;
    TruncatedSeriesMap::new(SeriesContext::new(n, d)?, comps)
}

fn parse_header_value<'a>(
    mut words: impl Iterator<Item = &'a str>,
    line: usize,
    key: &str,
) -> Result<u32> {
    let value = words
        .next()
        .ok_or_else(|| format_err(line, format!("{key} needs a value")))?;
    if words.next().is_some() {
        return Err(format_err(line, format!("trailing text after {key}")));
    }
    value
        .parse::<u32>()
        .map_err(|_| format_err(line, format!("invalid {key} value {value:?}")))
}

fn parse_term(line: &str, line_no: usize, nvars: usize) -> Result<(usize, MultiIndex, Rational)> {
    let rest = line
        .strip_prefix("comp")
        .expect("keyword checked")
        .trim_start();
    let (comp_text, rest) = rest
        .split_once(':')
        .ok_or_else(|| format_err(line_no, "expected `comp j: a_1 … a_n -> c`"))?;
    let comp: usize = comp_text
        .trim()
        .parse()
        .map_err(|_| format_err(line_no, format!("invalid component {:?}", comp_text.trim())))?;
    if comp == 0 || comp > nvars {
        return Err(format_err(
            line_no,
            format!("component {comp} outside 1..={nvars}"),
        ));
    }
    let (exps, coeff) = rest
        .split_once("->")
        .ok_or_else(|| format_err(line_no, "missing `->`"))?;
    let exps: Vec<u32> = exps
        .split_whitespace()
        .map(|e| {
            e.parse::<u32>()
                .map_err(|_| format_err(line_no, format!("invalid exponent {e:?}")))
        })
        .collect::<Result<_>>()?;
    if exps.len() != nvars {
        return Err(format_err(
            line_no,
            format!("expected {nvars} exponents, got {}", exps.len()),
        ));
    }
    let coeff = coeff.trim();
    let c: Rational = coeff
        .parse()
        .map_err(|_| format_err(line_no, format!("invalid coefficient {coeff:?}")))?;
    Ok((comp - 1, MultiIndex::new(exps), c))
}

fn exponent_text(idx: &MultiIndex) -> String {
    idx.entries()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Header lines `vars N` and `degree D`.
pub fn emit_header(ctx: &SeriesContext) -> String {
    format!("vars {}\ndegree {}\n", ctx.nvars(), ctx.degree_cap())
}

/// Term lines only, in canonical order.
pub fn emit_terms(map: &TruncatedSeriesMap) -> String {
    let mut out = String::new();
    for (j, comp) in map.components().iter().enumerate() {
        for (idx, c) in comp {
            writeln!(out, "comp {}: {} -> {c}", j + 1, exponent_text(idx)).expect("string write");
        }
    }
    out
}

/// Canonical text form.
pub fn emit_series(map: &TruncatedSeriesMap) -> String {
    let mut out = emit_header(map.ctx());
    out.push_str(&emit_terms(map));
    out
}

/// One coefficient in the JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub comp: usize,
    pub exponent: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub vars: usize,
    pub degree: u32,
    pub terms: Vec<TermRecord>,
}

pub fn term_records(components: &[Terms]) -> Vec<TermRecord> {
    components
        .iter()
        .enumerate()
        .flat_map(|(j, comp)| {
            comp.iter().map(move |(idx, c)| TermRecord {
                comp: j + 1,
                exponent: idx.entries().to_vec(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
        })
        .collect()
}

pub fn to_record(map: &TruncatedSeriesMap) -> SeriesRecord {
    SeriesRecord {
        vars: map.nvars(),
        degree: map.degree_cap(),
        terms: term_records(map.components()),
    }
}

pub fn from_record(record: &SeriesRecord) -> Result<TruncatedSeriesMap> {
    let ctx = SeriesContext::new(record.vars, record.degree)?;
    let mut triples = Vec::with_capacity(record.terms.len());
    for (i, t) in record.terms.iter().enumerate() {
        if t.comp == 0 || t.comp > record.vars {
            return Err(format_err(
                i + 1,
                format!("component {} out of range", t.comp),
            ));
        }
        let c = Rational::ratio(
            t.num
                .parse::<num_bigint::BigInt>()
                .map_err(|_| format_err(i + 1, "invalid numerator"))?,
            t.den
                .parse::<num_bigint::BigInt>()
                .map_err(|_| format_err(i + 1, "invalid denominator"))?,
        )
        .map_err(|_| format_err(i + 1, "zero denominator"))?;
        triples.push((t.comp - 1, MultiIndex::new(t.exponent.clone()), c));
    }
    TruncatedSeriesMap::from_triples(ctx, triples)
}

pub fn emit_series_json(map: &TruncatedSeriesMap) -> String {
    serde_json::to_string_pretty(&to_record(map)).expect("plain data serializes")
}
