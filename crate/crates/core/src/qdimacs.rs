//! Reading and writing QDIMACS.
//!
//! The reader is strict about structure (one header, quantifier lines
//! before clauses, indices within the declared range) and lenient about
//! layout: clauses may span lines and the declared clause count is not
//! enforced. Everything read goes through [`normalize`].

use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{normalize, Diagnostics, Formula, Lit, Quantifier, RawFormula, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("second header line")]
    DuplicateHeader,
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("variable {index} outside 1..={max}")]
    VariableOutOfRange { index: i64, max: u32 },
    #[error("quantifier line after the first clause")]
    QuantifierAfterClause,
    #[error("variable {0} quantified twice")]
    QuantifiedTwice(u32),
    #[error("tokens after the terminating 0")]
    TrailingTokens,
    #[error("quantifier line not terminated by 0")]
    UnterminatedQuantifier,
    #[error("last clause not terminated by 0")]
    UnterminatedClause,
}

/// A parsed and normalized formula together with what normalization did.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub formula: Formula,
    pub diagnostics: Diagnostics,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn parse_int(line: usize, token: &str) -> Result<i64, ParseError> {
    token
        .parse::<i64>()
        .map_err(|_| err(line, ParseErrorKind::InvalidToken(token.to_string())))
}

/// Reads QDIMACS text into a raw, unnormalized formula.
pub fn parse_raw(text: &str) -> Result<RawFormula, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut raw = RawFormula::default();
    let mut quantified: Vec<bool> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut in_clause = false;
    let mut seen_clause = false;
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let first = tokens.next().expect("non-empty line");

        if first == "p" {
            if header.is_some() {
                return Err(err(lineno, ParseErrorKind::DuplicateHeader));
            }
            let rest: Vec<&str> = tokens.collect();
            if rest.len() != 3 || rest[0] != "cnf" {
                return Err(err(lineno, ParseErrorKind::MalformedHeader(trimmed.to_string())));
            }
            let nvars: u32 = rest[1].parse().map_err(|_| {
                err(lineno, ParseErrorKind::MalformedHeader(trimmed.to_string()))
            })?;
            let nclauses: usize = rest[2].parse().map_err(|_| {
                err(lineno, ParseErrorKind::MalformedHeader(trimmed.to_string()))
            })?;
            if nvars > u32::MAX / 2 - 1 {
                return Err(err(lineno, ParseErrorKind::MalformedHeader(trimmed.to_string())));
            }
            header = Some((nvars, nclauses));
            raw.num_vars = nvars;
            quantified = vec![false; nvars as usize + 1];
            raw.clauses.reserve(nclauses.min(1 << 20));
            continue;
        }

        let Some((nvars, _)) = header else {
            return Err(err(lineno, ParseErrorKind::MissingHeader));
        };

        if first == "a" || first == "e" {
            if seen_clause || in_clause {
                return Err(err(lineno, ParseErrorKind::QuantifierAfterClause));
            }
            let q = if first == "a" {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            let mut terminated = false;
            for token in tokens {
                if terminated {
                    return Err(err(lineno, ParseErrorKind::TrailingTokens));
                }
                let value = parse_int(lineno, token)?;
                if value == 0 {
                    terminated = true;
                    continue;
                }
                if value < 0 || value > nvars as i64 {
                    return Err(err(
                        lineno,
                        ParseErrorKind::VariableOutOfRange { index: value, max: nvars },
                    ));
                }
                let v = Var::new(value as u32);
                if std::mem::replace(&mut quantified[v.index()], true) {
                    return Err(err(lineno, ParseErrorKind::QuantifiedTwice(v.id())));
                }
                raw.prefix.push((v, q));
            }
            if !terminated {
                return Err(err(lineno, ParseErrorKind::UnterminatedQuantifier));
            }
            continue;
        }

        for token in std::iter::once(first).chain(tokens) {
            let value = parse_int(lineno, token)?;
            if value == 0 {
                raw.clauses.push(std::mem::take(&mut current));
                in_clause = false;
                seen_clause = true;
                continue;
            }
            if value.unsigned_abs() > nvars as u64 {
                return Err(err(
                    lineno,
                    ParseErrorKind::VariableOutOfRange { index: value, max: nvars },
                ));
            }
            current.push(Lit::from_dimacs(value).expect("non-zero, in range"));
            in_clause = true;
        }
    }

    if header.is_none() {
        return Err(err(last_line.max(1), ParseErrorKind::MissingHeader));
    }
    if in_clause {
        return Err(err(last_line, ParseErrorKind::UnterminatedClause));
    }
    Ok(raw)
}

/// Reads and normalizes QDIMACS text.
pub fn parse_qdimacs(text: &str) -> Result<Parsed, ParseError> {
    let raw = parse_raw(text)?;
    let (formula, diagnostics) = normalize(&raw);
    Ok(Parsed {
        formula,
        diagnostics,
    })
}

/// Writes a formula as QDIMACS: header, one line per quantifier block,
/// one line per clause. Parsing the output yields the same formula.
pub fn to_qdimacs(formula: &Formula) -> String {
    let mut out = String::new();
    write_header(&mut out, formula);
    write_body(&mut out, formula);
    out
}

pub(crate) fn write_header(out: &mut String, formula: &Formula) {
    writeln!(out, "p cnf {} {}", formula.num_vars(), formula.clauses().len()).unwrap();
}

pub(crate) fn write_body(out: &mut String, formula: &Formula) {
    for block in formula.quantifier_blocks() {
        out.push(block.quantifier.symbol());
        for v in block.vars {
            write!(out, " {v}").unwrap();
        }
        out.push_str(" 0\n");
    }
    for clause in formula.clauses() {
        for lit in clause.iter() {
            write!(out, "{lit} ").unwrap();
        }
        out.push_str("0\n");
    }
}
