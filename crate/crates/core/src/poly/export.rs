//! Plain-text export of named polynomials.
//!
//! ```text
//! format_version 1
//! poly I34
//! degree 4
//! n_qubits 3
//! terms 2
//! [["000", 2], ["111", 2]] : 1 / 0
//! [["001", 1], ["110", 1]] : -1/2 / 0
//! end
//! ```
//!
//! Terms appear in canonical monomial order, so output is deterministic.

use std::fmt::Write as _;

use super::{parse_rational, CoeffPoly, Monomial, RationalComplex};
use crate::error::{Error, Result};
use crate::state::{format_bits, parse_bits};

pub const EXPORT_FORMAT_VERSION: u32 = 1;

/// A polynomial together with the label it is exported under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedPoly {
    pub name: String,
    pub poly: CoeffPoly,
}

impl NamedPoly {
    pub fn new(name: impl Into<String>, poly: CoeffPoly) -> Self {
        Self {
            name: name.into(),
            poly,
        }
    }
}

pub fn write_export(polys: &[NamedPoly]) -> String {
    let mut out = String::new();
    writeln!(out, "format_version {EXPORT_FORMAT_VERSION}").unwrap();
    for NamedPoly { name, poly } in polys {
        let n = poly.n_qubits();
        writeln!(out, "poly {name}").unwrap();
        writeln!(out, "degree {}", poly.degree().unwrap_or(0)).unwrap();
        writeln!(out, "n_qubits {n}").unwrap();
        writeln!(out, "terms {}", poly.len()).unwrap();
        for (m, c) in poly.terms() {
            out.push('[');
            for (i, &(var, mult)) in m.factors().iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write!(out, "[\"{}\", {mult}]", format_bits(var as usize, n)).unwrap();
            }
            writeln!(out, "] : {c}").unwrap();
        }
        out.push_str("end\n");
    }
    out
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn header<'a>(line: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    let (no, text) = line.ok_or_else(|| Error::Parse(format!("unexpected end, wanted `{key}`")))?;
    let value = text
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| parse_err(no, format!("expected `{key} ...`")))?;
    Ok((no, value.trim()))
}

fn number(line: Option<(usize, &str)>, key: &str) -> Result<usize> {
    let (no, value) = header(line, key)?;
    value.parse().map_err(|_| parse_err(no, format!("bad {key} `{value}`")))
}

fn parse_term(no: usize, text: &str, n_qubits: usize) -> Result<(Monomial, RationalComplex)> {
    let (mono, coeff) = text
        .rsplit_once(" : ")
        .ok_or_else(|| parse_err(no, "missing ` : ` separator"))?;
    let (re, im) = coeff
        .split_once(" / ")
        .ok_or_else(|| parse_err(no, "coefficient must read `re / im`"))?;
    let re = parse_rational(re).ok_or_else(|| parse_err(no, format!("bad rational `{re}`")))?;
    let im = parse_rational(im).ok_or_else(|| parse_err(no, format!("bad rational `{im}`")))?;

    let value: serde_json::Value =
        serde_json::from_str(mono).map_err(|e| parse_err(no, format!("bad monomial: {e}")))?;
    let entries = value.as_array().ok_or_else(|| parse_err(no, "monomial is not a list"))?;
    let mut factors = Vec::with_capacity(entries.len());
    for entry in entries {
        let pair = entry.as_array().filter(|p| p.len() == 2);
        let (bits, mult) = match pair {
            Some(p) => (p[0].as_str(), p[1].as_u64()),
            None => (None, None),
        };
        let (bits, mult) = bits
            .zip(mult)
            .ok_or_else(|| parse_err(no, "factor must be [\"bits\", multiplicity]"))?;
        if bits.len() != n_qubits {
            return Err(parse_err(no, format!("`{bits}` is not a {n_qubits}-qubit index")));
        }
        let var = parse_bits(bits).map_err(|e| parse_err(no, e))?;
        factors.push((var as u32, mult as u32));
    }
    Ok((Monomial::from_factors(factors), RationalComplex::new(re, im)))
}

/// Reads a document produced by [`write_export`].
pub fn parse_export(text: &str) -> Result<Vec<NamedPoly>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let version = number(lines.next(), "format_version")?;
    if version != EXPORT_FORMAT_VERSION as usize {
        return Err(Error::Parse(format!("unsupported format_version {version}")));
    }
    let mut polys = Vec::new();
    while let Some(line) = lines.next() {
        let (_, name) = header(Some(line), "poly")?;
        let degree = number(lines.next(), "degree")?;
        let n_qubits = number(lines.next(), "n_qubits")?;
        let count = number(lines.next(), "terms")?;
        let mut terms = Vec::with_capacity(count);
        for _ in 0..count {
            let (no, text) = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("poly {name}: too few terms")))?;
            terms.push(parse_term(no, text, n_qubits)?);
        }
        match lines.next() {
            Some((_, "end")) => {}
            Some((no, _)) => return Err(parse_err(no, "expected `end`")),
            None => return Err(Error::Parse(format!("poly {name}: missing `end`"))),
        }
        let poly = CoeffPoly::from_terms(n_qubits, terms)?;
        if poly.len() != count {
            return Err(Error::Parse(format!("poly {name}: repeated or zero terms")));
        }
        if poly.degree().unwrap_or(0) as usize != degree {
            return Err(Error::Parse(format!("poly {name}: degree mismatch")));
        }
        polys.push(NamedPoly::new(name, poly));
    }
    Ok(polys)
}
