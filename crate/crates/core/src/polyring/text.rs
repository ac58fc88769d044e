//! Canonical text form: `+1 t[0,0]t[1,1] -1 t[0,1]t[1,0]`.
//!
//! Terms appear in canonical monomial order separated by single spaces. Each
//! term is a signed coefficient (`+3`, `-3/2`), then, unless constant, a space
//! and its factors `t[i1,i2,...]` with an optional `^e` for exponents above 1.
//! Indices are the zero-based observable multi-index. The zero polynomial
//! prints as `0`.

use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::parse_rational;
use crate::shape::Shape;

pub fn canonical_text(p: &Polynomial, shape: &Shape) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        out.push(if c.is_negative() { '-' } else { '+' });
        let a = c.abs();
        if a.denom().is_one() {
            write!(out, "{}", a.numer()).unwrap();
        } else {
            write!(out, "{}/{}", a.numer(), a.denom()).unwrap();
        }
        if !m.is_one() {
            out.push(' ');
        }
        for &(v, e) in m.factors() {
            let idx = shape.unravel(v as usize);
            out.push_str("t[");
            for (j, i) in idx.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{i}").unwrap();
            }
            out.push(']');
            if e > 1 {
                write!(out, "^{e}").unwrap();
            }
        }
    }
    out
}

pub fn parse_polynomial(text: &str, shape: &Shape) -> Result<Polynomial> {
    let text = text.trim();
    if text == "0" {
        return Ok(Polynomial::zero());
    }
    let mut tokens = text.split_whitespace().peekable();
    let mut terms = Vec::new();
    while let Some(tok) = tokens.next() {
        let coeff = parse_coefficient(tok)?;
        let monomial = match tokens.peek() {
            Some(next) if next.starts_with('t') => parse_factors(tokens.next().unwrap(), shape)?,
            _ => Monomial::one(),
        };
        terms.push((monomial, coeff));
    }
    if terms.is_empty() {
        return Err(Error::Parse("empty polynomial text".into()));
    }
    Ok(Polynomial::from_terms(terms))
}

fn parse_coefficient(tok: &str) -> Result<BigRational> {
    let (sign, rest) = match tok.as_bytes().first() {
        Some(b'+') => (BigInt::one(), &tok[1..]),
        Some(b'-') => (-BigInt::one(), &tok[1..]),
        _ => return Err(Error::Parse(format!("expected a signed coefficient, got {tok:?}"))),
    };
    if rest.starts_with(['+', '-']) {
        return Err(Error::Parse(format!("malformed coefficient {tok:?}")));
    }
    Ok(parse_rational(rest)? * BigRational::from_integer(sign))
}

fn parse_factors(tok: &str, shape: &Shape) -> Result<Monomial> {
    let bad = || Error::Parse(format!("malformed factors {tok:?}"));
    let mut pairs = Vec::new();
    let mut rest = tok;
    while !rest.is_empty() {
        rest = rest.strip_prefix("t[").ok_or_else(bad)?;
        let close = rest.find(']').ok_or_else(bad)?;
        let index = rest[..close]
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        rest = &rest[close + 1..];
        let mut exp = 1u32;
        if let Some(r) = rest.strip_prefix('^') {
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            exp = r[..end].parse().map_err(|_| bad())?;
            if exp == 0 {
                return Err(bad());
            }
            rest = &r[end..];
        }
        let id = shape
            .linear(&index)
            .ok_or_else(|| Error::ShapeMismatch(format!("index {index:?} outside shape {:?}", shape.cards())))?;
        pairs.push((id as u32, exp));
    }
    Ok(Monomial::from_pairs(pairs))
}
