//! The two arithmetic modes: exact rationals for vanishing tests, `f64` for
//! rank and scale work.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Float-mode tolerance for row sums and table mass.
pub const FLOAT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Mode::Rational),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown arithmetic mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        })
    }
}

pub trait Scalar: Num + Clone + Debug + PartialOrd + std::ops::Neg<Output = Self> + Send + Sync + 'static {
    const MODE: Mode;

    fn from_rational(q: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    fn abs_value(&self) -> Self;

    /// Equality up to the mode's tolerance: exact for rationals,
    /// [`FLOAT_SUM_TOL`] for floats.
    fn near(&self, other: &Self) -> bool;

    /// `|self| <= tol`, ignoring `tol` in exact mode.
    fn within(&self, tol: f64) -> bool;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Rational;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_value(&self) -> Self {
        Signed::abs(self)
    }

    fn near(&self, other: &Self) -> bool {
        self == other
    }

    fn within(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(BigRational::from_integer(BigInt::from(i)))
                } else {
                    let f = n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
                    float_to_rational(f)
                }
            }
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_rational(q: &BigRational) -> Self {
        Scalar::to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_value(&self) -> Self {
        f64::abs(*self)
    }

    fn near(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_SUM_TOL
    }

    fn within(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            Value::String(s) => Ok(Scalar::to_f64(&parse_rational(s)?)),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }
}

/// `p/q` in lowest terms, or `p` when the denominator is 1.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Exact binary value of a finite float.
pub fn float_to_rational(f: f64) -> Result<BigRational> {
    BigRational::from_f64(f).ok_or_else(|| Error::Parse(format!("non-finite value {f}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let q = BigRational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), q);
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert_eq!(format_rational(&BigRational::zero()), "0");
        assert_eq!(format_rational(&BigRational::from_integer((-4).into())), "-4");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn float_conversion_is_exact() {
        let q = float_to_rational(0.1).unwrap();
        assert_eq!(Scalar::to_f64(&q), 0.1);
        assert_ne!(q, BigRational::new(1.into(), 10.into()));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("rational".parse::<Mode>().unwrap(), Mode::Rational);
        assert_eq!("float".parse::<Mode>().unwrap(), Mode::Float);
        assert!("double".parse::<Mode>().is_err());
    }
}
