//! Exact sparse multivariate polynomials over ℚ in the observable
//! indeterminates `θ_x'`.
//!
//! Indeterminates are identified by their row-major linear id in the
//! observable [`Shape`]; the shape is only needed to print, parse or build
//! marginal forms. Terms live in a `BTreeMap` keyed by [`Monomial`], whose
//! ordering is the canonical print order (graded, then lexicographic with
//! `t0 > t1 > …`, largest first). Zero coefficients are never stored, so
//! structural equality is polynomial equality.

mod det;
mod text;

pub use det::determinant;
pub use text::{canonical_text, parse_polynomial};

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::net_model::{NetworkSpec, Table};
use crate::scalar::Scalar;
use crate::shape::Shape;

/// Product of indeterminates: `(id, exponent)` pairs sorted by id, exponents > 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(id: u32) -> Self {
        Monomial(vec![(id, 1)])
    }

    /// Builds from arbitrary `(id, exp)` pairs; merges repeats, drops zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Lexicographic comparison with `t0 > t1 > …`.
    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        for (x, y) in self.0.iter().zip(&other.0) {
            if x.0 != y.0 {
                // the side holding the smaller id has the larger variable
                return y.0.cmp(&x.0);
            }
            if x.1 != y.1 {
                return x.1.cmp(&y.1);
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    pub fn evaluate<T: Scalar>(&self, point: &[T]) -> T {
        self.0.iter().fold(T::one(), |acc, &(v, e)| {
            acc * num_traits::pow(point[v as usize].clone(), e as usize)
        })
    }
}

/// `Less` means "printed earlier": higher degree first, then lex-larger first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.lex_cmp(self))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(id: u32) -> Self {
        Self::term(BigRational::one(), Monomial::var(id))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Total degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> u32 {
        // graded order puts a highest-degree monomial first
        self.terms.keys().next().map_or(0, Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next()
    }

    /// Negates if needed so the leading coefficient is positive.
    pub fn normalize_sign(self) -> Self {
        match self.leading_term() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Sum of absolute coefficient values.
    pub fn coefficient_l1_norm(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c.abs())
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect()
    }

    /// Substitutes `point[id]` for every indeterminate `id`.
    pub fn evaluate<T: Scalar>(&self, point: &[T]) -> Result<T> {
        if let Some(&max) = self.variables().iter().next_back() {
            if max as usize >= point.len() {
                return Err(Error::ShapeMismatch(format!(
                    "indeterminate {max} outside a point of length {}",
                    point.len()
                )));
            }
        }
        Ok(self
            .terms
            .iter()
            .fold(T::zero(), |acc, (m, c)| acc + T::from_rational(c) * m.evaluate(point)))
    }

    /// Evaluation at the cells of an observable table.
    pub fn evaluate_table<T: Scalar>(&self, table: &Table<T>) -> Result<T> {
        self.evaluate(table.cells())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -self.clone()
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Linear form summing every indeterminate of `shape` that agrees with
/// `pattern` on its fixed (`Some`) positions; `None` marks a summed-out `+`.
pub fn marginal_form(shape: &Shape, pattern: &[Option<usize>]) -> Result<Polynomial> {
    if pattern.len() != shape.ndim() {
        return Err(Error::Pattern(format!(
            "pattern has {} positions, shape has {}",
            pattern.len(),
            shape.ndim()
        )));
    }
    for (pos, (p, &card)) in pattern.iter().zip(shape.cards()).enumerate() {
        if let Some(i) = p {
            if *i >= card {
                return Err(Error::Pattern(format!(
                    "state {i} at position {pos} exceeds cardinality {card}"
                )));
            }
        }
    }
    let free: Vec<usize> = (0..pattern.len()).filter(|&k| pattern[k].is_none()).collect();
    let sub = Shape::new(free.iter().map(|&k| shape.cards()[k]).collect());
    let mut index: Vec<usize> = pattern.iter().map(|p| p.unwrap_or(0)).collect();
    let ids = sub.indices().map(|s| {
        for (&k, &v) in free.iter().zip(&s) {
            index[k] = v;
        }
        shape.linear(&index).expect("pattern checked against shape") as u32
    });
    Ok(Polynomial::from_terms(
        ids.map(|id| (Monomial::var(id), BigRational::one()))
            .collect::<Vec<_>>(),
    ))
}

/// The observable probability `θ_(pattern)` of `net`, as a linear form in the
/// observable indeterminates.
pub fn marginal_coordinate(net: &NetworkSpec, pattern: &[Option<usize>]) -> Result<Polynomial> {
    marginal_form(&net.observed_shape(), pattern)
}
