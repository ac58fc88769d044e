//! Closed-form generators of polynomial constraints on observable
//! distributions, and checks of those constraints against tables.

mod check;
mod families;
pub mod models;

pub use check::{check_vanishing, complete_independence_test, fit_statistic, VanishingEntry, VanishingReport};
pub use families::{
    ci_minor_ideal, constraints_for_network, cubic_family_constraints, nb2_flattening_constraints,
    quadratic_family_constraints, sextic_family_constraints,
};

use std::collections::HashSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net_model::NetworkSpec;
use crate::polyring::{canonical_text, determinant, parse_polynomial, Polynomial};
use crate::shape::Shape;
use crate::FORMAT_TAG;

/// Constraint families. The serialized names are the stable tags used on the
/// command line and in constraint files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// 2×2 minors of conditional-independence slice matrices.
    #[serde(rename = "CI_MINORS")]
    CiMinors,
    /// 3×3 minors of every flattening of a two-class naive Bayes table.
    #[serde(rename = "NB2_FLATTENING")]
    Nb2Flattening,
    /// 2×2 minors of `θ_{i j k +}` slices, one hidden node of any size.
    #[serde(rename = "QUADRATIC_5_1")]
    Quadratic,
    /// 3×3 minors of `θ_{i j k +}` slices, binary hidden node.
    #[serde(rename = "CUBIC_5_2")]
    Cubic,
    /// Sextics built from pairs of `2 × 3` slices, binary hidden node.
    #[serde(rename = "SEXTIC_5_3")]
    Sextic,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::CiMinors,
        Family::Nb2Flattening,
        Family::Quadratic,
        Family::Cubic,
        Family::Sextic,
    ];

    pub fn degree(self) -> u32 {
        match self {
            Family::CiMinors | Family::Quadratic => 2,
            Family::Nb2Flattening | Family::Cubic => 3,
            Family::Sextic => 6,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::CiMinors => "CI_MINORS",
            Family::Nb2Flattening => "NB2_FLATTENING",
            Family::Quadratic => "QUADRATIC_5_1",
            Family::Cubic => "CUBIC_5_2",
            Family::Sextic => "SEXTIC_5_3",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown constraint family {s:?}")))
    }
}

/// Polynomials of one family over a fixed observable shape.
///
/// Every polynomial has the family's degree, a positive leading coefficient
/// and a distinct canonical form; `labels[i]` records which slice, rows and
/// columns produced `polys[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    family: Family,
    shape: Shape,
    conjectural: bool,
    polys: Vec<Polynomial>,
    labels: Vec<String>,
    seen: HashSet<Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct Provenance {
    index: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct ConstraintDoc {
    format: String,
    family: Family,
    degree: u32,
    cards: Vec<usize>,
    #[serde(default)]
    conjectural: bool,
    provenance: Vec<Provenance>,
    polys: Vec<String>,
}

impl ConstraintSet {
    pub fn new(family: Family, shape: Shape) -> Self {
        Self {
            family,
            shape,
            conjectural: false,
            polys: Vec::new(),
            labels: Vec::new(),
            seen: HashSet::new(),
        }
    }

    /// Adds `p` with its sign normalized. Zero polynomials and duplicates are
    /// skipped; returns whether `p` was added.
    pub fn push(&mut self, p: Polynomial, label: impl Into<String>) -> Result<bool> {
        if p.is_zero() {
            return Ok(false);
        }
        if p.degree() != self.degree() || !p.is_homogeneous() {
            return Err(Error::FamilyMismatch(format!(
                "{} expects homogeneous degree {}, got degree {}",
                self.family,
                self.degree(),
                p.degree()
            )));
        }
        let p = p.normalize_sign();
        if !self.seen.insert(p.clone()) {
            return Ok(false);
        }
        self.polys.push(p);
        self.labels.push(label.into());
        Ok(true)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn degree(&self) -> u32 {
        self.family.degree()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_conjectural(&self) -> bool {
        self.conjectural
    }

    pub(crate) fn mark_conjectural(&mut self) {
        self.conjectural = true;
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn canonical_texts(&self) -> Vec<String> {
        self.polys.iter().map(|p| canonical_text(p, &self.shape)).collect()
    }

    pub fn to_json(&self) -> String {
        let doc = ConstraintDoc {
            format: FORMAT_TAG.to_string(),
            family: self.family,
            degree: self.degree(),
            cards: self.shape.cards().to_vec(),
            conjectural: self.conjectural,
            provenance: self
                .labels
                .iter()
                .enumerate()
                .map(|(index, label)| Provenance {
                    index,
                    label: label.clone(),
                })
                .collect(),
            polys: self.canonical_texts(),
        };
        serde_json::to_string_pretty(&doc).expect("constraint serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ConstraintDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.format != FORMAT_TAG {
            return Err(Error::Format(doc.format));
        }
        if doc.degree != doc.family.degree() {
            return Err(Error::Parse(format!(
                "family {} has degree {}, document says {}",
                doc.family,
                doc.family.degree(),
                doc.degree
            )));
        }
        if doc.provenance.len() != doc.polys.len() {
            return Err(Error::Parse("provenance and polynomial counts differ".into()));
        }
        let mut cs = ConstraintSet::new(doc.family, Shape::new(doc.cards));
        cs.conjectural = doc.conjectural;
        for (text, prov) in doc.polys.iter().zip(doc.provenance) {
            let p = parse_polynomial(text, &cs.shape)?;
            if p.clone().normalize_sign() != p {
                return Err(Error::Parse(format!(
                    "polynomial {text:?} has a negative leading coefficient"
                )));
            }
            if !cs.push(p, prov.label)? {
                return Err(Error::Parse(format!("polynomial {text:?} is zero or repeated")));
            }
        }
        Ok(cs)
    }
}

/// Two disjoint nonempty blocks of observable positions covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::Bipartition("both blocks must be nonempty".into()));
        }
        let mut seen = vec![false; n];
        for &p in left.iter().chain(&right) {
            if p >= n {
                return Err(Error::Bipartition(format!("position {p} out of range for {n}")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::Bipartition(format!("position {p} appears twice")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Bipartition("blocks do not cover every position".into()));
        }
        Ok(Self { left, right })
    }

    /// Every unordered bipartition of `0..n` (left block holds position 0).
    pub fn all(n: usize) -> Vec<Self> {
        crate::dimension::bipartition_masks(n)
            .map(|mask| {
                let (left, right): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| mask >> i & 1 == 1);
                Self { left, right }
            })
            .collect()
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

/// Matrix of indeterminates: rows are joint states of the left block, columns
/// joint states of the right block, both row-major in block order.
pub fn flatten(shape: &Shape, bp: &Bipartition) -> Result<Vec<Vec<Polynomial>>> {
    if bp.left.iter().chain(&bp.right).count() != shape.ndim()
        || bp.left.iter().chain(&bp.right).any(|&p| p >= shape.ndim())
    {
        return Err(Error::Bipartition(format!(
            "bipartition does not match a table with {} coordinates",
            shape.ndim()
        )));
    }
    let block = |ps: &[usize]| Shape::new(ps.iter().map(|&p| shape.cards()[p]).collect());
    let (rows, cols) = (block(&bp.left), block(&bp.right));
    let mut index = vec![0; shape.ndim()];
    Ok(rows
        .indices()
        .map(|ri| {
            cols.indices()
                .map(|ci| {
                    for (&p, &v) in bp.left.iter().zip(&ri) {
                        index[p] = v;
                    }
                    for (&p, &v) in bp.right.iter().zip(&ci) {
                        index[p] = v;
                    }
                    Polynomial::var(shape.linear(&index).expect("in range") as u32)
                })
                .collect()
        })
        .collect())
}

/// [`flatten`] over the observable coordinates of `net`.
pub fn flatten_indeterminates(net: &NetworkSpec, bp: &Bipartition) -> Result<Vec<Vec<Polynomial>>> {
    flatten(&net.observed_shape(), bp)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Row choice, column choice and determinant of one submatrix.
pub(crate) type Minor = (Vec<usize>, Vec<usize>, Polynomial);

/// All `k × k` minors, rows varying slowest.
pub(crate) fn minors(m: &[Vec<Polynomial>], k: usize) -> Result<Vec<Minor>> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for rows in combinations(nrows, k) {
        for cols in combinations(ncols, k) {
            let sub: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            out.push((rows.clone(), cols, determinant(&sub)?));
        }
    }
    Ok(out)
}
