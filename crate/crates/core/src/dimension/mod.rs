//! Dimensions of naive Bayes and general networks with hidden variables.
//!
//! Effective dimension is the generic rank of the Jacobian of the map from
//! free parameters to the observable table. Because the observable table sums
//! to one, a model filling its whole simplex has effective dimension
//! `∏ r_i − 1`, so the closed forms below all carry the trailing `− 1`.

mod jacobian;
mod rank;
mod report;

pub use jacobian::jacobian;
pub use rank::{exact_rank, numeric_rank, NUMERIC_RANK_REL_TOL};
pub use report::{
    dimension_report, effective_dimension, naive_bayes_report, DimensionReport, EffectiveDimension, SeedRank,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net_model::{NetworkSpec, Node};

/// `(r : r_1, …, r_n)`: a hidden class node with `r` states and `n`
/// conditionally independent features.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NaiveBayesSpec {
    classes: usize,
    features: Vec<usize>,
}

impl NaiveBayesSpec {
    pub fn new(classes: usize, features: Vec<usize>) -> Result<Self> {
        if classes < 2 {
            return Err(Error::NaiveBayes(format!("{classes} classes, at least 2 required")));
        }
        if features.len() < 2 {
            return Err(Error::NaiveBayes(format!(
                "{} features, at least 2 required",
                features.len()
            )));
        }
        if let Some(&c) = features.iter().find(|&&c| c < 2) {
            return Err(Error::NaiveBayes(format!("feature cardinality {c} is below 2")));
        }
        Ok(Self { classes, features })
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn features(&self) -> &[usize] {
        &self.features
    }

    /// Recognises a naive Bayes network: one parentless hidden node and at
    /// least two observed nodes whose only parent is that node.
    pub fn from_network(net: &NetworkSpec) -> Option<Self> {
        let hidden = net.hidden();
        if hidden.len() != 1 {
            return None;
        }
        let h = hidden[0];
        if !net.parents(h).is_empty() {
            return None;
        }
        let observed = net.observed();
        if observed.iter().any(|&i| net.parents(i) != [h]) {
            return None;
        }
        Self::new(net.node(h).card, observed.iter().map(|&i| net.node(i).card).collect()).ok()
    }

    /// Network with the class node `H` first, then features `X1..Xn`.
    pub fn to_network(&self) -> NetworkSpec {
        let mut nodes = vec![Node {
            name: "H".into(),
            card: self.classes,
            parents: vec![],
            hidden: true,
        }];
        nodes.extend(self.features.iter().enumerate().map(|(i, &card)| Node {
            name: format!("X{}", i + 1),
            card,
            parents: vec![0],
            hidden: false,
        }));
        NetworkSpec::new(nodes).expect("naive Bayes structure is always valid")
    }

    /// `∏ r_i − 1` over the features.
    pub fn complete_dimension(&self) -> usize {
        self.features.iter().product::<usize>() - 1
    }

    /// `r·d + r − 1` with `d` the Segre dimension of the features.
    pub fn standard_dimension(&self) -> usize {
        self.classes * segre_dimension(&self.features) + self.classes - 1
    }

    pub fn expected_dimension(&self) -> usize {
        expected_dimension(self)
    }
}

/// `Σ (r_i − 1)`, the dimension of `P^{r_1−1} × … × P^{r_n−1}`.
pub fn segre_dimension(cards: &[usize]) -> usize {
    cards.iter().map(|&r| r - 1).sum()
}

/// `min(∏ r_i − 1, r·d + r − 1)`.
pub fn expected_dimension(nb: &NaiveBayesSpec) -> usize {
    nb.complete_dimension().min(nb.standard_dimension())
}

/// Minimum over all two-block flattenings of the features of the dimension
/// of the rank-`r` matrices of that flattening (projectivized, hence `− 1`).
///
/// With block sizes `R_1, R_2` the rank-`r` locus has affine dimension
/// `r(R_1 + R_2) − r²`, valid for `r ≤ min(R_1, R_2)`; larger `r` fills the
/// whole `R_1 × R_2` space, so `r` is clamped to `min(R_1, R_2)`.
pub fn dp_bound(nb: &NaiveBayesSpec) -> usize {
    let n = nb.features.len();
    bipartition_masks(n)
        .map(|mask| {
            let (mut left, mut right) = (1u128, 1u128);
            for (i, &c) in nb.features.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    left = left.saturating_mul(c as u128);
                } else {
                    right = right.saturating_mul(c as u128);
                }
            }
            let r = (nb.classes as u128).min(left).min(right);
            let secant = r * (left + right) - r * r;
            (secant.min(left.saturating_mul(right)) - 1) as usize
        })
        .min()
        .expect("at least two features give at least one bipartition")
}

/// Masks of the unordered bipartitions of `n` items: the left block always
/// holds item 0 and the right block is nonempty.
pub(crate) fn bipartition_masks(n: usize) -> impl Iterator<Item = u64> {
    let full = (1u64 << n) - 1;
    (1..full).filter(|m| m & 1 == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "EQUALS_COMPLETE")]
    EqualsComplete,
    #[serde(rename = "EQUALS_STANDARD")]
    EqualsStandard,
    #[serde(rename = "DEFECTIVE_BY_3_3")]
    Defective,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::EqualsComplete => "EQUALS_COMPLETE",
            Classification::EqualsStandard => "EQUALS_STANDARD",
            Classification::Defective => "DEFECTIVE_BY_3_3",
            Classification::Unknown => "UNKNOWN",
        })
    }
}

/// Outcome of [`classify_secant`]: the class, the effective dimension it
/// determines (if any) and the rule that fired.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantVerdict {
    pub classification: Classification,
    pub value: Option<usize>,
    pub rule: String,
}

/// Classifies `(r : r_1, …, r_n)` by the known results on secant varieties of
/// Segre varieties.
///
/// Two features are settled by matrix rank: `r = min` fills the space,
/// `r < min` gives `r(r_1 + r_2) − r² − 1`. For three or more features
/// (sorted ascending, `P = ∏_{i<n} r_i`, `S = Σ_{i<n} (r_i − 1)`) the defective
/// range `P − S + 1 ≤ r ≤ min(r_n, P − 1)` is checked first; then
/// `r ≤ min r_i` or `⌈(Σ r_i − n + 1)/2⌉ ≥ max(r_n, r)` give the standard
/// dimension `r(Σ r_i − n + 1) − 1`.
pub fn classify_secant(nb: &NaiveBayesSpec) -> SecantVerdict {
    let mut s = nb.features.clone();
    s.sort_unstable();
    let r = nb.classes;
    let n = s.len();
    let verdict = |classification, value, rule: &str| SecantVerdict {
        classification,
        value,
        rule: rule.to_string(),
    };

    if n == 2 {
        let (r1, r2) = (s[0], s[1]);
        if r == r1 {
            return verdict(
                Classification::EqualsComplete,
                Some(r1 * r2 - 1),
                "two features, r = min(r1, r2): rank-r matrices fill the space",
            );
        }
        if r < r1 {
            return verdict(
                Classification::EqualsStandard,
                Some(r * (r1 + r2) - r * r - 1),
                "two features, r < min(r1, r2): rank-r matrix locus",
            );
        }
        return verdict(Classification::Unknown, None, "two features, r > min(r1, r2)");
    }

    let head = &s[..n - 1];
    let last = s[n - 1];
    let prod = head.iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128));
    let sum = head.iter().map(|&c| (c - 1) as u128).sum::<u128>();
    let r_wide = r as u128;
    if prod + 1 >= sum && prod - sum < r_wide && r_wide <= (last as u128).min(prod - 1) {
        return verdict(
            Classification::Defective,
            None,
            "prod(r_i, i<n) - sum(r_i - 1, i<n) + 1 <= r <= min(r_n, prod(r_i, i<n) - 1)",
        );
    }
    let total: usize = s.iter().sum();
    let standard = r * (total - n + 1) - 1;
    if r <= s[0] {
        return verdict(
            Classification::EqualsStandard,
            Some(standard),
            "n >= 3 and r <= min r_i",
        );
    }
    if (total - n + 1).div_ceil(2) >= last.max(r) {
        return verdict(
            Classification::EqualsStandard,
            Some(standard),
            "n >= 3 and ceil((sum r_i - n + 1)/2) >= max(r_n, r)",
        );
    }
    verdict(Classification::Unknown, None, "no closed form applies")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nb(r: usize, f: &[usize]) -> NaiveBayesSpec {
        NaiveBayesSpec::new(r, f.to_vec()).unwrap()
    }

    #[test]
    fn segre_dimension_examples() {
        assert_eq!(segre_dimension(&[2, 2, 2]), 3);
        assert_eq!(segre_dimension(&[3, 3]), 4);
        assert_eq!(segre_dimension(&[2]), 1);
    }

    #[test]
    fn expected_dimension_examples() {
        assert_eq!(expected_dimension(&nb(2, &[2, 2, 2])), 7);
        assert_eq!(expected_dimension(&nb(2, &[3, 3])), 8);
        assert_eq!(expected_dimension(&nb(3, &[2, 2, 4])), 15);
    }

    #[test]
    fn standard_matches_network_count() {
        for (r, f) in [(2, vec![2, 2, 2]), (3, vec![2, 3, 4]), (4, vec![3, 3])] {
            let spec = nb(r, &f);
            assert_eq!(spec.standard_dimension(), spec.to_network().standard_dimension());
        }
    }

    /// Independent enumeration: every ordered subset, both orientations.
    fn dp_oracle(r: usize, f: &[usize]) -> usize {
        let n = f.len();
        let mut best = usize::MAX;
        for mask in 1..(1usize << n) - 1 {
            let left: usize = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).product();
            let right: usize = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| f[i]).product();
            // rank <= r matrices of size left x right, affine dimension
            let k = r.min(left).min(right);
            let affine = k * (left + right) - k * k;
            best = best.min(affine.min(left * right) - 1);
        }
        best
    }

    #[test]
    fn dp_bound_examples() {
        assert_eq!(dp_bound(&nb(2, &[2, 2, 2])), 7);
        assert_eq!(dp_bound(&nb(2, &[2, 2, 2, 2])), 11);
        for (r, r1, r2) in [(2, 3, 3), (2, 3, 5), (3, 4, 4)] {
            assert_eq!(dp_bound(&nb(r, &[r1, r2])), (r * (r1 + r2) - r * r).min(r1 * r2) - 1);
        }
        for (r, f) in [
            (3, vec![2, 2, 4]),
            (3, vec![2, 2]),
            (4, vec![3, 2, 2, 3]),
            (2, vec![2, 3, 4, 2]),
        ] {
            assert_eq!(dp_bound(&nb(r, &f)), dp_oracle(r, &f), "({r}:{f:?})");
        }
    }

    #[test]
    fn classification_examples() {
        let v = classify_secant(&nb(2, &[3, 3]));
        assert_eq!((v.classification, v.value), (Classification::EqualsStandard, Some(7)));
        let v = classify_secant(&nb(3, &[3, 3]));
        assert_eq!((v.classification, v.value), (Classification::EqualsComplete, Some(8)));
        let v = classify_secant(&nb(3, &[2, 2, 4]));
        assert_eq!(v.classification, Classification::Defective);
        assert_eq!(
            classify_secant(&nb(3, &[4, 2, 2])).classification,
            Classification::Defective
        );
        let v = classify_secant(&nb(2, &[2, 2, 2]));
        assert_eq!((v.classification, v.value), (Classification::EqualsStandard, Some(7)));
        let v = classify_secant(&nb(2, &[2, 2, 2, 2]));
        assert_eq!((v.classification, v.value), (Classification::EqualsStandard, Some(9)));
        assert_eq!(classify_secant(&nb(4, &[3, 3])).classification, Classification::Unknown);
        // ceil((3+3+4-3+1)/2) = 4 >= max(4, 4)
        let v = classify_secant(&nb(4, &[3, 3, 4]));
        assert_eq!((v.classification, v.value), (Classification::EqualsStandard, Some(31)));
    }

    #[test]
    fn recognises_naive_bayes_networks() {
        let spec = nb(3, &[2, 4, 2]);
        assert_eq!(NaiveBayesSpec::from_network(&spec.to_network()), Some(spec));
        let chain = crate::net_model::network_from_parts(&[
            ("H", 2, &[], true),
            ("X1", 2, &["H"], false),
            ("X2", 2, &["X1"], false),
        ])
        .unwrap();
        assert_eq!(NaiveBayesSpec::from_network(&chain), None);
    }

    #[test]
    fn spec_validation() {
        assert!(NaiveBayesSpec::new(1, vec![2, 2]).is_err());
        assert!(NaiveBayesSpec::new(2, vec![2]).is_err());
        assert!(NaiveBayesSpec::new(2, vec![2, 1]).is_err());
    }
}
