use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{classify_secant, dp_bound, exact_rank, jacobian, numeric_rank, Classification, NaiveBayesSpec};
use crate::error::{Error, Result};
use crate::net_model::{sample_parameters, NetworkSpec};
use crate::FORMAT_TAG;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRank {
    pub seed: u64,
    pub exact: usize,
    pub numeric: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveDimension {
    pub exact: usize,
    pub numeric: usize,
    pub per_seed: Vec<SeedRank>,
}

/// Generic Jacobian rank of the observable map, as the maximum over seeds of
/// the rank at sampled rational parameters. The exact (Bareiss) and numeric
/// (SVD) maxima must agree; otherwise both are returned in the error.
pub fn effective_dimension(net: &NetworkSpec, seeds: &[u64]) -> Result<EffectiveDimension> {
    if seeds.is_empty() {
        return Err(Error::NoSeeds);
    }
    let per_seed = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| scope.spawn(move || rank_at_seed(net, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("rank worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    let exact = per_seed.iter().map(|s| s.exact).max().unwrap_or(0);
    let numeric = per_seed.iter().map(|s| s.numeric).max().unwrap_or(0);
    if exact != numeric {
        return Err(Error::RankDisagreement { exact, numeric });
    }
    Ok(EffectiveDimension {
        exact,
        numeric,
        per_seed,
    })
}

fn rank_at_seed(net: &NetworkSpec, seed: u64) -> Result<SeedRank> {
    let params = sample_parameters::<BigRational>(net, seed);
    let exact = exact_rank(&jacobian(net, &params)?);
    let numeric = numeric_rank(&jacobian(net, &params.to_float())?);
    Ok(SeedRank { seed, exact, numeric })
}

/// Every dimension notion for one model. `complete` is the dimension of the
/// observable simplex; `dp_bound` and the classification only apply to naive
/// Bayes models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub format: String,
    pub complete: usize,
    pub standard: usize,
    pub expected: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dp_bound: Option<usize>,
    pub effective_numeric: usize,
    pub effective_exact: usize,
    pub classification: Classification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification_value: Option<usize>,
    pub samples_used: usize,
}

/// Report for any network; naive Bayes structure is detected and gets the
/// extra fields.
pub fn dimension_report(net: &NetworkSpec, seeds: &[u64]) -> Result<DimensionReport> {
    if let Some(nb) = NaiveBayesSpec::from_network(net) {
        return build_naive_bayes(&nb, net, seeds);
    }
    let eff = effective_dimension(net, seeds)?;
    let complete = net.observable_complete_dimension();
    let standard = net.standard_dimension();
    Ok(DimensionReport {
        format: FORMAT_TAG.to_string(),
        complete,
        standard,
        expected: complete.min(standard),
        dp_bound: None,
        effective_numeric: eff.numeric,
        effective_exact: eff.exact,
        classification: Classification::Unknown,
        classification_value: None,
        samples_used: seeds.len(),
    })
}

pub fn naive_bayes_report(nb: &NaiveBayesSpec, seeds: &[u64]) -> Result<DimensionReport> {
    build_naive_bayes(nb, &nb.to_network(), seeds)
}

fn build_naive_bayes(nb: &NaiveBayesSpec, net: &NetworkSpec, seeds: &[u64]) -> Result<DimensionReport> {
    let eff = effective_dimension(net, seeds)?;
    let verdict = classify_secant(nb);
    Ok(DimensionReport {
        format: FORMAT_TAG.to_string(),
        complete: nb.complete_dimension(),
        standard: nb.standard_dimension(),
        expected: nb.expected_dimension(),
        dp_bound: Some(dp_bound(nb)),
        effective_numeric: eff.numeric,
        effective_exact: eff.exact,
        classification: verdict.classification,
        classification_value: verdict.value,
        samples_used: seeds.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net_model::network_from_parts;

    fn nb(r: usize, f: &[usize]) -> NaiveBayesSpec {
        NaiveBayesSpec::new(r, f.to_vec()).unwrap()
    }

    #[test]
    fn naive_bayes_values() {
        for (r, f, value) in [(2, vec![3, 3], 7), (3, vec![3, 3], 8), (2, vec![2, 2, 2], 7)] {
            let eff = effective_dimension(&nb(r, &f).to_network(), &[1, 2, 3]).unwrap();
            assert_eq!((eff.exact, eff.numeric), (value, value), "({r}:{f:?})");
        }
    }

    #[test]
    fn report_for_four_binary_features() {
        let rep = naive_bayes_report(&nb(2, &[2, 2, 2, 2]), &[1, 2, 3]).unwrap();
        assert_eq!(rep.complete, 15);
        assert_eq!(rep.standard, 9);
        assert_eq!(rep.expected, 9);
        assert_eq!(rep.dp_bound, Some(11));
        assert_eq!(rep.effective_exact, 9);
        assert_eq!(rep.samples_used, 3);
    }

    #[test]
    fn report_for_two_ternary_features() {
        let rep = naive_bayes_report(&nb(2, &[3, 3]), &[1, 2, 3]).unwrap();
        assert_eq!((rep.complete, rep.standard, rep.expected), (8, 9, 8));
        assert_eq!(rep.effective_exact, 7);
        assert_eq!(rep.classification, Classification::EqualsStandard);
    }

    #[test]
    fn report_for_observed_chain() {
        let net = network_from_parts(&[
            ("X1", 2, &["X3"], false),
            ("X2", 2, &["X1"], false),
            ("X3", 2, &[], false),
        ])
        .unwrap();
        let rep = dimension_report(&net, &[1, 2, 3]).unwrap();
        assert_eq!((rep.standard, rep.complete, rep.effective_exact), (5, 7, 5));
        assert_eq!(rep.dp_bound, None);
        let json = serde_json::to_value(&rep).unwrap();
        assert!(json.get("dp_bound").is_none());
        assert_eq!(json["classification"], "UNKNOWN");
    }

    #[test]
    fn needs_a_seed() {
        assert!(matches!(
            effective_dimension(&nb(2, &[2, 2]).to_network(), &[]),
            Err(Error::NoSeeds)
        ));
    }
}
