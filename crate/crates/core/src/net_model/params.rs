use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::NetworkSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Conditional probability tables `w[node][parent config][state]`.
///
/// Rows are probability vectors: entries in `[0, 1]` summing to one (exactly
/// for rationals, within `1e-12` for floats).
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterAssignment<T> {
    cpts: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> ParameterAssignment<T> {
    pub fn new(net: &NetworkSpec, cpts: Vec<Vec<Vec<T>>>) -> Result<Self> {
        if cpts.len() != net.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} parameter blocks for {} nodes",
                cpts.len(),
                net.len()
            )));
        }
        for (i, rows) in cpts.iter().enumerate() {
            let configs = net.parent_shape(i).len();
            let card = net.node(i).card;
            if rows.len() != configs {
                return Err(Error::ShapeMismatch(format!(
                    "node {i}: {} rows, expected {configs} parent configurations",
                    rows.len()
                )));
            }
            for (j, row) in rows.iter().enumerate() {
                if row.len() != card {
                    return Err(Error::ShapeMismatch(format!(
                        "node {i}, configuration {j}: {} entries, expected {card}",
                        row.len()
                    )));
                }
                if row.iter().any(|w| *w < T::zero() || *w > T::one()) {
                    return Err(Error::Parameters(format!(
                        "node {i}, configuration {j}: entry outside [0, 1]"
                    )));
                }
                let sum = row.iter().fold(T::zero(), |acc, w| acc + w.clone());
                if !sum.near(&T::one()) {
                    return Err(Error::Parameters(format!(
                        "node {i}, configuration {j}: row sums to {sum:?}"
                    )));
                }
            }
        }
        Ok(Self { cpts })
    }

    /// Rebuilds a full assignment from free parameters (every row minus its
    /// last entry, which becomes `1 − Σ others`), in the order of
    /// [`free_parameters`](Self::free_parameters).
    pub fn from_free(net: &NetworkSpec, free: &[T]) -> Result<Self> {
        let expected = net.standard_dimension();
        if free.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} free parameters, expected {expected}",
                free.len()
            )));
        }
        let mut it = free.iter();
        let cpts = (0..net.len())
            .map(|i| {
                let card = net.node(i).card;
                (0..net.parent_shape(i).len())
                    .map(|_| {
                        let mut row: Vec<T> = it.by_ref().take(card - 1).cloned().collect();
                        let rest = row.iter().fold(T::one(), |acc, w| acc - w.clone());
                        row.push(rest);
                        row
                    })
                    .collect()
            })
            .collect();
        Self::new(net, cpts)
    }

    pub fn get(&self, node: usize, config: usize, state: usize) -> &T {
        &self.cpts[node][config][state]
    }

    pub fn rows(&self, node: usize) -> &[Vec<T>] {
        &self.cpts[node]
    }

    /// Free coordinates: node by node, configuration by configuration, all
    /// states but the last.
    pub fn free_parameters(&self) -> Vec<T> {
        self.cpts
            .iter()
            .flat_map(|rows| rows.iter().flat_map(|row| row[..row.len() - 1].iter().cloned()))
            .collect()
    }

    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, usize, &T)> {
        self.cpts.iter().enumerate().flat_map(|(i, rows)| {
            rows.iter()
                .enumerate()
                .flat_map(move |(j, row)| row.iter().enumerate().map(move |(k, w)| (i, j, k, w)))
        })
    }

    pub fn to_float(&self) -> ParameterAssignment<f64> {
        ParameterAssignment {
            cpts: self
                .cpts
                .iter()
                .map(|rows| {
                    rows.iter()
                        .map(|row| row.iter().map(Scalar::to_f64).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Draws every row as integer numerators uniform on `1..=1000`, normalized.
/// Deterministic in `seed`; float mode converts the same rationals.
pub fn sample_parameters<T: Scalar>(net: &NetworkSpec, seed: u64) -> ParameterAssignment<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cpts = (0..net.len())
        .map(|i| {
            let card = net.node(i).card;
            (0..net.parent_shape(i).len())
                .map(|_| {
                    let nums: Vec<u32> = (0..card).map(|_| rng.gen_range(1..=1000)).collect();
                    let total = BigInt::from(nums.iter().map(|&a| u64::from(a)).sum::<u64>());
                    nums.iter()
                        .map(|&a| T::from_rational(&BigRational::new(BigInt::from(a), total.clone())))
                        .collect()
                })
                .collect()
        })
        .collect();
    ParameterAssignment { cpts }
}

impl ParameterAssignment<BigRational> {
    /// Every row uniform.
    pub fn uniform(net: &NetworkSpec) -> Self {
        let cpts = (0..net.len())
            .map(|i| {
                let card = net.node(i).card;
                let w = BigRational::new(BigInt::one(), BigInt::from(card));
                vec![vec![w; card]; net.parent_shape(i).len()]
            })
            .collect();
        Self { cpts }
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.iter_entries().all(|(_, _, _, w)| *w > BigRational::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net_model::network_from_parts;

    fn chain() -> NetworkSpec {
        network_from_parts(&[
            ("X1", 3, &["X3"], false),
            ("X2", 2, &["X1"], false),
            ("X3", 2, &[], false),
        ])
        .unwrap()
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let net = chain();
        let a = sample_parameters::<BigRational>(&net, 17);
        let b = sample_parameters::<BigRational>(&net, 17);
        assert_eq!(a, b);
        assert_ne!(a, sample_parameters::<BigRational>(&net, 18));
        for i in 0..net.len() {
            for row in a.rows(i) {
                assert!(row.iter().all(|w| *w > BigRational::zero()));
                assert_eq!(row.iter().sum::<BigRational>(), BigRational::one());
            }
        }
        assert!(ParameterAssignment::new(&net, a.cpts.clone()).is_ok());
    }

    #[test]
    fn binary_node_draws_bounded_numerators() {
        let net = network_from_parts(&[("A", 2, &[], false)]).unwrap();
        for seed in 0..50 {
            let p = sample_parameters::<BigRational>(&net, seed);
            let (w0, w1) = (p.get(0, 0, 0), p.get(0, 0, 1));
            // a/(a+b) with a, b in 1..=1000 means w0/w1 = a/b in lowest terms
            let ratio = w0 / w1;
            assert!(*ratio.numer() >= BigInt::one() && *ratio.numer() <= BigInt::from(1000));
            assert!(*ratio.denom() >= BigInt::one() && *ratio.denom() <= BigInt::from(1000));
            assert_eq!(w0 + w1, BigRational::one());
        }
    }

    #[test]
    fn float_mode_matches_rational_draws() {
        let net = chain();
        let q = sample_parameters::<BigRational>(&net, 5);
        let f = sample_parameters::<f64>(&net, 5);
        assert_eq!(q.to_float(), f);
    }

    #[test]
    fn free_parameters_round_trip() {
        let net = chain();
        let p = sample_parameters::<BigRational>(&net, 3);
        let free = p.free_parameters();
        assert_eq!(free.len(), net.standard_dimension());
        assert_eq!(ParameterAssignment::from_free(&net, &free).unwrap(), p);
    }

    #[test]
    fn rejects_invalid_rows() {
        let net = network_from_parts(&[("A", 2, &[], false)]).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new(1.into(), 3.into());
        assert!(ParameterAssignment::new(&net, vec![vec![vec![half.clone(), third]]]).is_err());
        assert!(ParameterAssignment::new(&net, vec![vec![vec![half.clone()]]]).is_err());
        let neg = vec![vec![vec![
            BigRational::from_integer((-1).into()),
            BigRational::from_integer(2.into()),
        ]]];
        assert!(matches!(ParameterAssignment::new(&net, neg), Err(Error::Parameters(_))));
        assert!(ParameterAssignment::<f64>::new(&net, vec![vec![vec![0.5, 0.5 + 1e-13]]]).is_ok());
        assert!(ParameterAssignment::<f64>::new(&net, vec![vec![vec![0.5, 0.5 + 1e-9]]]).is_err());
    }
}
