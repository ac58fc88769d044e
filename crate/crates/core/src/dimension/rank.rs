use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Singular values at or below `σ_max · NUMERIC_RANK_REL_TOL` count as zero.
pub const NUMERIC_RANK_REL_TOL: f64 = 1e-9;

/// Exact rank by fraction-free (Bareiss) elimination. Rows are first scaled
/// to integers by the lcm of their denominators, which leaves the rank alone.
pub fn exact_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect();
    bareiss_rank(&mut m)
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..ncols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                // exact by Sylvester's identity
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Numerical rank from singular values with threshold `σ_max · 1e-9`.
pub fn numeric_rank(rows: &[Vec<f64>]) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > max * NUMERIC_RANK_REL_TOL).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Plain Gauss-Jordan over ℚ, independent of the Bareiss path.
    fn rational_rank_oracle(rows: &[Vec<BigRational>]) -> usize {
        let mut m = rows.to_vec();
        let ncols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for i in 0..m.len() {
                if i != rank && !m[i][col].is_zero() {
                    let f = &m[i][col] / &m[rank][col];
                    let pivot = m[rank].clone();
                    for (x, p) in m[i].iter_mut().zip(&pivot) {
                        *x -= &f * p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_examples() {
        assert_eq!(exact_rank(&[]), 0);
        assert_eq!(exact_rank(&[vec![q(0), q(0)]]), 0);
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]];
        assert_eq!(exact_rank(&m), 2);
        let half = BigRational::new(1.into(), 2.into());
        let m = vec![vec![half.clone(), q(1)], vec![q(1), q(2)], vec![q(0), half]];
        assert_eq!(exact_rank(&m), 2);
        assert_eq!(numeric_rank(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]), 1);
        assert_eq!(numeric_rank(&[vec![0.0, 0.0]]), 0);
    }

    fn low_rank_matrix(rows: usize, cols: usize, rank: usize, entries: &[i64]) -> Vec<Vec<BigRational>> {
        // (rows x rank) * (rank x cols) from a pool of small integers
        let a = |i: usize, k: usize| entries[(i * 7 + k * 3) % entries.len()];
        let b = |k: usize, j: usize| entries[(k * 5 + j * 11 + 1) % entries.len()];
        (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| q((0..rank).map(|k| a(i, k) * b(k, j)).sum()))
                    .collect()
            })
            .collect()
    }

    proptest! {
        #[test]
        fn bareiss_agrees_with_rational_gauss(
            rows in 1usize..7, cols in 1usize..7, rank in 0usize..5,
            entries in prop::collection::vec(-9i64..10, 13..20),
            den in 1i64..6,
        ) {
            let mut m = low_rank_matrix(rows, cols, rank, &entries);
            if let Some(r) = m.first_mut() {
                for x in r.iter_mut() {
                    *x /= q(den);
                }
            }
            let expect = rational_rank_oracle(&m);
            prop_assert_eq!(exact_rank(&m), expect);
            let f: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(crate::Scalar::to_f64).collect()).collect();
            prop_assert_eq!(numeric_rank(&f), expect);
        }
    }
}
