use super::Polynomial;
use crate::error::{Error, Result};

/// Determinant of a square polynomial matrix of size 1 to 4, by Laplace
/// expansion along the first row.
pub fn determinant(m: &[Vec<Polynomial>]) -> Result<Polynomial> {
    let n = m.len();
    if n == 0 || n > 4 {
        return Err(Error::DeterminantSize(n));
    }
    if let Some(row) = m.iter().find(|row| row.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: row.len(),
        });
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(expand(m, &rows, &cols))
}

fn expand(m: &[Vec<Polynomial>], rows: &[usize], cols: &[usize]) -> Polynomial {
    match cols.len() {
        1 => m[rows[0]][cols[0]].clone(),
        2 => {
            let (r0, r1, c0, c1) = (rows[0], rows[1], cols[0], cols[1]);
            &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0])
        }
        _ => {
            let mut acc = Polynomial::zero();
            for (k, &c) in cols.iter().enumerate() {
                let entry = &m[rows[0]][c];
                if entry.is_zero() {
                    continue;
                }
                let minor_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let cofactor = entry * &expand(m, &rows[1..], &minor_cols);
                acc = if k % 2 == 0 { acc + cofactor } else { acc - cofactor };
            }
            acc
        }
    }
}
