use num_traits::Signed;
use serde::Serialize;
use serde_json::Value;

use super::{ConstraintSet, Family};
use crate::error::{Error, Result};
use crate::net_model::Table;
use crate::polyring::Polynomial;
use crate::scalar::{Mode, Scalar};
use crate::FORMAT_TAG;

#[derive(Debug, Clone, Serialize)]
pub struct VanishingEntry {
    pub index: usize,
    /// Exact `p/q` string in rational mode, a number in float mode.
    pub residual: Value,
    /// `|p(θ)| / ‖p‖₁`.
    pub normalized: f64,
    pub vanishes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VanishingReport {
    pub format: &'static str,
    pub family: Family,
    pub mode: Mode,
    pub tol: f64,
    pub all_vanish: bool,
    /// Largest normalized residual, 0 for an empty set.
    pub fit_statistic: f64,
    pub results: Vec<VanishingEntry>,
}

fn check_shape<T: Scalar>(cs: &ConstraintSet, table: &Table<T>) -> Result<()> {
    if cs.shape().cards() != table.cards() {
        return Err(Error::ShapeMismatch(format!(
            "constraints are over cards {:?}, table has {:?}",
            cs.shape().cards(),
            table.cards()
        )));
    }
    Ok(())
}

fn l1_norm(p: &Polynomial) -> f64 {
    p.terms().map(|(_, c)| Scalar::to_f64(&c.abs())).sum()
}

/// Evaluates `f` on every polynomial, spreading the work over threads and
/// returning results in polynomial order.
fn par_map<R: Send>(polys: &[Polynomial], f: impl Fn(usize, &Polynomial) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(polys.len().max(1));
    let chunk = polys.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = polys
            .chunks(chunk)
            .enumerate()
            .map(|(c, ps)| {
                let f = &f;
                scope.spawn(move || {
                    ps.iter()
                        .enumerate()
                        .map(|(k, p)| f(c * chunk + k, p))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("evaluation thread panicked"))
            .collect()
    })
}

/// Evaluates every polynomial of `cs` at `table`. Rational tables vanish only
/// on an exact zero; float tables vanish when `|p(θ)| / ‖p‖₁ ≤ tol`.
pub fn check_vanishing<T: Scalar>(cs: &ConstraintSet, table: &Table<T>, tol: f64) -> Result<VanishingReport> {
    check_shape(cs, table)?;
    let results = par_map(cs.polys(), |index, p| -> Result<VanishingEntry> {
        let value = p.evaluate(table.cells())?;
        let normalized = value.abs_value().to_f64() / l1_norm(p);
        let vanishes = match T::MODE {
            Mode::Rational => value.is_zero(),
            Mode::Float => normalized <= tol,
        };
        Ok(VanishingEntry {
            index,
            residual: value.to_json(),
            normalized,
            vanishes,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(VanishingReport {
        format: FORMAT_TAG,
        family: cs.family(),
        mode: T::MODE,
        tol,
        all_vanish: results.iter().all(|r| r.vanishes),
        fit_statistic: results.iter().map(|r| r.normalized).fold(0.0, f64::max),
        results,
    })
}

/// `max_p |p(θ)| / ‖p‖₁`, or 0 for an empty set.
pub fn fit_statistic(cs: &ConstraintSet, table: &Table<f64>) -> Result<f64> {
    check_shape(cs, table)?;
    let values = par_map(cs.polys(), |_, p| {
        p.evaluate(table.cells()).map(|v| v.abs() / l1_norm(p))
    });
    values.into_iter().try_fold(0.0, |acc, v| Ok(f64::max(acc, v?)))
}

/// Whether every cell equals the product of its univariate marginals, exactly
/// for rational tables and within `tol` for float tables.
pub fn complete_independence_test<T: Scalar>(table: &Table<T>, tol: f64) -> bool {
    let marginals: Vec<Vec<T>> = (0..table.cards().len()).map(|a| table.marginal(a)).collect();
    table.shape().indices().zip(table.cells()).all(|(index, cell)| {
        let product = index
            .iter()
            .zip(&marginals)
            .fold(T::one(), |acc, (&i, m)| acc * m[i].clone());
        (product - cell.clone()).within(tol)
    })
}
