use crate::error::{Error, Result};
use crate::net_model::{NetworkSpec, ParameterAssignment};
use crate::scalar::Scalar;

/// Jacobian of free parameters ↦ observable table, at `params`.
///
/// Rows follow the observable cells in row-major order; columns follow
/// [`ParameterAssignment::free_parameters`]. Each row's last state is
/// eliminated as `1 − Σ others`, so by the product rule
/// `∂θ_x/∂w_ijk = (δ[x_i = k] − δ[x_i = last]) · ∏_{m≠i} w_m` whenever the
/// parent configuration of node `i` in `x` is `j`; hidden coordinates are
/// summed into the observable row.
pub fn jacobian<T: Scalar>(net: &NetworkSpec, params: &ParameterAssignment<T>) -> Result<Vec<Vec<T>>> {
    if let Some((i, j, k, _)) = params.iter_entries().find(|(.., w)| **w <= T::zero()) {
        return Err(Error::NonPositiveParameter {
            node: i,
            config: j,
            state: k,
        });
    }

    let n = net.len();
    // first column of each (node, parent configuration) block
    let mut offsets = Vec::with_capacity(n);
    let mut col = 0;
    for i in 0..n {
        let free = net.node(i).card - 1;
        offsets.push(
            (0..net.parent_shape(i).len())
                .map(|j| col + j * free)
                .collect::<Vec<_>>(),
        );
        col += free * net.parent_shape(i).len();
    }
    let ncols = col;

    let observed = net.observed();
    let obs_shape = net.observed_shape();
    let mut jac = vec![vec![T::zero(); ncols]; obs_shape.len()];

    let full = net.full_shape();
    let mut prefix = vec![T::one(); n + 1];
    let mut suffix = vec![T::one(); n + 1];
    for x in full.indices() {
        let configs: Vec<usize> = (0..n).map(|i| net.parent_config(i, &x)).collect();
        let factors: Vec<&T> = (0..n).map(|i| params.get(i, configs[i], x[i])).collect();
        for i in 0..n {
            prefix[i + 1] = prefix[i].clone() * factors[i].clone();
        }
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1].clone() * factors[i].clone();
        }
        let row_id = observed
            .iter()
            .zip(obs_shape.strides())
            .map(|(&p, &s)| x[p] * s)
            .sum::<usize>();
        let row = &mut jac[row_id];
        for i in 0..n {
            let others = prefix[i].clone() * suffix[i + 1].clone();
            let last = net.node(i).card - 1;
            let base = offsets[i][configs[i]];
            if x[i] < last {
                let c = base + x[i];
                row[c] = row[c].clone() + others;
            } else {
                for cell in &mut row[base..base + last] {
                    *cell = cell.clone() - others.clone();
                }
            }
        }
    }
    Ok(jac)
}
