//! Small networks on which each hidden-variable constraint family vanishes.
//!
//! Node order is always `X1, X2, X3, X4` with `X4` hidden, so the observable
//! table is indexed `(x1, x2, x3)`.

use crate::error::Result;
use crate::net_model::{network_from_parts, NetworkSpec};

/// `X1 ← X2 → X3`, `X2 → X4 → X3`: each slice `θ_{· j · +}` has rank 1.
pub fn quadratic_network(observed: [usize; 3], hidden: usize) -> Result<NetworkSpec> {
    let [r1, r2, r3] = observed;
    network_from_parts(&[
        ("X1", r1, &["X2"], false),
        ("X2", r2, &[], false),
        ("X3", r3, &["X2", "X4"], false),
        ("X4", hidden, &["X2"], true),
    ])
}

/// `X3 → X4`, both pointing into `X1` and `X2`: each slice `θ_{· · k +}` is a
/// mixture of `hidden` rank-1 matrices.
pub fn cubic_network(observed: [usize; 3], hidden: usize) -> Result<NetworkSpec> {
    let [r1, r2, r3] = observed;
    network_from_parts(&[
        ("X1", r1, &["X3", "X4"], false),
        ("X2", r2, &["X3", "X4"], false),
        ("X3", r3, &[], false),
        ("X4", hidden, &["X3"], true),
    ])
}

/// `X2 → X3 → X4` and `X2 → X1 ← X4`, satisfying `X1 ⊥ X3 | {X2, X4}` and
/// `X2 ⊥ X4 | X3`.
pub fn sextic_network(observed: [usize; 3], hidden: usize) -> Result<NetworkSpec> {
    let [r1, r2, r3] = observed;
    network_from_parts(&[
        ("X1", r1, &["X2", "X4"], false),
        ("X2", r2, &[], false),
        ("X3", r3, &["X2"], false),
        ("X4", hidden, &["X3"], true),
    ])
}

/// Fully observed chain `X3 → X1 → X2`.
pub fn chain_network(cards: [usize; 3]) -> Result<NetworkSpec> {
    let [r1, r2, r3] = cards;
    network_from_parts(&[
        ("X1", r1, &["X3"], false),
        ("X2", r2, &["X1"], false),
        ("X3", r3, &[], false),
    ])
}
