//! Discrete Bayesian networks with hidden variables, viewed as algebraic varieties.
//!
//! The crate covers four pieces that share one multi-index convention
//! (row-major, nodes in document order):
//!
//! - [`net_model`]: networks, conditional probability tables, the forward
//!   parametrization `θ_x = ∏ w_ijk`, marginalization onto observed nodes and
//!   d-separation.
//! - [`polyring`]: exact sparse polynomials over ℚ in the observable
//!   coordinates, small determinants and evaluation at tables.
//! - [`dimension`]: complete / standard / expected dimension, the flattening
//!   bound, the secant-defectivity classifier for naive Bayes models and the
//!   effective dimension as generic Jacobian rank.
//! - [`constraints`]: closed-form generators of observable constraints and
//!   vanishing / fit checks.

pub mod constraints;
pub mod dimension;
pub mod error;
pub mod net_model;
pub mod polyring;
pub mod scalar;
pub mod shape;

pub use error::{Error, Result};
pub use num_rational::BigRational;
pub use scalar::{Mode, Scalar};
pub use shape::Shape;

/// Version tag carried by every JSON document this crate reads or writes.
pub const FORMAT_TAG: &str = "bnalg-v1";
