//! Deliberately plain exact verifiers: rational linear algebra and box
//! brute force. The fast paths in [`crate::ulrich`] are checked against these.

// Index loops mirror the matrix algebra more directly than iterator chains.
#![allow(clippy::needless_range_loop)]

mod brute;
mod inertia;
mod matrix;

pub use brute::{brute_force, brute_force_parallel, LinearConstraint};
pub use inertia::{characteristic_polynomial, definiteness, eigen_sign_inertia, inertia, Definiteness, Inertia};
pub use matrix::{integer_nullspace, nullspace, primitive, rank, RationalMatrix};
