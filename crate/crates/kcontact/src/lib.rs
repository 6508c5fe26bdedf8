//! k-contact Hamiltonian field theory on the canonical phase space
//! (q^i, p_i^a, z^a): Hamilton-De Donder-Weyl k-vector fields, the gauge
//! kernel, Hamilton-Jacobi residuals, integral sections and a corpus of
//! dissipative field theories with closed-form solutions.

// NaN-rejecting `!(x <= tol)` tests and index-heavy kernels are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod corpus;
pub mod dual;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod grid;
pub mod hdw;
pub mod hj;
pub mod integrate;
pub mod linalg;
pub mod sampling;
pub mod sections;

pub use error::{Error, Result};
