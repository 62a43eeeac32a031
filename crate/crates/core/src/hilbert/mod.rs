//! Dense complex linear algebra substrate.
//!
//! The inner product is linear in the second argument and conjugate-linear in
//! the first; every formula elsewhere in the crate relies on that convention.

mod eigen;
mod matrix;
mod vector;

pub use eigen::{
    eig_hermitian, eigvals_hermitian, matfunc_hermitian, polarization, quadratic_form,
    HermitianEigenDecomposition, HERMITIAN_TOL,
};
pub use matrix::{relative_residual, ComplexMatrix};
pub use vector::{inner_product, pair_inner, GraphPair, Vector};

pub(crate) use matrix::one;

/// Scalar field of the Hilbert space.
pub type ComplexScalar = num_complex::Complex64;
