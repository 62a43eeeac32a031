//! Characteristic matrices of closed operators, realized on dense complex
//! matrices.
//!
//! The crate is organized bottom-up:
//!
//! - [`hilbert`]: complex vectors and matrices, Hermitian eigendecomposition,
//!   functional calculus and the polarization identity.
//! - [`graph`]: the characteristic matrix (graph projection) of an operator,
//!   an independent graph-basis oracle and the block identities it satisfies.
//! - [`family`]: operator families sampled on a parameter grid and their
//!   direct integrals, assembled as block-diagonal operators.
//! - [`calculus`]: resolvents, spectral projections, unitary groups and the
//!   integral representations linking them, for Hermitian operators.
//! - [`boundary`]: finite-difference realizations of `(1/i) d/dx` on `[0, 1]`
//!   under Dirichlet, periodic and free boundary conditions, and the
//!   constructions built on them.
//!
//! On a finite grid with matrix fibers, the maximally defined multiplication
//! operator and the direct integral coincide, and weak measurability of a
//! family is equivalent to measurability of its characteristic matrices.
//! Families that separate these notions involve nonmeasurable parameter sets
//! and have no finite sample; nothing in this crate attempts to represent them.

pub mod boundary;
pub mod calculus;
pub mod error;
pub mod family;
pub mod graph;
pub mod hilbert;
pub mod random;

pub use error::{Error, Result};
pub use graph::{CharacteristicMatrix, Identity, IdentityReport};
pub use hilbert::{ComplexMatrix, ComplexScalar, GraphPair, HermitianEigenDecomposition, Vector};
