//! Dense real/complex matrices and the decompositions used throughout the crate.

mod linalg;
mod matrix;

pub use linalg::{
    adjugate, determinant, frobenius_norm, hermitian_eigenvalues, invert, spectral_norm, svd,
    symmetric_eigen, SvdResult, DEFAULT_SINGULAR_TOL, MAX_DIM,
};
pub use matrix::{ComplexMatrix, RealMatrix};
