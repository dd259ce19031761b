//! Bigraded exterior algebra of ℂⁿ with constant complex coefficients, and
//! the dense complex linear algebra the rest of the crate is built on.

mod basis;
mod form;
pub mod linalg;

pub use basis::{binomial, dim_bidegree, enumerate_basis, MultiIndexPair, MAX_DIM};
pub use form::{operator_matrix, wedge, wedge_all, Form};
pub use linalg::{
    hermitian_eigen, hermitian_eigenvalues, kernel_basis, numerical_rank, singular_values,
    solve_linear, ComplexMatrix, LuDecomposition, SpectrumReport,
};
