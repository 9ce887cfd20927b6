//! Exact scalar arithmetic and linear algebra.

pub mod matrix;
pub mod parse;
pub mod scalar;

pub use matrix::{sparse_columns, sparse_kernel, Matrix, QMatrix, Rref, SMatrix};
pub use parse::parse_scalar;
pub use scalar::{rat, Monomial, Rational, Scalar};
