//! Exact computer algebra for H-twisted Courant algebroids and Courant–Dorfman algebras.
//!
//! Structures are given by structure constants over a point or by polynomial
//! structure functions over an affine base, and every computation is exact.

pub mod cli;
pub mod cohomology;
pub mod dirac;
pub mod error;
pub mod exactmath;
pub mod exterior;
pub mod kerforms;
pub mod linfty;
pub mod section;
pub mod structure;
pub mod twist;

pub use error::{Error, Result};
pub use exactmath::{Rational, Scalar};
pub use exterior::Multivector;
pub use section::Section;
pub use structure::{AlgebroidSpec, BaseRing, Kind, SpecParts};
