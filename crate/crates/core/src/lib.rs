//! Affine Hermitian Grassmann codes and affine Grassmann codes over small finite fields.
//!
//! The crate builds generator matrices for both families, certifies their dimension,
//! minimum distance and dual distance exactly, and provides empirical checks of the
//! counting and weight statements that underpin the distance formulas.

pub mod analysis;
pub mod codebuild;
pub mod error;
pub mod galois;
pub mod hermitian;
pub mod linalg;
pub mod minors;

pub use error::{Error, Result};
pub use galois::{FieldElement, FieldParams, FieldTower};
pub use hermitian::{HermitianIndexing, HermitianMatrix, SquareMatrix};
pub use minors::{MinorBasis, MinorCombination, MinorIndex};
pub use codebuild::{CodeFamily, CodeSpec, Codeword, GeneratorMatrix};
