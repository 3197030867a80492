//! Weights, minimum distances, dual distances and empirical checks of the lemmas behind
//! the distance formulas.

pub mod distance;
pub mod dual;
pub mod enumerate;
pub mod lemmas;

pub use distance::{
    d_affine_formula, d_hermitian_formula, distance, min_distance_exhaustive, min_distance_subfield,
    min_distance_subfield_default, weight, weight_of_function, DistanceCertificate, DistanceMethod,
};
pub use dual::{dual_min_distance, is_dual_word, DualDistanceCertificate, DualWord};
