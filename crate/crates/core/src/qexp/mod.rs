//! Hecke operators on truncated q-expansions with exact coefficients.

pub mod character;
pub mod matrix;
pub mod oldclass;
pub mod poly;
pub mod relations;
pub mod ring;
pub mod series;

pub use character::Character;
pub use matrix::Matrix;
pub use oldclass::{
    build_up_matrix, formal_eigenform, jordan_basis_trivial_char, kernel_vector_check, oldclass_blocks,
    up_matrix_report, LevelCase, Shape,
};
pub use poly::{charpoly, Poly};
pub use relations::verify_relations;
pub use ring::{CoefficientField, CoefficientRing, MPoly, Quad};
pub use series::QExpansion;
