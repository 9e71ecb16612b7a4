//! Exact linear algebra: scalar fields, sparse echelon forms, Smith form.

pub mod field;
pub mod smith;
pub mod sparse;

pub use field::{FieldSpec, PrimeField, Rationals, ScalarField};
pub use smith::{smith_invariants, DEFAULT_SMITH_CAP};
pub use sparse::{rank_of, Echelon, SparseVec};
