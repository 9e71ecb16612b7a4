//! Exact machinery for bounding prime-power torsion of elliptic curves over
//! number fields of small degree: Manin-symbol presentations of relative
//! homology of `X_0(p^n)`, Hecke images of the winding symbol, the path
//! construction behind the independence test, q-expansion Hecke calculus and
//! the closed-form bounds.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod hecke_symbols;
pub mod linalg;
pub mod qexp;
pub mod rel_homology;
pub mod residue_p1;
pub mod winding_paths;

pub use error::{Error, Result};
