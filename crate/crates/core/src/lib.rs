//! Exact computations for Hochschild cohomology, formal deformations of finite
//! dimensional algebras, Koszul duality for exterior algebras and the dg
//! comparison between deformation classes and formality obstructions.

pub mod algebra;
pub mod deformation;
pub mod dg;
pub mod error;
pub mod hochschild;
pub mod koszul;
pub mod linalg;

pub use error::{Error, Result};
