//! Exact linear algebra over the rationals.

pub mod complex;
pub mod echelon;
pub mod matrix;
pub mod rational;
pub mod subquotient;

pub use complex::{CochainComplex, Cohomology, FlatIndex, GradedSpace};
pub use echelon::{
    quotient_by_span, quotient_space, rank_kernel_image, solve, AdaptedBasis, Echelon, KernelImage, Quotient, Solver,
};
pub use matrix::{sv_axpy, sv_collect, sv_from_dense, sv_scale, sv_to_dense, Matrix, SparseVec};
pub use rational::{format_rational, int, one, parse_rational, rat, sign, zero, Rational};
pub use subquotient::{span_basis, Subquotient};
