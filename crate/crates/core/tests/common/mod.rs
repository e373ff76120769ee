#![allow(dead_code)]

use hhdeform::algebra::{preset_catalog, AssocAlgebra};
use hhdeform::linalg::{int, Matrix};
use proptest::prelude::*;

/// Catalog algebras of dimension at most four.
pub fn small_catalog() -> Vec<AssocAlgebra> {
    [
        ("field", vec![]),
        ("dual_numbers", vec![]),
        ("truncated_poly", vec![3]),
        ("truncated_poly", vec![4]),
        ("truncated_poly2", vec![2, 2]),
        ("matrix", vec![2]),
        ("exterior", vec![2]),
        ("group_algebra", vec![2]),
        ("group_algebra", vec![3]),
    ]
    .into_iter()
    .map(|(n, p)| preset_catalog(n, &p).unwrap())
    .collect()
}

pub fn catalog_index() -> impl Strategy<Value = usize> {
    0..small_catalog().len()
}

/// `L U` with unit diagonals, so always invertible.
pub fn unitriangular_product(d: usize, lower: &[i64], upper: &[i64]) -> Matrix {
    let mut l = Matrix::identity(d);
    let mut u = Matrix::identity(d);
    let mut k = 0;
    for i in 0..d {
        for j in 0..i {
            l = l.add(&Matrix::from_triplets(d, d, [(i, j, int(lower[k % lower.len()]))]));
            u = u.add(&Matrix::from_triplets(d, d, [(j, i, int(upper[k % upper.len()]))]));
            k += 1;
        }
    }
    l.mul(&u)
}

pub fn entries() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 1..8)
}

/// The same algebra written in a random basis.
pub fn rebased(a: &AssocAlgebra, lower: &[i64], upper: &[i64]) -> AssocAlgebra {
    let d = a.dim();
    let p = unitriangular_product(d, lower, upper);
    let labels = (0..d).map(|i| format!("b{i}")).collect();
    a.change_basis(&p, labels).unwrap()
}
