//! Hochschild cochains, the cup product, the Gerstenhaber bracket and
//! cohomology `HH^n(a, M)`.

mod cochain;
mod complex;

pub use cochain::{
    circle, cup, differential, gerstenhaber_bracket, multiplication_cochain, tuple_count, tuple_digits, tuple_index,
    HochschildCochain,
};
pub use complex::{hh, hh_dims, hh_self, HochschildClass, HochschildComplex, HochschildSpace, Model};

use crate::algebra::{AssocAlgebra, Bimodule};
use crate::error::Result;
use crate::linalg::sign;

/// One verified pair in a commutativity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub degrees: (usize, usize),
    pub indices: (usize, usize),
    pub commutes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutativityReport {
    pub max_degree: usize,
    pub hh_dims: Vec<usize>,
    pub pairs: Vec<PairCheck>,
}

impl CommutativityReport {
    pub fn all_commute(&self) -> bool {
        self.pairs.iter().all(|p| p.commutes)
    }
}

/// For every pair of basis classes `ξ ∈ HH^p`, `η ∈ HH^q` with `p + q <= max_degree`,
/// decides whether `ξ ⌣ η - (-1)^{pq} η ⌣ ξ` is a coboundary.
pub fn check_graded_commutativity(a: &AssocAlgebra, max_degree: usize, model: Model) -> Result<CommutativityReport> {
    let m = Bimodule::regular(a);
    let c = HochschildComplex::new(a, &m, model)?;
    let spaces: Vec<HochschildSpace> = (0..=max_degree).map(|n| c.space(n)).collect();
    let mut pairs = Vec::new();
    for p in 0..=max_degree {
        for q in p..=max_degree - p {
            let target = &spaces[p + q];
            for (i, xi) in spaces[p].representatives().iter().enumerate() {
                for (j, eta) in spaces[q].representatives().iter().enumerate() {
                    if p == q && j < i {
                        continue;
                    }
                    let xy = cup(a, xi, eta)?;
                    let yx = cup(a, eta, xi)?;
                    let comm = xy.axpy(&-sign((p * q) as i64), &yx);
                    pairs.push(PairCheck {
                        degrees: (p, q),
                        indices: (i, j),
                        commutes: target.is_coboundary(&comm)?,
                    });
                }
            }
        }
    }
    Ok(CommutativityReport {
        max_degree,
        hh_dims: spaces.iter().map(|s| s.dim()).collect(),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::preset_catalog;
    use crate::linalg::{int, rat, SparseVec};

    fn derivative_product(a: &AssocAlgebra) -> HochschildCochain {
        // β(x^i, x^j) = i j x^{i+j-2} on Q[x]/(x^m)
        let d = a.dim();
        HochschildCochain::from_fn(2, d, d, |t| {
            let (i, j) = (t[0], t[1]);
            if i == 0 || j == 0 || i + j - 2 >= d {
                Vec::new()
            } else {
                vec![(i + j - 2, int((i * j) as i64))]
            }
        })
    }

    #[test]
    fn dims_of_dual_numbers_and_matrices() {
        let dual = preset_catalog("dual_numbers", &[]).unwrap();
        assert_eq!(
            hh_dims(&dual, &Bimodule::regular(&dual), 0..=3, Model::Bar).unwrap(),
            vec![2, 1, 1, 1]
        );
        let m2 = preset_catalog("matrix", &[2]).unwrap();
        assert_eq!(
            hh_dims(&m2, &Bimodule::regular(&m2), 0..=2, Model::Bar).unwrap(),
            vec![1, 0, 0]
        );
        let q = preset_catalog("field", &[]).unwrap();
        assert_eq!(
            hh_dims(&q, &Bimodule::regular(&q), 0..=2, Model::Bar).unwrap(),
            vec![1, 0, 0]
        );
    }

    #[test]
    fn normalized_model_agrees_with_bar() {
        for (name, p) in [
            ("dual_numbers", vec![]),
            ("truncated_poly", vec![3]),
            ("exterior", vec![2]),
        ] {
            let a = preset_catalog(name, &p).unwrap();
            let m = Bimodule::regular(&a);
            let bar = hh_dims(&a, &m, 0..=3, Model::Bar).unwrap();
            let norm = hh_dims(&a, &m, 0..=3, Model::Normalized).unwrap();
            assert_eq!(bar, norm, "{name}");
        }
    }

    #[test]
    fn delta_matrix_matches_formula() {
        let a = preset_catalog("truncated_poly", &[3]).unwrap();
        let m = Bimodule::regular(&a);
        let c = HochschildComplex::new(&a, &m, Model::Bar).unwrap();
        let beta = derivative_product(&a);
        let via_matrix = c.delta(2).mul_sparse(&beta.to_vector());
        assert_eq!(via_matrix, differential(&a, &m, &beta).unwrap().to_vector());
    }

    #[test]
    fn derivative_product_cocycle_only_for_dual_numbers() {
        let dual = preset_catalog("dual_numbers", &[]).unwrap();
        let m = Bimodule::regular(&dual);
        assert!(differential(&dual, &m, &derivative_product(&dual)).unwrap().is_zero());
        // on Q[x]/(x^3) the truncated f'g' fails at (x, x, x^2) with value -3x^2
        let a = preset_catalog("truncated_poly", &[3]).unwrap();
        let m = Bimodule::regular(&a);
        let d = differential(&a, &m, &derivative_product(&a)).unwrap();
        assert_eq!(d.value(&[1, 1, 2]), &vec![(2, int(-3))]);
    }

    fn carry_cocycle(a: &AssocAlgebra) -> HochschildCochain {
        // β(x^i, x^j) = x^{i+j-m} when i + j >= m
        let d = a.dim();
        HochschildCochain::from_fn(2, d, d, |t| {
            if t[0] + t[1] >= d {
                vec![(t[0] + t[1] - d, int(1))]
            } else {
                Vec::new()
            }
        })
    }

    #[test]
    fn central_zero_cochain_is_closed() {
        let a = preset_catalog("matrix", &[2]).unwrap();
        let m = Bimodule::regular(&a);
        let z = HochschildCochain::from_fn(0, 4, 4, |_| a.unit().clone());
        assert!(differential(&a, &m, &z).unwrap().is_zero());
        let e11 = HochschildCochain::from_fn(0, 4, 4, |_| vec![(0, int(1))]);
        let d = differential(&a, &m, &e11).unwrap();
        // (δz)(x) = x z - z x
        let x: SparseVec = vec![(1, int(1))];
        let expected = crate::linalg::sv_axpy(&a.mul(&x, &vec![(0, int(1))]), &int(-1), &a.mul(&vec![(0, int(1))], &x));
        assert_eq!(d.value(&[1]), &expected);
    }

    #[test]
    fn bracket_with_multiplication_is_signed_differential() {
        let a = preset_catalog("dual_numbers", &[]).unwrap();
        let m = Bimodule::regular(&a);
        let mu = multiplication_cochain(&a);
        let f = HochschildCochain::from_fn(1, 2, 2, |t| vec![(0, int(t[0] as i64 + 2)), (1, rat(1, 3))]);
        let beta = HochschildCochain::from_fn(2, 2, 2, |t| vec![(t[0], int(1 + t[1] as i64))]);
        assert_eq!(
            gerstenhaber_bracket(&mu, &f).unwrap(),
            differential(&a, &m, &f).unwrap()
        );
        assert_eq!(
            gerstenhaber_bracket(&mu, &beta).unwrap(),
            differential(&a, &m, &beta).unwrap().scale(&int(-1))
        );
    }

    #[test]
    fn self_bracket_of_carry_cocycle_is_exact() {
        let a = preset_catalog("truncated_poly", &[3]).unwrap();
        let m = Bimodule::regular(&a);
        let beta = carry_cocycle(&a);
        assert!(differential(&a, &m, &beta).unwrap().is_zero());
        let br = gerstenhaber_bracket(&beta, &beta).unwrap();
        assert_eq!(br, circle(&beta, &beta).unwrap().scale(&int(2)));
        let h3 = hh_self(&a, 3).unwrap();
        assert!(h3.is_coboundary(&br).unwrap());
    }

    #[test]
    fn unit_zero_cochain_is_cup_unit() {
        let a = preset_catalog("exterior", &[2]).unwrap();
        let one = HochschildCochain::from_fn(0, 4, 4, |_| a.unit().clone());
        let g = HochschildCochain::from_fn(1, 4, 4, |t| vec![(3 - t[0], int(1))]);
        assert_eq!(cup(&a, &one, &g).unwrap(), g);
        assert_eq!(cup(&a, &g, &one).unwrap(), g);
    }

    #[test]
    fn dual_number_derivation_cup() {
        let a = preset_catalog("dual_numbers", &[]).unwrap();
        // x∂: 1 -> 0, x -> x
        let xd = HochschildCochain::from_fn(1, 2, 2, |t| if t[0] == 1 { vec![(1, int(1))] } else { Vec::new() });
        let c = cup(&a, &xd, &xd).unwrap();
        assert!(c.value(&[1, 1]).is_empty());
    }

    #[test]
    fn commutativity_small_cases() {
        let a = preset_catalog("dual_numbers", &[]).unwrap();
        let r = check_graded_commutativity(&a, 4, Model::Normalized).unwrap();
        assert!(r.all_commute());
        assert!(!r.pairs.is_empty());
        let q = preset_catalog("field", &[]).unwrap();
        assert!(check_graded_commutativity(&q, 3, Model::Bar).unwrap().all_commute());
    }

    #[test]
    fn class_of_rejects_non_cocycles() {
        let a = preset_catalog("dual_numbers", &[]).unwrap();
        let h2 = hh_self(&a, 2).unwrap();
        let f = HochschildCochain::from_fn(2, 2, 2, |t| if t == [0, 0] { vec![(0, int(1))] } else { Vec::new() });
        assert!(matches!(h2.class_of(&f), Err(crate::Error::NotACocycle { .. })));
    }
}
