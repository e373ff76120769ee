mod common;

use common::{catalog_index, entries, rebased, small_catalog};
use hhdeform::algebra::{AssocAlgebra, Bimodule};
use hhdeform::hochschild::{check_graded_commutativity, cup, differential, hh_dims, HochschildCochain, Model};
use hhdeform::linalg::{int, sign, Matrix};
use proptest::prelude::*;

fn cochain(a: &AssocAlgebra, arity: usize, values: &[i64]) -> HochschildCochain {
    let d = a.dim();
    HochschildCochain::from_fn(arity, d, d, |t| {
        let base = t.iter().fold(0, |acc, &x| acc * d + x) * d;
        (0..d)
            .map(|k| (k, values[(base + k) % values.len()]))
            .filter(|(_, v)| *v != 0)
            .map(|(k, v)| (k, int(v)))
            .collect()
    })
}

fn values() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 1..23)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn differential_squares_to_zero(i in catalog_index(), p in 0usize..=3, v in values()) {
        let a = &small_catalog()[i];
        let m = Bimodule::regular(a);
        let f = cochain(a, p, &v);
        let ddf = differential(a, &m, &differential(a, &m, &f).unwrap()).unwrap();
        prop_assert!(ddf.is_zero());
    }

    #[test]
    fn cup_satisfies_leibniz(i in catalog_index(), p in 0usize..=2, q in 0usize..=1, v in values(), w in values()) {
        let a = &small_catalog()[i];
        let m = Bimodule::regular(a);
        let (f, g) = (cochain(a, p, &v), cochain(a, q, &w));
        let lhs = differential(a, &m, &cup(a, &f, &g).unwrap()).unwrap();
        let left = cup(a, &differential(a, &m, &f).unwrap(), &g).unwrap();
        let right = cup(a, &f, &differential(a, &m, &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, left.axpy(&sign(p as i64), &right));
    }

    #[test]
    fn cup_is_associative(i in catalog_index(), p in 0usize..=2, q in 0usize..=1, r in 0usize..=1,
                          u in values(), v in values(), w in values()) {
        let a = &small_catalog()[i];
        let (f, g, h) = (cochain(a, p, &u), cochain(a, q, &v), cochain(a, r, &w));
        let lhs = cup(a, &cup(a, &f, &g).unwrap(), &h).unwrap();
        let rhs = cup(a, &f, &cup(a, &g, &h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hh_is_independent_of_the_basis(i in catalog_index(), l in entries(), u in entries()) {
        let a = &small_catalog()[i];
        let b = rebased(a, &l, &u);
        let dims = |x: &AssocAlgebra| hh_dims(x, &Bimodule::regular(x), 0..=2, Model::Bar).unwrap();
        prop_assert_eq!(dims(a), dims(&b));
    }

    #[test]
    fn hh_is_independent_of_basis_order(i in catalog_index(), shift in 1usize..4) {
        let a = &small_catalog()[i];
        let d = a.dim();
        let perm = Matrix::from_triplets(d, d, (0..d).map(|k| ((k + shift) % d, k, int(1))));
        let b = a.change_basis(&perm, (0..d).map(|k| format!("p{k}")).collect()).unwrap();
        let dims = |x: &AssocAlgebra| hh_dims(x, &Bimodule::regular(x), 0..=2, Model::Bar).unwrap();
        prop_assert_eq!(dims(a), dims(&b));
    }
}

#[test]
fn cup_commutes_up_to_coboundaries_on_small_algebras() {
    for a in small_catalog() {
        let rep = check_graded_commutativity(&a, 4, Model::Normalized).unwrap();
        assert!(rep.all_commute(), "{}", a.name());
    }
}
