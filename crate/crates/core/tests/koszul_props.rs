use hhdeform::koszul::{check_multiplicativity, check_sym_action, ext_lambda, KoszulResolution};
use proptest::prelude::*;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn koszul_complex_is_a_resolution(n in 1usize..=3, depth in 1usize..=4) {
        let k = KoszulResolution::new(n, depth).unwrap();
        let m = k.module();
        let d = m.differential();
        prop_assert!(d.mul(d).is_zero());
        let rep = k.report().unwrap();
        prop_assert!(rep.is_resolution(), "{:?}", rep.homology);
    }

    #[test]
    fn sym_operators_are_commuting_lambda_linear_chain_maps(n in 1usize..=3, depth in 2usize..=4) {
        let k = KoszulResolution::new(n, depth).unwrap();
        let m = k.module();
        let d = m.differential();
        let ops: Vec<_> = (0..n).map(|j| k.sym_operator(j)).collect();
        for s in &ops {
            prop_assert!(d.mul(s).sub(&s.mul(d)).is_zero());
            for j in 0..n {
                prop_assert!(m.theta(j).mul(s).sub(&s.mul(m.theta(j))).is_zero());
            }
            for t in &ops {
                prop_assert!(s.mul(t).sub(&t.mul(s)).is_zero());
            }
        }
        prop_assert!(check_sym_action(&k).unwrap().holds());
    }

    #[test]
    fn ext_dimensions_are_binomial(n in 1usize..=3, max in 0usize..=6) {
        let dims = ext_lambda(n, max).unwrap().dims();
        for (j, &e) in dims.iter().enumerate() {
            let expected = if j % 2 == 1 { 0 } else { binomial(n + j / 2 - 1, j / 2) };
            prop_assert_eq!(e, expected, "Ext^{}", j);
        }
    }
}

#[test]
fn yoneda_products_match_sym_products() {
    for n in 1..=2 {
        let k = KoszulResolution::new(n, 3).unwrap();
        assert!(check_multiplicativity(&k).unwrap(), "n = {n}");
    }
    assert!(check_multiplicativity(&KoszulResolution::new(2, 2).unwrap()).is_err());
}
