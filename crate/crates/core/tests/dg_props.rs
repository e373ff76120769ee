use hhdeform::deformation::{deform_class, deformation_preset, Ext2Context};
use hhdeform::dg::{
    build_r_model, build_resolution, check_lemma_r, formality_lift, ra_tensor_ra, theta_exactness, verify_prop_cp,
};
use proptest::prelude::*;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn lifts_commute_strictly_for_every_seed(name in prop_oneof![Just("trivial"), Just("dual_numbers"), Just("clifford")],
                                             order in 1usize..=2, seed in any::<u64>()) {
        let d = deformation_preset(name, order).unwrap();
        let rep = formality_lift(&d, 2, seed).unwrap();
        prop_assert!(rep.chain_maps && rep.bimodule_maps);
        prop_assert!(rep.commute && rep.commutator_nnz.iter().all(|c| c.2 == 0));
        let first = if order == 1 { d.clone() } else { d.truncate(1).unwrap() };
        let ctx = Ext2Context::new(d.algebra(), d.nparams()).unwrap();
        prop_assert_eq!(&rep.class.class, &deform_class(&ctx, &first).unwrap().class);
        prop_assert!(rep.holds());
    }
}

#[test]
fn r_model_is_acyclic_in_every_window() {
    for n in 1..=2 {
        for w in 1..=3 {
            let model = build_r_model(n, w).unwrap();
            let rep = model.report().unwrap();
            for k in 0..=n.min(w) {
                let expected = binomial(n, k) * binomial(n + w - k, n);
                assert_eq!(
                    rep.dims.get(&-(k as i32)).copied().unwrap_or(0),
                    expected,
                    "n={n} W={w} k={k}"
                );
            }
            for (deg, h) in &rep.cohomology {
                assert_eq!(*h, usize::from(*deg == 0), "n={n} W={w} degree {deg}");
            }
            assert!(rep.holds());
            if w <= 2 {
                assert!(check_lemma_r(&model).unwrap().holds(), "n={n} W={w}");
            }
        }
    }
}

#[test]
fn truncation_and_quotient_agree_for_presets() {
    for name in ["trivial", "dual_numbers", "clifford"] {
        for order in 1..=2 {
            let d = deformation_preset(name, order).unwrap();
            let rep = verify_prop_cp(&d).unwrap();
            assert!(rep.truncation_quasi_iso, "{name} N={order}");
            assert!(rep.holds(), "{name} N={order}: {rep:?}");
        }
    }
}

#[test]
fn theta_is_t_exact_on_small_modules() {
    for name in ["dual_numbers", "clifford"] {
        let d = deformation_preset(name, 1).unwrap();
        let res = build_resolution(&d).unwrap();
        let x = ra_tensor_ra(&res).unwrap();
        for inst in theta_exactness(&res, &x).unwrap() {
            assert!(
                inst.holds(),
                "{name} {}: {:?} vs {:?}",
                inst.name,
                inst.cohomology,
                inst.expected
            );
        }
    }
}
