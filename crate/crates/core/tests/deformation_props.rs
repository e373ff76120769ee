mod common;

use std::collections::BTreeMap;

use hhdeform::algebra::{preset_catalog, AssocAlgebra};
use hhdeform::deformation::{
    deform_class, deformation_preset, degreewise_residuals, equivalence_witness, extend_to, first_order_from_cocycle,
    sequence_ia, Ext2Context, StarDeformation,
};
use hhdeform::hochschild::HochschildCochain;
use hhdeform::linalg::{int, rat, sv_axpy, Matrix, Rational};
use proptest::prelude::*;

/// Algebras with a nonzero second Hochschild group, plus one rigid algebra.
fn algebras() -> Vec<AssocAlgebra> {
    [
        ("dual_numbers", vec![]),
        ("truncated_poly", vec![3]),
        ("exterior", vec![2]),
        ("matrix", vec![2]),
    ]
    .into_iter()
    .map(|(n, p)| preset_catalog(n, &p).unwrap())
    .collect()
}

/// A 1-cochain into `a ⊗ T*` that vanishes on the unit.
fn gamma(a: &AssocAlgebra, n: usize, v: &[i64]) -> HochschildCochain {
    let d = a.dim();
    let raw = HochschildCochain::from_fn(1, d, d * n, |t| {
        (0..d * n)
            .map(|k| (k, v[(t[0] * d * n + k) % v.len()]))
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| (k, int(c)))
            .collect()
    });
    // subtract λ(x) γ(1) for a functional with λ(1) = 1
    let (u0, c0) = a.unit()[0].clone();
    let at_unit: Vec<(usize, Rational)> = a
        .unit()
        .iter()
        .fold(Vec::new(), |acc, (i, c)| sv_axpy(&acc, c, raw.value(&[*i])));
    HochschildCochain::from_fn(1, d, d * n, |t| {
        if t[0] == u0 {
            sv_axpy(raw.value(t), &(-int(1) / &c0), &at_unit)
        } else {
            raw.value(t).clone()
        }
    })
}

/// `Σ c_i ξ_i + δγ` over the normalized basis.
fn cocycle(ctx: &Ext2Context, coeffs: &[i64], g: &[i64]) -> HochschildCochain {
    let a = ctx.algebra();
    let d = a.dim();
    let n = ctx.nparams();
    let mut beta = ctx.differential(&gamma(a, n, g)).unwrap();
    for (i, xi) in ctx.normalized_basis().iter().enumerate() {
        beta = beta.axpy(&int(coeffs[i % coeffs.len()]), xi);
    }
    assert_eq!(beta.dim_out(), d * n);
    beta
}

fn small() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 1..10)
}

/// `P e_i = c_i e_{σ(i)}` with the unit kept fixed.
fn transport(a: &AssocAlgebra, shift: usize, scale: i64) -> (AssocAlgebra, Vec<usize>, Vec<Rational>) {
    let d = a.dim();
    let unit = a.unit_index().unwrap();
    let others: Vec<usize> = (0..d).filter(|&i| i != unit).collect();
    let mut sigma: Vec<usize> = (0..d).collect();
    for (k, &i) in others.iter().enumerate() {
        sigma[i] = others[(k + shift) % others.len()];
    }
    let c: Vec<Rational> = (0..d).map(|i| if i == unit { int(1) } else { rat(scale, 1) }).collect();
    let p = Matrix::from_triplets(d, d, (0..d).map(|i| (sigma[i], i, c[i].clone())));
    let b = a.change_basis(&p, a.labels().to_vec()).unwrap();
    (b, sigma, c)
}

/// `β'(e_i, e_j) = P^{-1} β(P e_i, P e_j)` blockwise.
fn transport_cochain(beta: &HochschildCochain, d: usize, sigma: &[usize], c: &[Rational]) -> HochschildCochain {
    let mut inv = vec![0; d];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    HochschildCochain::from_fn(2, d, beta.dim_out(), |t| {
        let s = c[t[0]].clone() * &c[t[1]];
        let mut out: Vec<(usize, Rational)> = beta
            .value(&[sigma[t[0]], sigma[t[1]]])
            .iter()
            .map(|(k, x)| {
                let (blk, e) = (k / d, k % d);
                (blk * d + inv[e], x.clone() * &s / &c[inv[e]])
            })
            .collect();
        out.sort_by_key(|e| e.0);
        out
    })
}

#[test]
fn basis_classes_round_trip() {
    for a in algebras() {
        for n in 1..=2 {
            let ctx = Ext2Context::new(&a, n).unwrap();
            assert_eq!(ctx.normalized_basis().len(), ctx.dim(), "{}", a.name());
            for xi in ctx.normalized_basis() {
                let d = first_order_from_cocycle(&a, xi).unwrap();
                assert_eq!(deform_class(&ctx, &d).unwrap().class, ctx.class_of(xi).unwrap().class);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_cocycles_give_exact_sequences(i in 0usize..4, n in 1usize..=2, c in small(), g in small()) {
        let a = &algebras()[i];
        let ctx = Ext2Context::new(a, n).unwrap();
        let beta = cocycle(&ctx, &c, &g);
        let d = first_order_from_cocycle(a, &beta).unwrap();
        let seq = sequence_ia(&d).unwrap();
        let rep = seq.report();
        prop_assert!(rep.holds(), "{:?}", rep.first_failure());
        let from_seq = ctx.class_of(&seq.ext2_cocycle(None).unwrap()).unwrap();
        prop_assert_eq!(from_seq.class, deform_class(&ctx, &d).unwrap().class);
    }

    #[test]
    fn witnesses_exist_exactly_for_equal_classes(i in 0usize..4, n in 1usize..=2, c in small(), g in small(),
                                                 h in small(), shift in small()) {
        let a = &algebras()[i];
        let ctx = Ext2Context::new(a, n).unwrap();
        let beta = cocycle(&ctx, &c, &g);
        let same = beta.axpy(&int(1), &ctx.differential(&gamma(a, n, &h)).unwrap());
        let other = cocycle(&ctx, &shift, &h);
        let (d0, d1, d2) = (
            first_order_from_cocycle(a, &beta).unwrap(),
            first_order_from_cocycle(a, &same).unwrap(),
            first_order_from_cocycle(a, &other).unwrap(),
        );
        let w = equivalence_witness(&ctx, &d0, &d1).unwrap();
        prop_assert!(w.is_some());
        let equal = deform_class(&ctx, &d0).unwrap().class == deform_class(&ctx, &d2).unwrap().class;
        prop_assert_eq!(equivalence_witness(&ctx, &d0, &d2).unwrap().is_some(), equal);
    }

    #[test]
    fn classes_survive_a_change_of_basis(i in 0usize..3, n in 1usize..=2, c in small(), g in small(),
                                         shift in 0usize..3, scale in prop_oneof![Just(-2i64), Just(3)]) {
        let a = &algebras()[i];
        let ctx = Ext2Context::new(a, n).unwrap();
        let beta = cocycle(&ctx, &c, &g);
        let (b, sigma, coeff) = transport(a, shift, scale);
        let moved = transport_cochain(&beta, a.dim(), &sigma, &coeff);
        let ctx_b = Ext2Context::new(&b, n).unwrap();
        prop_assert_eq!(ctx_b.dim(), ctx.dim());
        let before = ctx.class_of(&beta).unwrap();
        let after = ctx_b.class_of(&moved).unwrap();
        prop_assert_eq!(before.is_zero(), after.is_zero());
        let db = first_order_from_cocycle(&b, &moved).unwrap();
        prop_assert_eq!(deform_class(&ctx_b, &db).unwrap().class, after.class);
    }

    #[test]
    fn residuals_vanish_exactly_for_associative_products(name in prop_oneof![Just("dual_numbers"), Just("clifford")],
                                                         v in small(), which in 0usize..3) {
        let base = deformation_preset(name, 2).unwrap();
        let a = base.algebra().clone();
        let d = a.dim();
        let unit = a.unit_index().unwrap();
        let ring = base.ring().clone();
        let second = ring.of_degree(2);
        let mu = second[which % second.len()];
        let noise = HochschildCochain::from_fn(2, d, d, |t| {
            if t.contains(&unit) {
                return vec![];
            }
            let k = t[0] * d + t[1];
            let x = v[k % v.len()];
            if x == 0 { vec![] } else { vec![(k % d, int(x))] }
        });
        let mut corr: BTreeMap<usize, HochschildCochain> = base.corrections().clone();
        let old = corr.remove(&mu).unwrap_or_else(|| HochschildCochain::zero(2, d, d));
        corr.insert(mu, old.axpy(&int(1), &noise));
        let perturbed = StarDeformation::new_unchecked(a, ring, corr).unwrap();
        let residuals = degreewise_residuals(&perturbed).unwrap();
        let all_zero = residuals.values().all(|r| r.is_zero());
        prop_assert_eq!(all_zero, perturbed.associativity_defect().is_none());
    }
}

#[test]
fn extensions_found_order_by_order_have_zero_residuals() {
    for name in ["dual_numbers", "clifford"] {
        let d = deformation_preset(name, 1).unwrap();
        for step in extend_to(&d, 3).unwrap() {
            let e = step.extension.expect("unobstructed");
            assert!(e.associativity_defect().is_none());
            assert!(
                degreewise_residuals(&e).unwrap().values().all(|r| r.is_zero()),
                "{name}"
            );
        }
    }
}
