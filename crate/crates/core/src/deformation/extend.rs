use std::collections::BTreeMap;

use super::ring::BaseRing;
use super::star::StarDeformation;
use crate::algebra::Bimodule;
use crate::error::{Error, Result};
use crate::hochschild::{circle, differential, HochschildClass, HochschildCochain, HochschildComplex, Model};

/// `F_μ = Σ β_ν ∘ β_ρ` over nonconstant `ν ρ = μ`, i.e. the `t^μ` coefficient of
/// `(x ⋆ y) ⋆ z - x ⋆ (y ⋆ z)` when `β_μ` is omitted.
pub fn failure_term(d: &StarDeformation, ring: &BaseRing, mu: usize) -> Result<HochschildCochain> {
    let dim = d.algebra().dim();
    let mut f = HochschildCochain::zero(3, dim, dim);
    for (nu, rho) in ring.splittings(mu) {
        let b_nu = beta_in(d, ring, nu);
        let b_rho = beta_in(d, ring, rho);
        f = f.add(&circle(&b_nu, &b_rho)?);
    }
    Ok(f)
}

/// `β` of `d` at the monomial of `ring` with index `mu`, zero when absent.
fn beta_in(d: &StarDeformation, ring: &BaseRing, mu: usize) -> HochschildCochain {
    match d.ring().index_of(ring.exponents(mu)) {
        Some(i) => d.beta(i),
        None => HochschildCochain::zero(2, d.algebra().dim(), d.algebra().dim()),
    }
}

/// `δβ_μ - F_μ` for every nonconstant monomial; all vanish iff `d` is associative.
pub fn degreewise_residuals(d: &StarDeformation) -> Result<BTreeMap<usize, HochschildCochain>> {
    let a = d.algebra();
    let m = Bimodule::regular(a);
    let mut out = BTreeMap::new();
    for mu in 1..d.ring().dim() {
        let r = differential(a, &m, &d.beta(mu))?.sub(&failure_term(d, d.ring(), mu)?);
        out.insert(mu, r);
    }
    Ok(out)
}

/// One step of order-by-order extension.
#[derive(Clone, Debug)]
pub struct OrderExtension {
    pub target_order: usize,
    /// Failure term per monomial of the target degree, indexed in the target ring.
    pub failures: BTreeMap<usize, HochschildCochain>,
    /// Class of each failure term in `HH^3(a, a)`.
    pub obstructions: BTreeMap<usize, HochschildClass>,
    /// The extended deformation when every obstruction vanishes.
    pub extension: Option<StarDeformation>,
}

impl OrderExtension {
    pub fn is_obstructed(&self) -> bool {
        self.obstructions.values().any(|c| !c.is_zero())
    }

    pub fn obstructed_monomials(&self) -> Vec<usize> {
        self.obstructions
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mu, _)| *mu)
            .collect()
    }
}

/// Tries to extend `d` from order `k` to order `k + 1`.
///
/// For each monomial `μ` of degree `k + 1` the failure term `F_μ` is a
/// normalized 3-cocycle; when all classes vanish, `β_μ` is a normalized
/// solution of `δβ_μ = F_μ`.
pub fn extend_order(d: &StarDeformation) -> Result<OrderExtension> {
    let a = d.algebra();
    let k = d.order();
    let ring = BaseRing::with_labels(d.ring().param_labels().to_vec(), k + 1);
    let m = Bimodule::regular(a);
    let h3 = HochschildComplex::new(a, &m, Model::Normalized)?.space(3);
    let mut failures = BTreeMap::new();
    let mut obstructions = BTreeMap::new();
    for mu in ring.of_degree(k + 1) {
        let f = failure_term(d, &ring, mu)?;
        obstructions.insert(mu, h3.class_of(&f)?);
        failures.insert(mu, f);
    }
    let obstructed = obstructions.values().any(|c| !c.is_zero());
    let extension = if obstructed {
        None
    } else {
        let mut corr = BTreeMap::new();
        for mu in 1..ring.dim() {
            if ring.degree(mu) <= k {
                corr.insert(mu, beta_in(d, &ring, mu));
            }
        }
        for (mu, f) in &failures {
            let beta = h3.coboundary_witness(f)?.ok_or_else(|| Error::Obstructed {
                monomial: ring.monomial_label(*mu),
            })?;
            corr.insert(*mu, beta);
        }
        Some(StarDeformation::new(a.clone(), ring, corr)?)
    };
    Ok(OrderExtension {
        target_order: k + 1,
        failures,
        obstructions,
        extension,
    })
}

/// Extends step by step up to `target` or until the first nonzero obstruction.
pub fn extend_to(d: &StarDeformation, target: usize) -> Result<Vec<OrderExtension>> {
    let mut steps = Vec::new();
    let mut cur = d.clone();
    while cur.order() < target {
        let step = extend_order(&cur)?;
        let next = step.extension.clone();
        steps.push(step);
        match next {
            Some(n) => cur = n,
            None => break,
        }
    }
    Ok(steps)
}
