use std::collections::BTreeMap;

use super::ring::BaseRing;
use crate::algebra::{basis_vector, preset_catalog, AssocAlgebra};
use crate::error::{Error, Result};
use crate::hochschild::HochschildCochain;
use crate::linalg::{int, sv_axpy, SparseVec};

/// Truncated star product `a ⋆ a' = a a' + Σ_μ β_μ(a, a') t^μ` on `a ⊗ O_N`.
///
/// Elements of `a ⊗ O_N` use index `μ * dim a + i` for `e_i t^μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarDeformation {
    a: AssocAlgebra,
    ring: BaseRing,
    corrections: BTreeMap<usize, HochschildCochain>,
}

impl StarDeformation {
    /// Validates normalization and associativity to order `N`.
    pub fn new(a: AssocAlgebra, ring: BaseRing, corrections: BTreeMap<usize, HochschildCochain>) -> Result<Self> {
        let d = Self::new_unchecked(a, ring, corrections)?;
        if let Some(w) = d.normalization_defect() {
            return Err(Error::Invalid { what: w });
        }
        if let Some((i, j, k, mu)) = d.associativity_defect() {
            return Err(Error::NotAnAlgebra {
                what: format!(
                    "star product not associative on ({}, {}, {}) at {}",
                    d.a.label(i),
                    d.a.label(j),
                    d.a.label(k),
                    d.ring.monomial_label(mu)
                ),
            });
        }
        Ok(d)
    }

    /// Shape checks only.
    pub fn new_unchecked(
        a: AssocAlgebra,
        ring: BaseRing,
        corrections: BTreeMap<usize, HochschildCochain>,
    ) -> Result<Self> {
        let dim = a.dim();
        let mut kept = BTreeMap::new();
        for (mu, beta) in corrections {
            if mu == 0 || mu >= ring.dim() {
                return Err(Error::Invalid {
                    what: format!(
                        "correction index {mu} is not a nonconstant monomial of O_{}",
                        ring.order()
                    ),
                });
            }
            if beta.arity() != 2 || beta.dim_in() != dim || beta.dim_out() != dim {
                return Err(Error::MismatchedParameters {
                    what: "corrections must be bilinear maps a x a -> a".into(),
                });
            }
            if !beta.is_zero() {
                kept.insert(mu, beta);
            }
        }
        Ok(StarDeformation {
            a,
            ring,
            corrections: kept,
        })
    }

    pub fn trivial(a: AssocAlgebra, ring: BaseRing) -> Self {
        StarDeformation {
            a,
            ring,
            corrections: BTreeMap::new(),
        }
    }

    pub fn algebra(&self) -> &AssocAlgebra {
        &self.a
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.ring.order()
    }

    pub fn nparams(&self) -> usize {
        self.ring.nparams()
    }

    pub fn corrections(&self) -> &BTreeMap<usize, HochschildCochain> {
        &self.corrections
    }

    /// `β_μ`, zero when absent.
    pub fn beta(&self, mu: usize) -> HochschildCochain {
        self.corrections
            .get(&mu)
            .cloned()
            .unwrap_or_else(|| HochschildCochain::zero(2, self.a.dim(), self.a.dim()))
    }

    /// First-order part as one cochain `a ⊗ a -> a ⊗ T*`, parameter `j` in block `j`.
    pub fn first_order(&self) -> HochschildCochain {
        let parts: Vec<HochschildCochain> = (0..self.nparams()).map(|j| self.beta(self.ring.linear(j))).collect();
        if parts.is_empty() {
            return HochschildCochain::zero(2, self.a.dim(), 0);
        }
        HochschildCochain::from_components(&parts)
    }

    /// Same corrections over a ring of a different order, dropping monomials beyond it.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        let ring = BaseRing::with_labels(self.ring.param_labels().to_vec(), order);
        let mut corr = BTreeMap::new();
        for (mu, b) in &self.corrections {
            if let Some(nu) = ring.index_of(self.ring.exponents(*mu)) {
                corr.insert(nu, b.clone());
            }
        }
        Self::new(self.a.clone(), ring, corr)
    }

    /// `(e_i t^μ) ⋆ (e_j t^ν)` expanded in `a ⊗ O_N`.
    fn star_basis(&self, i: usize, mu: usize, j: usize, nu: usize) -> SparseVec {
        let d = self.a.dim();
        let Some(base) = self.ring.mul(mu, nu) else {
            return Vec::new();
        };
        let mut out: SparseVec = self
            .a
            .product(i, j)
            .iter()
            .map(|(k, c)| (base * d + k, c.clone()))
            .collect();
        for (rho, beta) in &self.corrections {
            if let Some(m) = self.ring.mul(base, *rho) {
                let v: SparseVec = beta
                    .value(&[i, j])
                    .iter()
                    .map(|(k, c)| (m * d + k, c.clone()))
                    .collect();
                out = sv_axpy(&out, &int(1), &v);
            }
        }
        out
    }

    pub fn star(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let d = self.a.dim();
        let mut out = Vec::new();
        for (p, cx) in x {
            for (q, cy) in y {
                let v = self.star_basis(p % d, p / d, q % d, q / d);
                out = sv_axpy(&out, &(cx * cy), &v);
            }
        }
        out
    }

    /// First basis triple and monomial where associativity fails.
    pub fn associativity_defect(&self) -> Option<(usize, usize, usize, usize)> {
        let d = self.a.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.star_basis(i, 0, j, 0);
                for k in 0..d {
                    let left = self.star(&ij, &basis_vector(k));
                    let jk = self.star_basis(j, 0, k, 0);
                    let right = self.star(&basis_vector(i), &jk);
                    let diff = sv_axpy(&left, &int(-1), &right);
                    if let Some((idx, _)) = diff.first() {
                        return Some((i, j, k, idx / d));
                    }
                }
            }
        }
        None
    }

    /// Description of the first failure of `β(1, -) = β(-, 1) = 0`.
    pub fn normalization_defect(&self) -> Option<String> {
        let unit = self.a.unit();
        for (mu, beta) in &self.corrections {
            if !beta.is_normalized(unit) {
                return Some(format!(
                    "correction at {} does not vanish on the unit",
                    self.ring.monomial_label(*mu)
                ));
            }
        }
        None
    }

    /// `a ⊗ O_N` with the star product, as an algebra over Q.
    pub fn to_algebra(&self) -> AssocAlgebra {
        let d = self.a.dim();
        let r = self.ring.dim();
        let mut labels = Vec::with_capacity(d * r);
        for mu in 0..r {
            for i in 0..d {
                labels.push(if mu == 0 {
                    self.a.label(i).to_string()
                } else {
                    format!("{}*{}", self.a.label(i), self.ring.monomial_label(mu))
                });
            }
        }
        let mut table = Vec::with_capacity(d * r * d * r);
        for p in 0..d * r {
            for q in 0..d * r {
                table.push(self.star_basis(p % d, p / d, q % d, q / d));
            }
        }
        let unit = self.a.unit().clone();
        AssocAlgebra::new_unchecked(format!("{}[[t]]_{}", self.a.name(), self.order()), labels, table, unit)
    }

    /// Index in `a ⊗ O_N` of `e_i t^μ`.
    pub fn index(&self, i: usize, mu: usize) -> usize {
        mu * self.a.dim() + i
    }
}

/// Catalog deformations.
///
/// * `trivial` on any algebra.
/// * `dual_numbers`: `Q[x]/(x^2)` with `x ⋆ x = t`.
/// * `clifford`: `Λ(Q^2)` with `x ⋆ x = t1`, `y ⋆ y = t2`; the order-two term is
///   `β_{t1 t2}(xy, xy) = -1`.
pub fn deformation_preset(name: &str, order: usize) -> Result<StarDeformation> {
    if order == 0 {
        return Err(Error::Invalid {
            what: "deformation order must be at least 1".into(),
        });
    }
    match name {
        "trivial" => Ok(StarDeformation::trivial(
            preset_catalog("field", &[])?,
            BaseRing::new(1, order),
        )),
        "dual_numbers" => {
            let a = preset_catalog("dual_numbers", &[])?;
            let ring = BaseRing::new(1, order);
            let beta =
                HochschildCochain::from_fn(2, 2, 2, |t| if t == [1, 1] { vec![(0, int(1))] } else { Vec::new() });
            let mut corr = BTreeMap::new();
            corr.insert(ring.linear(0), beta);
            StarDeformation::new(a, ring, corr)
        }
        "clifford" => {
            let a = preset_catalog("exterior", &[2])?;
            let ring = BaseRing::new(2, order);
            // basis 1, x, y, xy
            let entry = |pairs: &[((usize, usize), (usize, i64))]| {
                let pairs = pairs.to_vec();
                HochschildCochain::from_fn(2, 4, 4, move |t| {
                    pairs
                        .iter()
                        .filter(|(ij, _)| t == [ij.0, ij.1])
                        .map(|(_, (k, c))| (*k, int(*c)))
                        .collect()
                })
            };
            let b1 = entry(&[((1, 1), (0, 1)), ((1, 3), (2, 1)), ((3, 1), (2, -1))]);
            let b2 = entry(&[((2, 2), (0, 1)), ((3, 2), (1, 1)), ((2, 3), (1, -1))]);
            let mut corr = BTreeMap::new();
            corr.insert(ring.linear(0), b1);
            corr.insert(ring.linear(1), b2);
            if order >= 2 {
                let mu = ring.index_of(&[1, 1]).expect("order >= 2");
                corr.insert(mu, entry(&[((3, 3), (0, -1))]));
            }
            StarDeformation::new(a, ring, corr)
        }
        _ => Err(Error::UnknownPreset { name: name.into() }),
    }
}

pub const DEFORMATION_PRESETS: &[&str] = &["trivial", "dual_numbers", "clifford"];
