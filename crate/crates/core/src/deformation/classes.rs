use std::collections::BTreeMap;

use super::ring::BaseRing;
use super::star::StarDeformation;
use crate::algebra::{AssocAlgebra, Bimodule};
use crate::error::{Error, Result};
use crate::hochschild::{differential, HochschildClass, HochschildCochain, HochschildComplex, HochschildSpace, Model};
use crate::linalg::{int, sv_axpy, Matrix, SparseVec};

/// `a ⊗ T*` as an `a`-bimodule, parameter `j` in block `j`.
pub fn a_tensor_tstar(a: &AssocAlgebra, n: usize) -> Bimodule {
    let labels: Vec<String> = (1..=n).map(|j| format!("t{j}")).collect();
    Bimodule::regular(a).with_multiplicity(&labels)
}

/// Cached `HH^2(a, a ⊗ T*)` for deciding equality of deformation classes.
#[derive(Clone, Debug)]
pub struct Ext2Context {
    a: AssocAlgebra,
    n: usize,
    coefficients: Bimodule,
    space: HochschildSpace,
    normalized: HochschildSpace,
}

/// A class in `Ext^2(a, a ⊗ T*) = Hom(T, HH^2(a, a))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClass2 {
    pub nparams: usize,
    pub class: HochschildClass,
    pub representative: HochschildCochain,
}

impl ExtClass2 {
    pub fn is_zero(&self) -> bool {
        self.class.is_zero()
    }
}

impl Ext2Context {
    pub fn new(a: &AssocAlgebra, n: usize) -> Result<Self> {
        let m = a_tensor_tstar(a, n);
        let space = HochschildComplex::new(a, &m, Model::Bar)?.space(2);
        let normalized = HochschildComplex::new(a, &m, Model::Normalized)?.space(2);
        Ok(Ext2Context {
            a: a.clone(),
            n,
            coefficients: m,
            space,
            normalized,
        })
    }

    pub fn algebra(&self) -> &AssocAlgebra {
        &self.a
    }

    pub fn nparams(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &Bimodule {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Normalized cocycles representing a basis of the classes.
    pub fn normalized_basis(&self) -> &[HochschildCochain] {
        self.normalized.representatives()
    }

    pub fn class_of(&self, beta: &HochschildCochain) -> Result<ExtClass2> {
        Ok(ExtClass2 {
            nparams: self.n,
            class: self.space.class_of(beta)?,
            representative: beta.clone(),
        })
    }

    /// `γ : a -> a ⊗ T*` with `δγ = f`, when one exists.
    pub fn coboundary_witness(&self, f: &HochschildCochain) -> Result<Option<HochschildCochain>> {
        self.space.coboundary_witness(f)
    }

    pub fn differential(&self, f: &HochschildCochain) -> Result<HochschildCochain> {
        differential(&self.a, &self.coefficients, f)
    }
}

/// First-order deformation `a ⋆ a' = a a' + Σ_j β_j(a, a') t_j` from a normalized cocycle.
pub fn first_order_from_cocycle(a: &AssocAlgebra, beta: &HochschildCochain) -> Result<StarDeformation> {
    let d = a.dim();
    if beta.arity() != 2 || beta.dim_in() != d || d == 0 || !beta.dim_out().is_multiple_of(d) {
        return Err(Error::MismatchedParameters {
            what: "expected a bilinear map a x a -> a ⊗ T*".into(),
        });
    }
    let n = beta.dim_out() / d;
    let m = a_tensor_tstar(a, n);
    let db = differential(a, &m, beta)?;
    if let Some(t) = db.support_witness() {
        let labels: Vec<&str> = t.iter().map(|&i| a.label(i)).collect();
        return Err(Error::NotACocycle {
            witness: format!("δβ is nonzero on ({})", labels.join(", ")),
        });
    }
    if !beta.is_normalized(a.unit()) {
        return Err(Error::Invalid {
            what: "β must vanish when an argument is the unit".into(),
        });
    }
    let ring = BaseRing::new(n, 1);
    let corr: BTreeMap<usize, HochschildCochain> = (0..n).map(|j| (ring.linear(j), beta.component(j, d))).collect();
    StarDeformation::new(a.clone(), ring, corr)
}

pub fn deform_class(ctx: &Ext2Context, d: &StarDeformation) -> Result<ExtClass2> {
    check_context(ctx, d)?;
    ctx.class_of(&d.first_order())
}

fn check_context(ctx: &Ext2Context, d: &StarDeformation) -> Result<()> {
    if d.algebra() != &ctx.a || d.nparams() != ctx.n {
        return Err(Error::MismatchedParameters {
            what: "deformation does not match the class context".into(),
        });
    }
    Ok(())
}

/// An `O_1`-algebra isomorphism `id - γ` carrying `⋆_2` to `⋆_1`.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    /// `γ : a -> a ⊗ T*` with `δγ = β_1 - β_2`.
    pub gamma: HochschildCochain,
    /// Matrix of the isomorphism on `a ⊗ O_1`.
    pub map: Matrix,
}

/// Looks for an equivalence between two first-order deformations and verifies it.
pub fn equivalence_witness(
    ctx: &Ext2Context,
    d1: &StarDeformation,
    d2: &StarDeformation,
) -> Result<Option<EquivalenceWitness>> {
    check_context(ctx, d1)?;
    check_context(ctx, d2)?;
    if d1.order() != 1 || d2.order() != 1 {
        return Err(Error::MismatchedParameters {
            what: "equivalences are decided for first-order deformations".into(),
        });
    }
    let diff = d1.first_order().sub(&d2.first_order());
    let Some(gamma) = ctx.coboundary_witness(&diff)? else {
        return Ok(None);
    };
    let map = equivalence_map(d1, &gamma);
    let a1 = d1.to_algebra();
    let a2 = d2.to_algebra();
    let dim = a1.dim();
    let cols = map.sparse_columns();
    for p in 0..dim {
        for q in 0..dim {
            let lhs = map.mul_sparse(a2.product(p, q));
            let rhs = a1.mul(&cols[p], &cols[q]);
            if lhs != rhs {
                return Err(Error::NotAChainMap {
                    what: format!("equivalence fails to be multiplicative on ({p}, {q})"),
                });
            }
        }
    }
    Ok(Some(EquivalenceWitness { gamma, map }))
}

/// `x t^μ -> x t^μ - Σ_j γ_j(x) t_j t^μ` on `a ⊗ O_1`.
fn equivalence_map(d: &StarDeformation, gamma: &HochschildCochain) -> Matrix {
    let a = d.algebra();
    let ring = d.ring();
    let dim = a.dim();
    let mut cols: Vec<SparseVec> = Vec::with_capacity(dim * ring.dim());
    for mu in 0..ring.dim() {
        for i in 0..dim {
            let mut v: SparseVec = vec![(d.index(i, mu), int(1))];
            for j in 0..ring.nparams() {
                if let Some(m) = ring.mul(ring.linear(j), mu) {
                    let g: SparseVec = gamma
                        .value(&[i])
                        .iter()
                        .filter(|(k, _)| k / dim == j)
                        .map(|(k, c)| (d.index(k % dim, m), c.clone()))
                        .collect();
                    v = sv_axpy(&v, &int(-1), &g);
                }
            }
            cols.push(v);
        }
    }
    Matrix::from_sparse_columns(dim * ring.dim(), &cols)
}
