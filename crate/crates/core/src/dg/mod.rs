//! The dg side: the weight-truncated model `R` of the point inside `T`, the
//! resolution `Ra = R ⊗_O A` of a deformed algebra, the functor
//! `Θ(M) = (Ra ⊗_A Ra) ⊗_Λ M` and the formality lift of the contraction operators.

mod algebra;
mod bimodule;
mod formality;
mod resolution;
mod rmodel;

pub use algebra::{tensor_truncated, DgAlgebra, KoszulCdga, PairBasis};
pub use bimodule::{concentrated, Ambient, Cone, DgBimodule};
pub use formality::{formality_lift, FormalityReport};
pub use resolution::{
    build_resolution, ra_tensor_ra, theta, theta_exactness, theta_k_iso, verify_prop_cp, PropCpReport, RaReport,
    RaTensorRa, ResolutionRa, ThetaInstance, ThetaModule,
};
pub use rmodel::{build_r_model, check_lemma_r, LemmaRReport, RModel, RReport};

use std::collections::BTreeMap;

use crate::linalg::{int, sv_collect, Quotient, Rational, SparseVec};

/// Projection onto a quotient `Q^ambient / U` whose section picks basis vectors.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    ambient: usize,
    proj_cols: Vec<SparseVec>,
    section: Vec<usize>,
}

impl QuotientMap {
    pub fn new(q: Quotient) -> Self {
        let section = q
            .section
            .sparse_columns()
            .into_iter()
            .map(|c| {
                assert!(c.len() == 1, "quotient section is not a basis vector");
                c[0].0
            })
            .collect();
        QuotientMap {
            ambient: q.projection.ncols(),
            proj_cols: q.projection.sparse_columns(),
            section,
        }
    }

    pub fn dim(&self) -> usize {
        self.section.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Ambient basis index representing each quotient basis element.
    pub fn section(&self) -> &[usize] {
        &self.section
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        apply_columns(&self.proj_cols, v)
    }

    pub fn lift(&self, v: &SparseVec) -> SparseVec {
        let mut out: SparseVec = v.iter().map(|(k, c)| (self.section[*k], c.clone())).collect();
        out.sort_by_key(|e| e.0);
        out
    }
}

/// Sum of `c * col[i]` over the entries of `v`.
pub(crate) fn apply_columns(cols: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, c) in v {
        for (k, p) in &cols[*i] {
            *acc.entry(*k).or_insert_with(|| int(0)) += c * p;
        }
    }
    sv_collect(acc)
}
