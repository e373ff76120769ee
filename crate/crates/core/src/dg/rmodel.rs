use std::collections::BTreeMap;

use crate::algebra::presets::wedge_sign;
use crate::deformation::BaseRing;
use crate::error::{Error, Result};
use crate::linalg::{int, rank_kernel_image, rat, span_basis, sv_axpy, CochainComplex, Matrix, SparseVec};

use super::{tensor_truncated, DgAlgebra, KoszulCdga, PairBasis, QuotientMap};

/// `R^{-i} = {f ⊗ ω : ω ∈ ∧^i T*, deg f + i <= W}` with `d = ι_ξ`, the contraction
/// with the Euler field `ξ = Σ x_j ∂_j`.
#[derive(Clone, Debug)]
pub struct RModel {
    n: usize,
    cap: usize,
    cdga: KoszulCdga,
}

/// Invariants of the `R` model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RReport {
    pub dims: BTreeMap<i32, usize>,
    pub cohomology: BTreeMap<i32, usize>,
    /// Total cohomology of each weight-graded piece.
    pub weight_cohomology: BTreeMap<usize, usize>,
    pub axioms: bool,
    pub nonpositive: bool,
    pub degree_zero_is_base_ring: bool,
    pub free_in_window: bool,
    pub graded_commutative: bool,
    /// `ι_ξ d_dR + d_dR ι_ξ = m id` on weight `m`, entrywise.
    pub euler_identity: bool,
}

impl RReport {
    pub fn acyclic(&self) -> bool {
        self.cohomology.iter().all(|(&k, &h)| h == usize::from(k == 0))
            && self.weight_cohomology.iter().all(|(&m, &h)| h == usize::from(m == 0))
    }

    pub fn holds(&self) -> bool {
        self.acyclic()
            && self.axioms
            && self.nonpositive
            && self.degree_zero_is_base_ring
            && self.free_in_window
            && self.graded_commutative
            && self.euler_identity
    }
}

pub fn build_r_model(n: usize, cap: usize) -> Result<RModel> {
    if cap == 0 {
        return Err(Error::Invalid {
            what: "weight cap must be at least 1".into(),
        });
    }
    let even: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    let odd: Vec<String> = (1..=n).map(|j| format!("dx{j}")).collect();
    Ok(RModel {
        n,
        cap,
        cdga: KoszulCdga::new(&even, &odd, (0..n).collect(), cap),
    })
}

impl RModel {
    pub fn nparams(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn algebra(&self) -> &DgAlgebra {
        &self.cdga.algebra
    }

    pub fn cdga(&self) -> &KoszulCdga {
        &self.cdga
    }

    /// `dx_j`.
    pub fn form(&self, j: usize) -> usize {
        self.cdga.odd(j)
    }

    /// `x_j`.
    pub fn coordinate(&self, j: usize) -> usize {
        self.cdga.even(j)
    }

    /// `d_dR(x^μ dx_S) = Σ_j μ_j x^{μ - e_j} dx_j ∧ dx_S`.
    pub fn de_rham(&self) -> Matrix {
        let c = &self.cdga;
        let ring = &c.ring;
        let cols: Vec<SparseVec> = c
            .basis
            .iter()
            .map(|&(s, mu)| {
                let mut col = Vec::new();
                for j in 0..self.n {
                    let e = ring.exponents(mu);
                    if e[j] == 0 || s >> j & 1 == 1 {
                        continue;
                    }
                    let mut lower = e.to_vec();
                    lower[j] -= 1;
                    let nu = ring.index_of(&lower).expect("lower monomial");
                    if let Some(k) = c.get(s | 1 << j, nu) {
                        let coeff = wedge_sign(1 << j, s) * int(e[j] as i64);
                        col = sv_axpy(&col, &coeff, &vec![(k, int(1))]);
                    }
                }
                col
            })
            .collect();
        Matrix::from_sparse_columns(c.basis.len(), &cols)
    }

    pub fn report(&self) -> Result<RReport> {
        let r = self.algebra();
        let c = &self.cdga;
        let dims = r.dims_by_degree();
        let cohomology = r.cohomology_dims()?;
        let mut weight_cohomology = BTreeMap::new();
        for m in 0..=self.cap {
            let idx: Vec<usize> = (0..r.dim()).filter(|&i| r.weights()[i] == m).collect();
            let d = r.differential().select_rows(&idx).select_columns(&idx);
            let deg: Vec<i32> = idx.iter().map(|&i| r.degree(i)).collect();
            let (cx, _) = CochainComplex::from_flat(&deg, &d)?;
            weight_cohomology.insert(m, cx.cohomology_dims()?.values().sum());
        }
        let o = BaseRing::new(self.n, self.cap);
        let zero: Vec<usize> = r.of_degree(0);
        let degree_zero_is_base_ring = zero.len() == o.dim()
            && (0..o.dim()).all(|mu| {
                (0..o.dim()).all(|nu| {
                    let lhs = r.product(c.get(0, mu).expect("degree 0"), c.get(0, nu).expect("degree 0"));
                    let rhs: SparseVec = o
                        .mul(mu, nu)
                        .map(|p| vec![(c.get(0, p).expect("degree 0"), int(1))])
                        .unwrap_or_default();
                    lhs == &rhs
                })
            });
        let free_in_window = (0..=self.n.min(self.cap)).all(|i| {
            let binom = (0..i).fold(1usize, |acc, k| acc * (self.n - k) / (k + 1));
            dims.get(&-(i as i32)).copied().unwrap_or(0) == binom * BaseRing::new(self.n, self.cap - i).dim()
        });
        let ddr = self.de_rham();
        let iota = r.differential();
        let weight = Matrix::from_triplets(
            r.dim(),
            r.dim(),
            (0..r.dim()).map(|i| (i, i, int(r.weights()[i] as i64))),
        );
        let euler_identity = iota.mul(&ddr).add(&ddr.mul(iota)) == weight;
        Ok(RReport {
            dims,
            cohomology,
            weight_cohomology,
            axioms: r.defect().is_none(),
            nonpositive: r.degrees().iter().all(|&k| k <= 0),
            degree_zero_is_base_ring,
            free_in_window,
            graded_commutative: r.is_graded_commutative(),
            euler_identity,
        })
    }
}

/// Checks on `R ⊗_O R` in the weight window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaRReport {
    pub dims: BTreeMap<i32, usize>,
    /// Quotient dimensions agree with the free model `O ⊗ ∧(dx ⊗ 1, 1 ⊗ dx)`.
    pub free_model_match: bool,
    /// `d ι(θ_j) = 0`.
    pub iota_closed: bool,
    /// `ι` is multiplicative on the window.
    pub iota_multiplicative: bool,
    /// `R -> R_Δ`, `dx_j ↦ (dx_j ⊗ 1 + 1 ⊗ dx_j)/2`, is a dg-algebra map.
    pub diagonal_dg_map: bool,
    /// `R_Δ ⊗ ι(Λ) -> R ⊗_O R` is bijective in each degree.
    pub splitting_iso: bool,
    /// `ker m_R` equals the ideal generated by `ι(Λ_{<0})` in each degree.
    pub kernel_is_ideal: bool,
}

impl LemmaRReport {
    pub fn holds(&self) -> bool {
        self.free_model_match
            && self.iota_closed
            && self.iota_multiplicative
            && self.diagonal_dg_map
            && self.splitting_iso
            && self.kernel_is_ideal
    }
}

/// `R ⊗_O R` as a quotient of the truncated `R ⊗ R`, with `ι(θ_j) = dx_j ⊗ 1 - 1 ⊗ dx_j`.
#[derive(Clone, Debug)]
pub struct RTensorR {
    pub algebra: DgAlgebra,
    pub quotient: QuotientMap,
    pub left_forms: Vec<SparseVec>,
    pub right_forms: Vec<SparseVec>,
    pub coordinates: Vec<SparseVec>,
    pub pairs: PairBasis,
}

impl RTensorR {
    pub fn iota(&self, j: usize) -> SparseVec {
        sv_axpy(&self.right_forms[j], &int(-1), &self.left_forms[j])
    }
}

pub fn r_tensor_r(r: &RModel) -> Result<RTensorR> {
    let a = r.algebra();
    let (t, pairs) = tensor_truncated(a, a, r.cap);
    let e = |i: usize| vec![(i, int(1))];
    let one = a.unit().clone();
    let mut relations = Vec::new();
    for j in 0..r.n {
        let x = e(r.coordinate(j));
        for p in 0..a.dim() {
            for q in 0..a.dim() {
                let l = pairs.tensor(&a.mul(&x, &e(p)), &e(q));
                let rr = pairs.tensor(&e(p), &a.mul(&x, &e(q)));
                let v = sv_axpy(&l, &int(-1), &rr);
                if !v.is_empty() {
                    relations.push(v);
                }
            }
        }
    }
    let mut gens = Vec::new();
    for j in 0..r.n {
        for g in [r.coordinate(j), r.form(j)] {
            gens.extend(pairs.get(g, one[0].0));
            gens.extend(pairs.get(one[0].0, g));
        }
    }
    let (algebra, quotient) = t.quotient(&relations, &gens)?;
    let proj = |v: SparseVec| quotient.project(&v);
    let left_forms = (0..r.n).map(|j| proj(pairs.tensor(&e(r.form(j)), &one))).collect();
    let right_forms = (0..r.n).map(|j| proj(pairs.tensor(&one, &e(r.form(j))))).collect();
    let coordinates = (0..r.n)
        .map(|j| proj(pairs.tensor(&e(r.coordinate(j)), &one)))
        .collect();
    Ok(RTensorR {
        algebra,
        quotient,
        left_forms,
        right_forms,
        coordinates,
        pairs,
    })
}

pub fn check_lemma_r(r: &RModel) -> Result<LemmaRReport> {
    let rr = r_tensor_r(r)?;
    let t = &rr.algebra;
    let ra = r.algebra();
    let dims = t.dims_by_degree();
    let odd: Vec<String> = (1..=r.n)
        .map(|j| format!("u{j}"))
        .chain((1..=r.n).map(|j| format!("v{j}")))
        .collect();
    let even: Vec<String> = (1..=r.n).map(|j| format!("x{j}")).collect();
    let targets = (0..r.n).chain(0..r.n).collect();
    let free = KoszulCdga::new(&even, &odd, targets, r.cap);
    let free_model_match = free.algebra.dims_by_degree() == dims;

    let iotas: Vec<SparseVec> = (0..r.n).map(|j| rr.iota(j)).collect();
    let iota_closed = iotas.iter().all(|v| t.differential().mul_sparse(v).is_empty());
    let lam = 1usize << r.n;
    let iota_of = |s: usize| -> SparseVec {
        (0..r.n)
            .filter(|j| s >> j & 1 == 1)
            .fold(t.unit().clone(), |acc, j| t.mul(&acc, &iotas[j]))
    };
    let iota_multiplicative = (0..lam).all(|s| {
        (0..lam).all(|u| {
            let lhs = t.mul(&iota_of(s), &iota_of(u));
            let rhs = if s & u != 0 {
                Vec::new()
            } else {
                crate::linalg::sv_scale(&iota_of(s | u), &wedge_sign(s, u))
            };
            lhs == rhs
        })
    });

    let half = rat(1, 2);
    let deltas: Vec<SparseVec> = (0..r.n)
        .map(|j| crate::linalg::sv_scale(&sv_axpy(&rr.left_forms[j], &int(1), &rr.right_forms[j]), &half))
        .collect();
    let c = r.cdga();
    let phi_cols: Vec<SparseVec> = c
        .basis
        .iter()
        .map(|&(s, mu)| {
            let f = monomial_in(t, &rr.coordinates, c.ring.exponents(mu));
            (0..r.n)
                .filter(|j| s >> j & 1 == 1)
                .fold(f, |acc, j| t.mul(&acc, &deltas[j]))
        })
        .collect();
    let phi = Matrix::from_sparse_columns(t.dim(), &phi_cols);
    let diagonal_dg_map = ra.is_dg_map(&phi, t);

    let mut splitting_iso = true;
    let mut images: BTreeMap<i32, Vec<SparseVec>> = BTreeMap::new();
    let mut domain: BTreeMap<i32, usize> = BTreeMap::new();
    for (k, &(s, mu)) in c.basis.iter().enumerate() {
        for u in 0..lam {
            let w = s.count_ones() as usize + c.ring.degree(mu) + u.count_ones() as usize;
            if w > r.cap {
                continue;
            }
            let deg = ra.degree(k) - u.count_ones() as i32;
            *domain.entry(deg).or_insert(0) += 1;
            images.entry(deg).or_default().push(t.mul(&phi_cols[k], &iota_of(u)));
        }
    }
    for (deg, &n) in &dims {
        let imgs = images.get(deg).cloned().unwrap_or_default();
        if domain.get(deg).copied().unwrap_or(0) != n || span_basis(t.dim(), &imgs).len() != n {
            splitting_iso = false;
        }
    }

    let m_cols: Vec<SparseVec> = rr
        .quotient
        .section()
        .iter()
        .map(|&k| {
            let (p, q) = rr.pairs.pairs[k];
            ra.mul(&vec![(p, int(1))], &vec![(q, int(1))])
        })
        .collect();
    let m = Matrix::from_sparse_columns(ra.dim(), &m_cols);
    let mut ideal = Vec::new();
    for v in &iotas {
        for b in 0..t.dim() {
            let bv = t.mul(&vec![(b, int(1))], v);
            for c2 in 0..t.dim() {
                let w = t.mul(&bv, &vec![(c2, int(1))]);
                if !w.is_empty() {
                    ideal.push(w);
                }
            }
        }
    }
    let ideal = span_basis(t.dim(), &ideal);
    let ker = rank_kernel_image(&m).kernel.sparse_columns();
    let in_kernel = ideal.iter().all(|v| m.mul_sparse(v).is_empty());
    let mut kernel_is_ideal = in_kernel;
    for deg in dims.keys() {
        let count = |vs: &[SparseVec]| {
            vs.iter()
                .filter(|v| v.iter().all(|(i, _)| t.degree(*i) == *deg))
                .count()
        };
        let kd = span_basis(
            t.dim(),
            &ker.iter()
                .flat_map(|v| split_by_degree(t, v))
                .filter(|v| t.degree(v[0].0) == *deg)
                .collect::<Vec<_>>(),
        );
        if count(&ideal) != kd.len() {
            kernel_is_ideal = false;
        }
    }
    Ok(LemmaRReport {
        dims,
        free_model_match,
        iota_closed,
        iota_multiplicative,
        diagonal_dg_map,
        splitting_iso,
        kernel_is_ideal,
    })
}

fn monomial_in(t: &DgAlgebra, coords: &[SparseVec], exps: &[u32]) -> SparseVec {
    let mut acc = t.unit().clone();
    for (j, &e) in exps.iter().enumerate() {
        for _ in 0..e {
            acc = t.mul(&acc, &coords[j]);
        }
    }
    acc
}

fn split_by_degree(t: &DgAlgebra, v: &SparseVec) -> Vec<SparseVec> {
    let mut parts: BTreeMap<i32, SparseVec> = BTreeMap::new();
    for (i, c) in v {
        parts.entry(t.degree(*i)).or_default().push((*i, c.clone()));
    }
    parts.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_model_dimensions_and_acyclicity() {
        let r = build_r_model(1, 2).unwrap().report().unwrap();
        assert_eq!(r.dims[&0], 3);
        assert_eq!(r.dims[&-1], 2);
        assert!(r.holds(), "{r:?}");
        let r = build_r_model(2, 2).unwrap().report().unwrap();
        assert_eq!((r.dims[&0], r.dims[&-1], r.dims[&-2]), (6, 6, 1));
        assert!(r.holds(), "{r:?}");
        for n in 1..=2 {
            for w in 1..=3 {
                let r = build_r_model(n, w).unwrap().report().unwrap();
                assert!(r.holds(), "n={n} w={w}: {r:?}");
            }
        }
        assert!(build_r_model(1, 0).is_err());
    }

    #[test]
    fn contraction_on_forms() {
        let r = build_r_model(1, 2).unwrap();
        let a = r.algebra();
        // d(dx) = x
        assert_eq!(a.d_of(r.form(0)), vec![(r.coordinate(0), int(1))]);
    }

    #[test]
    fn lemma_r_checks() {
        let rep = check_lemma_r(&build_r_model(1, 1).unwrap()).unwrap();
        assert_eq!(rep.dims[&-1], 2);
        assert!(rep.holds(), "{rep:?}");
        for (n, w) in [(1, 2), (2, 1), (2, 2)] {
            let rep = check_lemma_r(&build_r_model(n, w).unwrap()).unwrap();
            assert!(rep.holds(), "n={n} w={w}: {rep:?}");
        }
    }
}
