use std::collections::{BTreeMap, HashMap};

use crate::algebra::presets::wedge_sign;
use crate::deformation::StarDeformation;
use crate::error::{Error, Result};
use crate::koszul::LambdaModule;
use crate::linalg::{int, sign, span_basis, sv_axpy, Matrix, SparseVec};

use super::bimodule::Ambient;
use super::{build_r_model, concentrated, tensor_truncated, DgAlgebra, DgBimodule, PairBasis, QuotientMap};

/// `Ra = R ⊗_O A` for `A = a ⊗ O_N` with the star product, weight cap `W = N`,
/// and the augmentation `p : Ra -> a`.
///
/// Basis elements are `dx_S ⊗ e_i t^μ` with `|S| + deg μ <= N`, stored as
/// `(S, q)` where `q = μ * dim a + i` indexes `A`.
#[derive(Clone, Debug)]
pub struct ResolutionRa {
    deformation: StarDeformation,
    algebra: DgAlgebra,
    basis: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    unit: usize,
    p: Matrix,
}

/// Invariants of `Ra` and `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaReport {
    pub dims: BTreeMap<i32, usize>,
    pub cohomology: BTreeMap<i32, usize>,
    pub axioms: bool,
    pub p_dg_map: bool,
    pub p_surjective: bool,
    /// `p` induces an isomorphism `H^0(Ra) -> a`.
    pub h0_iso: bool,
    /// The degree-0 part is `A` with the star product.
    pub degree_zero_is_a: bool,
    /// Dimensions agree with `R ⊗_O A` computed as a quotient of `R ⊗ A`.
    pub quotient_model_match: bool,
}

impl RaReport {
    pub fn holds(&self) -> bool {
        self.cohomology.iter().all(|(&k, &h)| k == 0 || h == 0)
            && self.axioms
            && self.p_dg_map
            && self.p_surjective
            && self.h0_iso
            && self.degree_zero_is_a
            && self.quotient_model_match
    }
}

pub fn build_resolution(d: &StarDeformation) -> Result<ResolutionRa> {
    let a = d.algebra();
    let ring = d.ring();
    let (n, cap, da) = (d.nparams(), d.order(), a.dim());
    let unit = a.unit_index().ok_or_else(|| Error::Invalid {
        what: "the unit of a must be a basis element".into(),
    })?;
    let mut basis = Vec::new();
    for s in 0..(1usize << n) {
        for mu in 0..ring.dim() {
            if s.count_ones() as usize + ring.degree(mu) <= cap {
                basis.extend((0..da).map(|i| (s, mu * da + i)));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = basis.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let weight = |s: usize, q: usize| s.count_ones() as usize + ring.degree(q / da);
    let dim = basis.len();
    let mut table = Vec::with_capacity(dim * dim);
    for &(s, q) in &basis {
        for &(t, r) in &basis {
            if s & t != 0 {
                table.push(Vec::new());
                continue;
            }
            let sg = wedge_sign(s, t);
            let prod = d.star(&vec![(q, int(1))], &vec![(r, int(1))]);
            let v: SparseVec = crate::linalg::sv_collect(
                prod.into_iter()
                    .filter(|(k, _)| weight(s | t, *k) <= cap)
                    .map(|(k, c)| (index[&(s | t, k)], c * &sg)),
            );
            table.push(v);
        }
    }
    let mut d_cols = Vec::with_capacity(dim);
    for &(s, q) in &basis {
        let mut col = Vec::new();
        for k in 0..n {
            if s >> k & 1 == 0 {
                continue;
            }
            let before = (s & ((1 << k) - 1)).count_ones() as i64;
            if let Some(mu) = ring.mul(q / da, ring.linear(k)) {
                let target = index[&(s & !(1 << k), mu * da + q % da)];
                col = sv_axpy(&col, &sign(before), &vec![(target, int(1))]);
            }
        }
        d_cols.push(col);
    }
    let labels = basis
        .iter()
        .map(|&(s, q)| {
            let forms: Vec<String> = (0..n)
                .filter(|j| s >> j & 1 == 1)
                .map(|j| format!("dx{}", j + 1))
                .collect();
            let mu = q / da;
            let mut a_part = a.label(q % da).to_string();
            if mu != 0 {
                a_part = format!("{a_part}*{}", ring.monomial_label(mu));
            }
            if forms.is_empty() {
                a_part
            } else {
                format!("{} {a_part}", forms.join(" "))
            }
        })
        .collect();
    let algebra = DgAlgebra::new_unchecked(
        format!("R⊗{}", a.name()),
        labels,
        basis.iter().map(|&(s, _)| -(s.count_ones() as i32)).collect(),
        basis.iter().map(|&(s, q)| weight(s, q)).collect(),
        table,
        vec![(index[&(0, unit)], int(1))],
        Matrix::from_sparse_columns(dim, &d_cols),
    );
    let p = Matrix::from_triplets(
        da,
        dim,
        basis
            .iter()
            .enumerate()
            .filter(|(_, (s, q))| *s == 0 && *q < da)
            .map(|(k, (_, q))| (*q, k, int(1))),
    );
    Ok(ResolutionRa {
        deformation: d.clone(),
        algebra,
        basis,
        index,
        unit,
        p,
    })
}

impl ResolutionRa {
    pub fn deformation(&self) -> &StarDeformation {
        &self.deformation
    }

    pub fn algebra(&self) -> &DgAlgebra {
        &self.algebra
    }

    pub fn nparams(&self) -> usize {
        self.deformation.nparams()
    }

    pub fn cap(&self) -> usize {
        self.deformation.order()
    }

    pub fn base_dim(&self) -> usize {
        self.deformation.algebra().dim()
    }

    /// `(S, q)` behind a basis element.
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn get(&self, s: usize, q: usize) -> Option<usize> {
        self.index.get(&(s, q)).copied()
    }

    /// `dx_j ⊗ 1`.
    pub fn form(&self, j: usize) -> usize {
        self.index[&(1 << j, self.unit)]
    }

    /// `1 ⊗ t_j`.
    pub fn param(&self, j: usize) -> usize {
        let ring = self.deformation.ring();
        self.index[&(0, ring.linear(j) * self.base_dim() + self.unit)]
    }

    /// `1 ⊗ e_i`.
    pub fn base_element(&self, i: usize) -> usize {
        self.index[&(0, i)]
    }

    /// Generators of `Ra` as an algebra: the `e_i`, the `t_j` and the `dx_j`.
    pub fn generators(&self) -> Vec<usize> {
        let mut g: Vec<usize> = (0..self.base_dim()).map(|i| self.base_element(i)).collect();
        g.extend((0..self.nparams()).map(|j| self.param(j)));
        g.extend((0..self.nparams()).map(|j| self.form(j)));
        g
    }

    /// Generators of `A = Ra^0`.
    pub fn degree_zero_generators(&self) -> Vec<usize> {
        let mut g: Vec<usize> = (0..self.base_dim()).map(|i| self.base_element(i)).collect();
        g.extend((0..self.nparams()).map(|j| self.param(j)));
        g
    }

    /// `p : Ra -> a`, as a `dim a x dim Ra` matrix.
    pub fn augmentation(&self) -> &Matrix {
        &self.p
    }

    /// Dimensions per degree of `R ⊗_O A` computed as the quotient of the
    /// weight-truncated `R ⊗ A` by `x_j r ⊗ b - r ⊗ t_j b`.
    pub fn quotient_model_dims(&self) -> Result<BTreeMap<i32, usize>> {
        let d = &self.deformation;
        let (n, cap, da) = (self.nparams(), self.cap(), self.base_dim());
        let r = build_r_model(n, cap)?;
        let mut aa = concentrated(&d.to_algebra());
        let weights: Vec<usize> = (0..aa.dim()).map(|q| d.ring().degree(q / da)).collect();
        aa = DgAlgebra::new_unchecked(
            aa.name(),
            aa.labels().to_vec(),
            aa.degrees().to_vec(),
            weights,
            (0..aa.dim() * aa.dim())
                .map(|k| aa.product(k / aa.dim(), k % aa.dim()).clone())
                .collect(),
            aa.unit().clone(),
            aa.differential().clone(),
        );
        let ra = r.algebra();
        let (t, pairs) = tensor_truncated(ra, &aa, cap);
        let e = |i: usize| vec![(i, int(1))];
        let mut relations = Vec::new();
        for j in 0..n {
            let x = e(r.coordinate(j));
            let tj = e(d.ring().linear(j) * da + self.unit);
            for &(p, q) in &pairs.pairs {
                let v = sv_axpy(
                    &pairs.tensor(&ra.mul(&x, &e(p)), &e(q)),
                    &int(-1),
                    &pairs.tensor(&e(p), &aa.mul(&tj, &e(q))),
                );
                if !v.is_empty() {
                    relations.push(v);
                }
            }
        }
        let mut gens = Vec::new();
        let one_r = ra.unit()[0].0;
        let one_a = self.unit;
        for j in 0..n {
            gens.extend(pairs.get(r.coordinate(j), one_a));
            gens.extend(pairs.get(r.form(j), one_a));
            gens.extend(pairs.get(one_r, d.ring().linear(j) * da + one_a));
        }
        for i in 0..da {
            gens.extend(pairs.get(one_r, i));
        }
        let (q, _) = t.quotient(&relations, &gens)?;
        Ok(q.dims_by_degree())
    }

    pub fn report(&self) -> Result<RaReport> {
        let ra = &self.algebra;
        let a = self.deformation.algebra();
        let dims = ra.dims_by_degree();
        let cohomology = ra.cohomology_dims()?;
        let target = concentrated(a);
        let p_dg_map = ra.is_dg_map(&self.p, &target);
        let p_surjective = self.p.rank() == a.dim();
        let cx = ra.complex()?;
        let h0 = cx.cohomology(0)?;
        let zero = ra.of_degree(0);
        let reps: Vec<SparseVec> = h0
            .cocycle_reps
            .sparse_columns()
            .into_iter()
            .map(|c| c.into_iter().map(|(k, v)| (zero[k], v)).collect())
            .collect();
        let images: Vec<SparseVec> = reps.iter().map(|v| self.p.mul_sparse(v)).collect();
        let h0_iso = h0.dim == a.dim() && span_basis(a.dim(), &images).len() == a.dim();
        let big = self.deformation.to_algebra();
        let degree_zero_is_a = zero.len() == big.dim()
            && (0..big.dim()).all(|q| {
                (0..big.dim()).all(|r| {
                    let lhs = ra.product(self.index[&(0, q)], self.index[&(0, r)]);
                    let rhs: SparseVec = big
                        .product(q, r)
                        .iter()
                        .map(|(k, c)| (self.index[&(0, *k)], c.clone()))
                        .collect();
                    lhs == &rhs
                })
            });
        Ok(RaReport {
            dims: dims.clone(),
            cohomology,
            axioms: ra.defect().is_none(),
            p_dg_map,
            p_surjective,
            h0_iso,
            degree_zero_is_a,
            quotient_model_match: self.quotient_model_dims()? == dims,
        })
    }
}

/// `Ra ⊗_A Ra`, weight-truncated, as a dg-bimodule over `Ra`, with the right
/// `Λ`-action `ξ · θ_j = ξ dx_j - (-1)^{|ξ|} dx_j ξ` through `θ ↦ 1 ⊗ θ - θ ⊗ 1`.
#[derive(Clone, Debug)]
pub struct RaTensorRa {
    pub module: DgBimodule,
    pub quotient: QuotientMap,
    pub pairs: PairBasis,
    multiplication: Matrix,
    lambda: Vec<Matrix>,
}

pub fn ra_tensor_ra(res: &ResolutionRa) -> Result<RaTensorRa> {
    ra_tensor_ra_oriented(res, &int(1))
}

/// As [`ra_tensor_ra`] with `θ_j` acting through `c (1 ⊗ θ - θ ⊗ 1)`.
pub(crate) fn ra_tensor_ra_oriented(res: &ResolutionRa, c: &crate::linalg::Rational) -> Result<RaTensorRa> {
    let ra = res.algebra();
    let pairs = PairBasis::new(ra.weights(), ra.weights(), res.cap());
    let e = |i: usize| vec![(i, int(1))];
    let mut relations = Vec::new();
    for b in res.degree_zero_generators() {
        for &(i, j) in &pairs.pairs {
            let v = sv_axpy(
                &pairs.tensor(ra.product(i, b), &e(j)),
                &int(-1),
                &pairs.tensor(&e(i), ra.product(b, j)),
            );
            if !v.is_empty() {
                relations.push(v);
            }
        }
    }
    let gens = res.generators();
    let (module, quotient) = {
        let pr = &pairs;
        let amb = Ambient {
            labels: pr
                .pairs
                .iter()
                .map(|&(i, j)| format!("{}|{}", ra.labels()[i], ra.labels()[j]))
                .collect(),
            degrees: pr.pairs.iter().map(|&(i, j)| ra.degree(i) + ra.degree(j)).collect(),
            nleft: ra.dim(),
            nright: ra.dim(),
            d: Box::new(move |k| {
                let (i, j) = pr.pairs[k];
                let l = pr.tensor(&ra.d_of(i), &e(j));
                let r = pr.tensor(&e(i), &ra.d_of(j));
                sv_axpy(&l, &sign(ra.degree(i) as i64), &r)
            }),
            left: Box::new(move |x, k| {
                let (i, j) = pr.pairs[k];
                pr.tensor(ra.product(x, i), &e(j))
            }),
            right: Box::new(move |x, k| {
                let (i, j) = pr.pairs[k];
                pr.tensor(&e(i), ra.product(j, x))
            }),
        };
        amb.quotient(&relations, &gens, &gens)?
    };
    let mult_cols: Vec<SparseVec> = quotient
        .section()
        .iter()
        .map(|&k| {
            let (i, j) = pairs.pairs[k];
            ra.product(i, j).clone()
        })
        .collect();
    let multiplication = Matrix::from_sparse_columns(ra.dim(), &mult_cols);
    let par = module.parity();
    let lambda = (0..res.nparams())
        .map(|j| {
            module
                .right(res.form(j))
                .sub(&module.left(res.form(j)).mul(&par))
                .scale(c)
        })
        .collect();
    Ok(RaTensorRa {
        module,
        quotient,
        pairs,
        multiplication,
        lambda,
    })
}

impl RaTensorRa {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// `m : Ra ⊗_A Ra -> Ra`.
    pub fn multiplication(&self) -> &Matrix {
        &self.multiplication
    }

    /// Right action of `θ_j`.
    pub fn theta(&self, j: usize) -> &Matrix {
        &self.lambda[j]
    }

    /// The class of `x ⊗ y`.
    pub fn element(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.quotient.project(&self.pairs.tensor(x, y))
    }

    /// Spanning family of `(Ra ⊗_A Ra) · Λ_{<-k}`: all `ξ · θ_S` with `|S| > k`.
    pub fn lambda_ideal(&self, k: usize) -> Vec<SparseVec> {
        let n = self.lambda.len();
        let mut out = Vec::new();
        for s in 0..(1usize << n) {
            if (s.count_ones() as usize) <= k {
                continue;
            }
            let op = (0..n)
                .filter(|j| s >> j & 1 == 1)
                .fold(Matrix::identity(self.dim()), |acc, j| self.lambda[j].mul(&acc));
            out.extend(op.sparse_columns().into_iter().filter(|v| !v.is_empty()));
        }
        out
    }

    /// Number of triples `(S, e_i t^μ, T)` with `|S| + |T| + deg μ <= W`.
    pub fn free_model_dim(res: &ResolutionRa) -> usize {
        let (n, cap) = (res.nparams(), res.cap());
        let ring = res.deformation().ring();
        let mut count = 0;
        for s in 0..(1usize << n) {
            for t in 0..(1usize << n) {
                for mu in 0..ring.dim() {
                    if (s.count_ones() + t.count_ones()) as usize + ring.degree(mu) <= cap {
                        count += res.base_dim();
                    }
                }
            }
        }
        count
    }
}

/// `Θ(M) = (Ra ⊗_A Ra) ⊗_Λ M` as the quotient of `(Ra ⊗_A Ra) ⊗ M` by
/// `ξ θ_j ⊗ m - ξ ⊗ θ_j m`; the right action carries the sign `(-1)^{|m||x|}`.
#[derive(Clone, Debug)]
pub struct ThetaModule {
    pub module: DgBimodule,
    pub quotient: QuotientMap,
    relations: Vec<SparseVec>,
    mdim: usize,
}

pub fn theta(res: &ResolutionRa, x: &RaTensorRa, m: &LambdaModule) -> Result<ThetaModule> {
    if m.nparams() != res.nparams() {
        return Err(Error::MismatchedParameters {
            what: format!(
                "Λ on {} generators against T of dimension {}",
                m.nparams(),
                res.nparams()
            ),
        });
    }
    let n = res.nparams();
    let (xd, md) = (x.dim(), m.dim());
    let xm = &x.module;
    let col = |mat: &Matrix| mat.sparse_columns();
    let xdc = col(xm.differential());
    let xl: Vec<Vec<SparseVec>> = (0..res.algebra().dim()).map(|i| col(xm.left(i))).collect();
    let xr: Vec<Vec<SparseVec>> = (0..res.algebra().dim()).map(|i| col(xm.right(i))).collect();
    let xt: Vec<Vec<SparseVec>> = (0..n).map(|j| col(x.theta(j))).collect();
    let mdc = col(m.differential());
    let mt: Vec<Vec<SparseVec>> = (0..n).map(|j| col(m.theta(j))).collect();
    let xdeg = xm.degrees().to_vec();
    let mdeg = m.degrees().to_vec();
    let ra_deg = res.algebra().degrees().to_vec();
    let put = |v: &SparseVec, k: usize| -> SparseVec { v.iter().map(|(p, c)| (p * md + k, c.clone())).collect() };
    let put_m = |p: usize, v: &SparseVec| -> SparseVec { v.iter().map(|(k, c)| (p * md + k, c.clone())).collect() };
    let mut relations = Vec::new();
    for p in 0..xd {
        for k in 0..md {
            for j in 0..n {
                let v = sv_axpy(&put(&xt[j][p], k), &int(-1), &put_m(p, &mt[j][k]));
                if !v.is_empty() {
                    relations.push(v);
                }
            }
        }
    }
    let gens = res.generators();
    let (module, quotient) = {
        let amb = Ambient {
            labels: (0..xd * md)
                .map(|i| format!("{}⊗{}", xm.labels()[i / md], m.labels()[i % md]))
                .collect(),
            degrees: (0..xd * md).map(|i| xdeg[i / md] + mdeg[i % md]).collect(),
            nleft: ra_deg.len(),
            nright: ra_deg.len(),
            d: Box::new(|i| {
                let (p, k) = (i / md, i % md);
                sv_axpy(&put(&xdc[p], k), &sign(xdeg[p] as i64), &put_m(p, &mdc[k]))
            }),
            left: Box::new(|a, i| put(&xl[a][i / md], i % md)),
            right: Box::new(|a, i| {
                let (p, k) = (i / md, i % md);
                crate::linalg::sv_scale(&put(&xr[a][p], k), &sign((mdeg[k] * ra_deg[a]) as i64))
            }),
        };
        amb.quotient(&relations, &gens, &gens)?
    };
    Ok(ThetaModule {
        module,
        quotient,
        relations,
        mdim: md,
    })
}

impl ThetaModule {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// The class of `ξ ⊗ m_k` for `ξ` in `Ra ⊗_A Ra`.
    pub fn element(&self, xi: &SparseVec, k: usize) -> SparseVec {
        let v: SparseVec = xi.iter().map(|(p, c)| (p * self.mdim + k, c.clone())).collect();
        self.quotient.project(&v)
    }

    /// `Θ(s) = id ⊗ s` for a `Λ`-linear operator `s` on `M` of even degree.
    pub fn induce(&self, s: &Matrix) -> Result<Matrix> {
        let md = self.mdim;
        let cols = s.sparse_columns();
        Ambient::induce_operator(&self.quotient, &self.relations, &|i| {
            let (p, k) = (i / md, i % md);
            cols[k].iter().map(|(l, c)| (p * md + l, c.clone())).collect()
        })
    }

    /// `Θ(M) -> Θ(k_∧) ≅ Ra`, `ξ ⊗ m ↦ ε(m) m_Ra(ξ)` for `ε : M -> k`.
    pub fn to_ra(&self, x: &RaTensorRa, eps: &Matrix) -> Matrix {
        let md = self.mdim;
        let mult = x.multiplication().sparse_columns();
        let cols: Vec<SparseVec> = self
            .quotient
            .section()
            .iter()
            .map(|&i| {
                let e = eps.get(0, i % md);
                crate::linalg::sv_scale(&mult[i / md], &e)
            })
            .collect();
        Matrix::from_sparse_columns(x.multiplication().nrows(), &cols)
    }
}

/// Checks on `Ra ⊗_A Ra` and its truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropCpReport {
    pub dims: BTreeMap<i32, usize>,
    pub cohomology: BTreeMap<i32, usize>,
    pub expected_h0: usize,
    pub expected_h_minus1: usize,
    pub nonpositive: bool,
    /// Quotient dimension agrees with the free model count.
    pub free_model_match: bool,
    /// `X / X·Λ_{<-1} -> τ_{≥-1} X` is a quasi-isomorphism.
    pub truncation_quasi_iso: bool,
    /// `X·Λ_{<-1}` has no cohomology in degrees `>= -1`.
    pub left_piece_acyclic_above: bool,
    /// `X·Λ_{<-1}` has the dimension of `Ra ⊗ Λ_{<-1}` in the weight window.
    pub left_piece_dim_match: bool,
    /// `m_Ra` kills `X·Λ_{<-1}`.
    pub multiplication_kills_left_piece: bool,
}

impl PropCpReport {
    pub fn holds(&self) -> bool {
        self.cohomology.get(&0).copied().unwrap_or(0) == self.expected_h0
            && self.cohomology.get(&-1).copied().unwrap_or(0) == self.expected_h_minus1
            && self.nonpositive
            && self.free_model_match
            && self.truncation_quasi_iso
            && self.left_piece_acyclic_above
            && self.left_piece_dim_match
            && self.multiplication_kills_left_piece
    }
}

pub fn verify_prop_cp(d: &StarDeformation) -> Result<PropCpReport> {
    let res = build_resolution(d)?;
    let x = ra_tensor_ra(&res)?;
    let xm = &x.module;
    let dims = xm.dims_by_degree();
    let cohomology = xm.cohomology_dims()?;
    let all: Vec<usize> = (0..res.algebra().dim()).collect();
    let left_piece = x.lambda_ideal(1);
    let (q, qmap) = xm.quotient(&left_piece, &all, &all)?;
    let (t, tmap) = xm.truncate_geq(-1)?;
    let cols: Vec<SparseVec> = qmap
        .section()
        .iter()
        .map(|&i| tmap.project(&vec![(i, int(1))]))
        .collect();
    let comparison = Matrix::from_sparse_columns(t.dim(), &cols);
    let truncation_quasi_iso = q.is_chain_map(&comparison, &t) && q.is_quasi_iso(&comparison, &t)?;
    let left_coh = xm.subcomplex_cohomology(&left_piece)?;
    let left_piece_acyclic_above = left_coh.iter().all(|(&k, &h)| k < -1 || h == 0);
    let ra = res.algebra();
    let n = res.nparams();
    let mut expected_left = 0;
    for s in 0..(1usize << n) {
        let k = s.count_ones() as usize;
        if k >= 2 {
            expected_left += ra.weights().iter().filter(|&&w| w + k <= res.cap()).count();
        }
    }
    let left_dim = span_basis(x.dim(), &left_piece).len();
    let multiplication_kills_left_piece = left_piece.iter().all(|v| x.multiplication().mul_sparse(v).is_empty());
    let da = res.base_dim();
    Ok(PropCpReport {
        nonpositive: dims.keys().all(|&k| k <= 0),
        free_model_match: RaTensorRa::free_model_dim(&res) == x.dim(),
        dims,
        cohomology,
        expected_h0: da,
        expected_h_minus1: da * n,
        truncation_quasi_iso,
        left_piece_acyclic_above,
        left_piece_dim_match: left_dim == expected_left,
        multiplication_kills_left_piece,
    })
}

/// `H^•(Θ(M))` against `dim a · H^•(M)` in degrees `>= -W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaInstance {
    pub name: String,
    pub cohomology: BTreeMap<i32, usize>,
    pub expected: BTreeMap<i32, usize>,
}

impl ThetaInstance {
    pub fn holds(&self) -> bool {
        self.expected
            .iter()
            .all(|(k, h)| self.cohomology.get(k).copied().unwrap_or(0) == *h)
    }
}

pub fn theta_exactness(res: &ResolutionRa, x: &RaTensorRa) -> Result<Vec<ThetaInstance>> {
    let n = res.nparams();
    let da = res.base_dim();
    let mut out = Vec::new();
    for (name, m) in [
        ("k", LambdaModule::residue_field(n)),
        ("Λ", LambdaModule::free(n)),
        ("Λ/Λ<-1", LambdaModule::truncated_quotient(n)),
    ] {
        let th = theta(res, x, &m)?;
        let cohomology = th.module.cohomology_dims()?;
        let expected = m
            .cohomology_dims()?
            .into_iter()
            .filter(|(k, _)| *k >= -(res.cap() as i32))
            .map(|(k, h)| (k, h * da))
            .collect();
        out.push(ThetaInstance {
            name: name.into(),
            cohomology,
            expected,
        });
    }
    Ok(out)
}

/// Whether `m : Θ(k_∧) -> Ra` is a bijective chain map of bimodules.
pub fn theta_k_iso(res: &ResolutionRa, x: &RaTensorRa) -> Result<bool> {
    let th = theta(res, x, &LambdaModule::residue_field(res.nparams()))?;
    let f = th.to_ra(x, &Matrix::from_triplets(1, 1, [(0, 0, int(1))]));
    let reg = DgBimodule::regular(res.algebra());
    Ok(f.nrows() == f.ncols() && f.rank() == f.ncols() && th.module.is_chain_map(&f, &reg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::deformation_preset;

    #[test]
    fn resolutions_of_presets() {
        let r = build_resolution(&deformation_preset("trivial", 1).unwrap()).unwrap();
        let rep = r.report().unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.cohomology[&0], 1);
        let r = build_resolution(&deformation_preset("dual_numbers", 2).unwrap()).unwrap();
        let rep = r.report().unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!((rep.cohomology[&0], rep.cohomology[&-1]), (2, 0));
        let r = build_resolution(&deformation_preset("clifford", 2).unwrap()).unwrap();
        let rep = r.report().unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.cohomology[&0], 4);
    }

    #[test]
    fn ra_tensor_ra_is_a_bimodule() {
        let res = build_resolution(&deformation_preset("dual_numbers", 1).unwrap()).unwrap();
        let x = ra_tensor_ra(&res).unwrap();
        assert!(x.module.defect(res.algebra(), res.algebra()).is_none());
        assert_eq!(x.dim(), RaTensorRa::free_model_dim(&res));
    }

    #[test]
    fn prop_cp_instances() {
        for (name, h0, h1) in [("trivial", 1, 1), ("dual_numbers", 2, 2), ("clifford", 4, 8)] {
            let rep = verify_prop_cp(&deformation_preset(name, 1).unwrap()).unwrap();
            assert_eq!(rep.cohomology[&0], h0, "{name}");
            assert_eq!(rep.cohomology[&-1], h1, "{name}");
            assert!(rep.holds(), "{name}: {rep:?}");
        }
    }

    #[test]
    fn theta_instances() {
        for (name, order) in [("dual_numbers", 1), ("dual_numbers", 2), ("clifford", 1)] {
            let res = build_resolution(&deformation_preset(name, order).unwrap()).unwrap();
            let x = ra_tensor_ra(&res).unwrap();
            assert!(theta_k_iso(&res, &x).unwrap(), "{name}");
            for inst in theta_exactness(&res, &x).unwrap() {
                assert!(inst.holds(), "{name} {order}: {inst:?}");
            }
        }
    }
}
