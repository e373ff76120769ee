use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{AssocAlgebra, Bimodule};
use crate::error::{Error, Result};
use crate::linalg::{
    int, quotient_by_span, sign, span_basis, CochainComplex, Cohomology, FlatIndex, Matrix, SparseVec,
};

use super::{DgAlgebra, QuotientMap};

/// Finite-dimensional dg-bimodule: graded basis, differential and the action
/// matrix of every basis element of the left and right algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgBimodule {
    labels: Vec<String>,
    degrees: Vec<i32>,
    d: Matrix,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
}

/// `Cone(f: M -> N) = N ⊕ M[1]` with the maps `N -> Cone -> M[1]`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub module: DgBimodule,
    pub inclusion: Matrix,
    pub projection: Matrix,
}

impl DgBimodule {
    pub fn new_unchecked(
        labels: Vec<String>,
        degrees: Vec<i32>,
        d: Matrix,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
    ) -> Self {
        DgBimodule {
            labels,
            degrees,
            d,
            left,
            right,
        }
    }

    pub fn new(
        labels: Vec<String>,
        degrees: Vec<i32>,
        d: Matrix,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
        over: (&DgAlgebra, &DgAlgebra),
    ) -> Result<Self> {
        let m = Self::new_unchecked(labels, degrees, d, left, right);
        match m.defect(over.0, over.1) {
            None => Ok(m),
            Some(what) => Err(Error::BimoduleMismatch { what }),
        }
    }

    /// The regular bimodule.
    pub fn regular(a: &DgAlgebra) -> Self {
        let n = a.dim();
        let e = |i: usize| vec![(i, int(1))];
        DgBimodule {
            labels: a.labels().to_vec(),
            degrees: a.degrees().to_vec(),
            d: a.differential().clone(),
            left: (0..n).map(|i| a.left_mult(&e(i))).collect(),
            right: (0..n).map(|i| a.right_mult(&e(i))).collect(),
        }
    }

    /// An ordinary bimodule placed in a single degree, over `a` in degree 0.
    pub fn from_bimodule(b: &Bimodule, degree: i32) -> Self {
        let n = b.dim();
        DgBimodule {
            labels: b.labels().to_vec(),
            degrees: vec![degree; n],
            d: Matrix::zeros(n, n),
            left: (0..b.left_algebra().dim()).map(|i| b.left_action(i).clone()).collect(),
            right: (0..b.right_algebra().dim())
                .map(|i| b.right_action(i).clone())
                .collect(),
        }
    }

    /// Two-term complex `E1 -> E0` in degrees -1, 0 given by a bimodule map.
    pub fn two_term(e1: &Bimodule, e0: &Bimodule, u: &Matrix) -> Self {
        let (n1, n0) = (e1.dim(), e0.dim());
        let n = n0 + n1;
        let mut labels = e0.labels().to_vec();
        labels.extend(e1.labels().iter().cloned());
        let mut degrees = vec![0; n0];
        degrees.extend(std::iter::repeat_n(-1, n1));
        let d = Matrix::zeros(n0, n0).hstack(u).vstack(&Matrix::zeros(n1, n));
        let block = |a: &Matrix, b: &Matrix| {
            a.hstack(&Matrix::zeros(n0, n1))
                .vstack(&Matrix::zeros(n1, n0).hstack(b))
        };
        DgBimodule {
            labels,
            degrees,
            d,
            left: (0..e0.left_algebra().dim())
                .map(|i| block(e0.left_action(i), e1.left_action(i)))
                .collect(),
            right: (0..e0.right_algebra().dim())
                .map(|i| block(e0.right_action(i), e1.right_action(i)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn differential(&self) -> &Matrix {
        &self.d
    }

    pub fn left(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn left_elem(&self, x: &SparseVec) -> Matrix {
        x.iter().fold(Matrix::zeros(self.dim(), self.dim()), |acc, (i, c)| {
            acc.axpy(c, &self.left[*i])
        })
    }

    pub fn right_elem(&self, x: &SparseVec) -> Matrix {
        x.iter().fold(Matrix::zeros(self.dim(), self.dim()), |acc, (i, c)| {
            acc.axpy(c, &self.right[*i])
        })
    }

    /// `(-1)^{deg}` on the basis.
    pub fn parity(&self) -> Matrix {
        Matrix::from_triplets(
            self.dim(),
            self.dim(),
            (0..self.dim()).map(|i| (i, i, sign(self.degrees[i] as i64))),
        )
    }

    /// Basis indices of the given degree.
    pub fn of_degree(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == k).collect()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for k in &self.degrees {
            *out.entry(*k).or_insert(0) += 1;
        }
        out
    }

    /// First failing axiom: degrees, `d^2 = 0`, Leibniz for both actions,
    /// associativity and unitality of both actions, commuting actions.
    pub fn defect(&self, l: &DgAlgebra, r: &DgAlgebra) -> Option<String> {
        self.defect_on(
            l,
            r,
            &(0..l.dim()).collect::<Vec<_>>(),
            &(0..r.dim()).collect::<Vec<_>>(),
        )
    }

    /// As [`DgBimodule::defect`], with the pairwise checks restricted to the listed
    /// basis elements.
    pub fn defect_on(&self, l: &DgAlgebra, r: &DgAlgebra, lsel: &[usize], rsel: &[usize]) -> Option<String> {
        let n = self.dim();
        if self.left.len() != l.dim() || self.right.len() != r.dim() || self.d.nrows() != n || self.labels.len() != n {
            return Some("shapes disagree".into());
        }
        if !shifts(&self.d, &self.degrees, &self.degrees, 1) {
            return Some("differential does not have degree +1".into());
        }
        if !self.d.mul(&self.d).is_zero() {
            return Some("d^2 != 0".into());
        }
        let par = self.parity();
        for &i in lsel {
            let li = &self.left[i];
            if !shifts(li, &self.degrees, &self.degrees, l.degree(i)) {
                return Some(format!("left action of {} has the wrong degree", l.labels()[i]));
            }
            let lhs = self.d.mul(li);
            let rhs = self
                .left_elem(&l.d_of(i))
                .add(&li.mul(&self.d).scale(&sign(l.degree(i) as i64)));
            if lhs != rhs {
                return Some(format!("left Leibniz fails for {}", l.labels()[i]));
            }
        }
        for &i in rsel {
            let ri = &self.right[i];
            if !shifts(ri, &self.degrees, &self.degrees, r.degree(i)) {
                return Some(format!("right action of {} has the wrong degree", r.labels()[i]));
            }
            let lhs = self.d.mul(ri);
            let rhs = ri.mul(&self.d).add(&self.right_elem(&r.d_of(i)).mul(&par));
            if lhs != rhs {
                return Some(format!("right Leibniz fails for {}", r.labels()[i]));
            }
        }
        let id = Matrix::identity(n);
        if self.left_elem(l.unit()) != id || self.right_elem(r.unit()) != id {
            return Some("unit does not act as the identity".into());
        }
        for &i in lsel {
            for &j in lsel {
                if self.left[i].mul(&self.left[j]) != self.left_elem(l.product(i, j)) {
                    return Some(format!(
                        "left action not associative on ({}, {})",
                        l.labels()[i],
                        l.labels()[j]
                    ));
                }
            }
        }
        for &i in rsel {
            for &j in rsel {
                if self.right[j].mul(&self.right[i]) != self.right_elem(r.product(i, j)) {
                    return Some(format!(
                        "right action not associative on ({}, {})",
                        r.labels()[i],
                        r.labels()[j]
                    ));
                }
            }
        }
        for &i in lsel {
            for &j in rsel {
                if self.left[i].mul(&self.right[j]) != self.right[j].mul(&self.left[i]) {
                    return Some(format!(
                        "actions of {} and {} do not commute",
                        l.labels()[i],
                        r.labels()[j]
                    ));
                }
            }
        }
        None
    }

    pub fn complex(&self) -> Result<(CochainComplex, FlatIndex)> {
        CochainComplex::from_flat(&self.degrees, &self.d)
    }

    pub fn cohomology_dims(&self) -> Result<BTreeMap<i32, usize>> {
        let (c, idx) = self.complex()?;
        idx.by_degree.keys().map(|&i| Ok((i, c.cohomology(i)?.dim))).collect()
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.cohomology_dims()?.values().all(|&h| h == 0))
    }

    /// Whether `f : self -> other` is a degree-0 chain map commuting with both actions.
    pub fn is_chain_map(&self, f: &Matrix, other: &DgBimodule) -> bool {
        if f.ncols() != self.dim() || f.nrows() != other.dim() || !shifts(f, &self.degrees, &other.degrees, 0) {
            return false;
        }
        other.d.mul(f) == f.mul(&self.d)
            && self.left.len() == other.left.len()
            && self.right.len() == other.right.len()
            && (0..self.left.len()).all(|i| other.left[i].mul(f) == f.mul(&self.left[i]))
            && (0..self.right.len()).all(|i| other.right[i].mul(f) == f.mul(&self.right[i]))
    }

    /// `Cone(f) = other ⊕ self[1]`, `d(n, m) = (d n + f m, -d m)`, with the left
    /// action twisted by `(-1)^{|x|}` on the shifted summand.
    pub fn cone(&self, f: &Matrix, other: &DgBimodule, lalg: &DgAlgebra) -> Result<Cone> {
        if !self.is_chain_map(f, other) {
            return Err(Error::NotAChainMap {
                what: "cone of a map that is not a chain map of bimodules".into(),
            });
        }
        let (nm, nn) = (self.dim(), other.dim());
        let block = |a: &Matrix, b: &Matrix, c: &Matrix, e: &Matrix| a.hstack(b).vstack(&c.hstack(e));
        let d = block(&other.d, f, &Matrix::zeros(nm, nn), &self.d.scale(&int(-1)));
        let left = (0..self.left.len())
            .map(|i| {
                block(
                    &other.left[i],
                    &Matrix::zeros(nn, nm),
                    &Matrix::zeros(nm, nn),
                    &self.left[i].scale(&sign(lalg.degree(i) as i64)),
                )
            })
            .collect();
        let right = (0..self.right.len())
            .map(|i| {
                block(
                    &other.right[i],
                    &Matrix::zeros(nn, nm),
                    &Matrix::zeros(nm, nn),
                    &self.right[i],
                )
            })
            .collect();
        let mut labels = other.labels.clone();
        labels.extend(self.labels.iter().map(|l| format!("s{l}")));
        let mut degrees = other.degrees.clone();
        degrees.extend(self.degrees.iter().map(|k| k - 1));
        let inclusion = Matrix::identity(nn).vstack(&Matrix::zeros(nm, nn));
        let projection = Matrix::zeros(nm, nn).hstack(&Matrix::identity(nm));
        Ok(Cone {
            module: DgBimodule::new_unchecked(labels, degrees, d, left, right),
            inclusion,
            projection,
        })
    }

    /// Quotient by a sub-dg-bimodule spanned by `spanning`; closure is checked under
    /// `d` and the actions of the listed generators. Every action is induced.
    pub fn quotient(
        &self,
        spanning: &[SparseVec],
        lgens: &[usize],
        rgens: &[usize],
    ) -> Result<(DgBimodule, QuotientMap)> {
        let dc = self.d.sparse_columns();
        let lc: Vec<Vec<SparseVec>> = self.left.iter().map(|m| m.sparse_columns()).collect();
        let rc: Vec<Vec<SparseVec>> = self.right.iter().map(|m| m.sparse_columns()).collect();
        let amb = Ambient {
            labels: self.labels.clone(),
            degrees: self.degrees.clone(),
            nleft: self.left.len(),
            nright: self.right.len(),
            d: Box::new(move |i| dc[i].clone()),
            left: Box::new(move |x, i| lc[x][i].clone()),
            right: Box::new(move |x, i| rc[x][i].clone()),
        };
        amb.quotient(spanning, lgens, rgens)
    }

    /// `τ_{≥k}`: degree `k` replaced by `coker d^{k-1}`, lower degrees killed.
    pub fn truncate_geq(&self, k: i32) -> Result<(DgBimodule, QuotientMap)> {
        let mut spanning: Vec<SparseVec> = (0..self.dim())
            .filter(|&i| self.degrees[i] < k)
            .map(|i| vec![(i, int(1))])
            .collect();
        let cols = self.d.sparse_columns();
        spanning.extend(self.of_degree(k - 1).into_iter().map(|i| cols[i].clone()));
        let lg: Vec<usize> = (0..self.left.len()).collect();
        let rg: Vec<usize> = (0..self.right.len()).collect();
        self.quotient(&spanning, &lg, &rg)
    }

    /// Cohomology of the subcomplex spanned by homogeneous vectors closed under `d`.
    pub fn subcomplex_cohomology(&self, spanning: &[SparseVec]) -> Result<BTreeMap<i32, usize>> {
        let basis = span_basis(self.dim(), spanning);
        let deg = |v: &SparseVec| -> Result<i32> {
            let ks: BTreeSet<i32> = v.iter().map(|(i, _)| self.degrees[*i]).collect();
            match ks.len() {
                1 => Ok(*ks.iter().next().expect("one degree")),
                _ => Err(Error::Invalid {
                    what: "subcomplex generator is not homogeneous".into(),
                }),
            }
        };
        let degrees: Vec<i32> = basis.iter().map(deg).collect::<Result<_>>()?;
        let ambient = Matrix::from_sparse_columns(self.dim(), &basis);
        let solver = crate::linalg::Solver::new(&ambient);
        let mut d_cols = Vec::with_capacity(basis.len());
        for v in &basis {
            d_cols.push(solver.solve(&self.d.mul_sparse(v)).ok_or_else(|| Error::Invalid {
                what: "span is not closed under d".into(),
            })?);
        }
        let d = Matrix::from_sparse_columns(basis.len(), &d_cols);
        let (c, idx) = CochainComplex::from_flat(&degrees, &d)?;
        idx.by_degree.keys().map(|&i| Ok((i, c.cohomology(i)?.dim))).collect()
    }

    /// Whether the chain map `f : self -> other` induces isomorphisms on every `H^i`.
    pub fn is_quasi_iso(&self, f: &Matrix, other: &DgBimodule) -> Result<bool> {
        if !shifts(f, &self.degrees, &other.degrees, 0) || other.d.mul(f) != f.mul(&self.d) {
            return Err(Error::NotAChainMap {
                what: "quasi-isomorphism test on a map that is not a chain map".into(),
            });
        }
        let (cs, is) = self.complex()?;
        let (co, io) = other.complex()?;
        let degrees: BTreeSet<i32> = is.by_degree.keys().chain(io.by_degree.keys()).copied().collect();
        for i in degrees {
            let hs: Cohomology = cs.cohomology(i)?;
            let ho: Cohomology = co.cohomology(i)?;
            if hs.dim != ho.dim {
                return Ok(false);
            }
            if hs.dim == 0 {
                continue;
            }
            let src = is.indices(i);
            let dst = io.indices(i);
            let local: BTreeMap<usize, usize> = dst.iter().enumerate().map(|(k, g)| (*g, k)).collect();
            let mut cols = Vec::with_capacity(hs.dim);
            for rep in hs.cocycle_reps.sparse_columns() {
                let flat: SparseVec = rep.iter().map(|(k, c)| (src[*k], c.clone())).collect();
                let img: SparseVec = f.mul_sparse(&flat).into_iter().map(|(g, c)| (local[&g], c)).collect();
                cols.push(ho.projection.mul_sparse(&img));
            }
            if Matrix::from_sparse_columns(ho.dim, &cols).rank() != hs.dim {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

type BasisOp<'a> = Box<dyn Fn(usize) -> SparseVec + 'a>;
type ActionOp<'a> = Box<dyn Fn(usize, usize) -> SparseVec + 'a>;

/// A dg-bimodule given by its operators on basis vectors, used for large ambient
/// spaces that are only ever seen through a quotient.
pub struct Ambient<'a> {
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    pub nleft: usize,
    pub nright: usize,
    pub d: BasisOp<'a>,
    /// `(x, i) ↦ x · e_i`.
    pub left: ActionOp<'a>,
    /// `(x, i) ↦ e_i · x`.
    pub right: ActionOp<'a>,
}

impl<'a> Ambient<'a> {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    fn apply(op: &dyn Fn(usize) -> SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, crate::linalg::Rational> = BTreeMap::new();
        for (i, c) in v {
            for (k, p) in op(*i) {
                *acc.entry(k).or_insert_with(|| int(0)) += c * p;
            }
        }
        crate::linalg::sv_collect(acc)
    }

    /// Quotient by the span of `spanning`, which must be closed under `d` and the
    /// actions of the listed generators.
    pub fn quotient(
        &self,
        spanning: &[SparseVec],
        lgens: &[usize],
        rgens: &[usize],
    ) -> Result<(DgBimodule, QuotientMap)> {
        let q = QuotientMap::new(quotient_by_span(self.dim(), spanning));
        let basis = span_basis(self.dim(), spanning);
        let closed = |op: &dyn Fn(usize) -> SparseVec| basis.iter().all(|v| q.project(&Self::apply(op, v)).is_empty());
        let ok = closed(&|i| (self.d)(i))
            && lgens.iter().all(|&g| closed(&|i| (self.left)(g, i)))
            && rgens.iter().all(|&g| closed(&|i| (self.right)(g, i)));
        if !ok {
            return Err(Error::BimoduleMismatch {
                what: "relations do not span a sub-dg-bimodule".into(),
            });
        }
        let module = self.induce_quotient(&q);
        Ok((module, q))
    }

    /// The quotient structure on `q`, assuming its kernel is a sub-dg-bimodule.
    pub fn induce_quotient(&self, q: &QuotientMap) -> DgBimodule {
        let reps = q.section();
        let induce = |op: &dyn Fn(usize) -> SparseVec| {
            let cols: Vec<SparseVec> = reps.iter().map(|&i| q.project(&op(i))).collect();
            Matrix::from_sparse_columns(q.dim(), &cols)
        };
        DgBimodule {
            labels: reps.iter().map(|&i| self.labels[i].clone()).collect(),
            degrees: reps.iter().map(|&i| self.degrees[i]).collect(),
            d: induce(&|i| (self.d)(i)),
            left: (0..self.nleft).map(|x| induce(&|i| (self.left)(x, i))).collect(),
            right: (0..self.nright).map(|x| induce(&|i| (self.right)(x, i))).collect(),
        }
    }

    /// The map `quotient -> quotient` induced by an ambient operator, after checking
    /// that it preserves the kernel spanned by `spanning`.
    pub fn induce_operator(q: &QuotientMap, spanning: &[SparseVec], op: &dyn Fn(usize) -> SparseVec) -> Result<Matrix> {
        let basis = span_basis(q.ambient_dim(), spanning);
        if basis.iter().any(|v| !q.project(&Self::apply(op, v)).is_empty()) {
            return Err(Error::Invalid {
                what: "operator does not preserve the relations".into(),
            });
        }
        let cols: Vec<SparseVec> = q.section().iter().map(|&i| q.project(&op(i))).collect();
        Ok(Matrix::from_sparse_columns(q.dim(), &cols))
    }
}

fn shifts(f: &Matrix, src: &[i32], dst: &[i32], shift: i32) -> bool {
    (0..f.nrows()).all(|i| f.row(i).iter().all(|(j, _)| dst[i] == src[*j] + shift))
}

/// An ordinary algebra as a dg-algebra in degree 0 with weight 0.
pub fn concentrated(a: &AssocAlgebra) -> DgAlgebra {
    let n = a.dim();
    DgAlgebra::new_unchecked(
        a.name(),
        a.labels().to_vec(),
        vec![0; n],
        vec![0; n],
        a.table().to_vec(),
        a.unit().clone(),
        Matrix::zeros(n, n),
    )
}
