use std::collections::{BTreeMap, HashMap};

use crate::algebra::presets::wedge_sign;
use crate::deformation::BaseRing;
use crate::error::{Error, Result};
use crate::linalg::{int, quotient_by_span, sign, sv_axpy, CochainComplex, Matrix, SparseVec};

use super::QuotientMap;

/// Finite-dimensional dg-algebra over Q with a nonnegative weight on each basis
/// element. Products never lower the weight, so "weight > W" is a dg-ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    name: String,
    labels: Vec<String>,
    degrees: Vec<i32>,
    weights: Vec<usize>,
    table: Vec<SparseVec>,
    unit: SparseVec,
    d: Matrix,
}

impl DgAlgebra {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        degrees: Vec<i32>,
        weights: Vec<usize>,
        table: Vec<SparseVec>,
        unit: SparseVec,
        d: Matrix,
    ) -> Result<Self> {
        let a = Self::new_unchecked(name, labels, degrees, weights, table, unit, d);
        match a.defect() {
            None => Ok(a),
            Some(what) => Err(Error::NotAnAlgebra { what }),
        }
    }

    pub fn new_unchecked(
        name: impl Into<String>,
        labels: Vec<String>,
        degrees: Vec<i32>,
        weights: Vec<usize>,
        table: Vec<SparseVec>,
        unit: SparseVec,
        d: Matrix,
    ) -> Self {
        DgAlgebra {
            name: name.into(),
            labels,
            degrees,
            weights,
            table,
            unit,
            d,
        }
    }

    /// First failing axiom: shapes, degrees, `d^2 = 0`, Leibniz, associativity, unit.
    pub fn defect(&self) -> Option<String> {
        let n = self.dim();
        if self.labels.len() != n || self.weights.len() != n || self.table.len() != n * n {
            return Some("shapes disagree".into());
        }
        if self.d.nrows() != n || self.d.ncols() != n {
            return Some("differential has the wrong shape".into());
        }
        for i in 0..n {
            if self
                .d
                .row(i)
                .iter()
                .any(|(j, _)| self.degrees[i] != self.degrees[*j] + 1)
            {
                return Some("differential does not have degree +1".into());
            }
        }
        for i in 0..n {
            for j in 0..n {
                let want = self.degrees[i] + self.degrees[j];
                if self.product(i, j).iter().any(|(k, _)| self.degrees[*k] != want) {
                    return Some(format!("{} {} is not homogeneous", self.labels[i], self.labels[j]));
                }
            }
        }
        if !self.d.mul(&self.d).is_zero() {
            return Some("d^2 != 0".into());
        }
        for i in 0..n {
            let di = self.d_of(i);
            for j in 0..n {
                let lhs = self.d.mul_sparse(self.product(i, j));
                let r1 = self.mul(&di, &vec![(j, int(1))]);
                let r2 = self.mul(&vec![(i, int(1))], &self.d_of(j));
                let rhs = sv_axpy(&r1, &sign(self.degrees[i] as i64), &r2);
                if lhs != rhs {
                    return Some(format!("Leibniz fails on ({}, {})", self.labels[i], self.labels[j]));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j).clone();
                for k in 0..n {
                    let l = self.mul(&ij, &vec![(k, int(1))]);
                    let r = self.mul(&vec![(i, int(1))], self.product(j, k));
                    if l != r {
                        return Some(format!(
                            "not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            let e = vec![(i, int(1))];
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Some(format!("unit fails on {}", self.labels[i]));
            }
        }
        if !self.d.mul_sparse(&self.unit).is_empty() {
            return Some("unit is not closed".into());
        }
        None
    }

    pub fn name(&self) -> &str {
        &self.name
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

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn differential(&self) -> &Matrix {
        &self.d
    }

    pub fn d_of(&self, i: usize) -> SparseVec {
        self.d.mul_sparse(&vec![(i, int(1))])
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                out = sv_axpy(&out, &(a * b), self.product(*i, *j));
            }
        }
        out
    }

    pub fn left_mult(&self, x: &SparseVec) -> Matrix {
        let n = self.dim();
        let cols: Vec<SparseVec> = (0..n).map(|j| self.mul(x, &vec![(j, int(1))])).collect();
        Matrix::from_sparse_columns(n, &cols)
    }

    pub fn right_mult(&self, x: &SparseVec) -> Matrix {
        let n = self.dim();
        let cols: Vec<SparseVec> = (0..n).map(|j| self.mul(&vec![(j, int(1))], x)).collect();
        Matrix::from_sparse_columns(n, &cols)
    }

    /// Basis indices of the given degree.
    pub fn of_degree(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == k).collect()
    }

    pub fn complex(&self) -> Result<CochainComplex> {
        Ok(CochainComplex::from_flat(&self.degrees, &self.d)?.0)
    }

    pub fn cohomology_dims(&self) -> Result<BTreeMap<i32, usize>> {
        self.complex()?.cohomology_dims()
    }

    /// `dim` per degree.
    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for k in &self.degrees {
            *out.entry(*k).or_insert(0) += 1;
        }
        out
    }

    /// `x y = (-1)^{|x||y|} y x` on basis elements.
    pub fn is_graded_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s = sign((self.degrees[i] * self.degrees[j]) as i64);
                self.product(i, j) == &crate::linalg::sv_scale(self.product(j, i), &s)
            })
        })
    }

    /// Whether `f : self -> other` (columns are images of basis elements) is a unital
    /// dg-algebra map.
    pub fn is_dg_map(&self, f: &Matrix, other: &DgAlgebra) -> bool {
        let n = self.dim();
        if f.ncols() != n || f.nrows() != other.dim() {
            return false;
        }
        let cols = f.sparse_columns();
        if f.mul_sparse(&self.unit) != other.unit {
            return false;
        }
        if other.d.mul(f) != f.mul(&self.d) {
            return false;
        }
        for i in 0..n {
            if cols[i].iter().any(|(k, _)| other.degrees[*k] != self.degrees[i]) {
                return false;
            }
            for j in 0..n {
                if f.mul_sparse(self.product(i, j)) != other.mul(&cols[i], &cols[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Quotient by a dg-ideal given by a spanning family. The family must be closed
    /// under the differential and under multiplication by the listed generators on
    /// both sides.
    pub fn quotient(&self, spanning: &[SparseVec], generators: &[usize]) -> Result<(DgAlgebra, QuotientMap)> {
        let q = QuotientMap::new(quotient_by_span(self.dim(), spanning));
        for v in spanning {
            let mut images = vec![self.d.mul_sparse(v)];
            for g in generators {
                let e = vec![(*g, int(1))];
                images.push(self.mul(&e, v));
                images.push(self.mul(v, &e));
            }
            if images.iter().any(|w| !q.project(w).is_empty()) {
                return Err(Error::NotAnIdeal {
                    what: format!("relations of {} are not a dg-ideal", self.name),
                });
            }
        }
        let reps = q.section().to_vec();
        let m = reps.len();
        let mut table = Vec::with_capacity(m * m);
        for &i in &reps {
            for &j in &reps {
                table.push(q.project(self.product(i, j)));
            }
        }
        let d_cols: Vec<SparseVec> = reps.iter().map(|&i| q.project(&self.d_of(i))).collect();
        let alg = DgAlgebra::new_unchecked(
            format!("{}/I", self.name),
            reps.iter().map(|&i| self.labels[i].clone()).collect(),
            reps.iter().map(|&i| self.degrees[i]).collect(),
            reps.iter().map(|&i| self.weights[i]).collect(),
            table,
            q.project(&self.unit),
            Matrix::from_sparse_columns(m, &d_cols),
        );
        Ok((alg, q))
    }
}

/// Basis of a weight-truncated tensor product: the pairs `(i, j)` with
/// `w(i) + w(j) <= cap`.
#[derive(Clone, Debug)]
pub struct PairBasis {
    pub pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl PairBasis {
    pub fn new(w1: &[usize], w2: &[usize], cap: usize) -> Self {
        let mut pairs = Vec::new();
        for (i, a) in w1.iter().enumerate() {
            for (j, b) in w2.iter().enumerate() {
                if a + b <= cap {
                    pairs.push((i, j));
                }
            }
        }
        let index = pairs.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        PairBasis { pairs, index }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }

    /// `Σ c a_i ⊗ b_j` over the pairs that survive the truncation.
    pub fn tensor(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out: BTreeMap<usize, crate::linalg::Rational> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(k) = self.get(*i, *j) {
                    *out.entry(k).or_insert_with(|| int(0)) += a * b;
                }
            }
        }
        crate::linalg::sv_collect(out)
    }
}

/// Graded tensor product `a ⊗ b` truncated at total weight `cap`, with
/// `(x ⊗ y)(x' ⊗ y') = (-1)^{|y||x'|} x x' ⊗ y y'`.
pub fn tensor_truncated(a: &DgAlgebra, b: &DgAlgebra, cap: usize) -> (DgAlgebra, PairBasis) {
    let basis = PairBasis::new(&a.weights, &b.weights, cap);
    let n = basis.len();
    let mut table = Vec::with_capacity(n * n);
    for &(i, j) in &basis.pairs {
        for &(k, l) in &basis.pairs {
            let s = sign((b.degrees[j] * a.degrees[k]) as i64);
            let v = basis.tensor(a.product(i, k), b.product(j, l));
            table.push(crate::linalg::sv_scale(&v, &s));
        }
    }
    let d_cols: Vec<SparseVec> = basis
        .pairs
        .iter()
        .map(|&(i, j)| {
            let l = basis.tensor(&a.d_of(i), &vec![(j, int(1))]);
            let r = basis.tensor(&vec![(i, int(1))], &b.d_of(j));
            sv_axpy(&l, &sign(a.degrees[i] as i64), &r)
        })
        .collect();
    let unit = basis.tensor(&a.unit, &b.unit);
    let alg = DgAlgebra::new_unchecked(
        format!("{}⊗{}", a.name, b.name),
        basis
            .pairs
            .iter()
            .map(|&(i, j)| format!("{}⊗{}", a.labels[i], b.labels[j]))
            .collect(),
        basis.pairs.iter().map(|&(i, j)| a.degrees[i] + b.degrees[j]).collect(),
        basis.pairs.iter().map(|&(i, j)| a.weights[i] + b.weights[j]).collect(),
        table,
        unit,
        Matrix::from_sparse_columns(n, &d_cols),
    );
    (alg, basis)
}

/// Free graded-commutative algebra on even generators `x_1..x_n` (degree 0) and odd
/// generators `e_k` (degree -1) with `d e_k = x_{target(k)}`, every generator of
/// weight 1, truncated at weight `cap`.
///
/// Basis elements are `x^μ e_S` with `μ` a monomial index of [`BaseRing`] and `S` a
/// bitmask over the odd generators.
#[derive(Clone, Debug)]
pub struct KoszulCdga {
    pub ring: BaseRing,
    pub targets: Vec<usize>,
    pub cap: usize,
    /// `(S, μ)` per basis element.
    pub basis: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    pub algebra: DgAlgebra,
}

impl KoszulCdga {
    pub fn new(even: &[String], odd: &[String], targets: Vec<usize>, cap: usize) -> Self {
        let ring = BaseRing::with_labels(even.to_vec(), cap);
        let m = targets.len();
        let mut basis = Vec::new();
        for s in 0..(1usize << m) {
            let k = s.count_ones() as usize;
            if k > cap {
                continue;
            }
            for mu in 0..ring.dim() {
                if ring.degree(mu) + k <= cap {
                    basis.push((s, mu));
                }
            }
        }
        let index: HashMap<(usize, usize), usize> = basis.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        let n = basis.len();
        let get = |s: usize, mu: usize| index.get(&(s, mu)).copied();
        let mut table = Vec::with_capacity(n * n);
        for &(s, mu) in &basis {
            for &(t, nu) in &basis {
                let v = if s & t != 0 {
                    Vec::new()
                } else {
                    match ring.mul(mu, nu).and_then(|p| get(s | t, p)) {
                        Some(k) => vec![(k, wedge_sign(s, t))],
                        None => Vec::new(),
                    }
                };
                table.push(v);
            }
        }
        let mut d_cols = Vec::with_capacity(n);
        for &(s, mu) in &basis {
            let mut col = Vec::new();
            for k in 0..m {
                if s >> k & 1 == 0 {
                    continue;
                }
                let before = (s & ((1 << k) - 1)).count_ones() as i64;
                if let Some(idx) = ring
                    .mul(mu, ring.linear(targets[k]))
                    .and_then(|p| get(s & !(1 << k), p))
                {
                    col = sv_axpy(&col, &sign(before), &vec![(idx, int(1))]);
                }
            }
            d_cols.push(col);
        }
        let label = |s: usize, mu: usize| {
            let mut parts = Vec::new();
            if mu != 0 {
                parts.push(ring.monomial_label(mu));
            }
            parts.extend((0..m).filter(|k| s >> k & 1 == 1).map(|k| odd[k].clone()));
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join(" ")
            }
        };
        let unit = vec![(get(0, 0).expect("unit present"), int(1))];
        let algebra = DgAlgebra::new_unchecked(
            format!("Kos({})", odd.join(",")),
            basis.iter().map(|&(s, mu)| label(s, mu)).collect(),
            basis.iter().map(|&(s, _)| -(s.count_ones() as i32)).collect(),
            basis
                .iter()
                .map(|&(s, mu)| s.count_ones() as usize + ring.degree(mu))
                .collect(),
            table,
            unit,
            Matrix::from_sparse_columns(n, &d_cols),
        );
        KoszulCdga {
            ring,
            targets,
            cap,
            basis,
            index,
            algebra,
        }
    }

    pub fn get(&self, s: usize, mu: usize) -> Option<usize> {
        self.index.get(&(s, mu)).copied()
    }

    /// The odd generator `e_k`.
    pub fn odd(&self, k: usize) -> usize {
        self.get(1 << k, 0).expect("cap >= 1")
    }

    /// The even generator `x_j`.
    pub fn even(&self, j: usize) -> usize {
        self.get(0, self.ring.linear(j)).expect("cap >= 1")
    }
}
