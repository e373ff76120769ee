//! Finite-dimensional unital associative algebras given by structure constants.

mod bimodule;
pub(crate) mod presets;

pub use bimodule::{multiplication_kernel, right_module_freeness_check, Bimodule, Freeness, SubBimodule};
pub use presets::{preset_catalog, PRESET_NAMES};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    quotient_space, rank_kernel_image, sv_axpy, sv_collect, sv_scale, Matrix, Quotient, Rational, Solver, SparseVec,
};

/// Unital associative algebra over the rationals: `e_i e_j = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocAlgebra {
    name: String,
    labels: Vec<String>,
    /// `table[i * dim + j]` is the product `e_i e_j`.
    table: Vec<SparseVec>,
    unit: SparseVec,
}

/// Violations found by [`AssocAlgebra::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Triples `(i, j, k)` with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub associativity: Vec<(usize, usize, usize)>,
    /// Basis indices `i` with `1 e_i != e_i` or `e_i 1 != e_i`.
    pub unit: Vec<usize>,
    pub shape: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.associativity.is_empty() && self.unit.is_empty() && self.shape.is_empty()
    }

    pub fn first_witness(&self) -> Option<String> {
        if let Some(s) = self.shape.first() {
            return Some(s.clone());
        }
        if let Some((i, j, k)) = self.associativity.first() {
            return Some(format!("associativity fails on basis triple ({i}, {j}, {k})"));
        }
        self.unit
            .first()
            .map(|i| format!("unit does not act as identity on basis element {i}"))
    }
}

impl AssocAlgebra {
    /// Validated constructor.
    pub fn new(name: impl Into<String>, labels: Vec<String>, table: Vec<SparseVec>, unit: SparseVec) -> Result<Self> {
        let a = Self::new_unchecked(name, labels, table, unit);
        let report = a.validate();
        match report.first_witness() {
            None => Ok(a),
            Some(what) => Err(Error::NotAnAlgebra { what }),
        }
    }

    /// Builds from `(i, j, k, c)` entries meaning `e_i e_j += c e_k`.
    pub fn from_entries(
        name: impl Into<String>,
        labels: Vec<String>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
        unit: SparseVec,
    ) -> Result<Self> {
        let d = labels.len();
        let mut raw: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); d * d];
        for (i, j, k, c) in entries {
            if i >= d || j >= d || k >= d {
                return Err(Error::NotAnAlgebra {
                    what: format!("structure constant index ({i}, {j}, {k}) out of range for dim {d}"),
                });
            }
            raw[i * d + j].push((k, c));
        }
        let table = raw.into_iter().map(sv_collect).collect();
        Self::new(name, labels, table, unit)
    }

    /// No validation; callers either validate later or construct provably valid tables.
    pub fn new_unchecked(name: impl Into<String>, labels: Vec<String>, table: Vec<SparseVec>, unit: SparseVec) -> Self {
        AssocAlgebra {
            name: name.into(),
            labels,
            table,
            unit,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let mut report = ValidationReport::default();
        if self.table.len() != d * d {
            report.shape.push(format!(
                "structure table has {} entries, expected {}",
                self.table.len(),
                d * d
            ));
            return report;
        }
        let in_range = |v: &SparseVec| v.iter().all(|(k, _)| *k < d);
        if !self.table.iter().all(in_range) || !in_range(&self.unit) {
            report.shape.push("coordinate index out of range".into());
            return report;
        }
        for i in 0..d {
            let e = basis_vector(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                report.unit.push(i);
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = self.product(i, j);
                for k in 0..d {
                    let left = self.mul(ij, &basis_vector(k));
                    let right = self.mul(&basis_vector(i), self.product(j, k));
                    if left != right {
                        report.associativity.push((i, j, k));
                    }
                }
            }
        }
        report
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    /// Index `i` with `e_i = 1`, when the unit is a basis vector.
    pub fn unit_index(&self) -> Option<usize> {
        match self.unit.as_slice() {
            [(i, c)] if c.is_one() => Some(*i),
            _ => None,
        }
    }

    /// `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn table(&self) -> &[SparseVec] {
        &self.table
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (i, xi) in x {
            for (j, yj) in y {
                out = sv_axpy(&out, &(xi * yj), self.product(*i, *j));
            }
        }
        out
    }

    /// Matrix of `y -> x y`.
    pub fn left_mult(&self, x: &SparseVec) -> Matrix {
        let d = self.dim();
        let cols: Vec<SparseVec> = (0..d).map(|j| self.mul(x, &basis_vector(j))).collect();
        Matrix::from_sparse_columns(d, &cols)
    }

    /// Matrix of `y -> y x`.
    pub fn right_mult(&self, x: &SparseVec) -> Matrix {
        let d = self.dim();
        let cols: Vec<SparseVec> = (0..d).map(|j| self.mul(&basis_vector(j), x)).collect();
        Matrix::from_sparse_columns(d, &cols)
    }

    /// `d x d^2` matrix of the multiplication `a ⊗ a -> a`, tensor index `i * d + j`.
    pub fn mult_matrix(&self) -> Matrix {
        Matrix::from_sparse_columns(self.dim(), &self.table)
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.product(i, j) == self.product(j, i)))
    }

    pub fn is_central(&self, z: &SparseVec) -> bool {
        (0..self.dim()).all(|i| {
            let e = basis_vector(i);
            self.mul(z, &e) == self.mul(&e, z)
        })
    }

    /// Same algebra in the basis given by the columns of `p` (old coordinates).
    pub fn change_basis(&self, p: &Matrix, labels: Vec<String>) -> Result<Self> {
        let d = self.dim();
        if p.nrows() != d || p.ncols() != d || labels.len() != d {
            return Err(Error::ShapeMismatch {
                what: "basis change must be square of the algebra dimension".into(),
            });
        }
        if rank_kernel_image(p).rank != d {
            return Err(Error::InvalidBasis {
                column: rank_kernel_image(p).kernel.ncols(),
            });
        }
        let solver = Solver::new(p);
        let cols = p.sparse_columns();
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let prod = self.mul(&cols[i], &cols[j]);
                table.push(solver.solve(&prod).expect("invertible basis change"));
            }
        }
        let unit = solver.solve(&self.unit).expect("invertible basis change");
        Self::new(self.name.clone(), labels, table, unit)
    }

    /// Quotient by a two-sided ideal spanned by the (independent) columns of `ideal`.
    pub fn quotient_by_ideal(&self, ideal: &Matrix) -> Result<(AssocAlgebra, Quotient)> {
        let d = self.dim();
        let solver = Solver::new(ideal);
        for (c, v) in ideal.sparse_columns().iter().enumerate() {
            for i in 0..d {
                let e = basis_vector(i);
                if !solver.in_image(&self.mul(&e, v)) || !solver.in_image(&self.mul(v, &e)) {
                    return Err(Error::NotAnIdeal {
                        what: format!("basis element {i} times ideal generator {c} leaves the span"),
                    });
                }
            }
        }
        let q = quotient_space(d, ideal)?;
        let sec = q.section.sparse_columns();
        let mut table = Vec::with_capacity(q.dim * q.dim);
        for i in 0..q.dim {
            for j in 0..q.dim {
                table.push(q.projection.mul_sparse(&self.mul(&sec[i], &sec[j])));
            }
        }
        let labels = sec
            .iter()
            .map(|v| match v.as_slice() {
                [(k, c)] if c.is_one() => format!("[{}]", self.labels[*k]),
                _ => "[?]".into(),
            })
            .collect();
        let unit = q.projection.mul_sparse(&self.unit);
        let qa = Self::new(format!("{}/J", self.name), labels, table, unit)?;
        Ok((qa, q))
    }

    /// Two-sided ideal generated by the given elements, as a basis matrix.
    pub fn ideal_generated(&self, gens: &[SparseVec]) -> Matrix {
        let d = self.dim();
        let mut span: Vec<SparseVec> = Vec::new();
        let mut ech = crate::linalg::Echelon::new(d);
        for g in gens {
            for i in 0..d {
                for j in 0..d {
                    let v = self.mul(&self.mul(&basis_vector(i), g), &basis_vector(j));
                    if !ech.contains(&v) {
                        ech.insert(&v);
                        span.push(v);
                    }
                }
            }
        }
        Matrix::from_sparse_columns(d, &span)
    }
}

/// Tensor product `a ⊗ b`, basis `(i, k)` at index `i * dim b + k`.
pub fn tensor_algebra(a: &AssocAlgebra, b: &AssocAlgebra) -> AssocAlgebra {
    let (da, db) = (a.dim(), b.dim());
    let mut labels = Vec::with_capacity(da * db);
    for la in a.labels() {
        for lb in b.labels() {
            labels.push(format!("{la}⊗{lb}"));
        }
    }
    let mut table = Vec::with_capacity(da * db * da * db);
    for i in 0..da {
        for k in 0..db {
            for j in 0..da {
                for l in 0..db {
                    table.push(tensor_vec(a.product(i, j), b.product(k, l), db));
                }
            }
        }
    }
    let unit = tensor_vec(a.unit(), b.unit(), db);
    AssocAlgebra::new_unchecked(format!("{}⊗{}", a.name(), b.name()), labels, table, unit)
}

pub fn opposite(a: &AssocAlgebra) -> AssocAlgebra {
    let d = a.dim();
    let mut table = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            table.push(a.product(j, i).clone());
        }
    }
    AssocAlgebra::new_unchecked(format!("{}^op", a.name()), a.labels().to_vec(), table, a.unit().clone())
}

/// `a ⊗ a^op`.
pub fn enveloping(a: &AssocAlgebra) -> AssocAlgebra {
    let e = tensor_algebra(a, &opposite(a));
    let name = format!("{}^e", a.name());
    e.with_name(name)
}

/// `x ⊗ y` in a tensor product whose second factor has dimension `d2`.
pub fn tensor_vec(x: &SparseVec, y: &SparseVec, d2: usize) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for (i, xi) in x {
        for (j, yj) in y {
            out.push((i * d2 + j, xi * yj));
        }
    }
    out
}

pub fn basis_vector(i: usize) -> SparseVec {
    vec![(i, Rational::one())]
}

/// `c * e_i`, or the empty vector when `c` is zero.
pub fn scaled_basis(i: usize, c: Rational) -> SparseVec {
    if c.is_zero() {
        Vec::new()
    } else {
        sv_scale(&basis_vector(i), &c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn ground_field_is_valid() {
        let q = preset_catalog("field", &[]).unwrap();
        assert!(q.validate().is_valid());
        assert_eq!(q.dim(), 1);
    }

    #[test]
    fn wrong_unit_is_reported() {
        // e1 e1 = e0, everything else zero, but e1 claimed as unit
        let a = AssocAlgebra::new_unchecked(
            "bad",
            vec!["e0".into(), "e1".into()],
            vec![vec![], vec![], vec![], vec![(0, int(1))]],
            basis_vector(1),
        );
        let r = a.validate();
        assert!(!r.unit.is_empty());
        assert!(AssocAlgebra::new("bad", a.labels().to_vec(), a.table().to_vec(), basis_vector(1)).is_err());
    }

    #[test]
    fn matrix_algebra_is_valid() {
        let m = preset_catalog("matrix", &[2]).unwrap();
        assert!(m.validate().is_valid());
        assert!(!m.is_commutative());
    }

    #[test]
    fn opposite_and_enveloping() {
        let a = preset_catalog("truncated_poly", &[3]).unwrap();
        assert_eq!(opposite(&a).table(), a.table());
        let q = preset_catalog("field", &[]).unwrap();
        let e = enveloping(&q);
        assert_eq!(e.dim(), 1);
        assert_eq!(e.table(), q.table());
        let m = preset_catalog("matrix", &[2]).unwrap();
        assert_eq!(opposite(&opposite(&m)).table(), m.table());
        assert!(enveloping(&m).validate().is_valid());
    }

    #[test]
    fn tensor_of_dual_numbers() {
        let x = preset_catalog("truncated_poly", &[2]).unwrap();
        let t = tensor_algebra(&x, &x);
        assert!(t.validate().is_valid());
        assert_eq!(t.dim(), 4);
        // (x⊗1)(1⊗y) = x⊗y : indices 2 * 1 -> 3
        assert_eq!(t.product(2, 1), &basis_vector(3));
    }

    #[test]
    fn quotient_by_ideal() {
        let a = preset_catalog("truncated_poly", &[3]).unwrap();
        let j = a.ideal_generated(&[basis_vector(2)]);
        assert_eq!(j.ncols(), 1);
        let (q, _) = a.quotient_by_ideal(&j).unwrap();
        assert_eq!(q.dim(), 2);
        assert_eq!(q.product(1, 1), &Vec::new());
        let not_ideal = Matrix::from_sparse_columns(3, &[basis_vector(1)]);
        assert!(matches!(a.quotient_by_ideal(&not_ideal), Err(Error::NotAnIdeal { .. })));
    }

    #[test]
    fn basis_change_preserves_validity() {
        let a = preset_catalog("exterior", &[2]).unwrap();
        let p = Matrix::from_i64(&[vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![0, 2, 1, 0], vec![3, 0, 1, 1]]);
        let labels = (0..4).map(|i| format!("f{i}")).collect();
        let b = a.change_basis(&p, labels).unwrap();
        assert!(b.validate().is_valid());
        assert_eq!(b.unit(), &vec![(0, int(1)), (1, int(-1)), (2, int(2)), (3, int(-5))]);
    }
}
