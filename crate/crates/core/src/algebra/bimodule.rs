use super::{basis_vector, AssocAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{one, quotient_by_span, rank_kernel_image, sv_axpy, Echelon, Matrix, Quotient, Solver, SparseVec};

/// Finite-dimensional bimodule: left `A`-action and right `B`-action given by
/// one matrix per basis element of the acting algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    left_alg: AssocAlgebra,
    right_alg: AssocAlgebra,
    labels: Vec<String>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
}

impl Bimodule {
    pub fn new(
        left_alg: AssocAlgebra,
        right_alg: AssocAlgebra,
        labels: Vec<String>,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(left_alg, right_alg, labels, left, right);
        match m.check() {
            None => Ok(m),
            Some(what) => Err(Error::BimoduleMismatch { what }),
        }
    }

    pub fn new_unchecked(
        left_alg: AssocAlgebra,
        right_alg: AssocAlgebra,
        labels: Vec<String>,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
    ) -> Self {
        Bimodule {
            left_alg,
            right_alg,
            labels,
            left,
            right,
        }
    }

    /// First violated bimodule axiom, if any.
    pub fn check(&self) -> Option<String> {
        let n = self.dim();
        let (da, db) = (self.left_alg.dim(), self.right_alg.dim());
        if self.left.len() != da || self.right.len() != db {
            return Some("one action matrix per basis element is required".into());
        }
        if self
            .left
            .iter()
            .chain(self.right.iter())
            .any(|m| m.nrows() != n || m.ncols() != n)
        {
            return Some(format!("action matrices must be {n}x{n}"));
        }
        let id = Matrix::identity(n);
        if self.left_elem(self.left_alg.unit()) != id {
            return Some("left unit does not act as identity".into());
        }
        if self.right_elem(self.right_alg.unit()) != id {
            return Some("right unit does not act as identity".into());
        }
        for i in 0..da {
            for j in 0..da {
                if self.left[i].mul(&self.left[j]) != self.left_elem(self.left_alg.product(i, j)) {
                    return Some(format!("left action not multiplicative on ({i}, {j})"));
                }
            }
        }
        for i in 0..db {
            for j in 0..db {
                // m (e_i e_j) = (m e_i) e_j
                if self.right[j].mul(&self.right[i]) != self.right_elem(self.right_alg.product(i, j)) {
                    return Some(format!("right action not multiplicative on ({i}, {j})"));
                }
            }
        }
        for i in 0..da {
            for j in 0..db {
                if self.left[i].mul(&self.right[j]) != self.right[j].mul(&self.left[i]) {
                    return Some(format!("left {i} and right {j} actions do not commute"));
                }
            }
        }
        None
    }

    /// `a` as a bimodule over itself.
    pub fn regular(a: &AssocAlgebra) -> Self {
        let d = a.dim();
        let left = (0..d).map(|i| a.left_mult(&basis_vector(i))).collect();
        let right = (0..d).map(|i| a.right_mult(&basis_vector(i))).collect();
        Self::new_unchecked(a.clone(), a.clone(), a.labels().to_vec(), left, right)
    }

    /// `a ⊗ a` with `x (u ⊗ v) y = x u ⊗ v y`; index `i * d + j`.
    pub fn outer_tensor(a: &AssocAlgebra) -> Self {
        let d = a.dim();
        let id = Matrix::identity(d);
        let left = (0..d).map(|i| a.left_mult(&basis_vector(i)).kron(&id)).collect();
        let right = (0..d).map(|i| id.kron(&a.right_mult(&basis_vector(i)))).collect();
        let mut labels = Vec::with_capacity(d * d);
        for u in a.labels() {
            for v in a.labels() {
                labels.push(format!("{u}⊗{v}"));
            }
        }
        Self::new_unchecked(a.clone(), a.clone(), labels, left, right)
    }

    /// `M ⊗ V` for a vector space `V` with the given basis labels; the copy of
    /// `M` indexed by `j` occupies indices `j * dim M ..`.
    pub fn with_multiplicity(&self, space_labels: &[String]) -> Self {
        let n = space_labels.len();
        let id = Matrix::identity(n);
        let mut labels = Vec::with_capacity(n * self.dim());
        for t in space_labels {
            for l in &self.labels {
                labels.push(format!("{l}⊗{t}"));
            }
        }
        Self::new_unchecked(
            self.left_alg.clone(),
            self.right_alg.clone(),
            labels,
            self.left.iter().map(|m| id.kron(m)).collect(),
            self.right.iter().map(|m| id.kron(m)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn left_algebra(&self) -> &AssocAlgebra {
        &self.left_alg
    }

    pub fn right_algebra(&self) -> &AssocAlgebra {
        &self.right_alg
    }

    /// Matrix of `v -> e_i v`.
    pub fn left_action(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    /// Matrix of `v -> v e_i`.
    pub fn right_action(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn left_elem(&self, x: &SparseVec) -> Matrix {
        combine(self.dim(), &self.left, x)
    }

    pub fn right_elem(&self, x: &SparseVec) -> Matrix {
        combine(self.dim(), &self.right, x)
    }

    pub fn act_left(&self, x: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (i, c) in x {
            out = sv_axpy(&out, c, &self.left[*i].mul_sparse(v));
        }
        out
    }

    pub fn act_right(&self, v: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (i, c) in y {
            out = sv_axpy(&out, c, &self.right[*i].mul_sparse(v));
        }
        out
    }

    /// Whether `f : self -> other` commutes with both actions.
    pub fn is_bimodule_map(&self, f: &Matrix, other: &Bimodule) -> bool {
        if f.ncols() != self.dim() || f.nrows() != other.dim() {
            return false;
        }
        if self.left.len() != other.left.len() || self.right.len() != other.right.len() {
            return false;
        }
        self.left.iter().zip(&other.left).all(|(l, lo)| f.mul(l) == lo.mul(f))
            && self.right.iter().zip(&other.right).all(|(r, ro)| f.mul(r) == ro.mul(f))
    }

    /// The sub-bimodule generated by `gens`.
    pub fn generated(&self, gens: &[SparseVec]) -> SubBimodule {
        let n = self.dim();
        let mut ech = Echelon::new(n);
        let mut basis: Vec<SparseVec> = Vec::new();
        let mut queue: Vec<SparseVec> = gens.to_vec();
        while let Some(v) = queue.pop() {
            if ech.contains(&v) {
                continue;
            }
            ech.insert(&v);
            for l in &self.left {
                queue.push(l.mul_sparse(&v));
            }
            for r in &self.right {
                queue.push(r.mul_sparse(&v));
            }
            basis.push(v);
        }
        SubBimodule {
            parent: self.clone(),
            inclusion: Matrix::from_sparse_columns(n, &basis),
        }
    }

    /// Bimodule with the same space and actions pulled back along algebra maps
    /// `f : A' -> A` and `g : B' -> B` given as matrices.
    pub fn restrict(&self, left_alg: &AssocAlgebra, f: &Matrix, right_alg: &AssocAlgebra, g: &Matrix) -> Self {
        let left = f.sparse_columns().iter().map(|c| self.left_elem(c)).collect();
        let right = g.sparse_columns().iter().map(|c| self.right_elem(c)).collect();
        Self::new_unchecked(left_alg.clone(), right_alg.clone(), self.labels.clone(), left, right)
    }
}

fn combine(n: usize, mats: &[Matrix], x: &SparseVec) -> Matrix {
    let mut out = Matrix::zeros(n, n);
    for (i, c) in x {
        out = out.axpy(c, &mats[*i]);
    }
    out
}

/// Subspace of a bimodule closed under both actions.
#[derive(Clone, Debug)]
pub struct SubBimodule {
    pub parent: Bimodule,
    /// Columns form a basis of the subspace.
    pub inclusion: Matrix,
}

impl SubBimodule {
    /// Checks independence and closure on basis elements.
    pub fn new(parent: Bimodule, inclusion: Matrix) -> Result<Self> {
        let ki = rank_kernel_image(&inclusion);
        if ki.rank != inclusion.ncols() {
            return Err(Error::InvalidBasis {
                column: ki.kernel.ncols(),
            });
        }
        let solver = Solver::new(&inclusion);
        for (c, v) in inclusion.sparse_columns().iter().enumerate() {
            for (i, l) in parent.left.iter().enumerate() {
                if !solver.in_image(&l.mul_sparse(v)) {
                    return Err(Error::BimoduleMismatch {
                        what: format!("left action of {i} moves basis vector {c} out of the subspace"),
                    });
                }
            }
            for (i, r) in parent.right.iter().enumerate() {
                if !solver.in_image(&r.mul_sparse(v)) {
                    return Err(Error::BimoduleMismatch {
                        what: format!("right action of {i} moves basis vector {c} out of the subspace"),
                    });
                }
            }
        }
        Ok(SubBimodule { parent, inclusion })
    }

    pub fn dim(&self) -> usize {
        self.inclusion.ncols()
    }

    /// Induced bimodule on the subspace, in the basis of inclusion columns.
    pub fn to_bimodule(&self) -> Bimodule {
        let solver = Solver::new(&self.inclusion);
        let cols = self.inclusion.sparse_columns();
        let k = cols.len();
        let restrict = |m: &Matrix| {
            let images: Vec<SparseVec> = cols
                .iter()
                .map(|v| solver.solve(&m.mul_sparse(v)).expect("closed subspace"))
                .collect();
            Matrix::from_sparse_columns(k, &images)
        };
        let labels = (0..k).map(|i| format!("s{i}")).collect();
        Bimodule::new_unchecked(
            self.parent.left_alg.clone(),
            self.parent.right_alg.clone(),
            labels,
            self.parent.left.iter().map(restrict).collect(),
            self.parent.right.iter().map(restrict).collect(),
        )
    }

    /// `parent / self` with its projection.
    pub fn quotient(&self) -> (Bimodule, Quotient) {
        quotient_bimodule(&self.parent, &self.inclusion.sparse_columns())
    }
}

/// `m / span(spanning)`, assuming the span is a sub-bimodule.
pub(crate) fn quotient_bimodule(m: &Bimodule, spanning: &[SparseVec]) -> (Bimodule, Quotient) {
    let q = quotient_by_span(m.dim(), spanning);
    let induced = |a: &Matrix| q.projection.mul(a).mul(&q.section);
    let labels = (0..q.dim).map(|i| format!("q{i}")).collect();
    let b = Bimodule::new_unchecked(
        m.left_alg.clone(),
        m.right_alg.clone(),
        labels,
        m.left.iter().map(induced).collect(),
        m.right.iter().map(induced).collect(),
    );
    (b, q)
}

/// `I_a = ker(a ⊗ a -> a)` inside the outer tensor bimodule.
pub fn multiplication_kernel(a: &AssocAlgebra) -> SubBimodule {
    let ki = rank_kernel_image(&a.mult_matrix());
    SubBimodule {
        parent: Bimodule::outer_tensor(a),
        inclusion: ki.kernel,
    }
}

/// Result of [`right_module_freeness_check`].
#[derive(Clone, Debug)]
pub struct Freeness {
    pub is_free: bool,
    pub rank: usize,
    /// Columns `b ⊗ 1 - 1 ⊗ b` for `b` running over a complement of the unit.
    pub generators: Matrix,
}

/// Confirms that `I_a` is free as a right module on `{b ⊗ 1 - 1 ⊗ b}`.
pub fn right_module_freeness_check(i_a: &SubBimodule) -> Freeness {
    let m = &i_a.parent;
    let a = m.left_algebra();
    let d = a.dim();
    let q = quotient_by_span(d, &[a.unit().clone()]);
    let unit_tensor = |b: &SparseVec, left: bool| -> SparseVec {
        let mut out = Vec::new();
        for (k, c) in b {
            for (u, cu) in a.unit() {
                let idx = if left { k * d + u } else { u * d + k };
                out = sv_axpy(&out, &(c * cu), &basis_vector(idx));
            }
        }
        out
    };
    let gens: Vec<SparseVec> = q
        .section
        .sparse_columns()
        .iter()
        .map(|b| sv_axpy(&unit_tensor(b, true), &-one(), &unit_tensor(b, false)))
        .collect();
    let inside = Solver::new(&i_a.inclusion);
    let all_inside = gens.iter().all(|g| inside.in_image(g));
    let mut ech = Echelon::new(m.dim());
    let mut independent = true;
    for g in &gens {
        for y in 0..d {
            let v = m.act_right(g, &basis_vector(y));
            if ech.insert(&v).is_some() {
                independent = false;
            }
        }
    }
    let spans = ech.rank() == i_a.dim();
    Freeness {
        is_free: all_inside && independent && spans,
        rank: gens.len(),
        generators: Matrix::from_sparse_columns(m.dim(), &gens),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enveloping, preset_catalog};
    use crate::linalg::int;

    #[test]
    fn kernel_dimensions() {
        for (name, p, dim) in [
            ("field", vec![], 0),
            ("dual_numbers", vec![], 2),
            ("matrix", vec![2], 12),
        ] {
            let a = preset_catalog(name, &p).unwrap();
            let i = multiplication_kernel(&a);
            assert_eq!(i.dim(), dim, "{name}");
            assert!(SubBimodule::new(i.parent.clone(), i.inclusion.clone()).is_ok());
        }
    }

    #[test]
    fn dual_numbers_kernel_contains_difference() {
        let a = preset_catalog("dual_numbers", &[]).unwrap();
        let i = multiplication_kernel(&a);
        // x⊗1 - 1⊗x at indices 2 and 1
        let g = vec![(1, int(-1)), (2, int(1))];
        assert!(Solver::new(&i.inclusion).in_image(&g));
    }

    #[test]
    fn freeness() {
        for (name, p, rank) in [
            ("dual_numbers", vec![], 1),
            ("field", vec![], 0),
            ("truncated_poly", vec![3], 2),
        ] {
            let a = preset_catalog(name, &p).unwrap();
            let f = right_module_freeness_check(&multiplication_kernel(&a));
            assert!(f.is_free, "{name}");
            assert_eq!(f.rank, rank);
        }
    }

    #[test]
    fn regular_and_outer_are_bimodules() {
        let a = preset_catalog("matrix", &[2]).unwrap();
        assert!(Bimodule::regular(&a).check().is_none());
        assert!(Bimodule::outer_tensor(&a).check().is_none());
        let labels: Vec<String> = vec!["t1".into(), "t2".into()];
        assert!(Bimodule::regular(&a).with_multiplicity(&labels).check().is_none());
    }

    #[test]
    fn enveloping_acts_on_algebra() {
        let a = preset_catalog("exterior", &[2]).unwrap();
        let e = enveloping(&a);
        let d = a.dim();
        let field = preset_catalog("field", &[]).unwrap();
        let mut left = Vec::new();
        for i in 0..d {
            for j in 0..d {
                left.push(a.left_mult(&basis_vector(i)).mul(&a.right_mult(&basis_vector(j))));
            }
        }
        let m = Bimodule::new(e, field, a.labels().to_vec(), left, vec![Matrix::identity(d)]);
        assert!(m.is_ok());
    }

    #[test]
    fn multiplication_is_a_bimodule_map() {
        let a = preset_catalog("truncated_poly", &[3]).unwrap();
        assert!(Bimodule::outer_tensor(&a).is_bimodule_map(&a.mult_matrix(), &Bimodule::regular(&a)));
    }
}
