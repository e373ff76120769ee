use std::collections::BTreeMap;

use crate::algebra::presets::wedge_sign;
use crate::algebra::AssocAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{int, sign, CochainComplex, FlatIndex, Matrix, Rational, SparseVec};

/// `Λ = ∧(T*[1])` with generators `θ_j` in degree -1 and zero differential.
///
/// Basis elements are subsets of `{0..n}` encoded as bitmasks, `θ_S = θ_{j1} ... θ_{jk}`
/// with `j1 < ... < jk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorDg {
    n: usize,
}

impl ExteriorDg {
    pub fn new(n: usize) -> Self {
        ExteriorDg { n }
    }

    pub fn nparams(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn degree(&self, s: usize) -> i32 {
        -(s.count_ones() as i32)
    }

    /// `θ_S θ_T = ± θ_{S ∪ T}`, or `None` when `S ∩ T ≠ ∅`.
    pub fn mul(&self, s: usize, t: usize) -> Option<(usize, Rational)> {
        if s & t != 0 {
            None
        } else {
            Some((s | t, wedge_sign(s, t)))
        }
    }

    pub fn label(&self, s: usize) -> String {
        if s == 0 {
            return "1".into();
        }
        (0..self.n)
            .filter(|j| s >> j & 1 == 1)
            .map(|j| format!("θ{}", j + 1))
            .collect::<Vec<_>>()
            .join("")
    }

    /// The underlying ungraded algebra.
    pub fn as_algebra(&self) -> AssocAlgebra {
        let d = self.dim();
        let mut table = Vec::with_capacity(d * d);
        for s in 0..d {
            for t in 0..d {
                table.push(self.mul(s, t).map(|(u, c)| vec![(u, c)]).unwrap_or_default());
            }
        }
        let labels = (0..d).map(|s| self.label(s)).collect();
        AssocAlgebra::new_unchecked(format!("Λ{}", self.n), labels, table, vec![(0, int(1))])
    }

    /// Left multiplication by `θ_j` on `Λ`.
    fn theta_matrix(&self, j: usize) -> Matrix {
        let d = self.dim();
        let g = 1 << j;
        Matrix::from_triplets(d, d, (0..d).filter_map(|s| self.mul(g, s).map(|(u, c)| (u, s, c))))
    }
}

/// Finite-dimensional dg-module over `Λ`: graded basis, differential of
/// degree +1 and the actions of the generators `θ_j` (degree -1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaModule {
    n: usize,
    labels: Vec<String>,
    degrees: Vec<i32>,
    d: Matrix,
    theta: Vec<Matrix>,
}

impl LambdaModule {
    /// Checks degrees, `d^2 = 0`, `θ_j θ_k = -θ_k θ_j` and `d θ_j = -θ_j d`.
    pub fn new(labels: Vec<String>, degrees: Vec<i32>, d: Matrix, theta: Vec<Matrix>) -> Result<Self> {
        let m = LambdaModule {
            n: theta.len(),
            labels,
            degrees,
            d,
            theta,
        };
        match m.defect() {
            None => Ok(m),
            Some(what) => Err(Error::Invalid { what }),
        }
    }

    fn defect(&self) -> Option<String> {
        let dim = self.degrees.len();
        if self.labels.len() != dim || self.d.nrows() != dim || self.d.ncols() != dim {
            return Some("module shapes disagree".into());
        }
        if !shifts_degree(&self.d, &self.degrees, &self.degrees, 1) {
            return Some("differential does not have degree +1".into());
        }
        if !self.d.mul(&self.d).is_zero() {
            return Some("d^2 != 0".into());
        }
        for (j, tj) in self.theta.iter().enumerate() {
            if tj.nrows() != dim || tj.ncols() != dim || !shifts_degree(tj, &self.degrees, &self.degrees, -1) {
                return Some(format!("θ{} does not have degree -1", j + 1));
            }
            if !self.d.mul(tj).add(&tj.mul(&self.d)).is_zero() {
                return Some(format!("d θ{} != -θ{} d", j + 1, j + 1));
            }
            for (k, tk) in self.theta.iter().enumerate().skip(j) {
                if !tj.mul(tk).add(&tk.mul(tj)).is_zero() {
                    return Some(format!("θ{} and θ{} do not anticommute", j + 1, k + 1));
                }
            }
        }
        None
    }

    pub fn nparams(&self) -> usize {
        self.n
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

    pub fn theta(&self, j: usize) -> &Matrix {
        &self.theta[j]
    }

    /// Action of the basis element `θ_S` of `Λ`.
    pub fn lambda_action(&self, s: usize) -> Matrix {
        let mut m = Matrix::identity(self.dim());
        for j in (0..self.n).rev() {
            if s >> j & 1 == 1 {
                m = self.theta[j].mul(&m);
            }
        }
        m
    }

    pub fn complex(&self) -> Result<(CochainComplex, FlatIndex)> {
        CochainComplex::from_flat(&self.degrees, &self.d)
    }

    /// `dim H^i` for every degree that occurs.
    pub fn cohomology_dims(&self) -> Result<BTreeMap<i32, usize>> {
        let (c, idx) = self.complex()?;
        idx.by_degree.keys().map(|&i| Ok((i, c.cohomology(i)?.dim))).collect()
    }

    /// Whether `f : self -> other` has the given degree, is `Λ`-linear in the
    /// graded sense and commutes with differentials up to the Koszul sign.
    pub fn is_chain_map(&self, f: &Matrix, other: &LambdaModule, degree: i32) -> bool {
        if f.ncols() != self.dim() || f.nrows() != other.dim() || self.n != other.n {
            return false;
        }
        if !shifts_degree(f, &self.degrees, &other.degrees, degree) {
            return false;
        }
        let s = sign(degree as i64);
        other.d.mul(f) == f.mul(&self.d).scale(&s)
            && (0..self.n).all(|j| other.theta[j].mul(f) == f.mul(&self.theta[j]).scale(&s))
    }

    /// `Λ` as a module over itself.
    pub fn free(n: usize) -> Self {
        let l = ExteriorDg::new(n);
        let dim = l.dim();
        LambdaModule {
            n,
            labels: (0..dim).map(|s| l.label(s)).collect(),
            degrees: (0..dim).map(|s| l.degree(s)).collect(),
            d: Matrix::zeros(dim, dim),
            theta: (0..n).map(|j| l.theta_matrix(j)).collect(),
        }
    }

    /// `k_∧`: one dimension in degree 0 with trivial action.
    pub fn residue_field(n: usize) -> Self {
        LambdaModule {
            n,
            labels: vec!["1".into()],
            degrees: vec![0],
            d: Matrix::zeros(1, 1),
            theta: vec![Matrix::zeros(1, 1); n],
        }
    }

    /// `T*[1]`: the generators in degree -1 with trivial action.
    pub fn shifted_dual(n: usize) -> Self {
        LambdaModule {
            n,
            labels: (0..n).map(|j| format!("θ{}", j + 1)).collect(),
            degrees: vec![-1; n],
            d: Matrix::zeros(n, n),
            theta: vec![Matrix::zeros(n, n); n],
        }
    }

    /// `Λ / Λ_{<-1}` with basis `1, θ_1, .., θ_n`.
    pub fn truncated_quotient(n: usize) -> Self {
        let dim = n + 1;
        let theta = (0..n)
            .map(|j| Matrix::from_triplets(dim, dim, [(j + 1, 0, int(1))]))
            .collect();
        let mut labels = vec!["1".to_string()];
        labels.extend((0..n).map(|j| format!("θ{}", j + 1)));
        let mut degrees = vec![0];
        degrees.extend(std::iter::repeat_n(-1, n));
        LambdaModule {
            n,
            labels,
            degrees,
            d: Matrix::zeros(dim, dim),
            theta,
        }
    }
}

/// Whether every nonzero entry of `f` maps degree `k` to degree `k + shift`.
pub(crate) fn shifts_degree(f: &Matrix, src: &[i32], dst: &[i32], shift: i32) -> bool {
    (0..f.nrows()).all(|i| f.row(i).iter().all(|(j, _)| dst[i] == src[*j] + shift))
}

/// `Σ_S c_S θ_S` acting on a module, for an element of `Λ` given in the mask basis.
pub fn lambda_element_action(m: &LambdaModule, x: &SparseVec) -> Matrix {
    x.iter().fold(Matrix::zeros(m.dim(), m.dim()), |acc, (s, c)| {
        acc.add(&m.lambda_action(*s).scale(c))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_modules_are_valid() {
        for n in 0..=3 {
            for m in [
                LambdaModule::free(n),
                LambdaModule::residue_field(n),
                LambdaModule::shifted_dual(n),
                LambdaModule::truncated_quotient(n),
            ] {
                assert!(m.defect().is_none(), "{n}: {:?}", m.defect());
            }
        }
    }

    #[test]
    fn lambda_is_graded_commutative() {
        let l = ExteriorDg::new(3);
        assert!(l.as_algebra().validate().is_valid());
        for s in 0..8 {
            for t in 0..8 {
                if let (Some((u, c1)), Some((_, c2))) = (l.mul(s, t), l.mul(t, s)) {
                    let expected = sign((l.degree(s) * l.degree(t)) as i64);
                    assert_eq!(c1, c2 * expected, "{s} {t} {u}");
                }
            }
        }
    }

    #[test]
    fn lambda_action_matches_product() {
        let m = LambdaModule::free(3);
        let l = ExteriorDg::new(3);
        for s in 0..8 {
            let a = m.lambda_action(s);
            for t in 0..8 {
                let expected: SparseVec = l.mul(s, t).map(|(u, c)| vec![(u, c)]).unwrap_or_default();
                assert_eq!(a.mul_sparse(&vec![(t, int(1))]), expected);
            }
        }
    }
}
