use std::collections::BTreeMap;

use num_traits::One;

use super::echelon::{rank_kernel_image, AdaptedBasis, Echelon};
use super::matrix::{Matrix, SparseVec};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Finite graded vector space with labelled bases per degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSpace {
    components: BTreeMap<i32, Vec<String>>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a component. Labels must be unique within the degree.
    pub fn with_component(mut self, degree: i32, labels: Vec<String>) -> Self {
        self.set_component(degree, labels);
        self
    }

    pub fn set_component(&mut self, degree: i32, labels: Vec<String>) {
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            assert!(seen.insert(l), "duplicate basis label {l:?} in degree {degree}");
        }
        if labels.is_empty() {
            self.components.remove(&degree);
        } else {
            self.components.insert(degree, labels);
        }
    }

    /// Unlabelled component of the given dimension.
    pub fn set_dim(&mut self, degree: i32, dim: usize) {
        self.set_component(degree, (0..dim).map(|i| format!("v{degree}_{i}")).collect());
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.components.get(&degree).map(|l| l.len()).unwrap_or(0)
    }

    pub fn labels(&self, degree: i32) -> &[String] {
        self.components.get(&degree).map(|l| l.as_slice()).unwrap_or(&[])
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.keys().copied()
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(|l| l.len()).sum()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.components.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.components.keys().next_back().copied()
    }
}

/// Bounded cochain complex `d^i : V^i -> V^{i+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    spaces: GradedSpace,
    differentials: BTreeMap<i32, Matrix>,
}

/// Cohomology in one degree.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i32,
    pub dim: usize,
    /// Columns are cocycles whose classes form a basis of `H^i`.
    pub cocycle_reps: Matrix,
    /// `dim x dim V^i`; on cocycles it gives class coordinates and it kills coboundaries.
    pub projection: Matrix,
    kernel_dim: usize,
    image_dim: usize,
}

impl Cohomology {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn image_dim(&self) -> usize {
        self.image_dim
    }
}

impl CochainComplex {
    /// Checks shapes and `d^{i+1} d^i = 0` exactly.
    pub fn new(spaces: GradedSpace, differentials: BTreeMap<i32, Matrix>) -> Result<Self> {
        let c = CochainComplex { spaces, differentials };
        for (&i, d) in &c.differentials {
            if d.nrows() != c.spaces.dim(i + 1) || d.ncols() != c.spaces.dim(i) {
                return Err(Error::ShapeMismatch {
                    what: format!(
                        "d^{i} is {}x{}, expected {}x{}",
                        d.nrows(),
                        d.ncols(),
                        c.spaces.dim(i + 1),
                        c.spaces.dim(i)
                    ),
                });
            }
        }
        for (&i, d) in &c.differentials {
            if let Some(next) = c.differentials.get(&(i + 1)) {
                if !next.mul(d).is_zero() {
                    return Err(Error::ComplexInvalid { degree: i });
                }
            }
        }
        Ok(c)
    }

    /// Builds a complex from a flat basis with one degree per basis vector and a
    /// single square differential matrix of degree +1.
    pub fn from_flat(degrees: &[i32], d: &Matrix) -> Result<(Self, FlatIndex)> {
        let index = FlatIndex::new(degrees);
        let mut spaces = GradedSpace::new();
        for (&deg, idx) in &index.by_degree {
            spaces.set_dim(deg, idx.len());
        }
        let mut diffs = BTreeMap::new();
        for (&deg, src) in &index.by_degree {
            let Some(dst) = index.by_degree.get(&(deg + 1)) else {
                continue;
            };
            diffs.insert(deg, d.select_rows(dst).select_columns(src));
        }
        // reject components of d that do not raise degree by exactly one
        for (i, row) in (0..d.nrows()).map(|i| (i, d.row(i))) {
            for (j, _) in row {
                if degrees[i] != degrees[*j] + 1 {
                    return Err(Error::ShapeMismatch {
                        what: format!("differential entry ({i},{j}) does not have degree +1"),
                    });
                }
            }
        }
        Ok((CochainComplex::new(spaces, diffs)?, index))
    }

    pub fn spaces(&self) -> &GradedSpace {
        &self.spaces
    }

    pub fn dim(&self, i: i32) -> usize {
        self.spaces.dim(i)
    }

    /// `d^i`, the zero map when absent.
    pub fn differential(&self, i: i32) -> Matrix {
        self.differentials
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(i + 1), self.dim(i)))
    }

    pub fn cohomology(&self, i: i32) -> Result<Cohomology> {
        let n = self.dim(i);
        let d_out = self.differential(i);
        let d_in = self.differential(i - 1);
        if self.differentials.contains_key(&(i - 1))
            && self.differentials.contains_key(&i)
            && !d_out.mul(&d_in).is_zero()
        {
            return Err(Error::ComplexInvalid { degree: i - 1 });
        }
        let ker = rank_kernel_image(&d_out).kernel;
        let im = rank_kernel_image(&d_in).image;
        let ker_cols = ker.sparse_columns();
        let im_cols = im.sparse_columns();
        let reps = AdaptedBasis::new(n, &im_cols, &ker_cols);
        let h = reps.extra.len();
        // im, then reps, then unit vectors: a basis of V^i adapted to the flag
        let mut ech = Echelon::new(n);
        for v in im_cols.iter().chain(reps.extra.iter()) {
            ech.insert(v);
        }
        for k in 0..n {
            let e = vec![(k, Rational::one())];
            if !ech.contains(&e) {
                ech.insert(&e);
            }
        }
        let nim = im_cols.len();
        let proj_cols: Vec<SparseVec> = (0..n)
            .map(|k| {
                ech.solve(&vec![(k, Rational::one())])
                    .expect("completed basis spans V^i")
                    .into_iter()
                    .filter(|(j, _)| *j >= nim && *j < nim + h)
                    .map(|(j, c)| (j - nim, c))
                    .collect()
            })
            .collect();
        Ok(Cohomology {
            degree: i,
            dim: h,
            cocycle_reps: Matrix::from_sparse_columns(n, &reps.extra),
            projection: Matrix::from_sparse_columns(h, &proj_cols),
            kernel_dim: ker_cols.len(),
            image_dim: im_cols.len(),
        })
    }

    pub fn cohomology_dims(&self) -> Result<BTreeMap<i32, usize>> {
        let mut out = BTreeMap::new();
        let (Some(lo), Some(hi)) = (self.spaces.min_degree(), self.spaces.max_degree()) else {
            return Ok(out);
        };
        for i in lo..=hi {
            out.insert(i, self.cohomology(i)?.dim);
        }
        Ok(out)
    }
}

/// Map between a flat basis and per-degree positions.
#[derive(Clone, Debug)]
pub struct FlatIndex {
    pub by_degree: BTreeMap<i32, Vec<usize>>,
    /// flat index -> (degree, position within degree)
    pub position: Vec<(i32, usize)>,
}

impl FlatIndex {
    pub fn new(degrees: &[i32]) -> Self {
        let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        let mut position = Vec::with_capacity(degrees.len());
        for (k, &d) in degrees.iter().enumerate() {
            let v = by_degree.entry(d).or_default();
            position.push((d, v.len()));
            v.push(k);
        }
        FlatIndex { by_degree, position }
    }

    pub fn indices(&self, degree: i32) -> &[usize] {
        self.by_degree.get(&degree).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    #[test]
    fn single_q_in_degree_zero() {
        let spaces = GradedSpace::new().with_component(0, vec!["e".into()]);
        let c = CochainComplex::new(spaces, BTreeMap::new()).unwrap();
        assert_eq!(c.cohomology(0).unwrap().dim, 1);
        assert_eq!(c.cohomology(1).unwrap().dim, 0);
        assert_eq!(c.cohomology(-1).unwrap().dim, 0);
    }

    #[test]
    fn identity_two_term_is_acyclic() {
        let spaces = GradedSpace::new()
            .with_component(0, vec!["a".into()])
            .with_component(1, vec!["b".into()]);
        let mut d = BTreeMap::new();
        d.insert(0, Matrix::identity(1));
        let c = CochainComplex::new(spaces, d).unwrap();
        assert_eq!(c.cohomology(0).unwrap().dim, 0);
        assert_eq!(c.cohomology(1).unwrap().dim, 0);
    }

    #[test]
    fn d_squared_nonzero_is_rejected() {
        let spaces = GradedSpace::new()
            .with_component(0, vec!["a".into()])
            .with_component(1, vec!["b".into()])
            .with_component(2, vec!["c".into()]);
        let mut d = BTreeMap::new();
        d.insert(0, Matrix::identity(1));
        d.insert(1, Matrix::identity(1));
        assert!(matches!(
            CochainComplex::new(spaces, d),
            Err(Error::ComplexInvalid { degree: 0 })
        ));
    }

    #[test]
    fn projection_kills_coboundaries() {
        // Q --(1,1)--> Q^2 with zero d^1: H^1 = 1
        let spaces = GradedSpace::new()
            .with_component(0, vec!["a".into()])
            .with_component(1, vec!["b".into(), "c".into()]);
        let mut d = BTreeMap::new();
        d.insert(0, Matrix::from_i64(&[vec![1], vec![1]]));
        let c = CochainComplex::new(spaces, d).unwrap();
        let h = c.cohomology(1).unwrap();
        assert_eq!(h.dim, 1);
        assert!(h.projection.mul(&c.differential(0)).is_zero());
        assert_eq!(h.projection.mul(&h.cocycle_reps), Matrix::identity(1));
        assert_eq!(h.projection.mul_vec(&[int(1), int(0)]).len(), 1);
    }
}
