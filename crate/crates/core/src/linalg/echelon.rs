use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::matrix::{sv_axpy, sv_scale, Matrix, SparseVec};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Incremental echelon basis of a span of vectors in `Q^dim`.
///
/// Every stored pivot vector has leading entry 1 at its key. Each pivot also
/// remembers the combination of inserted vectors it equals, so membership
/// tests return explicit coefficients.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    inserted: usize,
    pivots: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            inserted: 0,
            pivots: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the current pivots. Returns the residual and the
    /// coefficients `c` with `v = residual + sum_k c_k * input_k`.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut combo: SparseVec = Vec::new();
        loop {
            let Some((lead, coef)) = v.first().cloned() else {
                break;
            };
            match self.pivots.get(&lead) {
                Some((pv, pc)) => {
                    let c = -coef.clone();
                    v = sv_axpy(&v, &c, pv);
                    combo = sv_axpy(&combo, &coef, pc);
                }
                None => {
                    // leading entry is free; reduce the tail for a canonical residual
                    let mut out = vec![v[0].clone()];
                    let mut tail: SparseVec = v[1..].to_vec();
                    loop {
                        let next = tail.iter().find(|(i, _)| self.pivots.contains_key(i)).cloned();
                        match next {
                            Some((i, c)) => {
                                let (pv, pc) = &self.pivots[&i];
                                tail = sv_axpy(&tail, &-c.clone(), pv);
                                combo = sv_axpy(&combo, &c, pc);
                            }
                            None => break,
                        }
                    }
                    out.extend(tail);
                    out.sort_by_key(|e| e.0);
                    return (out, combo);
                }
            }
        }
        (v, combo)
    }

    /// Inserts the next input vector. Returns `None` if it was independent of
    /// the previous ones, otherwise the kernel relation `sum_k c_k input_k = 0`.
    pub fn insert(&mut self, v: &SparseVec) -> Option<SparseVec> {
        let idx = self.inserted;
        self.inserted += 1;
        let (res, combo) = self.reduce(v);
        // v = res + combo . inputs  =>  res = input_idx - combo . inputs
        let mut rel = sv_scale(&combo, &-Rational::one());
        rel = sv_axpy(&rel, &Rational::one(), &vec![(idx, Rational::one())]);
        if res.is_empty() {
            return Some(rel);
        }
        let lead = res[0].0;
        let inv = Rational::one() / &res[0].1;
        let res = sv_scale(&res, &inv);
        let rel = sv_scale(&rel, &inv);
        // keep older pivots reduced against the new one only lazily; reduce() loops
        self.pivots.insert(lead, (res, rel));
        None
    }

    /// Coefficients `x` with `v = sum_k x_k input_k`, if `v` is in the span.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let (res, combo) = self.reduce(v);
        if res.is_empty() {
            Some(combo)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// Rank, kernel basis and image basis of a matrix.
#[derive(Clone, Debug)]
pub struct KernelImage {
    pub rank: usize,
    /// Columns span `ker(m)` exactly.
    pub kernel: Matrix,
    /// Columns span `im(m)` exactly; column `k` equals `m * e_{image_cols[k]}`.
    pub image: Matrix,
    pub image_cols: Vec<usize>,
}

pub fn rank_kernel_image(m: &Matrix) -> KernelImage {
    let cols = m.sparse_columns();
    let mut ech = Echelon::new(m.nrows());
    let mut kernel = Vec::new();
    let mut image_cols = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        match ech.insert(c) {
            Some(rel) => kernel.push(rel),
            None => image_cols.push(j),
        }
    }
    let image: Vec<SparseVec> = image_cols.iter().map(|&j| cols[j].clone()).collect();
    KernelImage {
        rank: image_cols.len(),
        kernel: Matrix::from_sparse_columns(m.ncols(), &kernel),
        image: Matrix::from_sparse_columns(m.nrows(), &image),
        image_cols,
    }
}

/// Some `x` with `m x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &SparseVec) -> Option<SparseVec> {
    Solver::new(m).solve(b)
}

/// Reusable solver for `m x = b` with many right-hand sides.
#[derive(Clone, Debug)]
pub struct Solver {
    ech: Echelon,
    ncols: usize,
}

impl Solver {
    pub fn new(m: &Matrix) -> Self {
        let mut ech = Echelon::new(m.nrows());
        for c in m.sparse_columns() {
            ech.insert(&c);
        }
        Solver { ech, ncols: m.ncols() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        self.ech.solve(b)
    }

    pub fn in_image(&self, b: &SparseVec) -> bool {
        self.ech.contains(b)
    }
}

/// Quotient of `Q^ambient_dim` by the span of the columns of a basis matrix.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub dim: usize,
    /// `dim x ambient` matrix killing the subspace.
    pub projection: Matrix,
    /// `ambient x dim` matrix with `projection * section = id`.
    pub section: Matrix,
}

/// Quotient by an independent family; a dependent family is an error.
pub fn quotient_space(ambient_dim: usize, subspace_basis: &Matrix) -> Result<Quotient> {
    assert_eq!(subspace_basis.nrows(), ambient_dim);
    let sub = subspace_basis.sparse_columns();
    let mut ech = Echelon::new(ambient_dim);
    for (k, v) in sub.iter().enumerate() {
        if ech.insert(v).is_some() {
            return Err(Error::InvalidBasis { column: k });
        }
    }
    Ok(complete_quotient(ech, sub.len(), ambient_dim))
}

/// Quotient by the span of an arbitrary (possibly dependent) family.
pub fn quotient_by_span(ambient_dim: usize, spanning: &[SparseVec]) -> Quotient {
    let mut ech = Echelon::new(ambient_dim);
    for v in spanning {
        if !ech.contains(v) {
            ech.insert(v);
        }
    }
    let n = ech.inserted();
    complete_quotient(ech, n, ambient_dim)
}

fn complete_quotient(mut ech: Echelon, nsub: usize, ambient_dim: usize) -> Quotient {
    let mut complement = Vec::new();
    for i in 0..ambient_dim {
        let e = vec![(i, Rational::one())];
        if ech.contains(&e) {
            continue;
        }
        ech.insert(&e);
        complement.push((i, ech.inserted() - 1));
    }
    let q = complement.len();
    let slot: BTreeMap<usize, usize> = complement
        .iter()
        .enumerate()
        .map(|(k, (_, input))| (*input, k))
        .collect();
    let mut proj_cols = Vec::with_capacity(ambient_dim);
    for i in 0..ambient_dim {
        let combo = ech
            .solve(&vec![(i, Rational::one())])
            .expect("completed basis spans the ambient space");
        let col: SparseVec = combo
            .into_iter()
            .filter(|(input, _)| *input >= nsub)
            .filter_map(|(input, v)| slot.get(&input).map(|&k| (k, v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let mut col = col;
        col.sort_by_key(|e| e.0);
        proj_cols.push(col);
    }
    let section_cols: Vec<SparseVec> = complement.iter().map(|(i, _)| vec![(*i, Rational::one())]).collect();
    Quotient {
        dim: q,
        projection: Matrix::from_sparse_columns(q, &proj_cols),
        section: Matrix::from_sparse_columns(ambient_dim, &section_cols),
    }
}

/// A basis of a subspace adapted to a sub-subspace: `lower` spans the smaller
/// space, `extra` extends it. Gives coordinates along `extra` for vectors of the larger space.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    ech: Echelon,
    nlower: usize,
    pub extra: Vec<SparseVec>,
}

impl AdaptedBasis {
    /// `lower` must be independent; `candidates` span the larger space.
    pub fn new(dim: usize, lower: &[SparseVec], candidates: &[SparseVec]) -> Self {
        let mut ech = Echelon::new(dim);
        for v in lower {
            let r = ech.insert(v);
            debug_assert!(r.is_none(), "lower family must be independent");
        }
        let mut extra = Vec::new();
        for v in candidates {
            if !ech.contains(v) {
                ech.insert(v);
                extra.push(v.clone());
            }
        }
        AdaptedBasis {
            ech,
            nlower: lower.len(),
            extra,
        }
    }

    /// Coordinates along `extra`, or `None` if `v` is outside the larger space.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let combo = self.ech.solve(v)?;
        Some(
            combo
                .into_iter()
                .filter(|(k, _)| *k >= self.nlower)
                .map(|(k, c)| (k - self.nlower, c))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    #[test]
    fn identity_and_zero() {
        let ki = rank_kernel_image(&Matrix::identity(2));
        assert_eq!(ki.rank, 2);
        assert_eq!(ki.kernel.ncols(), 0);
        let kz = rank_kernel_image(&Matrix::zeros(2, 2));
        assert_eq!(kz.rank, 0);
        assert_eq!(kz.kernel.ncols(), 2);
    }

    #[test]
    fn rank_one_kernel_is_two_minus_one() {
        let m = Matrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        let ki = rank_kernel_image(&m);
        assert_eq!(ki.rank, 1);
        assert_eq!(ki.kernel.ncols(), 1);
        let k = ki.kernel.column(0);
        // proportional to (2, -1)
        assert_eq!(&k[0] * int(-1), &k[1] * int(2));
        assert!(m.mul(&ki.kernel).is_zero());
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_space(3, &Matrix::zeros(3, 0)).unwrap();
        assert_eq!(q.dim, 3);
        assert_eq!(q.projection, Matrix::identity(3));
        let q = quotient_space(3, &Matrix::identity(3)).unwrap();
        assert_eq!(q.dim, 0);
        let sub = Matrix::from_i64(&[vec![1], vec![1]]);
        let q = quotient_space(2, &sub).unwrap();
        assert_eq!(q.dim, 1);
        assert!(q.projection.mul(&sub).is_zero());
        assert_eq!(q.projection.mul(&q.section), Matrix::identity(1));
        let dep = Matrix::from_i64(&[vec![1, 2], vec![1, 2]]);
        assert!(matches!(
            quotient_space(2, &dep),
            Err(Error::InvalidBasis { column: 1 })
        ));
    }

    #[test]
    fn solver_finds_preimage() {
        let m = Matrix::from_i64(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let b = vec![(0, int(2)), (1, int(3))];
        let x = solve(&m, &b).unwrap();
        let dense = crate::linalg::sv_to_dense(&x, 3);
        assert_eq!(m.mul_vec(&dense), vec![int(2), int(3)]);
        let m2 = Matrix::from_i64(&[vec![1], vec![1]]);
        assert!(solve(&m2, &vec![(0, int(1))]).is_none());
    }
}
