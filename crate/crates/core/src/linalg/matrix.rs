use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::rational::{format_rational, int, one, Rational};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

/// `a + c * b`.
pub fn sv_axpy(a: &SparseVec, c: &Rational, b: &SparseVec) -> SparseVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ai = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let bj = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ai < bj {
            out.push(a[i].clone());
            i += 1;
        } else if bj < ai {
            out.push((bj, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((ai, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sv_scale(a: &SparseVec, c: &Rational) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v * c)).collect()
}

pub fn sv_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sv_to_dense(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Builds a sparse vector from unsorted `(index, value)` pairs, summing duplicates.
pub fn sv_collect<I: IntoIterator<Item = (usize, Rational)>>(it: I) -> SparseVec {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, v) in it {
        if v.is_zero() {
            continue;
        }
        *acc.entry(i).or_insert_with(Rational::zero) += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// A rows x cols matrix over the rationals with dense semantics and sparse row storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].push((i, one()));
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix {
            nrows,
            ncols,
            rows: rows.iter().map(|r| sv_from_dense(r)).collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_dense(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn from_sparse_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.iter().all(|(c, _)| *c < ncols)));
        Matrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    /// Builds a matrix whose columns are the given sparse vectors.
    pub fn from_sparse_columns(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); nrows];
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c {
                rows[*i].push((j, v.clone()));
            }
        }
        Matrix {
            nrows,
            ncols: cols.len(),
            rows,
        }
    }

    pub fn from_columns(nrows: usize, cols: &[Vec<Rational>]) -> Self {
        let sparse: Vec<SparseVec> = cols.iter().map(|c| sv_from_dense(c)).collect();
        Self::from_sparse_columns(nrows, &sparse)
    }

    pub fn from_triplets<I>(nrows: usize, ncols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in entries {
            assert!(r < nrows && c < ncols, "entry ({r},{c}) out of range");
            if !v.is_zero() {
                *acc[r].entry(c).or_insert_with(Rational::zero) += v;
            }
        }
        Matrix {
            nrows,
            ncols,
            rows: acc
                .into_iter()
                .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(k) => self.rows[r][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(k) => {
                if v.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    row.insert(k, (c, v));
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn transpose(&self) -> Matrix {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                rows[*j].push((i, v.clone()));
            }
        }
        Matrix {
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.nrows).map(|i| self.get(i, j)).collect()
    }

    /// All columns as sparse vectors.
    pub fn sparse_columns(&self) -> Vec<SparseVec> {
        self.transpose().rows
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        self.sparse_columns()
            .iter()
            .map(|c| sv_to_dense(c, self.nrows))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| sv_to_dense(r, self.ncols)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, a) in r {
                    for (j, b) in &other.rows[*k] {
                        *acc.entry(*j).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Matrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.ncols, v.len(), "dimension mismatch in matrix-vector product");
        self.rows
            .iter()
            .map(|r| r.iter().map(|(j, a)| a * &v[*j]).sum())
            .collect()
    }

    pub fn mul_sparse(&self, v: &SparseVec) -> SparseVec {
        // column combination via transposed access would be faster for huge inputs;
        // rows are short here.
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let mut s = Rational::zero();
            let (mut a, mut b) = (0, 0);
            while a < r.len() && b < v.len() {
                if r[a].0 < v[b].0 {
                    a += 1;
                } else if r[a].0 > v[b].0 {
                    b += 1;
                } else {
                    s += &r[a].1 * &v[b].1;
                    a += 1;
                    b += 1;
                }
            }
            if !s.is_zero() {
                out.push((i, s));
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.axpy(&one(), other)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.axpy(&-one(), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Rational, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| sv_axpy(a, c, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self.rows.iter().map(|r| sv_scale(r, c)).collect(),
        }
    }

    /// Kronecker product; row index `i * other.nrows + k`, column `j * other.ncols + l`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut rows = Vec::with_capacity(self.nrows * other.nrows);
        for r in &self.rows {
            for o in &other.rows {
                let mut row = Vec::with_capacity(r.len() * o.len());
                for (j, a) in r {
                    for (l, b) in o {
                        row.push((j * other.ncols + l, a * b));
                    }
                }
                rows.push(row);
            }
        }
        Matrix {
            nrows: self.nrows * other.nrows,
            ncols: self.ncols * other.ncols,
            rows,
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.nrows, other.nrows);
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, v)| (j + self.ncols, v.clone())));
                r
            })
            .collect();
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols + other.ncols,
            rows,
        }
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.ncols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Matrix {
            nrows: self.nrows + other.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix {
            nrows: idx.len(),
            ncols: self.ncols,
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, &j) in idx.iter().enumerate() {
            pos[j] = k;
        }
        // idx may repeat a column; fall back to the transpose route then.
        if idx.len() != idx.iter().collect::<std::collections::BTreeSet<_>>().len() {
            return self.transpose().select_rows(idx).transpose();
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out: SparseVec = r
                    .iter()
                    .filter(|(j, _)| pos[*j] != usize::MAX)
                    .map(|(j, v)| (pos[*j], v.clone()))
                    .collect();
                out.sort_by_key(|e| e.0);
                out
            })
            .collect();
        Matrix {
            nrows: self.nrows,
            ncols: idx.len(),
            rows,
        }
    }

    /// Block of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let rows = self.rows[r0..r1]
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(j, _)| *j >= c0 && *j < c1)
                    .map(|(j, v)| (j - c0, v.clone()))
                    .collect()
            })
            .collect();
        Matrix {
            nrows: r1 - r0,
            ncols: c1 - c0,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        super::rank_kernel_image(self).rank
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.nrows, self.ncols)?;
        if self.nrows * self.ncols <= 400 {
            for r in self.to_dense() {
                let cells: Vec<String> = r.iter().map(format_rational).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        } else {
            writeln!(f, "  ({} nonzeros)", self.nnz())?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = Matrix::from_i64(&[vec![1, 2], vec![3, 4]]);
        let b = Matrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_i64(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.get(1, 0), int(3));
    }

    #[test]
    fn kron_layout() {
        let a = Matrix::from_i64(&[vec![1, 2]]);
        let b = Matrix::from_i64(&[vec![1], vec![10]]);
        let k = a.kron(&b);
        assert_eq!(k, Matrix::from_i64(&[vec![1, 2], vec![10, 20]]));
    }

    #[test]
    fn set_and_select() {
        let mut m = Matrix::zeros(2, 3);
        m.set(0, 2, int(5));
        m.set(1, 0, int(-1));
        m.set(0, 2, int(0));
        assert_eq!(m.nnz(), 1);
        let s = m.select_columns(&[0, 1]);
        assert_eq!(s, Matrix::from_i64(&[vec![0, 0], vec![-1, 0]]));
    }
}
