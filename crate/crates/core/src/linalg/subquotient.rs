use super::echelon::{AdaptedBasis, Echelon};
use super::matrix::{Matrix, SparseVec};

/// `U / L` for subspaces `L ⊂ U ⊂ Q^ambient` given by spanning families.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    adapted: AdaptedBasis,
}

/// An independent subfamily with the same span.
pub fn span_basis(ambient: usize, spanning: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech = Echelon::new(ambient);
    let mut out = Vec::new();
    for v in spanning {
        if !ech.contains(v) {
            ech.insert(v);
            out.push(v.clone());
        }
    }
    out
}

impl Subquotient {
    pub fn new(ambient: usize, lower: &[SparseVec], upper: &[SparseVec]) -> Self {
        let lower = span_basis(ambient, lower);
        Subquotient {
            ambient,
            adapted: AdaptedBasis::new(ambient, &lower, upper),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.adapted.extra.len()
    }

    /// Representatives in the ambient space of the quotient basis.
    pub fn reps(&self) -> &[SparseVec] {
        &self.adapted.extra
    }

    /// Quotient coordinates of `v`, or `None` if `v` is outside `U`.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        self.adapted.coordinates(v)
    }

    /// Whether `v` lies in `L`.
    pub fn is_zero_class(&self, v: &SparseVec) -> bool {
        self.coords(v).map(|c| c.is_empty()).unwrap_or(false)
    }

    /// Matrix of the map induced by an ambient operator preserving `U` and `L`.
    pub fn induced(&self, op: &Matrix) -> Option<Matrix> {
        let mut cols = Vec::with_capacity(self.dim());
        for r in self.reps() {
            cols.push(self.coords(&op.mul_sparse(r))?);
        }
        Some(Matrix::from_sparse_columns(self.dim(), &cols))
    }

    /// Quotient coordinates of each vector, as columns.
    pub fn coords_matrix(&self, vectors: &[SparseVec]) -> Option<Matrix> {
        let cols: Option<Vec<SparseVec>> = vectors.iter().map(|v| self.coords(v)).collect();
        Some(Matrix::from_sparse_columns(self.dim(), &cols?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn plane_mod_line() {
        let upper = vec![vec![(0, int(1))], vec![(1, int(1))]];
        let lower = vec![vec![(0, int(1)), (1, int(1))], vec![(0, int(2)), (1, int(2))]];
        let sq = Subquotient::new(3, &lower, &upper);
        assert_eq!(sq.dim(), 1);
        assert!(sq.is_zero_class(&vec![(0, int(-3)), (1, int(-3))]));
        assert!(sq.coords(&vec![(2, int(1))]).is_none());
        let c0 = sq.coords(&vec![(0, int(1))]).unwrap();
        let c1 = sq.coords(&vec![(1, int(1))]).unwrap();
        assert_eq!(c0, crate::linalg::sv_scale(&c1, &int(-1)));
    }
}
