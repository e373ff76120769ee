use crate::algebra::{AssocAlgebra, Bimodule};
use crate::error::{Error, Result};
use crate::linalg::{quotient_by_span, rank_kernel_image, sign, AdaptedBasis, Matrix, Rational, Solver, SparseVec};

use super::cochain::{check_coefficients, tuple_count, tuple_digits, tuple_index, HochschildCochain};

/// Which cochain model computes cohomology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// All multilinear maps `a^{⊗n} -> M`.
    Bar,
    /// Maps vanishing when an argument is a multiple of the unit, written on `(a/Q1)^{⊗n}`.
    Normalized,
}

/// The Hochschild cochain complex `C^•(a, M)` in one of the two models.
#[derive(Clone, Debug)]
pub struct HochschildComplex {
    a: AssocAlgebra,
    m: Bimodule,
    model: Model,
    /// Number of arguments basis vectors (`dim a` or `dim a - 1`).
    q: usize,
    /// Reduced products `π(b_j b_k)` in argument coordinates, index `j * q + k`.
    prod: Vec<SparseVec>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    /// `d x q` section of `a -> a/Q1`; identity in the bar model.
    section: Matrix,
    /// `q x d` projection `a -> a/Q1`; identity in the bar model.
    projection: Matrix,
}

impl HochschildComplex {
    pub fn new(a: &AssocAlgebra, m: &Bimodule, model: Model) -> Result<Self> {
        check_coefficients(a, m)?;
        let d = a.dim();
        let (projection, section) = match model {
            Model::Bar => (Matrix::identity(d), Matrix::identity(d)),
            Model::Normalized => {
                let q = quotient_by_span(d, &[a.unit().clone()]);
                (q.projection, q.section)
            }
        };
        let q = section.ncols();
        let sec = section.sparse_columns();
        let mut prod = Vec::with_capacity(q * q);
        for j in 0..q {
            for k in 0..q {
                prod.push(projection.mul_sparse(&a.mul(&sec[j], &sec[k])));
            }
        }
        let left = sec.iter().map(|b| m.left_elem(b)).collect();
        let right = sec.iter().map(|b| m.right_elem(b)).collect();
        Ok(HochschildComplex {
            a: a.clone(),
            m: m.clone(),
            model,
            q,
            prod,
            left,
            right,
            section,
            projection,
        })
    }

    pub fn algebra(&self) -> &AssocAlgebra {
        &self.a
    }

    pub fn coefficients(&self) -> &Bimodule {
        &self.m
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Dimension of `C^n` in this model.
    pub fn cochain_dim(&self, n: usize) -> usize {
        tuple_count(self.q, n) * self.m.dim()
    }

    /// Matrix of `δ : C^n -> C^{n+1}` on vectorized cochains (`tuple * dim M + out`).
    pub fn delta(&self, n: usize) -> Matrix {
        let q = self.q;
        let dm = self.m.dim();
        let rows = tuple_count(q, n + 1) * dm;
        let cols = tuple_count(q, n) * dm;
        let tail = tuple_count(q, n);
        let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
        let mut inner = Vec::with_capacity(n);
        for tprime in 0..tuple_count(q, n + 1) {
            let t = tuple_digits(q, n + 1, tprime);
            let rest = tprime % tail;
            let head = tprime / q;
            for o in 0..dm {
                let row = tprime * dm + o;
                for (src, c) in self.left[t[0]].row(o) {
                    entries.push((row, rest * dm + src, c.clone()));
                }
                for i in 1..=n {
                    let s = sign(i as i64);
                    for (k, c) in &self.prod[t[i - 1] * q + t[i]] {
                        inner.clear();
                        inner.extend_from_slice(&t[..i - 1]);
                        inner.push(*k);
                        inner.extend_from_slice(&t[i + 1..]);
                        entries.push((row, tuple_index(q, &inner) * dm + o, &s * c));
                    }
                }
                let s = sign(n as i64 + 1);
                for (src, c) in self.right[t[n]].row(o) {
                    entries.push((row, head * dm + src, &s * c));
                }
            }
        }
        Matrix::from_triplets(rows, cols, entries)
    }

    /// Full cochain `g ∘ π^{⊗n}` from model coordinates.
    pub fn expand(&self, n: usize, v: &SparseVec) -> HochschildCochain {
        let g = HochschildCochain::from_vector(n, self.q, self.m.dim(), v);
        if self.model == Model::Bar {
            return g;
        }
        let cols = self.projection.sparse_columns();
        HochschildCochain::from_fn(n, self.a.dim(), self.m.dim(), |t| {
            let args: Vec<SparseVec> = t.iter().map(|&i| cols[i].clone()).collect();
            g.eval(&args)
        })
    }

    /// Model coordinates `f ∘ σ^{⊗n}` of a full cochain.
    pub fn restrict(&self, f: &HochschildCochain) -> SparseVec {
        if self.model == Model::Bar {
            return f.to_vector();
        }
        let sec = self.section.sparse_columns();
        let n = f.arity();
        HochschildCochain::from_fn(n, self.q, self.m.dim(), |t| {
            let args: Vec<SparseVec> = t.iter().map(|&i| sec[i].clone()).collect();
            f.eval(&args)
        })
        .to_vector()
    }

    /// Whether `f` is representable in this model.
    pub fn admits(&self, f: &HochschildCochain) -> bool {
        match self.model {
            Model::Bar => true,
            Model::Normalized => f.is_normalized(self.a.unit()),
        }
    }

    /// `HH^n(a, M)` with class bookkeeping.
    pub fn space(&self, n: usize) -> HochschildSpace {
        let d_out = self.delta(n);
        let ker = rank_kernel_image(&d_out).kernel.sparse_columns();
        let (im, solver) = if n == 0 {
            (Vec::new(), None)
        } else {
            let d_in = self.delta(n - 1);
            let ki = rank_kernel_image(&d_in);
            (ki.image.sparse_columns(), Some(Solver::new(&d_in)))
        };
        let adapted = AdaptedBasis::new(self.cochain_dim(n), &im, &ker);
        let reps = adapted.extra.iter().map(|v| self.expand(n, v)).collect();
        HochschildSpace {
            degree: n,
            complex: self.clone(),
            kernel_dim: ker.len(),
            image_rank: im.len(),
            reps,
            adapted,
            delta_out: d_out,
            coboundary_solver: solver,
        }
    }
}

/// `HH^n(a, M)` together with what is needed to decide class equality exactly.
#[derive(Clone, Debug)]
pub struct HochschildSpace {
    pub degree: usize,
    complex: HochschildComplex,
    kernel_dim: usize,
    image_rank: usize,
    reps: Vec<HochschildCochain>,
    adapted: AdaptedBasis,
    delta_out: Matrix,
    coboundary_solver: Option<Solver>,
}

/// A cohomology class: its coordinates in the chosen basis of `HH^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildClass {
    pub degree: usize,
    pub coordinates: SparseVec,
}

impl HochschildClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.is_empty()
    }
}

impl HochschildSpace {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn image_rank(&self) -> usize {
        self.image_rank
    }

    /// Cocycles representing a basis of `HH^n`.
    pub fn representatives(&self) -> &[HochschildCochain] {
        &self.reps
    }

    pub fn complex(&self) -> &HochschildComplex {
        &self.complex
    }

    fn coordinates_of(&self, f: &HochschildCochain) -> Result<SparseVec> {
        if f.arity() != self.degree {
            return Err(Error::Invalid {
                what: format!("cochain of arity {} in HH^{}", f.arity(), self.degree),
            });
        }
        if !self.complex.admits(f) {
            return Err(Error::Invalid {
                what: "cochain is not normalized; use the bar model".into(),
            });
        }
        Ok(self.complex.restrict(f))
    }

    /// Class of a cocycle; errors with a witness tuple if `δf != 0`.
    pub fn class_of(&self, f: &HochschildCochain) -> Result<HochschildClass> {
        let v = self.coordinates_of(f)?;
        let dv = self.delta_out.mul_sparse(&v);
        if let Some((k, _)) = dv.first() {
            let q = self.complex.q;
            let dm = self.complex.m.dim();
            let t = tuple_digits(q, self.degree + 1, k / dm);
            return Err(Error::NotACocycle {
                witness: format!("δf is nonzero at basis tuple {t:?}, output {}", k % dm),
            });
        }
        let coordinates = self
            .adapted
            .coordinates(&v)
            .expect("cocycles lie in the span of coboundaries and representatives");
        Ok(HochschildClass {
            degree: self.degree,
            coordinates,
        })
    }

    /// Some `γ` with `δγ = f`, as a full cochain, when `f` is a coboundary.
    /// Always `None` in degree 0.
    pub fn coboundary_witness(&self, f: &HochschildCochain) -> Result<Option<HochschildCochain>> {
        let v = self.coordinates_of(f)?;
        let Some(solver) = &self.coboundary_solver else {
            return Ok(None);
        };
        Ok(solver.solve(&v).map(|g| self.complex.expand(self.degree - 1, &g)))
    }

    pub fn is_coboundary(&self, f: &HochschildCochain) -> Result<bool> {
        let v = self.coordinates_of(f)?;
        Ok(match &self.coboundary_solver {
            None => v.is_empty(),
            Some(s) => s.in_image(&v),
        })
    }
}

/// `dim HH^n(a, M)` from the bar model.
pub fn hh(a: &AssocAlgebra, m: &Bimodule, n: usize) -> Result<HochschildSpace> {
    Ok(HochschildComplex::new(a, m, Model::Bar)?.space(n))
}

/// `HH^n(a, a)` from the bar model.
pub fn hh_self(a: &AssocAlgebra, n: usize) -> Result<HochschildSpace> {
    hh(a, &Bimodule::regular(a), n)
}

pub fn hh_dims(
    a: &AssocAlgebra,
    m: &Bimodule,
    degrees: std::ops::RangeInclusive<usize>,
    model: Model,
) -> Result<Vec<usize>> {
    let c = HochschildComplex::new(a, m, model)?;
    Ok(degrees.map(|n| c.space(n).dim()).collect())
}
