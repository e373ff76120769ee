use rand::{Rng, RngCore};

use super::classes::a_tensor_tstar;
use super::star::StarDeformation;
use crate::algebra::{basis_vector, multiplication_kernel, tensor_vec, AssocAlgebra, Bimodule, SubBimodule};
use crate::error::{Error, Result};
use crate::hochschild::HochschildCochain;
use crate::linalg::{int, rank_kernel_image, sv_axpy, Matrix, Solver, SparseVec, Subquotient};

/// `0 -> M -> E1 -> E0 -> Q -> 0` of bimodules over one algebra.
#[derive(Clone, Debug)]
pub struct FourTermSequence {
    pub m: Bimodule,
    pub e1: Bimodule,
    pub e0: Bimodule,
    pub q: Bimodule,
    pub iota: Matrix,
    pub u: Matrix,
    pub p: Matrix,
}

pub const SPOTS: [&str; 4] = ["M", "E1", "E0", "Q"];

/// Exactness at each of the four spots and the bimodule property of each map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub exact: [bool; 4],
    pub bimodule_maps: [bool; 3],
}

impl SequenceReport {
    pub fn holds(&self) -> bool {
        self.exact.iter().all(|b| *b) && self.bimodule_maps.iter().all(|b| *b)
    }

    pub fn first_failure(&self) -> Option<Error> {
        if let Some(k) = self.exact.iter().position(|b| !b) {
            return Some(Error::ExactnessFailure {
                spot: SPOTS[k].into(),
                what: "kernel and image differ".into(),
            });
        }
        let names = ["ι", "u", "p"];
        self.bimodule_maps
            .iter()
            .position(|b| !b)
            .map(|k| Error::BimoduleMismatch {
                what: format!("{} is not a bimodule map", names[k]),
            })
    }
}

impl FourTermSequence {
    pub fn report(&self) -> SequenceReport {
        let ri = self.iota.rank();
        let ru = self.u.rank();
        let rp = self.p.rank();
        SequenceReport {
            exact: [
                ri == self.m.dim(),
                self.u.mul(&self.iota).is_zero() && ri + ru == self.e1.dim(),
                self.p.mul(&self.u).is_zero() && ru + rp == self.e0.dim(),
                rp == self.q.dim(),
            ],
            bimodule_maps: [
                self.m.is_bimodule_map(&self.iota, &self.e1),
                self.e1.is_bimodule_map(&self.u, &self.e0),
                self.e0.is_bimodule_map(&self.p, &self.q),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.report().first_failure() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Bilinear cocycle `a x a -> M` of the extension class.
    ///
    /// With `e ∈ E0` over the unit and `u φ(x) = x e - e x`, the cocycle is
    /// `ι f(x, y) = x φ(y) - φ(xy) + φ(x) y`. Without an rng the lifts are the
    /// solver's choices and `φ` vanishes on a unit basis vector; with an rng,
    /// random kernel elements are added to every lift.
    pub fn ext2_cocycle(&self, mut rng: Option<&mut dyn RngCore>) -> Result<HochschildCochain> {
        let a = self.q.left_algebra().clone();
        let d = a.dim();
        if self.q.dim() != d || self.e0.left_algebra() != &a || self.m.left_algebra() != &a {
            return Err(Error::MismatchedParameters {
                what: "the last term must be the algebra itself".into(),
            });
        }
        let not_onto = |spot: &str| Error::ExactnessFailure {
            spot: spot.into(),
            what: "a required lift does not exist".into(),
        };
        let p_ker = rank_kernel_image(&self.p).kernel.sparse_columns();
        let mut e = Solver::new(&self.p).solve(a.unit()).ok_or_else(|| not_onto("Q"))?;
        if let Some(r) = rng.as_deref_mut() {
            e = sv_axpy(&e, &int(1), &random_combination(&p_ker, r));
        }
        let u_solver = Solver::new(&self.u);
        let u_ker = rank_kernel_image(&self.u).kernel.sparse_columns();
        let mut phi = Vec::with_capacity(d);
        for i in 0..d {
            let x = basis_vector(i);
            let target = sv_axpy(&self.e0.act_left(&x, &e), &int(-1), &self.e0.act_right(&e, &x));
            let mut lift = u_solver.solve(&target).ok_or_else(|| not_onto("E0"))?;
            if let Some(r) = rng.as_deref_mut() {
                lift = sv_axpy(&lift, &int(1), &random_combination(&u_ker, r));
            }
            phi.push(lift);
        }
        let phi_of = |v: &SparseVec| v.iter().fold(Vec::new(), |acc, (k, c)| sv_axpy(&acc, c, &phi[*k]));
        let iota_solver = Solver::new(&self.iota);
        let mut values = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let (x, y) = (basis_vector(i), basis_vector(j));
                let mut v = self.e1.act_left(&x, &phi[j]);
                v = sv_axpy(&v, &int(-1), &phi_of(a.product(i, j)));
                v = sv_axpy(&v, &int(1), &self.e1.act_right(&phi[i], &y));
                values.push(iota_solver.solve(&v).ok_or_else(|| not_onto("E1"))?);
            }
        }
        Ok(HochschildCochain::from_fn(2, d, self.m.dim(), |t| {
            values[t[0] * d + t[1]].clone()
        }))
    }
}

fn random_combination(basis: &[SparseVec], rng: &mut dyn RngCore) -> SparseVec {
    basis.iter().fold(Vec::new(), |acc, v| {
        let c = rng.gen_range(-3i64..=3);
        sv_axpy(&acc, &int(c), v)
    })
}

/// Bimodule structure on a subquotient of an ambient bimodule, given the ambient
/// operators of each basis element of `a`.
fn subquotient_bimodule(
    a: &AssocAlgebra,
    sq: &Subquotient,
    left: &[Matrix],
    right: &[Matrix],
    prefix: &str,
) -> Result<Bimodule> {
    let induce = |ops: &[Matrix]| -> Result<Vec<Matrix>> {
        ops.iter()
            .map(|op| {
                sq.induced(op).ok_or_else(|| Error::BimoduleMismatch {
                    what: "action does not preserve the subquotient".into(),
                })
            })
            .collect()
    };
    let labels = (0..sq.dim()).map(|i| format!("{prefix}{i}")).collect();
    Bimodule::new(a.clone(), a.clone(), labels, induce(left)?, induce(right)?)
}

fn coords_or_err(sq: &Subquotient, v: &SparseVec, what: &str) -> Result<SparseVec> {
    sq.coords(v).ok_or_else(|| Error::Invalid { what: what.into() })
}

/// `e_i` placed in the constant block of `a ⊗ O_N`.
fn constant_block(d: &StarDeformation) -> Matrix {
    let da = d.algebra().dim();
    let rows = d.ring().dim() * da;
    Matrix::from_triplets(rows, da, (0..da).map(|i| (i, i, int(1))))
}

struct IaData {
    seq: FourTermSequence,
    big: AssocAlgebra,
    k: Subquotient,
}

fn build_ia(d: &StarDeformation) -> Result<IaData> {
    if d.order() != 1 {
        return Err(Error::MismatchedParameters {
            what: "the sequence is built from a first-order deformation".into(),
        });
    }
    let a = d.algebra();
    let da = a.dim();
    let n = d.nparams();
    let big = d.to_algebra();
    let dd = big.dim();
    let id = Matrix::identity(dd);
    let ia = multiplication_kernel(&big);
    let ia_basis = ia.inclusion.sparse_columns();
    let t: Vec<SparseVec> = (0..n)
        .map(|j| {
            let mu = d.ring().linear(j);
            a.unit().iter().map(|(k, c)| (d.index(*k, mu), c.clone())).collect()
        })
        .collect();
    let mut rel = Vec::new();
    for tj in &t {
        let lt = big.left_mult(tj).kron(&id);
        let rt = id.kron(&big.right_mult(tj));
        for z in &ia_basis {
            rel.push(lt.mul_sparse(z));
            rel.push(rt.mul_sparse(z));
        }
    }
    let k = Subquotient::new(dd * dd, &rel, &ia_basis);
    let left: Vec<Matrix> = (0..da).map(|i| big.left_mult(&basis_vector(i)).kron(&id)).collect();
    let right: Vec<Matrix> = (0..da).map(|i| id.kron(&big.right_mult(&basis_vector(i)))).collect();
    let kmod = subquotient_bimodule(a, &k, &left, &right, "k")?;

    let m = a_tensor_tstar(a, n);
    let one = big.unit().clone();
    let mut nu_cols = Vec::with_capacity(n * da);
    for tj in &t {
        for i in 0..da {
            let x = basis_vector(i);
            let v = sv_axpy(
                &tensor_vec(&big.mul(tj, &x), &one, dd),
                &int(-1),
                &tensor_vec(&one, &big.mul(&x, tj), dd),
            );
            nu_cols.push(coords_or_err(&k, &v, "t a ⊗ 1 - 1 ⊗ a t left I_A")?);
        }
    }
    let iota = Matrix::from_sparse_columns(k.dim(), &nu_cols);
    let r = constant_block(d).transpose();
    let u = r.kron(&r).mul(&Matrix::from_sparse_columns(dd * dd, k.reps()));
    let seq = FourTermSequence {
        m,
        e1: kmod,
        e0: Bimodule::outer_tensor(a),
        q: Bimodule::regular(a),
        iota,
        u,
        p: a.mult_matrix(),
    };
    Ok(IaData { seq, big, k })
}

/// `0 -> a ⊗ T* -> K -> a ⊗ a -> a -> 0` with `K = I_A / (T* I_A + I_A T*)`,
/// where `A = a ⊗ O_1` carries the star product and `I_A = ker(A ⊗ A -> A)`.
pub fn sequence_ia(d: &StarDeformation) -> Result<FourTermSequence> {
    Ok(build_ia(d)?.seq)
}

/// Conormal data of a surjection `A -> a = A / J`.
#[derive(Clone, Debug)]
pub struct CqSequence {
    pub quotient: AssocAlgebra,
    /// `A -> a`.
    pub projection: Matrix,
    /// `J / J^2`.
    pub conormal: Bimodule,
    /// `I_A / (J I_A + I_A J)`.
    pub middle: Bimodule,
    /// `I_a = ker(a ⊗ a -> a)`.
    pub ia: SubBimodule,
    /// `[j] -> [j ⊗ 1 - 1 ⊗ j]`.
    pub d: Matrix,
    /// Induced by `π ⊗ π`, in the basis of `ia`.
    pub g: Matrix,
    conormal_sq: Subquotient,
    middle_sq: Subquotient,
}

/// Exactness of `J/J^2 -> I_A/(J I_A + I_A J) -> I_a -> 0` at its three spots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConormalReport {
    pub d_injective: bool,
    pub exact_middle: bool,
    pub g_surjective: bool,
    pub bimodule_maps: bool,
}

impl ConormalReport {
    pub fn holds(&self) -> bool {
        self.d_injective && self.exact_middle && self.g_surjective && self.bimodule_maps
    }
}

/// Builds the conormal sequence for the two-sided ideal spanned by the columns of `j`.
pub fn cq_sequence(big: &AssocAlgebra, j: &Matrix) -> Result<CqSequence> {
    let (a, q) = big.quotient_by_ideal(j)?;
    let dd = big.dim();
    let id = Matrix::identity(dd);
    let sec = q.section.sparse_columns();
    let jb = j.sparse_columns();
    let mut jj = Vec::new();
    for x in &jb {
        for y in &jb {
            jj.push(big.mul(x, y));
        }
    }
    let conormal_sq = Subquotient::new(dd, &jj, &jb);
    let left: Vec<Matrix> = sec.iter().map(|s| big.left_mult(s)).collect();
    let right: Vec<Matrix> = sec.iter().map(|s| big.right_mult(s)).collect();
    let conormal = subquotient_bimodule(&a, &conormal_sq, &left, &right, "c")?;

    let ia_big = multiplication_kernel(big).inclusion.sparse_columns();
    let mut rel = Vec::new();
    for x in &jb {
        let lx = big.left_mult(x).kron(&id);
        let rx = id.kron(&big.right_mult(x));
        for z in &ia_big {
            rel.push(lx.mul_sparse(z));
            rel.push(rx.mul_sparse(z));
        }
    }
    let middle_sq = Subquotient::new(dd * dd, &rel, &ia_big);
    let left: Vec<Matrix> = sec.iter().map(|s| big.left_mult(s).kron(&id)).collect();
    let right: Vec<Matrix> = sec.iter().map(|s| id.kron(&big.right_mult(s))).collect();
    let middle = subquotient_bimodule(&a, &middle_sq, &left, &right, "n")?;

    let one = big.unit().clone();
    let mut d_cols = Vec::with_capacity(conormal_sq.dim());
    for r in conormal_sq.reps() {
        let v = sv_axpy(&tensor_vec(r, &one, dd), &int(-1), &tensor_vec(&one, r, dd));
        d_cols.push(coords_or_err(&middle_sq, &v, "j ⊗ 1 - 1 ⊗ j left I_A")?);
    }
    let d = Matrix::from_sparse_columns(middle_sq.dim(), &d_cols);

    let ia = multiplication_kernel(&a);
    let ia_solver = Solver::new(&ia.inclusion);
    let pp = q.projection.kron(&q.projection);
    let mut g_cols = Vec::with_capacity(middle_sq.dim());
    for r in middle_sq.reps() {
        let v = pp.mul_sparse(r);
        g_cols.push(ia_solver.solve(&v).ok_or_else(|| Error::Invalid {
            what: "π ⊗ π does not land in I_a".into(),
        })?);
    }
    let g = Matrix::from_sparse_columns(ia.dim(), &g_cols);
    Ok(CqSequence {
        quotient: a,
        projection: q.projection,
        conormal,
        middle,
        ia,
        d,
        g,
        conormal_sq,
        middle_sq,
    })
}

impl CqSequence {
    pub fn report(&self) -> ConormalReport {
        let rd = self.d.rank();
        let rg = self.g.rank();
        let ia = self.ia.to_bimodule();
        ConormalReport {
            d_injective: rd == self.conormal.dim(),
            exact_middle: self.g.mul(&self.d).is_zero() && rd + rg == self.middle.dim(),
            g_surjective: rg == self.ia.dim(),
            bimodule_maps: self.conormal.is_bimodule_map(&self.d, &self.middle)
                && self.middle.is_bimodule_map(&self.g, &ia),
        }
    }

    /// Class in `J / J^2` of an element of `J`.
    pub fn conormal_class(&self, v: &SparseVec) -> Option<SparseVec> {
        self.conormal_sq.coords(v)
    }

    /// Class in the middle term of an element of `I_A`.
    pub fn middle_class(&self, v: &SparseVec) -> Option<SparseVec> {
        self.middle_sq.coords(v)
    }

    /// The conormal sequence spliced with `0 -> I_a -> a ⊗ a -> a -> 0`.
    pub fn diag(&self) -> FourTermSequence {
        let a = &self.quotient;
        let dd = self.projection.ncols();
        let pp = self.projection.kron(&self.projection);
        let u = pp.mul(&Matrix::from_sparse_columns(dd * dd, self.middle_sq.reps()));
        FourTermSequence {
            m: self.conormal.clone(),
            e1: self.middle.clone(),
            e0: Bimodule::outer_tensor(a),
            q: Bimodule::regular(a),
            iota: self.d.clone(),
            u,
            p: a.mult_matrix(),
        }
    }
}

/// Outcome of comparing the two sequences attached to a first-order deformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceComparison {
    /// Every vertical map is invertible.
    pub isomorphisms: bool,
    /// Every square commutes.
    pub commutes: bool,
    /// Every vertical map intertwines the actions along `a -> A / J`.
    pub equivariant: bool,
}

impl SequenceComparison {
    pub fn holds(&self) -> bool {
        self.isomorphisms && self.commutes && self.equivariant
    }
}

/// Compares the sequence of [`sequence_ia`] with the spliced conormal sequence
/// of `A -> A / J`, `J` the span of all `e_i t^μ` with `μ ≠ 1`.
///
/// The vertical maps are `a ⊗ t -> [t a]`, the identity of representatives on
/// the middle term, and the identification `a ≅ A / J` on the remaining terms.
pub fn compare_with_conormal(d: &StarDeformation) -> Result<(FourTermSequence, CqSequence, SequenceComparison)> {
    let IaData { seq, big, k } = build_ia(d)?;
    let a = d.algebra();
    let da = a.dim();
    let dd = big.dim();
    let j = Matrix::from_triplets(dd, dd - da, (da..dd).map(|r| (r, r - da, int(1))));
    let cq = cq_sequence(&big, &j)?;
    let diag = cq.diag();
    let alpha = cq.projection.mul(&constant_block(d));

    let mut phi_m = Vec::with_capacity(seq.m.dim());
    for jj in 0..d.nparams() {
        let mu = d.ring().linear(jj);
        for i in 0..da {
            let v = big.mul(&basis_vector(d.index(i, mu)), big.unit());
            phi_m.push(cq.conormal_class(&v).ok_or_else(|| Error::Invalid {
                what: "a ⊗ t does not land in J".into(),
            })?);
        }
    }
    let phi_m = Matrix::from_sparse_columns(diag.m.dim(), &phi_m);
    let phi_e1 = cq.middle_sq.coords_matrix(k.reps()).ok_or_else(|| Error::Invalid {
        what: "representatives of K leave I_A".into(),
    })?;
    let phi_e0 = alpha.kron(&alpha);
    let verticals = [
        (&phi_m, &seq.m, &diag.m),
        (&phi_e1, &seq.e1, &diag.e1),
        (&phi_e0, &seq.e0, &diag.e0),
        (&alpha, &seq.q, &diag.q),
    ];

    let isomorphisms = verticals
        .iter()
        .all(|(f, _, _)| f.nrows() == f.ncols() && f.rank() == f.ncols());
    let commutes = phi_e1.mul(&seq.iota) == diag.iota.mul(&phi_m)
        && phi_e0.mul(&seq.u) == diag.u.mul(&phi_e1)
        && alpha.mul(&seq.p) == diag.p.mul(&phi_e0);
    let alpha_cols = alpha.sparse_columns();
    let equivariant = verticals.iter().all(|(f, src, dst)| {
        (0..da).all(|i| {
            f.mul(src.left_action(i)) == dst.left_elem(&alpha_cols[i]).mul(f)
                && f.mul(src.right_action(i)) == dst.right_elem(&alpha_cols[i]).mul(f)
        })
    });
    Ok((
        seq,
        cq,
        SequenceComparison {
            isomorphisms,
            commutes,
            equivariant,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{deform_class, deformation_preset, Ext2Context};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dual_numbers_sequence_recovers_class() {
        let d = deformation_preset("dual_numbers", 1).unwrap();
        let s = sequence_ia(&d).unwrap();
        assert!(s.report().holds(), "{:?}", s.report());
        let f = s.ext2_cocycle(None).unwrap();
        // x ⋆ x = t gives f(x, x) = 1 ⊗ t
        assert_eq!(f.value(&[1, 1]), &vec![(0, int(1))]);
        let ctx = Ext2Context::new(d.algebra(), 1).unwrap();
        assert_eq!(ctx.class_of(&f).unwrap().class, deform_class(&ctx, &d).unwrap().class);
    }

    #[test]
    fn random_lifts_give_the_same_class() {
        let d = deformation_preset("clifford", 1).unwrap();
        let s = sequence_ia(&d).unwrap();
        assert!(s.report().holds());
        let ctx = Ext2Context::new(d.algebra(), 2).unwrap();
        let expected = deform_class(&ctx, &d).unwrap().class;
        for seed in 0..3u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = s.ext2_cocycle(Some(&mut rng)).unwrap();
            assert_eq!(ctx.class_of(&f).unwrap().class, expected, "seed {seed}");
        }
    }

    #[test]
    fn conormal_comparison_holds() {
        for name in ["dual_numbers", "clifford", "trivial"] {
            let d = deformation_preset(name, 1).unwrap();
            let (_, cq, cmp) = compare_with_conormal(&d).unwrap();
            assert!(cmp.holds(), "{name}: {cmp:?}");
            assert!(cq.report().holds(), "{name}");
            assert!(cq.diag().report().holds(), "{name}");
        }
    }

    #[test]
    fn conormal_sequences_of_truncations_are_exact() {
        for (m, conormal_dim) in [(3, 1), (4, 2)] {
            let big = crate::algebra::preset_catalog("truncated_poly", &[m]).unwrap();
            let j = Matrix::from_triplets(m, m - 2, (2..m).map(|r| (r, r - 2, int(1))));
            let cq = cq_sequence(&big, &j).unwrap();
            assert!(cq.report().holds(), "{m}: {:?}", cq.report());
            assert!(cq.diag().report().holds(), "{m}");
            assert_eq!(cq.conormal.dim(), conormal_dim);
        }
    }
}
