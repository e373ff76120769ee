use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::resolution::{build_resolution, ra_tensor_ra_oriented, theta, ResolutionRa, ThetaModule};
use crate::deformation::{deform_class, Ext2Context, ExtClass2, StarDeformation};
use crate::error::{Error, Result};
use crate::hochschild::HochschildCochain;
use crate::koszul::KoszulResolution;
use crate::linalg::{
    int, rank_kernel_image, span_basis, sv_axpy, sv_collect, Matrix, Rational, Solver, SparseVec, Subquotient,
};

/// The contraction operators `s_j` on the Koszul resolution, pushed through `Θ`
/// and read off as classes in `HH^2(a)` through the bar resolution of `Ra`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalityReport {
    pub nparams: usize,
    pub order: usize,
    pub depth: usize,
    pub dims: BTreeMap<String, usize>,
    /// `H^k(Θ(K))` for `k = -2, -1, 0`.
    pub window: BTreeMap<i32, usize>,
    /// `Θ(s_j)` commute with the differential.
    pub chain_maps: bool,
    /// `Θ(s_j)` commute with both `Ra`-actions.
    pub bimodule_maps: bool,
    /// `Θ(s_i) Θ(s_j) = Θ(s_j) Θ(s_i)`.
    pub commute: bool,
    /// Nonzero entries of each commutator `[Θ(s_i), Θ(s_j)]`, `i < j`.
    pub commutator_nnz: Vec<(usize, usize, usize)>,
    /// Coordinates of the lifted class for each `j` in the normalized basis of `HH^2(a)`.
    pub lifted: Vec<SparseVec>,
    /// Coordinates of `β_j` in the same basis.
    pub expected: Vec<SparseVec>,
    pub agrees: Vec<bool>,
    /// A second, randomized choice of lifts gives the same classes.
    pub lift_independent: bool,
    pub class_rank: usize,
    pub class: ExtClass2,
    pub deformation_class: ExtClass2,
}

impl FormalityReport {
    pub fn holds(&self) -> bool {
        self.chain_maps
            && self.bimodule_maps
            && self.commute
            && self.agrees.iter().all(|&b| b)
            && self.lift_independent
            && self.class.class == self.deformation_class.class
    }
}

struct Lifts {
    z_part: Vec<SparseVec>,
    pairs: Vec<SparseVec>,
}

struct Solvers<'a> {
    th: &'a ThetaModule,
    d: &'a Matrix,
    by_degree: BTreeMap<i32, Vec<usize>>,
    solve: BTreeMap<i32, Solver>,
    cycles: Matrix,
}

impl<'a> Solvers<'a> {
    fn new(th: &'a ThetaModule) -> Self {
        let d = th.module.differential();
        let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, &k) in th.module.degrees().iter().enumerate() {
            by_degree.entry(k).or_default().push(i);
        }
        let cols = |k: i32| d.select_columns(by_degree.get(&k).map(Vec::as_slice).unwrap_or(&[]));
        let solve = [-2, -1].into_iter().map(|k| (k, Solver::new(&cols(k)))).collect();
        let cycles = rank_kernel_image(&cols(-2)).kernel;
        Solvers {
            th,
            d,
            by_degree,
            solve,
            cycles,
        }
    }

    /// `Y` of degree `k` with `dY = b`.
    fn primitive(&self, k: i32, b: &SparseVec, spot: &str) -> Result<SparseVec> {
        let local = self.solve[&k].solve(b).ok_or_else(|| Error::ExactnessFailure {
            spot: spot.into(),
            what: format!("no primitive in degree {k}"),
        })?;
        let idx = &self.by_degree[&k];
        Ok(sv_collect(local.into_iter().map(|(i, c)| (idx[i], c))))
    }

    fn random_boundary(&self, rng: &mut ChaCha8Rng) -> SparseVec {
        let idx = self.by_degree.get(&-2).map(Vec::as_slice).unwrap_or(&[]);
        let r: SparseVec = sv_collect(idx.iter().map(|&i| (i, small(rng))));
        self.d.mul_sparse(&r)
    }

    fn random_cycle(&self, rng: &mut ChaCha8Rng) -> SparseVec {
        let idx = &self.by_degree[&-2];
        let coeffs: SparseVec = sv_collect((0..self.cycles.ncols()).map(|i| (i, small(rng))));
        let local = self.cycles.mul_sparse(&coeffs);
        sv_collect(local.into_iter().map(|(i, c)| (idx[i], c)))
    }
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    int(rng.gen_range(-3..=3))
}

/// Lifts of the bar resolution of `Ra` into `Θ(K)` on `1[x]1`, `1[z]1` and `1[x|y]1`
/// for `x, y` in `A = Ra^0` and `z` in `Ra^{-1}`.
fn lift(res: &ResolutionRa, s: &Solvers, sigma: &SparseVec, mut rng: Option<&mut ChaCha8Rng>) -> Result<Lifts> {
    let ra = res.algebra();
    let th = &s.th.module;
    let a0 = ra.of_degree(0);
    let z1 = ra.of_degree(-1);
    let local0: BTreeMap<usize, usize> = a0.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let act_l = |x: usize, v: &SparseVec| th.left(x).mul_sparse(v);
    let act_r = |v: &SparseVec, x: usize| th.right(x).mul_sparse(v);
    let through = |f: &[SparseVec], v: &SparseVec| -> SparseVec {
        v.iter().fold(Vec::new(), |acc, (i, c)| sv_axpy(&acc, c, &f[local0[i]]))
    };
    let mut a_part = Vec::with_capacity(a0.len());
    for &x in &a0 {
        let b = sv_axpy(&act_l(x, sigma), &int(-1), &act_r(sigma, x));
        let mut y = s.primitive(-1, &b, "F1 on A")?;
        if let Some(r) = rng.as_deref_mut() {
            y = sv_axpy(&y, &int(1), &s.random_boundary(r));
        }
        a_part.push(y);
    }
    let mut z_part = Vec::with_capacity(z1.len());
    for &z in &z1 {
        let b = sv_axpy(&act_l(z, sigma), &int(-1), &act_r(sigma, z));
        let b = sv_axpy(&b, &int(-1), &through(&a_part, &ra.d_of(z)));
        let mut y = s.primitive(-2, &b, "F1 on Ra^-1")?;
        if let Some(r) = rng.as_deref_mut() {
            y = sv_axpy(&y, &int(1), &s.random_cycle(r));
        }
        z_part.push(y);
    }
    let mut pairs = Vec::with_capacity(a0.len() * a0.len());
    for &x in &a0 {
        for (ky, &y) in a0.iter().enumerate() {
            let b = act_l(x, &a_part[ky]);
            let b = sv_axpy(&b, &int(-1), &through(&a_part, ra.product(x, y)));
            let b = sv_axpy(&b, &int(1), &act_r(&a_part[local0[&x]], y));
            let mut v = s.primitive(-2, &b, "F2 on A ⊗ A")?;
            if let Some(r) = rng.as_deref_mut() {
                v = sv_axpy(&v, &int(1), &s.random_cycle(r));
            }
            pairs.push(v);
        }
    }
    Ok(Lifts { z_part, pairs })
}

/// Cochain vector from lifts and a map `Θ(K) -> a` of degree 2.
fn cochain(l: &Lifts, read: &Matrix, da: usize) -> SparseVec {
    let mut out = Vec::new();
    for (k, v) in l.pairs.iter().chain(l.z_part.iter()).enumerate() {
        out.extend(read.mul_sparse(v).into_iter().map(|(o, c)| (k * da + o, c)));
    }
    out
}

/// The Hochschild complex of `Ra` with values in `a` (through `p`) in degree 2,
/// restricted to `A ⊗ A` and `Ra^{-1}`: its coboundaries and the pullbacks `p^*ξ`.
struct PullbackComplex {
    na0: usize,
    nz: usize,
    da: usize,
    px: Vec<SparseVec>,
}

impl PullbackComplex {
    fn new(res: &ResolutionRa) -> Self {
        let ra = res.algebra();
        let a0 = ra.of_degree(0);
        let p = res.augmentation().sparse_columns();
        PullbackComplex {
            na0: a0.len(),
            nz: ra.of_degree(-1).len(),
            da: res.base_dim(),
            px: a0.iter().map(|&x| p[x].clone()).collect(),
        }
    }

    fn ambient(&self) -> usize {
        (self.na0 * self.na0 + self.nz) * self.da
    }

    fn coboundaries(&self, res: &ResolutionRa) -> Vec<SparseVec> {
        let ra = res.algebra();
        let a = res.deformation().algebra();
        let a0 = ra.of_degree(0);
        let z1 = ra.of_degree(-1);
        let local0: BTreeMap<usize, usize> = a0.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let (na0, da) = (self.na0, self.da);
        let mut out = Vec::new();
        for lx in 0..na0 {
            for o in 0..da {
                let eo = vec![(o, int(1))];
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                let mut add = |k: usize, v: &SparseVec, c: &Rational| {
                    for (i, x) in v {
                        *acc.entry(k * da + i).or_insert_with(|| int(0)) += x * c;
                    }
                };
                for x in 0..na0 {
                    add(x * na0 + lx, &a.mul(&self.px[x], &eo), &int(1));
                    add(lx * na0 + x, &a.mul(&eo, &self.px[x]), &int(1));
                    for y in 0..na0 {
                        for (k, c) in ra.product(a0[x], a0[y]) {
                            if local0[k] == lx {
                                add(x * na0 + y, &eo, &-c);
                            }
                        }
                    }
                }
                for (kz, &z) in z1.iter().enumerate() {
                    for (k, c) in ra.d_of(z) {
                        if local0[&k] == lx {
                            add(na0 * na0 + kz, &eo, &-c.clone());
                        }
                    }
                }
                out.push(sv_collect(acc));
            }
        }
        out
    }

    fn pullback(&self, xi: &HochschildCochain) -> SparseVec {
        let mut out = Vec::new();
        for x in 0..self.na0 {
            for y in 0..self.na0 {
                let mut v = Vec::new();
                for (i, c) in &self.px[x] {
                    for (k, e) in &self.px[y] {
                        v = sv_axpy(&v, &(c * e), xi.value(&[*i, *k]));
                    }
                }
                out.extend(v.into_iter().map(|(o, c)| ((x * self.na0 + y) * self.da + o, c)));
            }
        }
        out
    }
}

pub fn formality_lift(d: &StarDeformation, depth: usize, seed: u64) -> Result<FormalityReport> {
    formality_lift_oriented(d, depth, seed, &int(1))
}

fn formality_lift_oriented(d: &StarDeformation, depth: usize, seed: u64, c: &Rational) -> Result<FormalityReport> {
    if depth < 2 {
        return Err(Error::DepthTooSmall { depth, needed: 2 });
    }
    let n = d.nparams();
    let a = d.algebra();
    let da = a.dim();
    let res = build_resolution(d)?;
    let x = ra_tensor_ra_oriented(&res, c)?;
    let kz = KoszulResolution::new(n, depth)?;
    let th = theta(&res, &x, kz.module())?;
    let coh = th.module.cohomology_dims()?;
    let window: BTreeMap<i32, usize> = (-2..=0).map(|k| (k, coh.get(&k).copied().unwrap_or(0))).collect();
    if window != BTreeMap::from([(-2, 0), (-1, 0), (0, da)]) {
        return Err(Error::WindowExceeded {
            what: format!(
                "H^-2..0 of Θ(K) is {window:?}, the weight cap {} is too small",
                d.order()
            ),
        });
    }
    let ops: Vec<Matrix> = (0..n).map(|j| th.induce(&kz.sym_operator(j))).collect::<Result<_>>()?;
    let m = &th.module;
    let chain_maps = ops.iter().all(|s| s.mul(m.differential()) == m.differential().mul(s));
    let gens = res.generators();
    let bimodule_maps = ops.iter().all(|s| {
        gens.iter()
            .all(|&g| s.mul(m.left(g)) == m.left(g).mul(s) && s.mul(m.right(g)) == m.right(g).mul(s))
    });
    let mut commutator_nnz = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            commutator_nnz.push((i, j, ops[i].mul(&ops[j]).sub(&ops[j].mul(&ops[i])).nnz()));
        }
    }
    let commute = commutator_nnz.iter().all(|c| c.2 == 0);

    let pi = th.to_ra(&x, &kz.augmentation());
    let read_base = res.augmentation().mul(&pi);
    let one = res.algebra().unit().clone();
    let sigma = th.element(&x.element(&one, &one), kz.flat_index(0, 0));
    let solvers = Solvers::new(&th);
    let first = lift(&res, &solvers, &sigma, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let second = lift(&res, &solvers, &sigma, Some(&mut rng))?;

    let pc = PullbackComplex::new(&res);
    let cob = pc.coboundaries(&res);
    let basis = Ext2Context::new(a, 1)?.normalized_basis().to_vec();
    let pulled: Vec<SparseVec> = basis.iter().map(|xi| pc.pullback(xi)).collect();
    let mut upper = cob.clone();
    upper.extend(pulled.iter().cloned());
    let sub = Subquotient::new(pc.ambient(), &cob, &upper);
    let to_xi = sub.coords_matrix(&pulled).ok_or_else(|| Error::Invalid {
        what: "pullbacks of HH^2(a) do not lie in the class space".into(),
    })?;
    let to_xi = Solver::new(&to_xi);
    let in_basis = |v: &SparseVec| -> Option<SparseVec> { sub.coords(v).and_then(|c| to_xi.solve(&c)) };

    let mut lifted = Vec::with_capacity(n);
    let mut expected = Vec::with_capacity(n);
    let mut agrees = Vec::with_capacity(n);
    let mut lift_independent = true;
    let mut reps = Vec::with_capacity(n);
    for (j, s) in ops.iter().enumerate() {
        let read = read_base.mul(s);
        let c1 = cochain(&first, &read, da);
        let c2 = cochain(&second, &read, da);
        let beta = d.beta(d.ring().linear(j));
        let want = in_basis(&pc.pullback(&beta));
        let got = in_basis(&c1);
        lift_independent &= got.is_some() && got == in_basis(&c2);
        agrees.push(got.is_some() && got == want);
        let coords = got.unwrap_or_default();
        let rep = coords.iter().fold(HochschildCochain::zero(2, da, da), |acc, (i, c)| {
            acc.axpy(c, &basis[*i])
        });
        reps.push(rep);
        lifted.push(coords);
        expected.push(want.unwrap_or_default());
    }
    let ctx = Ext2Context::new(a, n)?;
    let class = if n == 0 {
        ctx.class_of(&HochschildCochain::zero(2, da, 0))?
    } else {
        ctx.class_of(&HochschildCochain::from_components(&reps))?
    };
    let dims = BTreeMap::from([
        ("Ra".to_string(), res.algebra().dim()),
        ("Ra⊗_A Ra".to_string(), x.dim()),
        ("K".to_string(), kz.module().dim()),
        ("Θ(K)".to_string(), th.dim()),
    ]);
    Ok(FormalityReport {
        nparams: n,
        order: d.order(),
        depth,
        dims,
        window,
        chain_maps,
        bimodule_maps,
        commute,
        commutator_nnz,
        class_rank: span_basis(basis.len(), &lifted).len(),
        lifted,
        expected,
        agrees,
        lift_independent,
        class,
        deformation_class: deform_class(&ctx, d)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::deformation_preset;

    #[test]
    fn first_order_deformations_recover_their_classes() {
        for name in ["dual_numbers", "clifford"] {
            let d = deformation_preset(name, 1).unwrap();
            let rep = formality_lift(&d, 2, 3).unwrap();
            assert!(rep.holds(), "{name}: {rep:?}");
            assert_eq!(rep.class_rank, d.nparams());
        }
    }

    #[test]
    fn shallow_depth_is_rejected() {
        let d = deformation_preset("dual_numbers", 2).unwrap();
        assert!(matches!(
            formality_lift(&d, 1, 0),
            Err(Error::DepthTooSmall { depth: 1, needed: 2 })
        ));
    }

    #[test]
    fn orientation_flip_negates_contractions() {
        let kz = KoszulResolution::new(2, 3).unwrap();
        let m = kz.module();
        let l = 1usize << 2;
        let phi = Matrix::from_triplets(
            m.dim(),
            m.dim(),
            (0..m.dim()).map(|i| {
                let w = kz.generators().degree(i / l) + (i % l).count_ones() as usize;
                (i, i, crate::linalg::sign(w as i64))
            }),
        );
        assert_eq!(phi.mul(m.differential()), m.differential().mul(&phi));
        for j in 0..2 {
            assert_eq!(phi.mul(m.theta(j)), m.theta(j).mul(&phi).scale(&int(-1)));
            let s = kz.sym_operator(j);
            assert_eq!(phi.mul(&s).mul(&phi), s.scale(&int(-1)));
        }
    }

    #[test]
    fn opposite_orientation_negates_the_class() {
        let d = deformation_preset("dual_numbers", 2).unwrap();
        let rep = formality_lift_oriented(&d, 2, 0, &int(-1)).unwrap();
        assert!(rep.chain_maps && rep.commute && rep.lift_independent);
        assert_eq!(rep.lifted[0], crate::linalg::sv_scale(&rep.expected[0], &int(-1)));
        assert!(!rep.holds());
        let rep = formality_lift_oriented(&d, 2, 0, &crate::linalg::rat(1, 3)).unwrap();
        assert_eq!(rep.lifted[0], crate::linalg::sv_scale(&rep.expected[0], &int(3)));
    }

    #[test]
    fn presets_recover_their_classes() {
        for name in ["trivial", "dual_numbers", "clifford"] {
            let d = deformation_preset(name, 2).unwrap();
            let rep = formality_lift(&d, 2, 7).unwrap();
            assert!(rep.holds(), "{name}: {rep:?}");
            assert_eq!(rep.window[&0], d.algebra().dim());
        }
    }
}
