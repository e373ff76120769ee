//! The exterior dg-algebra `Λ = ∧(T*[1])`, its Koszul resolution of `k_∧`, the
//! action of `Sym(T[-2])` by contraction operators and `Ext_Λ(k_∧, k_∧)`.

mod exterior;
mod resolution;

pub use exterior::{lambda_element_action, ExteriorDg, LambdaModule};
pub use resolution::{ext_lambda, ExtLambda, HomComplex, KoszulReport, KoszulResolution};

use crate::error::{Error, Result};
use crate::linalg::{int, Matrix, Solver, SparseVec};

/// Checks on the contraction operators `s_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymActionReport {
    /// Each `s_j` is a `Λ`-linear chain map of degree 2.
    pub chain_maps: bool,
    /// `s_j s_k = s_k s_j` entrywise.
    pub commute: bool,
    /// Rank of the induced map `T -> Ext^2_Λ(k_∧, k_∧)`.
    pub ext2_rank: usize,
    pub ext2_dim: usize,
}

impl SymActionReport {
    pub fn holds(&self) -> bool {
        self.chain_maps && self.commute && self.ext2_rank == self.ext2_dim
    }
}

pub fn check_sym_action(k: &KoszulResolution) -> Result<SymActionReport> {
    let n = k.nparams();
    let m = k.module();
    let ops: Vec<Matrix> = (0..n).map(|j| k.sym_operator(j)).collect();
    let chain_maps = ops.iter().all(|s| m.is_chain_map(s, m, 2));
    let commute = (0..n).all(|i| (i..n).all(|j| ops[i].mul(&ops[j]) == ops[j].mul(&ops[i])));
    let hom = k.hom(&LambdaModule::residue_field(n))?;
    let classes = (0..n)
        .map(|j| hom.class_of(&k.koszul_cochain(&hom, &[j]), 2))
        .collect::<Result<Vec<SparseVec>>>()?;
    let ext2 = hom.cohomology(2)?;
    Ok(SymActionReport {
        chain_maps,
        commute,
        ext2_rank: Matrix::from_sparse_columns(ext2.dim, &classes).rank(),
        ext2_dim: ext2.dim,
    })
}

/// For all `j <= k`, whether the class of `ε s_j s_k` equals the Yoneda product of the
/// classes of `ε s_j` and `ε s_k`.
pub fn check_multiplicativity(k: &KoszulResolution) -> Result<bool> {
    if k.depth() < 3 {
        return Err(Error::DepthTooSmall {
            depth: k.depth(),
            needed: 3,
        });
    }
    let n = k.nparams();
    let hom = k.hom(&LambdaModule::residue_field(n))?;
    for i in 0..n {
        for j in i..n {
            let fi = k.koszul_cochain(&hom, &[i]);
            let fj = k.koszul_cochain(&hom, &[j]);
            let prod = k.yoneda(&hom, &fi, 2, &fj, 2)?;
            let direct = k.koszul_cochain(&hom, &[i, j]);
            if hom.class_of(&prod, 4)? != hom.class_of(&direct, 4)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `0 -> T*[1] -> Λ/Λ_{<-1} -> k_∧ -> 0`.
#[derive(Clone, Debug)]
pub struct WedgeExtension {
    pub sub: LambdaModule,
    pub middle: LambdaModule,
    pub quotient: LambdaModule,
    pub inclusion: Matrix,
    pub projection: Matrix,
}

pub fn delta_wedge(n: usize) -> WedgeExtension {
    let inclusion = Matrix::from_triplets(n + 1, n, (0..n).map(|j| (j + 1, j, int(1))));
    let projection = Matrix::from_triplets(1, n + 1, [(0, 0, int(1))]);
    WedgeExtension {
        sub: LambdaModule::shifted_dual(n),
        middle: LambdaModule::truncated_quotient(n),
        quotient: LambdaModule::residue_field(n),
        inclusion,
        projection,
    }
}

impl WedgeExtension {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.sub.dim(), self.middle.dim(), self.quotient.dim())
    }

    /// Exact with both maps `Λ`-linear chain maps.
    pub fn is_exact(&self) -> bool {
        let ri = self.inclusion.rank();
        let rp = self.projection.rank();
        ri == self.sub.dim()
            && self.projection.mul(&self.inclusion).is_zero()
            && ri + rp == self.middle.dim()
            && rp == self.quotient.dim()
            && self.sub.is_chain_map(&self.inclusion, &self.middle, 0)
            && self.middle.is_chain_map(&self.projection, &self.quotient, 0)
    }

    /// `∂_∧` as a cocycle in `Hom^1_Λ(K, T*[1])`.
    ///
    /// With `F` the `Λ`-linear lift of `ε` sending `g_0` to a preimage of `1` and the
    /// other generators to 0, the cocycle is `ι^{-1}(F d_K - d F)`.
    pub fn boundary_cochain(&self, k: &KoszulResolution, hom: &HomComplex) -> Result<SparseVec> {
        let n = k.nparams();
        let not_exact = || Error::ExactnessFailure {
            spot: "Λ/Λ_{<-1}".into(),
            what: "lift does not exist".into(),
        };
        let one = Solver::new(&self.projection)
            .solve(&vec![(0, int(1))])
            .ok_or_else(not_exact)?;
        let incl = Solver::new(&self.inclusion);
        let gens = k.generators();
        let mut values: Vec<SparseVec> = vec![Vec::new(); gens.dim()];
        for j in 0..n {
            let v = self.middle.theta(j).mul_sparse(&one);
            values[gens.linear(j)] = incl.solve(&v).ok_or_else(not_exact)?;
        }
        Ok(hom.cochain_from_fn(|a| values[a].clone()))
    }

    /// `koszul(Id_T) = Σ_j (ε s_j) ⊗ θ_j` in `Hom^1_Λ(K, T*[1])`.
    pub fn koszul_identity(&self, k: &KoszulResolution, hom: &HomComplex) -> SparseVec {
        let gens = k.generators();
        hom.cochain_from_fn(|a| {
            (0..k.nparams())
                .find(|&j| gens.linear(j) == a)
                .map(|j| vec![(j, int(1))])
                .unwrap_or_default()
        })
    }

    /// Whether `koszul(Id_T)` and `∂_∧` define the same class.
    pub fn koszul_matches_boundary(&self, k: &KoszulResolution) -> Result<bool> {
        let hom = k.hom(&self.sub)?;
        let b = self.boundary_cochain(k, &hom)?;
        let kz = self.koszul_identity(k, &hom);
        Ok(hom.class_of(&b, 1)? == hom.class_of(&kz, 1)?)
    }
}
