use std::collections::HashMap;

use super::exterior::{ExteriorDg, LambdaModule};
use crate::deformation::BaseRing;
use crate::error::{Error, Result};
use crate::linalg::{int, sv_axpy, CochainComplex, Cohomology, FlatIndex, Matrix, Solver, SparseVec};

/// Koszul resolution `K -> k_∧` truncated at depth `H`.
///
/// `K_{-i} = Λ ⊗ Sym^i(T)*` is free over `Λ` on generators `g_α`, `|α| = i`,
/// of degree `-2|α|`, with `d(θ_S g_α) = Σ_j θ_j θ_S g_{α - e_j}`. The flat index of
/// `θ_S g_α` is `α * 2^n + S`.
#[derive(Clone, Debug)]
pub struct KoszulResolution {
    n: usize,
    depth: usize,
    gens: BaseRing,
    module: LambdaModule,
}

/// Ranks and homology of the resolution by homological degree `i = 0..=H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulReport {
    pub ranks: Vec<usize>,
    pub homology: Vec<usize>,
    pub d_squared_zero: bool,
}

impl KoszulReport {
    /// `H_0 = k` and no homology strictly between `0` and the depth.
    pub fn is_resolution(&self) -> bool {
        let h = self.homology.len() - 1;
        self.d_squared_zero && self.homology[0] == 1 && (1..h).all(|i| self.homology[i] == 0)
    }
}

impl KoszulResolution {
    pub fn new(n: usize, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::DepthTooSmall { depth, needed: 1 });
        }
        let lam = ExteriorDg::new(n);
        let gens = BaseRing::with_labels((1..=n).map(|j| format!("y{j}")).collect(), depth);
        let l = lam.dim();
        let dim = gens.dim() * l;
        let mut labels = Vec::with_capacity(dim);
        let mut degrees = Vec::with_capacity(dim);
        for a in 0..gens.dim() {
            for s in 0..l {
                labels.push(format!("{}⊗{}", lam.label(s), gens.monomial_label(a)));
                degrees.push(lam.degree(s) - 2 * gens.degree(a) as i32);
            }
        }
        let mut d = Vec::new();
        let mut theta: Vec<Vec<(usize, usize, crate::linalg::Rational)>> = vec![Vec::new(); n];
        for a in 0..gens.dim() {
            for s in 0..l {
                let col = a * l + s;
                for j in 0..n {
                    if let Some((u, c)) = lam.mul(1 << j, s) {
                        theta[j].push((a * l + u, col, c.clone()));
                        if let Some(b) = lower(&gens, a, j) {
                            d.push((b * l + u, col, c));
                        }
                    }
                }
            }
        }
        let module = LambdaModule::new(
            labels,
            degrees,
            Matrix::from_triplets(dim, dim, d),
            theta.into_iter().map(|t| Matrix::from_triplets(dim, dim, t)).collect(),
        )?;
        Ok(KoszulResolution { n, depth, gens, module })
    }

    pub fn nparams(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn module(&self) -> &LambdaModule {
        &self.module
    }

    /// Exponent vectors of the generators, ordered by total degree.
    pub fn generators(&self) -> &BaseRing {
        &self.gens
    }

    pub fn flat_index(&self, alpha: usize, s: usize) -> usize {
        alpha * (1 << self.n) + s
    }

    /// Generators `α` with `|α| = i`.
    pub fn generators_of_weight(&self, i: usize) -> Vec<usize> {
        self.gens.of_degree(i)
    }

    /// Flat indices of `K_{-i}`.
    pub fn component(&self, i: usize) -> Vec<usize> {
        let l = 1 << self.n;
        self.gens
            .of_degree(i)
            .into_iter()
            .flat_map(|a| (0..l).map(move |s| a * l + s))
            .collect()
    }

    /// `K_{-H} -> .. -> K_0` as a complex of graded vector spaces in degrees `-i`.
    pub fn homological_complex(&self) -> Result<CochainComplex> {
        let mut spaces = crate::linalg::GradedSpace::new();
        let mut diffs = std::collections::BTreeMap::new();
        for i in 0..=self.depth {
            spaces.set_dim(-(i as i32), self.component(i).len());
            if i >= 1 {
                let m = self
                    .module
                    .differential()
                    .select_rows(&self.component(i - 1))
                    .select_columns(&self.component(i));
                diffs.insert(-(i as i32), m);
            }
        }
        CochainComplex::new(spaces, diffs)
    }

    pub fn report(&self) -> Result<KoszulReport> {
        let c = self.homological_complex()?;
        let l = 1usize << self.n;
        let d = self.module.differential();
        Ok(KoszulReport {
            ranks: (0..=self.depth).map(|i| self.component(i).len() / l).collect(),
            homology: (0..=self.depth)
                .map(|i| c.cohomology(-(i as i32)).map(|h| h.dim))
                .collect::<Result<_>>()?,
            d_squared_zero: d.mul(d).is_zero(),
        })
    }

    /// `K -> k_∧`, the coefficient of `1 ⊗ g_0`.
    pub fn augmentation(&self) -> Matrix {
        Matrix::from_triplets(1, self.module.dim(), [(0, 0, int(1))])
    }

    /// Contraction `s_j(θ_S g_α) = θ_S g_{α - e_j}`, a degree-2 chain operator.
    pub fn sym_operator(&self, j: usize) -> Matrix {
        let l = 1 << self.n;
        let dim = self.module.dim();
        let mut entries = Vec::new();
        for a in 0..self.gens.dim() {
            if let Some(b) = lower(&self.gens, a, j) {
                for s in 0..l {
                    entries.push((b * l + s, a * l + s, int(1)));
                }
            }
        }
        Matrix::from_triplets(dim, dim, entries)
    }

    /// `Hom_Λ(K, target)`.
    pub fn hom(&self, target: &LambdaModule) -> Result<HomComplex> {
        HomComplex::new(self, target)
    }

    /// `Ext^j_Λ(k_∧, k_∧)` for `j ≤ max_degree`, within the window `max_degree ≤ 2H - 2`.
    pub fn ext_self(&self, max_degree: usize) -> Result<ExtLambda> {
        if max_degree + 2 > 2 * self.depth {
            return Err(Error::WindowExceeded {
                what: format!(
                    "Ext up to degree {max_degree} needs depth at least {}, have {}",
                    max_degree.div_ceil(2) + 1,
                    self.depth
                ),
            });
        }
        let hom = self.hom(&LambdaModule::residue_field(self.n))?;
        let groups = (0..=max_degree as i32)
            .map(|p| hom.cohomology(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtLambda { hom, groups })
    }

    /// `ε ∘ s_{j1} ∘ .. ∘ s_{jk}` in `Hom^{2k}_Λ(K, k_∧)`; for one operator this is the
    /// image of `t_j` under the Koszul map.
    pub fn koszul_cochain(&self, hom: &HomComplex, ops: &[usize]) -> SparseVec {
        let mut exps = vec![0u32; self.n];
        for &j in ops {
            exps[j] += 1;
        }
        match self.gens.index_of(&exps) {
            Some(a) => hom.cochain_from_fn(|alpha| if alpha == a { vec![(0, int(1))] } else { Vec::new() }),
            None => Vec::new(),
        }
    }

    /// Degree-`q` `Λ`-linear chain map `G : K -> K` with `ε G = g`, defined on generators
    /// of weight at most `up_to`.
    pub fn lift_to_endomorphism(
        &self,
        hom: &HomComplex,
        g: &SparseVec,
        q: i32,
        up_to: usize,
    ) -> Result<Vec<SparseVec>> {
        if q % 2 != 0 {
            return Err(Error::Invalid {
                what: "only even-degree classes of Hom(K, k) are lifted".into(),
            });
        }
        let d = self.module.differential();
        let degrees = self.module.degrees();
        let mut images: Vec<SparseVec> = vec![Vec::new(); self.gens.dim()];
        let mut solvers: HashMap<i32, (Vec<usize>, Solver)> = HashMap::new();
        for a in 0..self.gens.dim() {
            let w = self.gens.degree(a);
            if w > up_to {
                continue;
            }
            let target_deg = q - 2 * w as i32;
            if target_deg > 0 {
                continue;
            }
            let rhs = (0..self.n).fold(Vec::new(), |acc, j| match lower(&self.gens, a, j) {
                Some(b) => sv_axpy(&acc, &int(1), &self.module.theta(j).mul_sparse(&images[b])),
                None => acc,
            });
            if target_deg == 0 {
                let v: SparseVec = hom.eval(g, a).into_iter().map(|(_, c)| (0, c)).collect();
                if !d.mul_sparse(&v).is_empty() || !rhs.is_empty() {
                    return Err(Error::NotAChainMap {
                        what: "the lowest component of the lift is not closed".into(),
                    });
                }
                images[a] = v;
                continue;
            }
            let (cols, solver) = solvers.entry(target_deg).or_insert_with(|| {
                let cols: Vec<usize> = (0..degrees.len()).filter(|&k| degrees[k] == target_deg).collect();
                let m = d.select_columns(&cols);
                (cols, Solver::new(&m))
            });
            let x = solver.solve(&rhs).ok_or_else(|| Error::DepthTooSmall {
                depth: self.depth,
                needed: w + 1,
            })?;
            let mut v: SparseVec = x.into_iter().map(|(k, c)| (cols[k], c)).collect();
            v.sort_by_key(|e| e.0);
            images[a] = v;
        }
        Ok(images)
    }

    /// Yoneda product `f · g = f ∘ G` of cochains in `Hom(K, k_∧)` with `G` lifting `g`.
    pub fn yoneda(&self, hom: &HomComplex, f: &SparseVec, p: i32, g: &SparseVec, q: i32) -> Result<SparseVec> {
        let top = ((p + q) / 2).max(0) as usize;
        let lift = self.lift_to_endomorphism(hom, g, q, top)?;
        let l = 1usize << self.n;
        Ok(hom.cochain_from_fn(|a| {
            if 2 * self.gens.degree(a) as i32 != p + q {
                return Vec::new();
            }
            lift[a]
                .iter()
                .filter(|(k, _)| k % l == 0)
                .fold(Vec::new(), |acc, (k, c)| sv_axpy(&acc, c, &hom.eval(f, k / l)))
        }))
    }
}

/// Index of `α - e_j`, if `α_j > 0`.
fn lower(gens: &BaseRing, a: usize, j: usize) -> Option<usize> {
    let e = gens.exponents(a);
    if e[j] == 0 {
        return None;
    }
    let mut f = e.to_vec();
    f[j] -= 1;
    gens.index_of(&f)
}

/// `Hom_Λ(K, N)`: a map is determined by the images `f(g_α) ∈ N`; the flat basis
/// is the pairs `(α, b)` and `f` has degree `deg b + 2|α|`. The differential is
/// `(δf)(g_α) = d_N f(g_α) - Σ_j θ_j f(g_{α - e_j})`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    target_dim: usize,
    pairs: Vec<(usize, usize)>,
    degrees: Vec<i32>,
    delta: Matrix,
    complex: CochainComplex,
    index: FlatIndex,
}

impl HomComplex {
    fn new(k: &KoszulResolution, target: &LambdaModule) -> Result<Self> {
        if target.nparams() != k.n {
            return Err(Error::MismatchedParameters {
                what: "Λ-module over a different number of parameters".into(),
            });
        }
        let nt = target.dim();
        let ng = k.gens.dim();
        let mut pairs = Vec::with_capacity(ng * nt);
        let mut degrees = Vec::with_capacity(ng * nt);
        for a in 0..ng {
            for b in 0..nt {
                pairs.push((a, b));
                degrees.push(target.degrees()[b] + 2 * k.gens.degree(a) as i32);
            }
        }
        let dn = target.differential().sparse_columns();
        let th: Vec<Vec<SparseVec>> = (0..k.n).map(|j| target.theta(j).sparse_columns()).collect();
        let mut entries = Vec::new();
        for a in 0..ng {
            for b in 0..nt {
                let col = a * nt + b;
                for (r, c) in &dn[b] {
                    entries.push((a * nt + r, col, c.clone()));
                }
                for j in 0..k.n {
                    let mut up = k.gens.exponents(a).to_vec();
                    up[j] += 1;
                    if let Some(a2) = k.gens.index_of(&up) {
                        for (r, c) in &th[j][b] {
                            entries.push((a2 * nt + r, col, -c.clone()));
                        }
                    }
                }
            }
        }
        let delta = Matrix::from_triplets(ng * nt, ng * nt, entries);
        let (complex, index) = CochainComplex::from_flat(&degrees, &delta)?;
        Ok(HomComplex {
            target_dim: nt,
            pairs,
            degrees,
            delta,
            complex,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn delta(&self) -> &Matrix {
        &self.delta
    }

    /// Cochain with `f(g_α) = values(α)`.
    pub fn cochain_from_fn(&self, values: impl Fn(usize) -> SparseVec) -> SparseVec {
        let ng = self.pairs.len() / self.target_dim.max(1);
        let mut out = Vec::new();
        for a in 0..ng {
            for (b, c) in values(a) {
                out.push((a * self.target_dim + b, c));
            }
        }
        out
    }

    /// `f(g_α)` as a vector of the target.
    pub fn eval(&self, f: &SparseVec, alpha: usize) -> SparseVec {
        let lo = alpha * self.target_dim;
        f.iter()
            .filter(|(k, _)| *k >= lo && *k < lo + self.target_dim)
            .map(|(k, c)| (k - lo, c.clone()))
            .collect()
    }

    pub fn cohomology(&self, p: i32) -> Result<Cohomology> {
        self.complex.cohomology(p)
    }

    /// Coordinates of the class of a homogeneous cocycle of degree `p`.
    pub fn class_of(&self, f: &SparseVec, p: i32) -> Result<SparseVec> {
        if let Some((k, _)) = f.iter().find(|(k, _)| self.degrees[*k] != p) {
            return Err(Error::Invalid {
                what: format!("cochain has a component of degree {} != {p}", self.degrees[*k]),
            });
        }
        if let Some((k, _)) = self.delta.mul_sparse(f).first() {
            return Err(Error::NotACocycle {
                witness: format!("δf is nonzero at generator {}", self.pairs[*k].0),
            });
        }
        let h = self.cohomology(p)?;
        let local: SparseVec = f.iter().map(|(k, c)| (self.index.position[*k].1, c.clone())).collect();
        let mut local = local;
        local.sort_by_key(|e| e.0);
        Ok(h.projection.mul_sparse(&local))
    }

    /// Flat cochains representing a basis of `H^p`.
    pub fn class_representatives(&self, p: i32) -> Result<Vec<SparseVec>> {
        let h = self.cohomology(p)?;
        let flat = self.index.by_degree.get(&p).cloned().unwrap_or_default();
        Ok(h.cocycle_reps
            .sparse_columns()
            .into_iter()
            .map(|v| {
                let mut w: SparseVec = v.into_iter().map(|(k, c)| (flat[k], c)).collect();
                w.sort_by_key(|e| e.0);
                w
            })
            .collect())
    }
}

/// `Ext^j_Λ(k_∧, k_∧)` for `j = 0..=D`.
#[derive(Clone, Debug)]
pub struct ExtLambda {
    pub hom: HomComplex,
    pub groups: Vec<Cohomology>,
}

impl ExtLambda {
    pub fn dims(&self) -> Vec<usize> {
        self.groups.iter().map(|h| h.dim).collect()
    }
}

/// `Ext^j_Λ(k_∧, k_∧)` for `j ≤ max_degree` with the smallest admissible depth.
pub fn ext_lambda(n: usize, max_degree: usize) -> Result<ExtLambda> {
    KoszulResolution::new(n, max_degree.div_ceil(2) + 1)?.ext_self(max_degree)
}
