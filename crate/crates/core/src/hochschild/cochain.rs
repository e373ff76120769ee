use crate::algebra::{AssocAlgebra, Bimodule};
use crate::error::{Error, Result};
use crate::linalg::{one, sign, sv_axpy, sv_scale, Rational, SparseVec};

/// Multilinear map `a^{⊗n} -> M` stored as one value per basis tuple.
///
/// Tuples `(i_1, .., i_n)` are indexed lexicographically with `i_1` most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildCochain {
    arity: usize,
    dim_in: usize,
    dim_out: usize,
    values: Vec<SparseVec>,
}

pub fn tuple_count(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

pub fn tuple_index(d: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &i| acc * d + i)
}

pub fn tuple_digits(d: usize, n: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = idx % d;
        idx /= d;
    }
    out
}

impl HochschildCochain {
    pub fn zero(arity: usize, dim_in: usize, dim_out: usize) -> Self {
        HochschildCochain {
            arity,
            dim_in,
            dim_out,
            values: vec![Vec::new(); tuple_count(dim_in, arity)],
        }
    }

    pub fn from_fn(arity: usize, dim_in: usize, dim_out: usize, mut f: impl FnMut(&[usize]) -> SparseVec) -> Self {
        let values = (0..tuple_count(dim_in, arity))
            .map(|idx| f(&tuple_digits(dim_in, arity, idx)))
            .collect();
        HochschildCochain {
            arity,
            dim_in,
            dim_out,
            values,
        }
    }

    /// From the vectorized form with index `tuple * dim_out + out`.
    pub fn from_vector(arity: usize, dim_in: usize, dim_out: usize, v: &SparseVec) -> Self {
        let mut c = Self::zero(arity, dim_in, dim_out);
        for (k, x) in v {
            c.values[k / dim_out].push((k % dim_out, x.clone()));
        }
        c
    }

    pub fn to_vector(&self) -> SparseVec {
        let mut out = Vec::new();
        for (t, v) in self.values.iter().enumerate() {
            for (o, x) in v {
                out.push((t * self.dim_out + o, x.clone()));
            }
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// Dimension of the cochain space.
    pub fn space_dim(&self) -> usize {
        self.values.len() * self.dim_out
    }

    pub fn value(&self, t: &[usize]) -> &SparseVec {
        &self.values[tuple_index(self.dim_in, t)]
    }

    pub fn value_at(&self, idx: usize) -> &SparseVec {
        &self.values[idx]
    }

    pub fn set(&mut self, t: &[usize], v: SparseVec) {
        let i = tuple_index(self.dim_in, t);
        self.values[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_empty())
    }

    /// First tuple with a nonzero value.
    pub fn support_witness(&self) -> Option<Vec<usize>> {
        self.values
            .iter()
            .position(|v| !v.is_empty())
            .map(|i| tuple_digits(self.dim_in, self.arity, i))
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(
            (self.arity, self.dim_in, self.dim_out),
            (other.arity, other.dim_in, other.dim_out),
            "cochain shapes differ"
        );
    }

    pub fn axpy(&self, c: &Rational, other: &Self) -> Self {
        self.same_shape(other);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| sv_axpy(a, c, b))
            .collect();
        HochschildCochain { values, ..*self }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&-one(), other)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HochschildCochain {
            values: self.values.iter().map(|v| sv_scale(v, c)).collect(),
            ..*self
        }
    }

    /// Multilinear evaluation on arbitrary vectors.
    pub fn eval(&self, args: &[SparseVec]) -> SparseVec {
        assert_eq!(args.len(), self.arity);
        let mut out = Vec::new();
        let mut stack: Vec<(usize, usize, Rational)> = vec![(0, 0, one())];
        while let Some((pos, idx, coef)) = stack.pop() {
            if pos == self.arity {
                out = sv_axpy(&out, &coef, &self.values[idx]);
                continue;
            }
            for (i, c) in &args[pos] {
                stack.push((pos + 1, idx * self.dim_in + i, &coef * c));
            }
        }
        out
    }

    /// Whether the cochain vanishes as soon as one argument is `unit`.
    pub fn is_normalized(&self, unit: &SparseVec) -> bool {
        if self.arity == 0 {
            return true;
        }
        for slot in 0..self.arity {
            for rest in 0..tuple_count(self.dim_in, self.arity - 1) {
                let digits = tuple_digits(self.dim_in, self.arity - 1, rest);
                let mut args: Vec<SparseVec> = digits.iter().map(|&i| vec![(i, one())]).collect();
                args.insert(slot, unit.clone());
                if !self.eval(&args).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Block `j` of a cochain valued in `M ⊗ V` laid out as `j * block + i`.
    pub fn component(&self, j: usize, block: usize) -> Self {
        let values = self
            .values
            .iter()
            .map(|v| {
                v.iter()
                    .filter(|(k, _)| k / block == j)
                    .map(|(k, x)| (k % block, x.clone()))
                    .collect()
            })
            .collect();
        HochschildCochain {
            arity: self.arity,
            dim_in: self.dim_in,
            dim_out: block,
            values,
        }
    }

    /// Inverse of [`Self::component`].
    pub fn from_components(parts: &[HochschildCochain]) -> Self {
        let first = &parts[0];
        let block = first.dim_out;
        let mut out = Self::zero(first.arity, first.dim_in, block * parts.len());
        for (j, p) in parts.iter().enumerate() {
            first.same_shape(p);
            for (t, v) in p.values.iter().enumerate() {
                out.values[t].extend(v.iter().map(|(k, x)| (j * block + k, x.clone())));
            }
        }
        for v in &mut out.values {
            v.sort_by_key(|e| e.0);
        }
        out
    }

    /// Postcomposes with a linear map on values.
    pub fn map_values(&self, dim_out: usize, f: impl Fn(&SparseVec) -> SparseVec) -> Self {
        HochschildCochain {
            arity: self.arity,
            dim_in: self.dim_in,
            dim_out,
            values: self.values.iter().map(f).collect(),
        }
    }
}

pub(crate) fn check_coefficients(a: &AssocAlgebra, m: &Bimodule) -> Result<()> {
    if m.left_algebra() != a || m.right_algebra() != a {
        return Err(Error::BimoduleMismatch {
            what: format!("coefficient bimodule is not over {}", a.name()),
        });
    }
    Ok(())
}

fn check_shape(a: &AssocAlgebra, m: &Bimodule, f: &HochschildCochain) -> Result<()> {
    check_coefficients(a, m)?;
    if f.dim_in != a.dim() || f.dim_out != m.dim() {
        return Err(Error::BimoduleMismatch {
            what: format!(
                "cochain maps Q^{} -> Q^{}, expected Q^{} -> Q^{}",
                f.dim_in,
                f.dim_out,
                a.dim(),
                m.dim()
            ),
        });
    }
    Ok(())
}

/// Hochschild differential
/// `(δf)(a_0..a_n) = a_0 f(a_1..) + Σ (-1)^i f(.., a_{i-1} a_i, ..) + (-1)^{n+1} f(..a_{n-1}) a_n`.
pub fn differential(a: &AssocAlgebra, m: &Bimodule, f: &HochschildCochain) -> Result<HochschildCochain> {
    check_shape(a, m, f)?;
    let n = f.arity;
    let d = a.dim();
    Ok(HochschildCochain::from_fn(n + 1, d, m.dim(), |t| {
        let mut out = m.left_action(t[0]).mul_sparse(f.value(&t[1..]));
        let mut inner = t[..n].to_vec();
        for i in 1..=n {
            let s = sign(i as i64);
            for (k, c) in a.product(t[i - 1], t[i]) {
                inner.clear();
                inner.extend_from_slice(&t[..i - 1]);
                inner.push(*k);
                inner.extend_from_slice(&t[i + 1..]);
                out = sv_axpy(&out, &(&s * c), f.value(&inner));
            }
        }
        let last = m.right_action(t[n]).mul_sparse(f.value(&t[..n]));
        sv_axpy(&out, &sign(n as i64 + 1), &last)
    }))
}

/// Cup product `(f ⌣ g)(a_1..a_{p+q}) = f(a_1..a_p) g(a_{p+1}..a_{p+q})` for algebra-valued cochains.
pub fn cup(a: &AssocAlgebra, f: &HochschildCochain, g: &HochschildCochain) -> Result<HochschildCochain> {
    let d = a.dim();
    if f.dim_in != d || g.dim_in != d || f.dim_out != d || g.dim_out != d {
        return Err(Error::BimoduleMismatch {
            what: "cup product needs cochains valued in the algebra itself".into(),
        });
    }
    let p = f.arity;
    Ok(HochschildCochain::from_fn(p + g.arity, d, d, |t| {
        a.mul(f.value(&t[..p]), g.value(&t[p..]))
    }))
}

/// Pre-Lie composition `f ∘ g = Σ_{i=0}^{p-1} (-1)^{i(q-1)} f(a_1..a_i, g(..), ..)`.
pub fn circle(f: &HochschildCochain, g: &HochschildCochain) -> Result<HochschildCochain> {
    let d = f.dim_in;
    if g.dim_in != d || f.dim_out != d || g.dim_out != d {
        return Err(Error::BimoduleMismatch {
            what: "composition needs cochains valued in the algebra itself".into(),
        });
    }
    let (p, q) = (f.arity, g.arity);
    if p == 0 {
        return Ok(HochschildCochain::zero(q.saturating_sub(1), d, d));
    }
    let n = p + q - 1;
    Ok(HochschildCochain::from_fn(n, d, d, |t| {
        let mut out = Vec::new();
        let mut args = vec![0usize; p];
        for i in 0..p {
            let s = sign((i * (q + 1)) as i64);
            let inner = g.value(&t[i..i + q]);
            args[..i].copy_from_slice(&t[..i]);
            args[i + 1..].copy_from_slice(&t[i + q..]);
            for (k, c) in inner {
                args[i] = *k;
                out = sv_axpy(&out, &(&s * c), f.value(&args));
            }
        }
        out
    }))
}

/// Gerstenhaber bracket `[f, g] = f ∘ g - (-1)^{(p-1)(q-1)} g ∘ f`.
pub fn gerstenhaber_bracket(f: &HochschildCochain, g: &HochschildCochain) -> Result<HochschildCochain> {
    let fg = circle(f, g)?;
    let gf = circle(g, f)?;
    let s = sign(((f.arity as i64) - 1) * ((g.arity as i64) - 1));
    Ok(fg.axpy(&-s, &gf))
}

/// The multiplication of `a` as a 2-cochain.
pub fn multiplication_cochain(a: &AssocAlgebra) -> HochschildCochain {
    HochschildCochain::from_fn(2, a.dim(), a.dim(), |t| a.product(t[0], t[1]).clone())
}
