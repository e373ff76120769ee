use std::collections::HashMap;

use crate::algebra::{basis_vector, AssocAlgebra};
use crate::error::{Error, Result};

/// `O_N = Q[t_1..t_n] / (total degree > N)` with a monomial basis.
///
/// Monomials are ordered by total degree, then lexicographically with higher
/// powers of earlier variables first; `1` has index 0 and `t_j` has index `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseRing {
    labels: Vec<String>,
    order: usize,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn exponents_of_degree(n: usize, deg: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if deg == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in exponents_of_degree(n - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl BaseRing {
    pub fn new(n: usize, order: usize) -> Self {
        let labels = (1..=n).map(|j| format!("t{j}")).collect();
        Self::with_labels(labels, order)
    }

    pub fn with_labels(labels: Vec<String>, order: usize) -> Self {
        let n = labels.len();
        let mut monomials = Vec::new();
        for deg in 0..=order as u32 {
            monomials.extend(exponents_of_degree(n, deg));
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        BaseRing {
            labels,
            order,
            monomials,
            index,
        }
    }

    /// Number of parameters `dim T`.
    pub fn nparams(&self) -> usize {
        self.labels.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn param_labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of monomials, i.e. `dim O_N`.
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.monomials[i].iter().sum::<u32>() as usize
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Index of `t_j` (0-based `j`).
    pub fn linear(&self, j: usize) -> usize {
        j + 1
    }

    /// Product of two monomials, `None` when truncated.
    pub fn mul(&self, i: usize, j: usize) -> Option<usize> {
        let e: Vec<u32> = self.monomials[i]
            .iter()
            .zip(&self.monomials[j])
            .map(|(a, b)| a + b)
            .collect();
        self.index_of(&e)
    }

    /// Monomials of total degree exactly `k`.
    pub fn of_degree(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == k).collect()
    }

    /// Pairs `(ν, ρ)` of nonconstant monomials with `ν ρ = μ`.
    pub fn splittings(&self, mu: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for nu in 1..self.dim() {
            for rho in 1..self.dim() {
                if self.mul(nu, rho) == Some(mu) {
                    out.push((nu, rho));
                }
            }
        }
        out
    }

    pub fn monomial_label(&self, i: usize) -> String {
        let parts: Vec<String> = self.monomials[i]
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(j, e)| {
                if *e == 1 {
                    self.labels[j].clone()
                } else {
                    format!("{}^{e}", self.labels[j])
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Parses `t1^2*t2` or `1`.
    pub fn parse_monomial(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        let mut exps = vec![0u32; self.nparams()];
        if s != "1" {
            for factor in s.split('*') {
                let (name, pow) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n.trim(),
                        p.trim().parse::<u32>().map_err(|_| Error::Invalid {
                            what: format!("bad exponent in monomial {s:?}"),
                        })?,
                    ),
                    None => (factor.trim(), 1),
                };
                let j = self
                    .labels
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| Error::Invalid {
                        what: format!("unknown parameter {name:?} in monomial {s:?}"),
                    })?;
                exps[j] += pow;
            }
        }
        self.index_of(&exps).ok_or_else(|| Error::Invalid {
            what: format!("monomial {s:?} exceeds order {}", self.order),
        })
    }

    /// `O_N` itself as an algebra.
    pub fn as_algebra(&self) -> AssocAlgebra {
        let d = self.dim();
        let labels = (0..d).map(|i| self.monomial_label(i)).collect();
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                table.push(self.mul(i, j).map(basis_vector).unwrap_or_default());
            }
        }
        AssocAlgebra::new_unchecked(format!("O_{}", self.order), labels, table, basis_vector(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order_and_count() {
        let r = BaseRing::new(2, 2);
        assert_eq!(r.dim(), 6);
        let labels: Vec<String> = (0..6).map(|i| r.monomial_label(i)).collect();
        assert_eq!(labels, ["1", "t1", "t2", "t1^2", "t1*t2", "t2^2"]);
        assert_eq!(r.mul(1, 2), Some(4));
        assert_eq!(r.mul(3, 1), None);
        assert_eq!(r.parse_monomial("t2*t1").unwrap(), 4);
        assert!(r.parse_monomial("t1^3").is_err());
        assert_eq!(r.splittings(4), vec![(1, 2), (2, 1)]);
        assert!(r.as_algebra().validate().is_valid());
    }
}
