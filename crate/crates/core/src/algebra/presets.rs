use num_traits::One;

use super::{basis_vector, AssocAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{sign, Rational, SparseVec};

pub const PRESET_NAMES: &[&str] = &[
    "field",
    "dual_numbers",
    "truncated_poly",
    "truncated_poly2",
    "matrix",
    "exterior",
    "group_algebra",
];

/// Catalog algebras.
///
/// | name | params | basis |
/// |------|--------|-------|
/// | `field` | none | `1` |
/// | `dual_numbers` | none | `1, x` |
/// | `truncated_poly` | `m` | `1, x, .., x^(m-1)` |
/// | `truncated_poly2` | `m1 m2` | `x^i y^j` at index `i * m2 + j` |
/// | `matrix` | `n` | `E_ij` at index `i * n + j` |
/// | `exterior` | `n` | monomials by bitmask, `x y z` then `e4 ..` |
/// | `group_algebra` | `m` | `g^k` for `Z/m` |
pub fn preset_catalog(name: &str, params: &[usize]) -> Result<AssocAlgebra> {
    let need = |k: usize| -> Result<()> {
        if params.len() != k {
            Err(Error::Invalid {
                what: format!("preset {name} takes {k} parameter(s), got {}", params.len()),
            })
        } else {
            Ok(())
        }
    };
    let positive = |v: usize| -> Result<usize> {
        if v == 0 {
            Err(Error::Invalid {
                what: format!("preset {name} needs positive parameters"),
            })
        } else {
            Ok(v)
        }
    };
    match name {
        "field" | "Q" => {
            need(0)?;
            Ok(truncated_poly(1).with_name("Q"))
        }
        "dual_numbers" => {
            need(0)?;
            Ok(truncated_poly(2).with_name("dual_numbers"))
        }
        "truncated_poly" => {
            need(1)?;
            Ok(truncated_poly(positive(params[0])?))
        }
        "truncated_poly2" => {
            need(2)?;
            Ok(truncated_poly2(positive(params[0])?, positive(params[1])?))
        }
        "matrix" => {
            need(1)?;
            Ok(matrix(positive(params[0])?))
        }
        "exterior" => {
            need(1)?;
            if params[0] > 6 {
                return Err(Error::Invalid {
                    what: "exterior preset is limited to 6 generators".into(),
                });
            }
            Ok(exterior(params[0]))
        }
        "group_algebra" => {
            need(1)?;
            Ok(group_algebra(positive(params[0])?))
        }
        _ => Err(Error::UnknownPreset { name: name.to_string() }),
    }
}

fn power_label(var: &str, k: usize) -> String {
    match k {
        0 => "1".into(),
        1 => var.into(),
        _ => format!("{var}^{k}"),
    }
}

fn truncated_poly(m: usize) -> AssocAlgebra {
    let labels = (0..m).map(|k| power_label("x", k)).collect();
    let mut table = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            table.push(if i + j < m { basis_vector(i + j) } else { Vec::new() });
        }
    }
    AssocAlgebra::new_unchecked(format!("Q[x]/(x^{m})"), labels, table, basis_vector(0))
}

fn truncated_poly2(m1: usize, m2: usize) -> AssocAlgebra {
    let d = m1 * m2;
    let mut labels = Vec::with_capacity(d);
    for i in 0..m1 {
        for j in 0..m2 {
            labels.push(match (i, j) {
                (0, 0) => "1".to_string(),
                (_, 0) => power_label("x", i),
                (0, _) => power_label("y", j),
                _ => format!("{}{}", power_label("x", i), power_label("y", j)),
            });
        }
    }
    let mut table = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let (i, j) = (a / m2 + b / m2, a % m2 + b % m2);
            table.push(if i < m1 && j < m2 {
                basis_vector(i * m2 + j)
            } else {
                Vec::new()
            });
        }
    }
    AssocAlgebra::new_unchecked(format!("Q[x,y]/(x^{m1},y^{m2})"), labels, table, basis_vector(0))
}

fn matrix(n: usize) -> AssocAlgebra {
    let d = n * n;
    let labels = (0..d)
        .map(|k| {
            let (i, j) = (k / n + 1, k % n + 1);
            if n < 10 {
                format!("E{i}{j}")
            } else {
                format!("E{i}_{j}")
            }
        })
        .collect();
    let mut table = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let (i, j, k, l) = (a / n, a % n, b / n, b % n);
            table.push(if j == k { basis_vector(i * n + l) } else { Vec::new() });
        }
    }
    let unit: SparseVec = (0..n).map(|i| (i * n + i, Rational::one())).collect();
    AssocAlgebra::new_unchecked(format!("M_{n}(Q)"), labels, table, unit)
}

/// Generator names used for exterior algebras and parameter spaces.
pub(crate) fn generator_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        _ => format!("e{}", i + 1),
    }
}

/// Sign of `e_S e_T` for disjoint bitmasks: `(-1)^{#{(s, t) : s in S, t in T, s > t}}`.
pub(crate) fn wedge_sign(s: usize, t: usize) -> Rational {
    let mut inv = 0i64;
    let mut bits = t;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        inv += (s >> (j + 1)).count_ones() as i64;
        bits &= bits - 1;
    }
    sign(inv)
}

fn exterior(n: usize) -> AssocAlgebra {
    let d = 1usize << n;
    let labels = (0..d)
        .map(|s| {
            if s == 0 {
                "1".to_string()
            } else {
                (0..n)
                    .filter(|i| s >> i & 1 == 1)
                    .map(generator_name)
                    .collect::<Vec<_>>()
                    .join("")
            }
        })
        .collect();
    let mut table = Vec::with_capacity(d * d);
    for s in 0..d {
        for t in 0..d {
            table.push(if s & t != 0 {
                Vec::new()
            } else {
                vec![(s | t, wedge_sign(s, t))]
            });
        }
    }
    AssocAlgebra::new_unchecked(format!("Λ(Q^{n})"), labels, table, basis_vector(0))
}

fn group_algebra(m: usize) -> AssocAlgebra {
    let labels = (0..m).map(|k| power_label("g", k)).collect();
    let mut table = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            table.push(basis_vector((i + j) % m));
        }
    }
    AssocAlgebra::new_unchecked(format!("Q[Z/{m}]"), labels, table, basis_vector(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn catalog_is_valid() {
        let cases: &[(&str, &[usize])] = &[
            ("field", &[]),
            ("dual_numbers", &[]),
            ("truncated_poly", &[4]),
            ("truncated_poly2", &[2, 3]),
            ("matrix", &[2]),
            ("exterior", &[3]),
            ("group_algebra", &[3]),
        ];
        for (name, p) in cases {
            let a = preset_catalog(name, p).unwrap();
            assert!(a.validate().is_valid(), "{name}");
        }
    }

    #[test]
    fn exterior_two() {
        let a = preset_catalog("exterior", &[2]).unwrap();
        assert_eq!(a.labels(), &["1", "x", "y", "xy"]);
        assert_eq!(a.product(1, 2), &vec![(3, int(1))]);
        assert_eq!(a.product(2, 1), &vec![(3, int(-1))]);
        assert!(a.product(1, 1).is_empty());
    }

    #[test]
    fn matrix_units() {
        let a = preset_catalog("matrix", &[2]).unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(a.product(0, 1), &basis_vector(1));
        assert!(a.product(1, 1).is_empty());
    }

    #[test]
    fn unknown_and_bad_params() {
        assert!(matches!(preset_catalog("weyl", &[]), Err(Error::UnknownPreset { .. })));
        assert!(preset_catalog("matrix", &[]).is_err());
        assert!(preset_catalog("truncated_poly", &[0]).is_err());
    }
}
