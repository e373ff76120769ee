//! Line-oriented text formats for algebras and deformations.
//!
//! ```text
//! hochdef-algebra v1
//! name dual_numbers
//! basis 1 x
//! unit 1 0
//! mul 0 0 0 1
//! mul 0 1 1 1
//! mul 1 0 1 1
//! ```
//!
//! `mul i j k c` adds `c e_k` to `e_i e_j`; indices are 0-based and every
//! coefficient is a rational string such as `-3/2`. `preset <name> [params]`
//! replaces `basis`, `unit` and `mul`.
//!
//! ```text
//! hochdef-deformation v1
//! algebra preset dual_numbers
//! params t
//! order 2
//! beta t 1 1 0 1
//! ```
//!
//! `beta <monomial> i j k c` adds `c e_k` to `β_μ(e_i, e_j)`. The algebra is
//! either `algebra preset <name> [params]` or `algebra file <path>` relative to
//! the deformation file; `preset <name>` with `order` names a catalog deformation.

use std::collections::BTreeMap;
use std::path::Path;

use hhdeform::algebra::{preset_catalog, AssocAlgebra};
use hhdeform::deformation::{deformation_preset, BaseRing, StarDeformation};
use hhdeform::hochschild::HochschildCochain;
use hhdeform::linalg::{format_rational, parse_rational, Rational};

use crate::CliError;

pub const ALGEBRA_HEADER: &str = "hochdef-algebra v1";
pub const DEFORMATION_HEADER: &str = "hochdef-deformation v1";

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

#[derive(Debug)]
struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn tokenize(src: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start: Option<(usize, usize)> = None;
        for (col, (byte, ch)) in body.char_indices().enumerate() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some((byte, col + 1)),
                (true, Some((b, c))) => {
                    tokens.push(Token {
                        text: &body[b..byte],
                        column: c,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some((b, c)) = start {
            tokens.push(Token {
                text: &body[b..],
                column: c,
            });
        }
        if !tokens.is_empty() {
            out.push(Line { number: k + 1, tokens });
        }
    }
    out
}

struct Cursor<'a> {
    origin: &'a str,
}

impl Cursor<'_> {
    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> CliError {
        CliError::Parse {
            origin: self.origin.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    fn header(&self, lines: &[Line], header: &str) -> Result<(), CliError> {
        let Some(first) = lines.first() else {
            return Err(self.err(1, 1, format!("empty file, expected header '{header}'")));
        };
        let got: Vec<&str> = first.tokens.iter().map(|t| t.text).collect();
        if got.join(" ") != header {
            return Err(self.err(first.number, 1, format!("expected header '{header}'")));
        }
        Ok(())
    }

    fn arity(&self, line: &Line, min: usize, max: usize) -> Result<(), CliError> {
        let n = line.tokens.len() - 1;
        if n < min || n > max {
            let col = line
                .tokens
                .get(max.saturating_add(1))
                .map(|t| t.column)
                .unwrap_or(line.tokens[0].column);
            let want = if min == max {
                format!("{min}")
            } else {
                format!("{min} to {max}")
            };
            return Err(self.err(
                line.number,
                col,
                format!("'{}' takes {want} argument(s), got {n}", line.tokens[0].text),
            ));
        }
        Ok(())
    }

    fn index(&self, line: &Line, t: Token, bound: usize) -> Result<usize, CliError> {
        match t.text.parse::<usize>() {
            Ok(i) if i < bound => Ok(i),
            Ok(i) => Err(self.err(
                line.number,
                t.column,
                format!("index {i} out of range for dimension {bound}"),
            )),
            Err(_) => Err(self.err(
                line.number,
                t.column,
                format!("expected a basis index, got '{}'", t.text),
            )),
        }
    }

    fn count(&self, line: &Line, t: Token) -> Result<usize, CliError> {
        t.text.parse::<usize>().map_err(|_| {
            self.err(
                line.number,
                t.column,
                format!("expected a nonnegative integer, got '{}'", t.text),
            )
        })
    }

    fn rational(&self, line: &Line, t: Token) -> Result<Rational, CliError> {
        parse_rational(t.text).ok_or_else(|| {
            self.err(
                line.number,
                t.column,
                format!("expected a rational such as -3/2, got '{}'", t.text),
            )
        })
    }
}

pub fn parse_algebra(src: &str, origin: &str) -> Result<AssocAlgebra, CliError> {
    let cur = Cursor { origin };
    let lines = tokenize(src);
    cur.header(&lines, ALGEBRA_HEADER)?;
    let mut name: Option<String> = None;
    let mut preset: Option<(usize, String, Vec<usize>)> = None;
    let mut basis: Option<Vec<String>> = None;
    let mut unit: Option<(usize, Vec<(usize, Rational)>)> = None;
    let mut entries = Vec::new();
    let mut last = 1;
    for line in &lines[1..] {
        last = line.number;
        let key = line.tokens[0];
        let args = &line.tokens[1..];
        match key.text {
            "name" => {
                cur.arity(line, 1, usize::MAX)?;
                let t: Vec<&str> = args.iter().map(|t| t.text).collect();
                name = Some(t.join(" "));
            }
            "preset" => {
                cur.arity(line, 1, usize::MAX)?;
                let params = args[1..]
                    .iter()
                    .map(|t| cur.count(line, *t))
                    .collect::<Result<_, _>>()?;
                preset = Some((line.number, args[0].text.to_string(), params));
            }
            "basis" => {
                cur.arity(line, 1, usize::MAX)?;
                if basis.is_some() {
                    return Err(cur.err(line.number, key.column, "duplicate 'basis' line"));
                }
                let labels: Vec<String> = args.iter().map(|t| t.text.to_string()).collect();
                for (k, t) in args.iter().enumerate() {
                    if labels[..k].contains(&labels[k]) {
                        return Err(cur.err(line.number, t.column, format!("repeated basis label '{}'", t.text)));
                    }
                }
                basis = Some(labels);
            }
            "unit" | "mul" => {
                let Some(b) = basis.as_ref() else {
                    return Err(cur.err(
                        line.number,
                        key.column,
                        format!("'{}' needs a preceding 'basis' line", key.text),
                    ));
                };
                let d = b.len();
                if key.text == "unit" {
                    cur.arity(line, d, d)?;
                    let mut v = Vec::new();
                    for (i, t) in args.iter().enumerate() {
                        let c = cur.rational(line, *t)?;
                        if c != hhdeform::linalg::zero() {
                            v.push((i, c));
                        }
                    }
                    unit = Some((line.number, v));
                } else {
                    cur.arity(line, 4, 4)?;
                    entries.push((
                        cur.index(line, args[0], d)?,
                        cur.index(line, args[1], d)?,
                        cur.index(line, args[2], d)?,
                        cur.rational(line, args[3])?,
                    ));
                }
            }
            other => {
                return Err(cur.err(line.number, key.column, format!("unknown key '{other}'")));
            }
        }
    }
    if let Some((ln, p, params)) = preset {
        if basis.is_some() || !entries.is_empty() || unit.is_some() {
            return Err(cur.err(ln, 1, "'preset' cannot be combined with basis, unit or mul"));
        }
        let a = preset_catalog(&p, &params).map_err(|e| cur.err(ln, 1, e.to_string()))?;
        return Ok(match name {
            Some(n) => a.with_name(n),
            None => a,
        });
    }
    let Some(labels) = basis else {
        return Err(cur.err(last, 1, "missing 'basis' line"));
    };
    let Some((uline, unit)) = unit else {
        return Err(cur.err(last, 1, "missing 'unit' line"));
    };
    AssocAlgebra::from_entries(name.unwrap_or_else(|| "A".into()), labels, entries, unit)
        .map_err(|e| cur.err(uline, 1, format!("invalid algebra: {e}")))
}

pub fn write_algebra(a: &AssocAlgebra) -> String {
    let d = a.dim();
    let mut out = format!(
        "{ALGEBRA_HEADER}\nname {}\nbasis {}\nunit",
        a.name(),
        a.labels().join(" ")
    );
    let mut unit = vec![String::from("0"); d];
    for (i, c) in a.unit() {
        unit[*i] = format_rational(c);
    }
    for u in unit {
        out.push(' ');
        out.push_str(&u);
    }
    out.push('\n');
    for i in 0..d {
        for j in 0..d {
            for (k, c) in a.product(i, j) {
                out.push_str(&format!("mul {i} {j} {k} {}\n", format_rational(c)));
            }
        }
    }
    out
}

/// A parsed deformation with the algebra source text it was built from.
#[derive(Clone, Debug)]
pub struct DeformationInput {
    pub deformation: StarDeformation,
    /// Text of any referenced algebra file, for input digests.
    pub dependencies: Vec<String>,
}

pub fn parse_deformation(src: &str, origin: &str, base: Option<&Path>) -> Result<DeformationInput, CliError> {
    let cur = Cursor { origin };
    let lines = tokenize(src);
    cur.header(&lines, DEFORMATION_HEADER)?;
    let mut algebra: Option<AssocAlgebra> = None;
    let mut dependencies = Vec::new();
    let mut preset: Option<(usize, String)> = None;
    let mut params: Option<Vec<String>> = None;
    let mut order: Option<usize> = None;
    let mut betas: Vec<&Line> = Vec::new();
    let mut last = 1;
    for line in &lines[1..] {
        last = line.number;
        let key = line.tokens[0];
        let args = &line.tokens[1..];
        match key.text {
            "algebra" => {
                cur.arity(line, 2, usize::MAX)?;
                match args[0].text {
                    "preset" => {
                        let ps = args[2..]
                            .iter()
                            .map(|t| cur.count(line, *t))
                            .collect::<Result<Vec<_>, _>>()?;
                        algebra = Some(
                            preset_catalog(args[1].text, &ps)
                                .map_err(|e| cur.err(line.number, args[1].column, e.to_string()))?,
                        );
                    }
                    "file" => {
                        cur.arity(line, 2, 2)?;
                        let path = match base {
                            Some(b) => b.join(args[1].text),
                            None => Path::new(args[1].text).to_path_buf(),
                        };
                        let text = std::fs::read_to_string(&path).map_err(|e| {
                            cur.err(
                                line.number,
                                args[1].column,
                                format!("cannot read {}: {e}", path.display()),
                            )
                        })?;
                        algebra = Some(parse_algebra(&text, &path.display().to_string())?);
                        dependencies.push(text);
                    }
                    other => {
                        return Err(cur.err(
                            line.number,
                            args[0].column,
                            format!("expected 'preset' or 'file', got '{other}'"),
                        ));
                    }
                }
            }
            "preset" => {
                cur.arity(line, 1, 1)?;
                preset = Some((line.number, args[0].text.to_string()));
            }
            "params" => {
                cur.arity(line, 1, usize::MAX)?;
                params = Some(args.iter().map(|t| t.text.to_string()).collect());
            }
            "order" => {
                cur.arity(line, 1, 1)?;
                let n = cur.count(line, args[0])?;
                if n == 0 {
                    return Err(cur.err(line.number, args[0].column, "order must be at least 1"));
                }
                order = Some(n);
            }
            "beta" => {
                cur.arity(line, 5, 5)?;
                betas.push(line);
            }
            other => {
                return Err(cur.err(line.number, key.column, format!("unknown key '{other}'")));
            }
        }
    }
    let Some(order) = order else {
        return Err(cur.err(last, 1, "missing 'order' line"));
    };
    if let Some((ln, p)) = preset {
        if algebra.is_some() || params.is_some() || !betas.is_empty() {
            return Err(cur.err(ln, 1, "'preset' cannot be combined with algebra, params or beta"));
        }
        let deformation = deformation_preset(&p, order).map_err(|e| cur.err(ln, 1, e.to_string()))?;
        return Ok(DeformationInput {
            deformation,
            dependencies,
        });
    }
    let Some(a) = algebra else {
        return Err(cur.err(last, 1, "missing 'algebra' line"));
    };
    let Some(params) = params else {
        return Err(cur.err(last, 1, "missing 'params' line"));
    };
    let ring = BaseRing::with_labels(params, order);
    let d = a.dim();
    let mut corr: BTreeMap<usize, HochschildCochain> = BTreeMap::new();
    for line in &betas {
        let args = &line.tokens[1..];
        let mu = ring
            .parse_monomial(args[0].text)
            .map_err(|e| cur.err(line.number, args[0].column, e.to_string()))?;
        if mu == 0 {
            return Err(cur.err(line.number, args[0].column, "corrections need a nonconstant monomial"));
        }
        let i = cur.index(line, args[1], d)?;
        let j = cur.index(line, args[2], d)?;
        let k = cur.index(line, args[3], d)?;
        let c = cur.rational(line, args[4])?;
        let beta = corr.entry(mu).or_insert_with(|| HochschildCochain::zero(2, d, d));
        let mut v = beta.value(&[i, j]).clone();
        v = hhdeform::linalg::sv_axpy(&v, &c, &vec![(k, hhdeform::linalg::one())]);
        beta.set(&[i, j], v);
    }
    let at = betas.first().map(|l| l.number).unwrap_or(last);
    let deformation =
        StarDeformation::new(a, ring, corr).map_err(|e| cur.err(at, 1, format!("invalid deformation: {e}")))?;
    Ok(DeformationInput {
        deformation,
        dependencies,
    })
}

/// Writes a deformation over an inline-referenced algebra file name.
pub fn write_deformation(d: &StarDeformation, algebra_ref: &str) -> String {
    let ring = d.ring();
    let mut out = format!(
        "{DEFORMATION_HEADER}\nalgebra {algebra_ref}\nparams {}\norder {}\n",
        ring.param_labels().join(" "),
        d.order()
    );
    for (mu, beta) in d.corrections() {
        let da = d.algebra().dim();
        for i in 0..da {
            for j in 0..da {
                for (k, c) in beta.value(&[i, j]) {
                    out.push_str(&format!(
                        "beta {} {i} {j} {k} {}\n",
                        ring.monomial_label(*mu),
                        format_rational(c)
                    ));
                }
            }
        }
    }
    out
}
