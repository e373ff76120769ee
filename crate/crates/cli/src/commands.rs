use std::path::Path;

use serde_json::{json, Value};

use hhdeform::algebra::{preset_catalog, AssocAlgebra, Bimodule};
use hhdeform::deformation::{
    compare_with_conormal, cq_sequence, deform_class, deformation_preset, degreewise_residuals, equivalence_witness,
    extend_to, sequence_ia, Ext2Context, ExtClass2, StarDeformation,
};
use hhdeform::dg::{
    build_r_model, build_resolution, check_lemma_r, formality_lift, ra_tensor_ra, theta_exactness, theta_k_iso,
    verify_prop_cp,
};
use hhdeform::hochschild::{hh, tuple_count, tuple_digits, HochschildCochain};
use hhdeform::koszul::{check_multiplicativity, check_sym_action, delta_wedge, ext_lambda, KoszulResolution};
use hhdeform::linalg::{format_rational, SparseVec};

use crate::format::{parse_algebra, parse_deformation};
use crate::report::Report;
use crate::CliError;

/// An input together with the bytes that identify it.
#[derive(Clone, Debug)]
pub struct Input<T> {
    pub value: T,
    pub bytes: Vec<u8>,
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))
}

/// `preset:<name>[:p1,p2,..]` or a path to an algebra file.
pub fn load_algebra(spec: &str) -> Result<Input<AssocAlgebra>, CliError> {
    if let Some(rest) = spec.strip_prefix("preset:") {
        let (name, params) = rest.split_once(':').unwrap_or((rest, ""));
        let params = params
            .split(',')
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("bad preset parameter '{p}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let value = preset_catalog(name, &params)?;
        return Ok(Input {
            value,
            bytes: spec.as_bytes().to_vec(),
        });
    }
    let text = read(spec)?;
    Ok(Input {
        value: parse_algebra(&text, spec)?,
        bytes: text.into_bytes(),
    })
}

/// `preset:<name>` (order from `--order`, default 1) or a path to a deformation file.
pub fn load_deformation(spec: &str, order: Option<usize>) -> Result<Input<StarDeformation>, CliError> {
    if let Some(name) = spec.strip_prefix("preset:") {
        let n = order.unwrap_or(1);
        return Ok(Input {
            value: deformation_preset(name, n)?,
            bytes: format!("{spec}@{n}").into_bytes(),
        });
    }
    let text = read(spec)?;
    let parsed = parse_deformation(&text, spec, Path::new(spec).parent())?;
    let mut bytes = text.into_bytes();
    for dep in parsed.dependencies {
        bytes.extend(dep.into_bytes());
    }
    Ok(Input {
        value: parsed.deformation,
        bytes,
    })
}

pub fn vector_string(labels: &[String], v: &SparseVec) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let s = format_rational(c);
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(&labels[*i]);
    }
    out
}

/// Nonzero values of a cochain as `f(x, y) = ..` lines.
pub fn cochain_table(inputs: &[String], outputs: &[String], f: &HochschildCochain) -> Vec<String> {
    let mut rows = Vec::new();
    for idx in 0..tuple_count(f.dim_in(), f.arity()) {
        let v = f.value_at(idx);
        if v.is_empty() {
            continue;
        }
        let args: Vec<&str> = tuple_digits(f.dim_in(), f.arity(), idx)
            .iter()
            .map(|&i| inputs[i].as_str())
            .collect();
        rows.push(format!("f({}) = {}", args.join(", "), vector_string(outputs, v)));
    }
    rows
}

fn rationals(v: &SparseVec) -> Value {
    Value::Array(v.iter().map(|(i, c)| json!([i, format_rational(c)])).collect())
}

fn class_json(a: &AssocAlgebra, n: usize, c: &ExtClass2) -> Value {
    let labels = a.labels().to_vec();
    let per_param: Vec<Value> = (0..n)
        .map(|j| {
            Value::Array(
                cochain_table(&labels, &labels, &c.representative.component(j, a.dim()))
                    .into_iter()
                    .map(Value::String)
                    .collect(),
            )
        })
        .collect();
    json!({
        "coordinates": rationals(&c.class.coordinates),
        "zero": c.is_zero(),
        "cocycle_per_parameter": per_param,
    })
}

fn first_order(d: &StarDeformation) -> Result<StarDeformation, CliError> {
    Ok(if d.order() == 1 { d.clone() } else { d.truncate(1)? })
}

pub fn cmd_hh(a: &Input<AssocAlgebra>, lo: usize, hi: usize) -> Result<Report, CliError> {
    let mut r = Report::new("hh", &[&a.bytes, format!("{lo}..{hi}").as_bytes()]);
    let alg = &a.value;
    let m = Bimodule::regular(alg);
    let labels = alg.labels().to_vec();
    let mut dims = Vec::new();
    let mut reps = serde_json::Map::new();
    for n in lo..=hi {
        let space = r.time(&format!("HH^{n}"), || hh(alg, &m, n))?;
        dims.push(json!(space.dim()));
        let tables: Vec<Value> = space
            .representatives()
            .iter()
            .map(|f| {
                Value::Array(
                    cochain_table(&labels, &labels, f)
                        .into_iter()
                        .map(Value::String)
                        .collect(),
                )
            })
            .collect();
        reps.insert(format!("HH^{n}"), Value::Array(tables));
    }
    r.check(
        "algebra is valid",
        alg.validate().is_valid(),
        alg.validate().first_witness(),
    );
    r.set(
        "algebra",
        json!({"name": alg.name(), "dim": alg.dim(), "basis": labels}),
    );
    r.set("degrees", json!([lo, hi]));
    r.set("dims", Value::Array(dims));
    r.set("representatives", Value::Object(reps));
    Ok(r)
}

pub fn cmd_deform_class(d: &Input<StarDeformation>) -> Result<Report, CliError> {
    let mut r = Report::new("deform-class", &[&d.bytes]);
    let def = &d.value;
    let a = def.algebra();
    let n = def.nparams();
    let ctx = Ext2Context::new(a, n)?;
    let class = r.time("class", || deform_class(&ctx, def))?;
    let seq = sequence_ia(&first_order(def)?)?;
    let from_seq = r.time("sequence", || -> Result<ExtClass2, CliError> {
        Ok(ctx.class_of(&seq.ext2_cocycle(None)?)?)
    })?;
    r.check(
        "deformation is associative to its order",
        def.associativity_defect().is_none(),
        None,
    );
    r.check(
        "extension class of the sequence equals the deformation class",
        from_seq.class == class.class,
        Some(format!(
            "sequence {:?} vs deformation {:?}",
            from_seq.class.coordinates, class.class.coordinates
        )),
    );
    r.set("algebra", json!({"name": a.name(), "dim": a.dim()}));
    r.set("params", json!(def.ring().param_labels()));
    r.set("order", json!(def.order()));
    r.set("hh2_dim", json!(ctx.dim()));
    r.set("class", class_json(a, n, &class));
    Ok(r)
}

pub fn cmd_equiv(d1: &Input<StarDeformation>, d2: &Input<StarDeformation>) -> Result<Report, CliError> {
    let mut r = Report::new("equiv", &[&d1.bytes, &d2.bytes]);
    let (x, y) = (first_order(&d1.value)?, first_order(&d2.value)?);
    if x.algebra() != y.algebra() || x.nparams() != y.nparams() {
        return Err(CliError::Usage(
            "equiv needs deformations of the same algebra with the same parameters".into(),
        ));
    }
    let a = x.algebra();
    let ctx = Ext2Context::new(a, x.nparams())?;
    let (c1, c2) = (deform_class(&ctx, &x)?, deform_class(&ctx, &y)?);
    let w = r.time("witness", || equivalence_witness(&ctx, &x, &y))?;
    let equal = c1.class == c2.class;
    r.check(
        "a witness exists exactly when the classes agree",
        equal == w.is_some(),
        Some(format!("classes equal: {equal}, witness found: {}", w.is_some())),
    );
    r.set("classes_equal", json!(equal));
    let params = x.ring().param_labels();
    let out_labels: Vec<String> = params
        .iter()
        .flat_map(|t| a.labels().iter().map(move |l| format!("{l}*{t}")))
        .collect();
    match w {
        Some(w) => r.set(
            "verdict",
            json!({"equivalent": true, "gamma": cochain_table(a.labels(), &out_labels, &w.gamma)}),
        ),
        None => r.set("verdict", json!({"equivalent": false, "text": "inequivalent"})),
    }
    Ok(r)
}

pub fn cmd_obstruct(d: &Input<StarDeformation>, target: usize) -> Result<Report, CliError> {
    let mut r = Report::new("obstruct", &[&d.bytes, target.to_string().as_bytes()]);
    let def = &d.value;
    let steps = r.time("extend", || extend_to(def, target))?;
    let mut rows = Vec::new();
    for s in &steps {
        let ring_labels = def.ring().param_labels().to_vec();
        let obstructed: Vec<String> = s
            .obstructed_monomials()
            .iter()
            .map(|&mu| {
                hhdeform::deformation::BaseRing::with_labels(ring_labels.clone(), s.target_order).monomial_label(mu)
            })
            .collect();
        if let Some(e) = &s.extension {
            let residuals = degreewise_residuals(e)?;
            let bad: Vec<String> = residuals
                .iter()
                .filter(|(_, f)| !f.is_zero())
                .map(|(mu, _)| e.ring().monomial_label(*mu))
                .collect();
            r.check(
                format!("extension to order {} is associative", s.target_order),
                bad.is_empty() && e.associativity_defect().is_none(),
                Some(format!("nonzero residuals at {}", bad.join(", "))),
            );
        }
        rows.push(json!({
            "target_order": s.target_order,
            "obstructed": s.is_obstructed(),
            "obstructed_monomials": obstructed,
            "extended": s.extension.is_some(),
        }));
    }
    let reached = steps
        .last()
        .and_then(|s| s.extension.as_ref())
        .map(|e| e.order())
        .unwrap_or(def.order());
    r.set("start_order", json!(def.order()));
    r.set("target_order", json!(target));
    r.set("reached_order", json!(reached.max(def.order())));
    r.set("steps", Value::Array(rows));
    Ok(r)
}

pub fn cmd_cq_deformation(d: &Input<StarDeformation>) -> Result<Report, CliError> {
    let mut r = Report::new("cq", &[&d.bytes]);
    let def = first_order(&d.value)?;
    let (seq, cq, cmp) = r.time("sequences", || compare_with_conormal(&def))?;
    let sr = seq.report();
    r.check(
        "the four-term sequence of the deformation is exact",
        sr.holds(),
        sr.first_failure().map(|e| e.to_string()),
    );
    let cr = cq.report();
    r.check("the conormal sequence is exact", cr.holds(), Some(format!("{cr:?}")));
    let dr = cq.diag().report();
    r.check(
        "the spliced conormal sequence is exact",
        dr.holds(),
        dr.first_failure().map(|e| e.to_string()),
    );
    r.check(
        "the two sequences are isomorphic",
        cmp.holds(),
        Some(format!("{cmp:?}")),
    );
    r.set(
        "dims",
        json!({"M": seq.m.dim(), "E1": seq.e1.dim(), "E0": seq.e0.dim(), "Q": seq.q.dim(),
        "conormal": cq.conormal.dim(), "middle": cq.middle.dim()}),
    );
    Ok(r)
}

pub fn cmd_cq_algebra(a: &Input<AssocAlgebra>, ideal: &[String]) -> Result<Report, CliError> {
    let alg = &a.value;
    let mut r = Report::new("cq", &[&a.bytes, ideal.join(",").as_bytes()]);
    let gens = ideal
        .iter()
        .map(|l| {
            alg.index_of(l)
                .map(|i| vec![(i, hhdeform::linalg::one())])
                .ok_or_else(|| CliError::Usage(format!("unknown basis label '{l}' in --ideal")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let j = alg.ideal_generated(&gens);
    let cq = r.time("conormal", || cq_sequence(alg, &j))?;
    let cr = cq.report();
    r.check("the conormal sequence is exact", cr.holds(), Some(format!("{cr:?}")));
    let dr = cq.diag().report();
    r.check(
        "the spliced conormal sequence is exact",
        dr.holds(),
        dr.first_failure().map(|e| e.to_string()),
    );
    r.set(
        "dims",
        json!({"A": alg.dim(), "J": j.ncols(), "a": cq.quotient.dim(),
        "conormal": cq.conormal.dim(), "middle": cq.middle.dim()}),
    );
    Ok(r)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn cmd_koszul_check(n: usize, depth: usize) -> Result<Report, CliError> {
    let mut r = Report::new("koszul-check", &[format!("{n}/{depth}").as_bytes()]);
    let k = KoszulResolution::new(n, depth)?;
    let rep = k.report()?;
    r.check(
        "K resolves k_∧ below its depth",
        rep.is_resolution(),
        Some(format!("homology {:?}", rep.homology)),
    );
    let sym = r.time("sym", || check_sym_action(&k))?;
    r.check(
        "the s_j are commuting chain maps spanning Ext^2",
        sym.holds(),
        Some(format!("{sym:?}")),
    );
    let max = 2 * depth - 2;
    let ext = r.time("ext", || ext_lambda(n, max))?;
    let dims = ext.dims();
    let expected: Vec<usize> = (0..=max)
        .map(|j| if j % 2 == 0 { binomial(n + j / 2 - 1, j / 2) } else { 0 })
        .collect();
    r.check(
        "Ext^{2i} = C(n+i-1, i) and Ext^odd = 0",
        dims == expected,
        Some(format!("{dims:?} vs {expected:?}")),
    );
    let w = delta_wedge(n);
    r.check("0 -> T*[1] -> Λ/Λ<-1 -> k -> 0 is exact", w.is_exact(), None);
    let kb = r.time("boundary", || w.koszul_matches_boundary(&k))?;
    r.check("koszul(Id_T) equals the boundary class", kb, None);
    if depth >= 3 {
        let mult = r.time("yoneda", || check_multiplicativity(&k))?;
        r.check("Yoneda products of the s_j classes", mult, None);
    }
    r.set("nparams", json!(n));
    r.set("depth", json!(depth));
    r.set("ranks", json!(rep.ranks));
    r.set("ext_dims", json!(dims));
    Ok(r)
}

pub fn cmd_r_check(n: usize, weight: usize) -> Result<Report, CliError> {
    let mut r = Report::new("r-check", &[format!("{n}/{weight}").as_bytes()]);
    let model = build_r_model(n, weight)?;
    let rep = r.time("model", || model.report())?;
    r.check(
        "R is a resolution of the ground field",
        rep.holds(),
        Some(format!("{:?}", rep.cohomology)),
    );
    let lemma = r.time("lemma", || check_lemma_r(&model))?;
    r.check(
        "R ⊗_O R splits as R_Δ ⊗ Λ with kernel generated by Λ_{<0}",
        lemma.holds(),
        Some(format!("{lemma:?}")),
    );
    let dims = |m: &std::collections::BTreeMap<i32, usize>| -> Value {
        Value::Object(m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
    };
    r.set("dims", dims(&rep.dims));
    r.set("cohomology", dims(&rep.cohomology));
    r.set("r_tensor_r_dims", json!(lemma.dims));
    Ok(r)
}

fn degree_map(m: &std::collections::BTreeMap<i32, usize>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

pub fn cmd_prop_cp(d: &Input<StarDeformation>) -> Result<Report, CliError> {
    let mut r = Report::new("prop-cp", &[&d.bytes]);
    let def = &d.value;
    let res = r.time("resolution", || build_resolution(def))?;
    let rr = res.report()?;
    r.check("Ra resolves a through p", rr.holds(), Some(format!("{rr:?}")));
    let x = r.time("tensor", || ra_tensor_ra(&res))?;
    let iso = theta_k_iso(&res, &x)?;
    r.check("Θ(k_∧) ≅ Ra through multiplication", iso, None);
    for inst in r.time("theta", || theta_exactness(&res, &x))? {
        r.check(
            format!("H(Θ({})) = dim a · H({}) in the window", inst.name, inst.name),
            inst.holds(),
            Some(format!("{:?} vs {:?}", inst.cohomology, inst.expected)),
        );
    }
    let cp = r.time("prop", || verify_prop_cp(def))?;
    r.check(
        "H^0 = a and H^-1 = a ⊗ T* dimension-wise",
        cp.cohomology.get(&0) == Some(&cp.expected_h0)
            && cp.cohomology.get(&-1).copied().unwrap_or(0) == cp.expected_h_minus1,
        Some(format!("{:?}", cp.cohomology)),
    );
    r.check(
        "truncation and quotient comparison is a quasi-isomorphism",
        cp.truncation_quasi_iso,
        None,
    );
    r.check("all remaining checks on Ra ⊗_A Ra", cp.holds(), Some(format!("{cp:?}")));
    r.set("ra_dims", degree_map(&rr.dims));
    r.set("x_dims", degree_map(&cp.dims));
    r.set("x_cohomology", degree_map(&cp.cohomology));
    Ok(r)
}

pub fn cmd_formality(d: &Input<StarDeformation>, depth: usize, seed: u64) -> Result<Report, CliError> {
    let mut r = Report::new("formality", &[&d.bytes, format!("{depth}/{seed}").as_bytes()]);
    let def = &d.value;
    let rep = r.time("lift", || formality_lift(def, depth, seed))?;
    r.check("Θ(s_j) are chain maps", rep.chain_maps, None);
    r.check("Θ(s_j) are bimodule maps", rep.bimodule_maps, None);
    r.check(
        "Θ(s_i) and Θ(s_j) commute entrywise",
        rep.commute,
        Some(format!("{:?}", rep.commutator_nnz)),
    );
    for (j, ok) in rep.agrees.iter().enumerate() {
        r.check(
            format!("lifted class {} equals the deformation class", j + 1),
            *ok,
            Some(format!("lifted {:?} expected {:?}", rep.lifted[j], rep.expected[j])),
        );
    }
    r.check(
        "a second randomized lift gives the same classes",
        rep.lift_independent,
        None,
    );
    r.check(
        "assembled class equals deform_class",
        rep.class.class == rep.deformation_class.class,
        None,
    );
    r.set("dims", json!(rep.dims));
    r.set("window", degree_map(&rep.window));
    r.set(
        "commutator_nonzero_entries",
        Value::Array(
            rep.commutator_nnz
                .iter()
                .map(|(i, j, c)| json!([i + 1, j + 1, c]))
                .collect(),
        ),
    );
    r.set("class_rank", json!(rep.class_rank));
    r.set("lifted", Value::Array(rep.lifted.iter().map(rationals).collect()));
    r.set("expected", Value::Array(rep.expected.iter().map(rationals).collect()));
    r.set("class", class_json(def.algebra(), def.nparams(), &rep.class));
    Ok(r)
}
