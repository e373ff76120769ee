use serde_json::{json, Value};

use hhdeform::algebra::{preset_catalog, AssocAlgebra, Bimodule};
use hhdeform::deformation::{
    deform_class, equivalence_witness, first_order_from_cocycle, Ext2Context, StarDeformation,
};
use hhdeform::dg::{build_r_model, check_lemma_r};
use hhdeform::hochschild::{check_graded_commutativity, hh_dims, HochschildCochain, Model};
use hhdeform::linalg::{int, Matrix};

use crate::commands::{
    cmd_cq_algebra, cmd_cq_deformation, cmd_deform_class, cmd_formality, cmd_koszul_check, cmd_prop_cp, load_algebra,
    load_deformation, Input,
};
use crate::report::Report;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// Criteria 1 to 9 once.
    Small,
    /// Criteria 1 to 9, then a second pass compared byte for byte.
    Full,
}

impl std::str::FromStr for Scale {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "small" => Ok(Scale::Small),
            "full" => Ok(Scale::Full),
            _ => Err(CliError::Usage(format!("unknown scale '{s}', expected small or full"))),
        }
    }
}

/// Result of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    pub witness: Option<String>,
    pub data: Value,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            witness: None,
            data: Value::Object(Default::default()),
        }
    }

    fn require(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok && self.pass {
            self.pass = false;
            self.witness = Some(witness());
        }
    }

    fn put(&mut self, key: &str, v: Value) {
        self.data.as_object_mut().expect("object").insert(key.into(), v);
    }

    /// Folds in the checks of a sub-command and keeps its results under `key`.
    fn absorb(&mut self, key: &str, r: &Report) {
        if let Some(c) = r.checks.iter().find(|c| !c.pass) {
            let w = c.witness.clone().unwrap_or_default();
            self.require(false, || format!("{key}: {} {w}", c.name));
        }
        self.put(key, Value::Object(r.results.clone()));
    }
}

pub const CRITERIA: [&str; 9] = [
    "Hochschild dimensions from the bar complex",
    "graded commutativity of the cup product",
    "first-order deformations and classes correspond",
    "extension class of the sequence equals the deformation class",
    "conormal sequences are exact",
    "Koszul duality for the exterior algebra",
    "the R model resolves the ground field",
    "Ra ⊗_A Ra in non-positive degrees",
    "commuting lifts recover the deformation class",
];

fn preset(name: &str, params: &[usize]) -> Result<AssocAlgebra, CliError> {
    Ok(preset_catalog(name, params)?)
}

fn def(name: &str, order: usize) -> Result<Input<StarDeformation>, CliError> {
    load_deformation(&format!("preset:{name}"), Some(order))
}

fn hochschild_dims() -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    for (name, params, hi, expected) in [
        ("dual_numbers", vec![], 3, vec![2, 1, 1, 1]),
        ("matrix", vec![2], 2, vec![1, 0, 0]),
    ] {
        let a = preset(name, &params)?;
        let dims = hh_dims(&a, &Bimodule::regular(&a), 0..=hi, Model::Bar)?;
        o.require(dims == expected, || format!("{name}: {dims:?} vs {expected:?}"));
        o.put(name, json!(dims));
    }
    Ok(o)
}

fn commutativity() -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    for (name, params) in [
        ("dual_numbers", vec![]),
        ("truncated_poly", vec![3]),
        ("exterior", vec![2]),
    ] {
        let a = preset(name, &params)?;
        let rep = check_graded_commutativity(&a, 4, Model::Normalized)?;
        let bad = rep.pairs.iter().find(|p| !p.commutes);
        o.require(bad.is_none(), || format!("{}: pair {:?}", a.name(), bad));
        o.put(a.name(), json!({"hh_dims": rep.hh_dims, "pairs": rep.pairs.len()}));
    }
    Ok(o)
}

fn round_trip() -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    let a = preset("truncated_poly", &[3])?;
    let d = a.dim();
    let ctx = Ext2Context::new(&a, 1)?;
    let basis = ctx.normalized_basis().to_vec();
    let mut classes = Vec::new();
    for (i, xi) in basis.iter().enumerate() {
        let f = first_order_from_cocycle(&a, xi)?;
        o.require(f.associativity_defect().is_none(), || {
            format!("basis class {i} is not a deformation")
        });
        let back = deform_class(&ctx, &f)?;
        let direct = ctx.class_of(xi)?;
        o.require(back.class == direct.class, || {
            format!("basis class {i} does not come back")
        });
        classes.push(back.class.coordinates);
    }
    let rank = Matrix::from_sparse_columns(ctx.dim(), &classes).rank();
    o.require(basis.len() == ctx.dim() && rank == ctx.dim(), || {
        format!("{} classes of rank {rank}", basis.len())
    });
    o.require(basis.len() >= 2, || "sample needs two independent classes".into());
    if !o.pass {
        return Ok(o);
    }

    // γ vanishes on the unit so that β + δγ stays normalized.
    let unit = a
        .unit_index()
        .ok_or_else(|| CliError::Usage("algebra has no basis unit".into()))?;
    let gamma = |shift: usize| {
        HochschildCochain::from_fn(1, d, d, |t| {
            if t[0] == unit {
                vec![]
            } else {
                vec![((t[0] + shift) % d, int(1 + t[0] as i64))]
            }
        })
    };
    let (x1, x2) = (&basis[0], &basis[1]);
    let zero = HochschildCochain::zero(2, d, d);
    let sample = [
        zero.clone(),
        x1.clone(),
        x1.axpy(&int(1), &ctx.differential(&gamma(1))?),
        x2.clone(),
        x1.axpy(&int(1), x2),
        x2.axpy(&int(-1), &ctx.differential(&gamma(2))?),
    ];
    let defs = sample
        .iter()
        .map(|b| first_order_from_cocycle(&a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let cls = defs
        .iter()
        .map(|f| deform_class(&ctx, f))
        .collect::<Result<Vec<_>, _>>()?;
    let mut equivalent = 0;
    for i in 0..defs.len() {
        for j in 0..defs.len() {
            let same = cls[i].class == cls[j].class;
            let w = equivalence_witness(&ctx, &defs[i], &defs[j])?;
            o.require(same == w.is_some(), || {
                format!("pair ({i}, {j}): equal classes {same}, witness {}", w.is_some())
            });
            equivalent += usize::from(same);
        }
    }
    o.put("hh2_dim", json!(ctx.dim()));
    o.put("sample", json!(defs.len()));
    o.put("equivalent_pairs", json!(equivalent));
    Ok(o)
}

fn extension_classes() -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    for name in ["dual_numbers", "clifford"] {
        o.absorb(name, &cmd_deform_class(&def(name, 1)?)?);
    }
    Ok(o)
}

fn conormal() -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    let a = load_algebra("preset:truncated_poly:3")?;
    o.absorb("truncated_poly", &cmd_cq_algebra(&a, &["x^2".to_string()])?);
    for name in ["dual_numbers", "clifford"] {
        o.absorb(name, &cmd_cq_deformation(&def(name, 1)?)?);
    }
    Ok(o)
}

fn koszul() -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    for n in 1..=2 {
        o.absorb(&format!("n={n}"), &cmd_koszul_check(n, 3)?);
    }
    Ok(o)
}

fn r_model() -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    for n in 1..=2 {
        for w in 1..=3 {
            let model = build_r_model(n, w)?;
            let rep = model.report()?;
            o.require(rep.holds(), || format!("n={n} W={w}: {:?}", rep.cohomology));
            let mut entry = json!({"cohomology": rep.cohomology.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>()});
            if w <= 2 {
                let lemma = check_lemma_r(&model)?;
                o.require(lemma.holds(), || format!("n={n} W={w}: {lemma:?}"));
                entry["lemma"] = json!(lemma.holds());
            }
            o.put(&format!("n={n} W={w}"), entry);
        }
    }
    Ok(o)
}

fn prop_cp() -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    for name in ["trivial", "dual_numbers", "clifford"] {
        o.absorb(name, &cmd_prop_cp(&def(name, 1)?)?);
    }
    Ok(o)
}

fn formality() -> Result<Outcome, CliError> {
    let mut o = Outcome::new();
    for name in ["clifford", "dual_numbers"] {
        o.absorb(name, &cmd_formality(&def(name, 2)?, 2, 0)?);
    }
    Ok(o)
}

/// Runs acceptance criterion `k` in `1..=9`.
pub fn criterion(k: usize) -> Result<Outcome, CliError> {
    match k {
        1 => hochschild_dims(),
        2 => commutativity(),
        3 => round_trip(),
        4 => extension_classes(),
        5 => conormal(),
        6 => koszul(),
        7 => r_model(),
        8 => prop_cp(),
        9 => formality(),
        _ => Err(CliError::Usage(format!("no criterion {k}"))),
    }
}

fn single_pass() -> Result<Report, CliError> {
    let mut r = Report::new("selftest", &[]);
    for (i, title) in CRITERIA.iter().enumerate() {
        let k = i + 1;
        let o = r.time(&format!("criterion{k}"), || criterion(k))?;
        r.check(format!("criterion {k}: {title}"), o.pass, o.witness);
        r.set(&format!("criterion_{k}"), o.data);
    }
    Ok(r)
}

pub fn cmd_selftest(scale: Scale) -> Result<Report, CliError> {
    let mut r = single_pass()?;
    if scale == Scale::Full {
        let again = single_pass()?;
        r.timings
            .extend(again.timings.iter().map(|(k, t)| (format!("rerun.{k}"), *t)));
        let same = r.canonical_json() == again.canonical_json();
        r.check(
            "criterion 10: repeated runs give identical report bodies",
            same,
            Some("bodies differ".into()),
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales_parse() {
        assert_eq!("small".parse::<Scale>().unwrap(), Scale::Small);
        assert!("huge".parse::<Scale>().is_err());
    }

    #[test]
    fn cheap_criteria_pass() {
        for k in [1, 4, 6] {
            let o = criterion(k).unwrap();
            assert!(o.pass, "criterion {k}: {:?}", o.witness);
        }
        assert!(criterion(10).is_err());
    }
}
