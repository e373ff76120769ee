//! The ten acceptance criteria. Each one runs the library check and an
//! oracle written against raw structure constants, then prints one line.

use std::io::Write;
use std::process::Command;

use hhdeform::algebra::{preset_catalog, AssocAlgebra};
use hhdeform::deformation::{
    compare_with_conormal, deform_class, deformation_preset, equivalence_witness, first_order_from_cocycle,
    sequence_ia, Ext2Context, StarDeformation,
};
use hhdeform::dg::{build_r_model, formality_lift, verify_prop_cp};
use hhdeform::hochschild::HochschildCochain;
use hhdeform::koszul::{delta_wedge, ext_lambda, KoszulResolution};
use hhdeform::linalg::{int, zero, Rational};
use hhdeform_cli::selftest::criterion;

type Vector = Vec<Rational>;

fn is_zero(v: &[Rational]) -> bool {
    let z = zero();
    v.iter().all(|x| *x == z)
}

/// Incremental row echelon form that remembers how each stored row was built.
struct Echelon {
    rows: Vec<(usize, Vector, Vector)>,
    inserted: usize,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            inserted: 0,
        }
    }

    fn reduce(&self, v: &mut Vector, combo: &mut Vector) {
        for (p, row, rc) in &self.rows {
            if v[*p] == zero() {
                continue;
            }
            let c = v[*p].clone() / row[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if *y != zero() {
                    *x -= c.clone() * y;
                }
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                if *y != zero() {
                    *x -= c.clone() * y;
                }
            }
        }
    }

    /// Adds `v`; returns a dependency among inserted vectors when `v` is not new.
    fn insert(&mut self, mut v: Vector, total: usize) -> Option<Vector> {
        let mut combo = vec![zero(); total];
        combo[self.inserted] = int(1);
        self.inserted += 1;
        self.reduce(&mut v, &mut combo);
        match v.iter().position(|x| *x != zero()) {
            Some(p) => {
                self.rows.push((p, v, combo));
                None
            }
            None => Some(combo),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn contains(&self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        let mut c = vec![zero(); self.inserted];
        self.reduce(&mut v, &mut c);
        is_zero(&v)
    }
}

/// Bar cochains `a^{⊗p} -> a^{⊕b}` with the diagonal bimodule structure.
struct Raw {
    d: usize,
    b: usize,
    mult: Vec<Vec<Vector>>,
}

impl Raw {
    fn new(a: &AssocAlgebra, b: usize) -> Self {
        let d = a.dim();
        let mult = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut v = vec![zero(); d];
                        for (k, c) in a.product(i, j) {
                            v[*k] = c.clone();
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        Raw { d, b, mult }
    }

    fn m(&self) -> usize {
        self.d * self.b
    }

    fn tuples(&self, p: usize) -> usize {
        self.d.pow(p as u32)
    }

    fn digits(&self, p: usize, mut idx: usize) -> Vec<usize> {
        let mut t = vec![0; p];
        for slot in t.iter_mut().rev() {
            *slot = idx % self.d;
            idx /= self.d;
        }
        t
    }

    fn index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &x| acc * self.d + x)
    }

    fn cochain_dim(&self, p: usize) -> usize {
        self.tuples(p) * self.m()
    }

    fn at<'a>(&self, f: &'a [Rational], t: &[usize]) -> &'a [Rational] {
        let m = self.m();
        let i = self.index(t) * m;
        &f[i..i + m]
    }

    fn act(&self, v: &[Rational], x: usize, left: bool) -> Vector {
        let mut out = vec![zero(); self.m()];
        for blk in 0..self.b {
            for l in 0..self.d {
                let c = &v[blk * self.d + l];
                if *c == zero() {
                    continue;
                }
                let prod = if left { &self.mult[x][l] } else { &self.mult[l][x] };
                for (k, e) in prod.iter().enumerate() {
                    if *e != zero() {
                        out[blk * self.d + k] += c.clone() * e;
                    }
                }
            }
        }
        out
    }

    fn delta(&self, p: usize, f: &[Rational]) -> Vector {
        let m = self.m();
        let mut out = vec![zero(); self.cochain_dim(p + 1)];
        for idx in 0..self.tuples(p + 1) {
            let t = self.digits(p + 1, idx);
            let mut acc = self.act(self.at(f, &t[1..]), t[0], true);
            for i in 0..p {
                let s = if (i + 1) % 2 == 0 { int(1) } else { int(-1) };
                for (k, c) in self.mult[t[i]][t[i + 1]].iter().enumerate() {
                    if *c == zero() {
                        continue;
                    }
                    let mut u = t[..i].to_vec();
                    u.push(k);
                    u.extend_from_slice(&t[i + 2..]);
                    for (x, y) in acc.iter_mut().zip(self.at(f, &u)) {
                        *x += s.clone() * c * y;
                    }
                }
            }
            let last = self.act(self.at(f, &t[..p]), t[p], false);
            let s = if (p + 1).is_multiple_of(2) { int(1) } else { int(-1) };
            for (x, y) in acc.iter_mut().zip(last) {
                *x += s.clone() * y;
            }
            out[idx * m..(idx + 1) * m].clone_from_slice(&acc);
        }
        out
    }

    /// Echelon form of the image of `δ^p` and a basis of its kernel.
    fn image_and_kernel(&self, p: usize) -> (Echelon, Vec<Vector>) {
        let n = self.cochain_dim(p);
        let mut e = Echelon::new();
        let mut kernel = Vec::new();
        for col in 0..n {
            let mut basis = vec![zero(); n];
            basis[col] = int(1);
            if let Some(dep) = e.insert(self.delta(p, &basis), n) {
                kernel.push(dep);
            }
        }
        (e, kernel)
    }

    fn hh_dim(&self, p: usize) -> usize {
        let below = if p == 0 {
            0
        } else {
            self.image_and_kernel(p - 1).0.rank()
        };
        self.cochain_dim(p) - self.image_and_kernel(p).0.rank() - below
    }

    fn dense(&self, f: &HochschildCochain) -> Vector {
        let p = f.arity();
        let m = self.m();
        assert_eq!(f.dim_out(), m);
        let mut out = vec![zero(); self.cochain_dim(p)];
        for idx in 0..self.tuples(p) {
            for (k, c) in f.value(&self.digits(p, idx)) {
                out[idx * m + k] = c.clone();
            }
        }
        out
    }

    fn cup(&self, p: usize, f: &[Rational], q: usize, g: &[Rational]) -> Vector {
        assert_eq!(self.b, 1);
        let d = self.d;
        let mut out = vec![zero(); self.cochain_dim(p + q)];
        for idx in 0..self.tuples(p + q) {
            let t = self.digits(p + q, idx);
            let (x, y) = (self.at(f, &t[..p]), self.at(g, &t[p..]));
            for (i, xi) in x.iter().enumerate() {
                if *xi == zero() {
                    continue;
                }
                for (j, yj) in y.iter().enumerate() {
                    if *yj == zero() {
                        continue;
                    }
                    for (k, c) in self.mult[i][j].iter().enumerate() {
                        if *c != zero() {
                            out[idx * d + k] += xi.clone() * yj * c;
                        }
                    }
                }
            }
        }
        out
    }
}

fn sub(x: &[Rational], y: &[Rational]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a.clone() - b).collect()
}

fn algebra(name: &str, params: &[usize]) -> AssocAlgebra {
    preset_catalog(name, params).unwrap()
}

fn library(k: usize) -> Result<(), String> {
    let o = criterion(k).map_err(|e| format!("library error: {e}"))?;
    if o.pass {
        Ok(())
    } else {
        Err(format!("library check failed: {:?}", o.witness))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_hochschild_dims() -> Result<(), String> {
    library(1)?;
    for (name, params, expected) in [
        ("dual_numbers", vec![], vec![2, 1, 1, 1]),
        ("matrix", vec![2], vec![1, 0, 0]),
    ] {
        let raw = Raw::new(&algebra(name, &params), 1);
        let dims: Vec<usize> = (0..expected.len()).map(|p| raw.hh_dim(p)).collect();
        ensure(dims == expected, || format!("{name}: raw ranks give {dims:?}"))?;
    }
    Ok(())
}

fn c2_commutativity() -> Result<(), String> {
    library(2)?;
    for (name, params) in [
        ("dual_numbers", vec![]),
        ("truncated_poly", vec![3]),
        ("exterior", vec![2]),
    ] {
        let raw = Raw::new(&algebra(name, &params), 1);
        let levels: Vec<(Echelon, Vec<Vector>)> = (0..=2).map(|p| raw.image_and_kernel(p)).collect();
        let mut pairs = 0;
        for p in 0..=1 {
            for q in p..=(3 - p).min(2) {
                let boundaries = &levels[(p + q).max(1) - 1].0;
                let sign = if (p * q) % 2 == 0 { int(1) } else { int(-1) };
                for f in &levels[p].1 {
                    for g in &levels[q].1 {
                        let fg = raw.cup(p, f, q, g);
                        let gf = raw.cup(q, g, p, f);
                        let c: Vector = fg.iter().zip(&gf).map(|(x, y)| x.clone() - sign.clone() * y).collect();
                        let ok = if p + q == 0 {
                            is_zero(&c)
                        } else {
                            boundaries.contains(&c)
                        };
                        ensure(ok, || {
                            format!("{name}: commutator in degree {} is not a coboundary", p + q)
                        })?;
                        pairs += 1;
                    }
                }
            }
        }
        let cocycles: Vec<usize> = levels.iter().map(|l| l.1.len()).collect();
        ensure(pairs > 0 && cocycles.iter().all(|&z| z > 0), || {
            format!("{name}: cocycle counts {cocycles:?}")
        })?;
    }
    Ok(())
}

fn c3_round_trip() -> Result<(), String> {
    library(3)?;
    let a = algebra("truncated_poly", &[3]);
    let d = a.dim();
    let raw = Raw::new(&a, 1);
    let (image1, _) = raw.image_and_kernel(1);
    let ctx = Ext2Context::new(&a, 1).map_err(|e| e.to_string())?;
    let basis = ctx.normalized_basis().to_vec();
    ensure(basis.len() == 2, || format!("HH^2 has dimension {}", basis.len()))?;
    for xi in &basis {
        let dx = raw.dense(xi);
        ensure(is_zero(&raw.delta(2, &dx)), || "basis cocycle is not closed".into())?;
        let f = first_order_from_cocycle(&a, xi).map_err(|e| e.to_string())?;
        ensure(f.associativity_defect().is_none(), || {
            "not associative to first order".into()
        })?;
        ensure(raw.dense(&f.first_order()) == dx, || {
            "first-order term differs from the cocycle".into()
        })?;
    }
    let gamma = HochschildCochain::from_fn(1, d, d, |t| if t[0] == 0 { vec![] } else { vec![(t[0], int(2))] });
    let shifted = HochschildCochain::from_fn(1, d, d, |t| if t[0] == 2 { vec![(1, int(-1))] } else { vec![] });
    let (x1, x2) = (&basis[0], &basis[1]);
    let sample = [
        HochschildCochain::zero(2, d, d),
        x1.clone(),
        x1.axpy(&int(1), &ctx.differential(&gamma).unwrap()),
        x2.clone(),
        x2.axpy(&int(3), x1),
        x2.axpy(&int(1), &ctx.differential(&shifted).unwrap()),
    ];
    let defs: Vec<StarDeformation> = sample
        .iter()
        .map(|b| first_order_from_cocycle(&a, b).unwrap())
        .collect();
    let mut equal_pairs = 0;
    for i in 0..defs.len() {
        for j in 0..defs.len() {
            let diff = sub(&raw.dense(&sample[i]), &raw.dense(&sample[j]));
            let oracle = image1.contains(&diff);
            let w = equivalence_witness(&ctx, &defs[i], &defs[j]).map_err(|e| e.to_string())?;
            ensure(w.is_some() == oracle, || {
                format!("pair ({i}, {j}): oracle {oracle}, witness {}", w.is_some())
            })?;
            let ci = deform_class(&ctx, &defs[i]).unwrap();
            let cj = deform_class(&ctx, &defs[j]).unwrap();
            ensure((ci.class == cj.class) == oracle, || {
                format!("pair ({i}, {j}): class comparison")
            })?;
            equal_pairs += usize::from(oracle);
        }
    }
    // {0}, {x1, x1 + δγ}, {x2, x2 + δγ'}, {x2 + 3 x1}
    ensure(equal_pairs == 1 + 4 + 4 + 1, || {
        format!("{equal_pairs} equivalent ordered pairs")
    })
}

fn c4_extension_classes() -> Result<(), String> {
    library(4)?;
    for name in ["dual_numbers", "clifford"] {
        let def = deformation_preset(name, 1).map_err(|e| e.to_string())?;
        let a = def.algebra();
        let raw = Raw::new(a, def.nparams());
        let seq = sequence_ia(&def).map_err(|e| e.to_string())?;
        let c = raw.dense(&seq.ext2_cocycle(None).map_err(|e| e.to_string())?);
        let beta = raw.dense(&def.first_order());
        ensure(is_zero(&raw.delta(2, &c)), || {
            format!("{name}: sequence cocycle is not closed")
        })?;
        ensure(raw.image_and_kernel(1).0.contains(&sub(&c, &beta)), || {
            format!("{name}: sequence cocycle and β differ by a non-coboundary")
        })?;
    }
    Ok(())
}

fn c5_conormal() -> Result<(), String> {
    library(5)?;
    for name in ["dual_numbers", "clifford"] {
        let def = deformation_preset(name, 1).map_err(|e| e.to_string())?;
        let (da, n) = (def.algebra().dim(), def.nparams());
        let (seq, cq, cmp) = compare_with_conormal(&def).map_err(|e| e.to_string())?;
        let ia = da * da - da;
        ensure(cq.conormal.dim() == n * da, || {
            format!("{name}: conormal dimension {}", cq.conormal.dim())
        })?;
        ensure(cq.middle.dim() == n * da + ia, || {
            format!("{name}: middle dimension {}", cq.middle.dim())
        })?;
        ensure(seq.e1.dim() == n * da + ia, || {
            format!("{name}: E1 dimension {}", seq.e1.dim())
        })?;
        ensure(cq.report().holds() && cq.diag().report().holds() && cmp.holds(), || {
            format!("{name}: {cmp:?}")
        })?;
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c6_koszul() -> Result<(), String> {
    library(6)?;
    for n in 1..=2 {
        let dims = ext_lambda(n, 4).map_err(|e| e.to_string())?.dims();
        let expected: Vec<usize> = (0..=4)
            .map(|j| if j % 2 == 1 { 0 } else { binomial(n + j / 2 - 1, j / 2) })
            .collect();
        ensure(dims == expected, || format!("n={n}: {dims:?} vs {expected:?}"))?;
        let k = KoszulResolution::new(n, 3).map_err(|e| e.to_string())?;
        let w = delta_wedge(n);
        ensure(w.is_exact() && w.koszul_matches_boundary(&k).unwrap_or(false), || {
            format!("n={n}: boundary")
        })?;
    }
    Ok(())
}

fn c7_r_model() -> Result<(), String> {
    library(7)?;
    for n in 1..=2usize {
        for w in 1..=3usize {
            let rep = build_r_model(n, w)
                .and_then(|m| m.report())
                .map_err(|e| e.to_string())?;
            for k in 0..=n.min(w) {
                let expected = binomial(n, k) * binomial(n + w - k, n);
                let got = rep.dims.get(&-(k as i32)).copied().unwrap_or(0);
                ensure(got == expected, || {
                    format!("n={n} W={w}: dim R^-{k} = {got}, counted {expected}")
                })?;
            }
            for (deg, h) in &rep.cohomology {
                ensure(*h == usize::from(*deg == 0), || format!("n={n} W={w}: H^{deg} = {h}"))?;
            }
        }
    }
    Ok(())
}

fn c8_prop_cp() -> Result<(), String> {
    library(8)?;
    for name in ["trivial", "dual_numbers", "clifford"] {
        let def = deformation_preset(name, 1).map_err(|e| e.to_string())?;
        let (da, n) = (def.algebra().dim(), def.nparams());
        let rep = verify_prop_cp(&def).map_err(|e| e.to_string())?;
        let h0 = rep.cohomology.get(&0).copied().unwrap_or(0);
        let h1 = rep.cohomology.get(&-1).copied().unwrap_or(0);
        ensure(h0 == da && h1 == n * da, || format!("{name}: H^0 = {h0}, H^-1 = {h1}"))?;
        ensure(rep.truncation_quasi_iso, || {
            format!("{name}: comparison is not a quasi-isomorphism")
        })?;
    }
    Ok(())
}

fn c9_formality() -> Result<(), String> {
    library(9)?;
    for name in ["clifford", "dual_numbers"] {
        let def = deformation_preset(name, 2).map_err(|e| e.to_string())?;
        let a = def.algebra();
        let (d, n) = (a.dim(), def.nparams());
        let rep = formality_lift(&def, 2, 7).map_err(|e| e.to_string())?;
        ensure(
            rep.chain_maps && rep.commute && rep.commutator_nnz.iter().all(|c| c.2 == 0),
            || format!("{name}: lifts do not commute: {:?}", rep.commutator_nnz),
        )?;
        let full = Raw::new(a, n);
        let lifted = full.dense(&rep.class.representative);
        let beta = full.dense(&def.first_order());
        ensure(is_zero(&full.delta(2, &lifted)), || {
            format!("{name}: lifted cochain is not closed")
        })?;
        ensure(full.image_and_kernel(1).0.contains(&sub(&lifted, &beta)), || {
            format!("{name}: class differs")
        })?;
        let single = Raw::new(a, 1);
        let (mut image, _) = single.image_and_kernel(1);
        let before = image.rank();
        let total = single.cochain_dim(1) + n;
        for j in 0..n {
            image.insert(single.dense(&rep.class.representative.component(j, d)), total);
        }
        ensure(image.rank() == before + n, || {
            format!("{name}: component classes are dependent")
        })?;
    }
    Ok(())
}

fn selftest_body() -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hhdeform"))
        .args(["selftest", "--json"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("exit status {:?}", out.status.code()))?;
    Ok(out.stdout)
}

fn c10_determinism() -> Result<(), String> {
    let (first, second) = (selftest_body()?, selftest_body()?);
    ensure(!first.is_empty() && first == second, || {
        "canonical bodies differ".into()
    })
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Result<(), String>); 10] = [
        ("Hochschild dimensions", c1_hochschild_dims),
        ("graded commutativity", c2_commutativity),
        ("deformations and classes round trip", c3_round_trip),
        ("extension class agreement", c4_extension_classes),
        ("conormal sequences", c5_conormal),
        ("Koszul duality", c6_koszul),
        ("R model", c7_r_model),
        ("Ra ⊗_A Ra", c8_prop_cp),
        ("formality lift", c9_formality),
        ("determinism", c10_determinism),
    ];
    let mut failed = Vec::new();
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(()) => format!("criterion {:>2} PASS  {title} ({secs:.2}s)", k + 1),
            Err(e) => {
                failed.push(k + 1);
                format!("criterion {:>2} FAIL  {title} ({secs:.2}s): {e}", k + 1)
            }
        };
        writeln!(std::io::stderr(), "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
