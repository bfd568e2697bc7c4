//! Acceptance criteria, one printed line each. Every criterion compares the
//! library against an oracle computed here from raw structure constants, or
//! runs the shipped binary on the fixture corpus.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::thread;
use std::time::{Duration, Instant};

use qpb::braiding::{braid_axioms, classicality_report};
use qpb::bundle::Bundle;
use qpb::calculus::{BaseCalculus, TotalCalculus};
use qpb::fodc::Fodc;
use qpb::gauge::Gauge;
use qpb::hopf::{preset, Hopf, HopfKind};
use qpb::linalg::{add_entry, unit, LinearMap, SVec};
use qpb::report::ValidationReport;
use qpb::tensor::{key, Tensor};
use qpb::Scalar;

type Outcome = Result<String, String>;

const Z: [&str; 3] = ["Z2", "Z3", "S3"];

fn fun(g: &str) -> Hopf {
    preset(g, HopfKind::FunctionAlgebra).unwrap()
}

fn alg(g: &str) -> Hopf {
    preset(g, HopfKind::GroupAlgebra).unwrap()
}

fn passes(rep: &ValidationReport, what: &str) -> Result<usize, String> {
    if rep.records.is_empty() {
        return Err(format!("{what}: no records"));
    }
    if !rep.all_pass() {
        return Err(format!("{what}:\n{}", rep.to_text()));
    }
    Ok(rep.records.len())
}

fn rational(s: &str) -> Scalar {
    Scalar::parse(s, 1).unwrap()
}

fn braiding() -> Outcome {
    let cases = [
        ("C(Z3) over a point", Bundle::point(fun("Z3")).unwrap()),
        ("C[S3] over a point", Bundle::point(alg("S3")).unwrap()),
        ("C(X)⊗C(Z2), |X| = 2", Bundle::trivial(fun("Z2"), 2).unwrap()),
    ];
    let mut n = 0;
    for (name, b) in &cases {
        let start = Instant::now();
        n += passes(&braid_axioms(b, "braiding", "inv"), name)?;
        if start.elapsed() > Duration::from_secs(10) {
            return Err(format!("{name}: braid axioms took {:?}", start.elapsed()));
        }
    }
    Ok(format!("{n} braid identities on 3 bundles"))
}

fn dichotomy() -> Outcome {
    for g in Z {
        let d = classicality_report(&Bundle::point(fun(g)).unwrap()).map_err(|e| e.to_string())?;
        if d.flags() != [true; 4] {
            return Err(format!("C({g}): flags {:?}", d.flags()));
        }
    }
    let d = classicality_report(&Bundle::point(alg("S3")).unwrap()).map_err(|e| e.to_string())?;
    if d.flags() != [false; 4] || d.involutive.is_none() {
        return Err(format!("C[S3]: flags {:?}", d.flags()));
    }
    Ok("C(G) classical for Z2, Z3, S3; C[S3] non-classical with σ² witness".into())
}

/// `τ(a) = κ(a₍₁₎) ⊗ a₍₂₎` over a point.
fn tau_oracle(b: &Bundle, a: usize) -> Tensor {
    let h = &b.group;
    let pf = b.product_form().unwrap();
    let at = |i: usize| pf.join(0, i).unwrap();
    let mut t = Tensor::zero();
    for (k, c) in h.coprod[a].iter() {
        for (i, x) in &h.kappa(&unit(k[0] as usize)) {
            t.add_term(key(&[at(*i), at(k[1] as usize)]), c * x);
        }
    }
    t
}

fn translation() -> Outcome {
    let mut n = 0;
    for g in Z {
        for h in [fun(g), alg(g)] {
            let b = Bundle::point(h).unwrap();
            n += passes(&b.translation_identities("translation"), g)?;
            for a in 0..b.dim_h() {
                if b.tau_of(&unit(a)) != tau_oracle(&b, a) {
                    return Err(format!("{g}: τ({}) differs from κ(a₁)⊗a₂", b.group.label(a)));
                }
            }
        }
    }
    for g in ["Z2", "Z3"] {
        n += passes(&Bundle::trivial(fun(g), 2).unwrap().translation_identities("translation"), g)?;
    }
    Ok(format!("{n} translation identities; τ matches κ(a₁)⊗a₂ on 6 point bundles"))
}

/// Dimension of the space of functionals `h` with `(h⊗id)Δ(a) = h(a)1`.
fn invariant_functionals(h: &Hopf) -> (usize, Vec<SVec>) {
    let d = h.dim();
    let one = h.alg.one();
    let cols = (0..d)
        .map(|i| {
            let mut col = SVec::new();
            for a in 0..d {
                for (k, c) in h.coprod[a].iter() {
                    if k[0] as usize == i {
                        add_entry(&mut col, a * d + k[1] as usize, c);
                    }
                }
                if a == i {
                    for (j, x) in &one {
                        add_entry(&mut col, a * d + j, &-x);
                    }
                }
            }
            col
        })
        .collect();
    let map = LinearMap::new(d, d * d, cols).unwrap();
    let k = map.kernel();
    (k.len(), k)
}

fn haar() -> Outcome {
    for g in Z {
        for (h, functions) in [(fun(g), true), (alg(g), false)] {
            let d = h.dim();
            let expected: Vec<Scalar> = if functions {
                vec![rational(&format!("1/{d}")); d]
            } else {
                let one = h.alg.one();
                (0..d).map(|i| one.get(&i).cloned().unwrap_or_else(Scalar::zero)).collect()
            };
            if h.haar.as_ref() != Some(&expected) {
                return Err(format!("{g}: Haar {:?}", h.haar));
            }
            let (n, _) = invariant_functionals(&h);
            if n != 1 {
                return Err(format!("{g}: {n} invariant functionals"));
            }
        }
    }
    Ok("Haar = 1/|G| on C(G), δ_e on C[G]; invariant functionals are one-dimensional".into())
}

/// `dim ker(F₂ − (·⊗1))` on `H⊗H` for the bundle over a point.
fn invariant_pairs(h: &Hopf) -> usize {
    let d = h.dim();
    let one = h.alg.one();
    let mut rows: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut row = |k| {
        let n = rows.len();
        *rows.entry(k).or_insert(n)
    };
    let mut cols = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut col = SVec::new();
            for (ki, ci) in h.coprod[i].iter() {
                for (kj, cj) in h.coprod[j].iter() {
                    let prod = h.alg.mul(&unit(ki[1] as usize), &unit(kj[1] as usize));
                    for (m, x) in &prod {
                        add_entry(&mut col, row((ki[0] as usize, kj[0] as usize, *m)), &(&(ci * cj) * x));
                    }
                }
            }
            for (m, x) in &one {
                add_entry(&mut col, row((i, j, *m)), &-x);
            }
            cols.push(col);
        }
    }
    LinearMap::new(d * d, d * d * d, cols).unwrap().kernel().len()
}

fn gauge() -> Outcome {
    let mut n = 0;
    for (name, h) in [("C(Z2)", fun("Z2")), ("C[S3]", alg("S3")), ("C(Z3)", fun("Z3"))] {
        let b = Bundle::point(h.clone()).unwrap();
        let g = Gauge::new(&b).map_err(|e| e.to_string())?;
        n += passes(&g.identities("gauge"), name)?;
        let oracle = invariant_pairs(&h);
        if g.dim() != oracle || oracle != h.dim() {
            return Err(format!("{name}: dim L = {}, oracle {oracle}, dim H = {}", g.dim(), h.dim()));
        }
    }
    let b = Bundle::point(fun("S3")).unwrap();
    let g = Gauge::new(&b).map_err(|e| e.to_string())?;
    let iso = g.isotypic_decompose().map_err(|e| e.to_string())?;
    passes(&iso.report, "C(S3) isotypic")?;
    let mut m: Vec<usize> = iso.components.iter().map(|c| c.multiplicity.unwrap_or(0)).collect();
    m.sort();
    let squares: usize = iso.components.iter().map(|c| c.irrep_dim * c.irrep_dim).sum();
    if m != [1, 1, 2] || squares != 6 {
        return Err(format!("C(S3): multiplicities {m:?}, Σ d² = {squares}"));
    }
    Ok(format!("{n} gauge identities; dim L = dim H by direct kernel; C(S3) multiplicities 1, 1, 2"))
}

fn classical() -> Outcome {
    let mut n = 0;
    for g in ["Z2", "Z3"] {
        let b = Bundle::point(fun(g)).unwrap();
        let rep = Gauge::new(&b).and_then(|x| x.classical_identities("classical")).map_err(|e| e.to_string())?;
        n += passes(&rep, g)?;
    }
    let b = Bundle::trivial(fun("Z2"), 2).unwrap();
    let rep = Gauge::new(&b).and_then(|x| x.classical_identities("classical")).map_err(|e| e.to_string())?;
    n += passes(&rep, "C(X)⊗C(Z2)")?;
    Ok(format!("{n} braided Hopf identities on classical bundles"))
}

fn gauge_group() -> Outcome {
    let b = Bundle::trivial(fun("Z2"), 2).unwrap();
    let gg = Gauge::new(&b).and_then(|g| g.gauge_group()).map_err(|e| e.to_string())?;
    passes(&gg.report, "gauge group")?;
    for id in ["gauge-group.action-composition", "gauge-group.action-equivariant"] {
        if gg.report.get(id).is_none() {
            return Err(format!("{id} not recorded"));
        }
    }
    let t = gg.table.as_ref().ok_or("no group table")?;
    // maps {x0, x1} → Z2 under pointwise multiplication form Z2 × Z2
    let n = t.mul.len();
    let e = t.identity;
    let abelian = (0..n).all(|i| (0..n).all(|j| t.mul[i][j] == t.mul[j][i]));
    let exponent_two = (0..n).all(|i| t.mul[i][i] == e);
    if n != 4 || gg.elements.len() != 4 || !abelian || !exponent_two {
        return Err(format!("table {:?}", t.mul));
    }
    Ok("4 gauge transformations forming Z2 × Z2; action laws pass".into())
}

fn calculus(g: &str, points: usize, base: BaseCalculus) -> TotalCalculus {
    TotalCalculus::build(Fodc::universal(fun(g)).unwrap(), points, base, 2).unwrap()
}

fn differential() -> Outcome {
    let mut n = 0;
    for g in ["Z2", "Z3"] {
        for (points, base) in [(1, BaseCalculus::Trivial), (2, BaseCalculus::Universal)] {
            let tc = calculus(g, points, base);
            let tag = format!("{g} over {points} point(s)");
            n += passes(&tc.fodc.report("fodc"), &tag)?;
            n += passes(&tc.envelope.report(&tc.fodc, "envelope"), &tag)?;
            n += passes(&tc.structure_report("omega"), &tag)?;
            n += passes(&tc.tau_report("tau").map_err(|e| e.to_string())?, &tag)?;
            n += passes(&tc.sigma_report("sigma"), &tag)?;
            n += passes(&tc.gauge_report("gauge").map_err(|e| e.to_string())?, &tag)?;
            let conn = tc.connection(None).map_err(|e| e.to_string())?;
            n += passes(&conn.verify_transformations("connection").map_err(|e| e.to_string())?, &tag)?;
        }
    }
    Ok(format!("{n} differential identities on 4 calculi"))
}

fn connections() -> Outcome {
    for g in ["Z2", "Z3"] {
        let tc = calculus(g, 1, BaseCalculus::Trivial);
        let conn = tc.connection(None).map_err(|e| e.to_string())?;
        for i in 0..tc.fodc.dim() {
            if !conn.curvature(i).is_empty() {
                return Err(format!("{g}: Maurer–Cartan curvature nonzero at {i}"));
            }
        }
        for p in 0..tc.bundle.dim() {
            let v = unit(p);
            if tc.bundle.total.degree_of(&v) == Some(0) && !conn.covariant_derivative(&v).map_err(|e| e.to_string())?.is_empty() {
                return Err(format!("{g}: D nonzero on a function over a point"));
            }
        }
    }
    // λ(η) = α(x0dx1 + x1dx0): R = 2α(1−α)(x0dx1dx0 + x1dx0dx1) ⊗ 1
    let tc = calculus("Z2", 2, BaseCalculus::Universal);
    let base = &tc.bundle.product_form().unwrap().base;
    for alpha in [-1i64, 2, 3] {
        let a = Scalar::from_int(alpha);
        let conn = tc.connection(Some(&[vec![a.clone(), a]])).map_err(|e| e.to_string())?;
        let mut expected = SVec::new();
        for path in ["x0dx1dx0", "x1dx0dx1"] {
            add_entry(&mut expected, base.space.index_of(path).unwrap(), &Scalar::from_int(2 * alpha * (1 - alpha)));
        }
        if conn.curvature(0) != tc.lift_base(&expected) {
            return Err(format!("α = {alpha}: curvature differs from the closed form"));
        }
        let rep = conn.verify_transformations("c").map_err(|e| e.to_string())?;
        passes(&rep, &format!("α = {alpha}"))?;
        for id in ["c.tr-conn", "c.tr-R1", "c.tr-R2", "c.tr-D1", "c.tr-D2"] {
            if rep.get(id).is_none() {
                return Err(format!("α = {alpha}: {id} not recorded"));
            }
        }
    }
    Ok("Maurer–Cartan flat over a point; perturbed curvature matches 2α(1−α)".into())
}

fn fixtures(dir: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(dir);
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn qpb(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qpb")).args(args).output().expect("qpb runs")
}

fn cli() -> Outcome {
    let presets = fixtures("presets");
    let runs: Vec<_> = presets
        .iter()
        .map(|p| {
            let p = p.to_str().unwrap().to_string();
            thread::spawn(move || {
                let a = qpb(&["check", &p, "--report", "json"]);
                let b = qpb(&["check", &p, "--report", "json"]);
                (p, a, b)
            })
        })
        .collect();
    for h in runs {
        let (p, a, b) = h.join().unwrap();
        if a.status.code() != Some(0) {
            return Err(format!("{p}: exit {:?}\n{}", a.status.code(), String::from_utf8_lossy(&a.stderr)));
        }
        if a.stdout != b.stdout {
            return Err(format!("{p}: JSON differs between runs"));
        }
    }
    let broken = fixtures("broken");
    for p in &broken {
        let o = qpb(&["check", p.to_str().unwrap()]);
        let err = String::from_utf8_lossy(&o.stderr);
        let positioned = err
            .strip_prefix("error: ")
            .and_then(|r| {
                let mut it = r.splitn(3, ':');
                Some((it.next()?.parse::<usize>().ok()?, it.next()?.parse::<usize>().ok()?))
            })
            .is_some_and(|(l, c)| l > 0 && c > 0);
        if o.status.code() != Some(2) || !positioned {
            return Err(format!("{}: exit {:?}, {err}", p.display(), o.status.code()));
        }
    }
    Ok(format!("{} presets exit 0 with stable JSON; {} broken files exit 2 with positions", presets.len(), broken.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("braid axioms", braiding),
        ("classicality dichotomy", dichotomy),
        ("translation map", translation),
        ("Haar integral", haar),
        ("gauge space L", gauge),
        ("classical braided identities", classical),
        ("gauge group", gauge_group),
        ("differential structure", differential),
        ("connections and curvature", connections),
        ("command line", cli),
    ];
    let handles: Vec<_> = criteria.iter().map(|&(name, f)| (name, thread::spawn(f))).collect();
    let mut failed = 0;
    for (i, (name, h)) in handles.into_iter().enumerate() {
        let outcome = h.join().unwrap_or_else(|_| Err("panicked".into()));
        match &outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
