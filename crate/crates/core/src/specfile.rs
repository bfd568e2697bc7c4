//! The JSON specification file: parsing with positioned diagnostics,
//! building validated objects, and example generators.
//!
//! Structure constants are sparse entries whose last component is a scalar
//! literal: `mult` and `coproduct` are `[i, j, k, "s"]`, `antipode` and
//! `star` are `[i, j, "s"]` (image of `e_i` has coefficient `s` on `e_j`),
//! `unit` and `counit` are `[i, "s"]`. A bundle `coaction` entry
//! `[p, q, h, "s"]` puts `s` on `p_q ⊗ h_h` in `F(p_p)`.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::bundle::Bundle;
use crate::calculus::BaseCalculus;
use crate::error::{input, Error, Result};
use crate::fodc::Fodc;
use crate::hopf::{preset, preset_conductor, GroupTable, Hopf, HopfKind, Irrep};
use crate::linalg::{add_entry, unit, BasedSpace, LinearMap, SVec};
use crate::scalar::Scalar;
use crate::tensor::{key, Tensor};

pub const FORMAT_VERSION: u32 = 1;

type Entry1 = (usize, String);
type Entry2 = (usize, usize, String);
type Entry3 = (usize, usize, usize, String);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub format: u32,
    /// Cyclotomic conductor `n`: scalars live in `Q(ζ_n)`.
    pub conductor: u32,
    pub hopf: HopfSection,
    pub bundle: BundleSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fodc: Option<FodcSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_calculus: Option<BaseCalculusSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
}

/// Either `preset` + `kind`, or explicit structure constants.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// `function` (the default) or `group-algebra`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<Entry3>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<Entry1>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coproduct: Option<Vec<Entry3>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<Vec<Entry1>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipode: Option<Vec<Entry2>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<Entry2>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreps: Option<Vec<IrrepEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepEntry {
    pub name: String,
    pub dim: usize,
    pub character: Vec<Entry1>,
}

/// `preset: "point"`, `preset: "trivial"` with `base_points`, or explicit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<Entry3>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<Entry1>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<Entry2>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coaction: Option<Vec<Entry3>>,
}

/// `preset: "universal" | "zero"`, or `ideal_basis` spanning `R ⊆ ker ε`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FodcSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal_basis: Option<Vec<Vec<Entry1>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseCalculusSection {
    pub preset: String,
}

/// `perturbation[i][j]` is the coefficient of the `j`-th base one-form in
/// `ω(η_i) − ω_MC(η_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSection {
    pub perturbation: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<ExpectDims>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectDims {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hopf: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_inv: Option<usize>,
}

// ---- positions -------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seg {
    Key(&'static str),
    Index(usize),
}

/// Byte offset of the value at `path`, or of the deepest enclosing value
/// that exists.
fn locate(text: &str, path: &[Seg]) -> usize {
    let b = text.as_bytes();
    let ws = |mut i: usize| {
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        i
    };
    // end of the string starting at the quote `i`
    let string_end = |mut i: usize| {
        i += 1;
        while i < b.len() && b[i] != b'"' {
            i += if b[i] == b'\\' { 2 } else { 1 };
        }
        i + 1
    };
    let skip = |i: usize| {
        let mut i = ws(i);
        if i >= b.len() {
            return i;
        }
        match b[i] {
            b'"' => string_end(i),
            b'{' | b'[' => {
                let mut depth = 0usize;
                while i < b.len() {
                    match b[i] {
                        b'"' => {
                            i = string_end(i);
                            continue;
                        }
                        b'{' | b'[' => depth += 1,
                        b'}' | b']' => {
                            depth -= 1;
                            if depth == 0 {
                                return i + 1;
                            }
                        }
                        _ => {}
                    }
                    i += 1;
                }
                i
            }
            _ => {
                while i < b.len() && !matches!(b[i], b',' | b'}' | b']') && !b[i].is_ascii_whitespace() {
                    i += 1;
                }
                i
            }
        }
    };
    let mut at = ws(0);
    'path: for seg in path {
        if at >= b.len() {
            break;
        }
        let mut i = ws(at + 1);
        match (seg, b[at]) {
            (Seg::Key(k), b'{') => {
                while i < b.len() && b[i] == b'"' {
                    let end = string_end(i);
                    let name = &text[i + 1..end - 1];
                    let colon = ws(end);
                    let value = ws(colon + 1);
                    if name == *k {
                        at = value;
                        continue 'path;
                    }
                    i = ws(skip(value));
                    if i < b.len() && b[i] == b',' {
                        i = ws(i + 1);
                    }
                }
                break;
            }
            (Seg::Index(n), b'[') => {
                for _ in 0..*n {
                    i = ws(skip(i));
                    if i < b.len() && b[i] == b',' {
                        i = ws(i + 1);
                    } else {
                        break 'path;
                    }
                }
                if i < b.len() && b[i] == b']' {
                    break;
                }
                at = i;
            }
            _ => break,
        }
    }
    at
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn positioned(text: &str, path: &[Seg], e: Error) -> Error {
    if matches!(e, Error::Positioned { .. }) {
        return e;
    }
    let (line, column) = line_col(text, locate(text, path));
    Error::Positioned { line, column, error: Box::new(e) }
}

fn path(base: &[Seg], more: &[Seg]) -> Vec<Seg> {
    base.iter().chain(more).cloned().collect()
}

use Seg::{Index as I, Key as K};

// ---- parsing ---------------------------------------------------------------

/// Parse and statically check a specification file: shapes, index ranges,
/// section combinations and scalar literals. Errors carry line and column.
pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let spec: SpecFile = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m).to_string();
        let err = if msg.starts_with("unknown field") { Error::UnknownKey(msg) } else { Error::Syntax(msg) };
        Error::Positioned { line: e.line().max(1), column: e.column().max(1), error: Box::new(err) }
    })?;
    spec.check().map_err(|(p, e)| positioned(text, &p, e))?;
    Ok(spec)
}

type Located<T> = std::result::Result<T, (Vec<Seg>, Error)>;

fn at<T>(p: Vec<Seg>, r: Result<T>) -> Located<T> {
    r.map_err(|e| (p, e))
}

fn scalar(s: &str, n: u32, p: Vec<Seg>) -> Located<Scalar> {
    at(p, Scalar::parse(s, n))
}

fn range(i: usize, d: usize, p: Vec<Seg>, what: &str) -> Located<()> {
    if i >= d {
        return Err((p, input(format!("{what} index {i} out of range (dimension {d})"))));
    }
    Ok(())
}

fn required<'a, T>(x: &'a Option<T>, p: &[Seg], name: &'static str) -> Located<&'a T> {
    x.as_ref().ok_or_else(|| (p.to_vec(), input(format!("missing key `{name}`"))))
}

/// Sparse vectors from `[i, "s"]` entries.
fn vec1(es: &[Entry1], d: usize, n: u32, p: &[Seg]) -> Located<SVec> {
    let mut v = SVec::new();
    for (e, (i, s)) in es.iter().enumerate() {
        range(*i, d, path(p, &[I(e), I(0)]), "basis")?;
        add_entry(&mut v, *i, &scalar(s, n, path(p, &[I(e), I(1)]))?);
    }
    Ok(v)
}

/// Columns of a map from `[i, j, "s"]` entries.
fn cols2(es: &[Entry2], d: usize, n: u32, p: &[Seg]) -> Located<Vec<SVec>> {
    let mut cols = vec![SVec::new(); d];
    for (e, (i, j, s)) in es.iter().enumerate() {
        range(*i, d, path(p, &[I(e), I(0)]), "basis")?;
        range(*j, d, path(p, &[I(e), I(1)]), "basis")?;
        add_entry(&mut cols[*i], *j, &scalar(s, n, path(p, &[I(e), I(2)]))?);
    }
    Ok(cols)
}

/// `[i, j, k, "s"]` entries with the given index ranges.
fn entries3(es: &[Entry3], dims: [usize; 3], n: u32, p: &[Seg]) -> Located<Vec<(usize, usize, usize, Scalar)>> {
    es.iter()
        .enumerate()
        .map(|(e, (i, j, k, s))| {
            for (slot, (x, d)) in [*i, *j, *k].into_iter().zip(dims).enumerate() {
                range(x, d, path(p, &[I(e), I(slot)]), "basis")?;
            }
            Ok((*i, *j, *k, scalar(s, n, path(p, &[I(e), I(3)]))?))
        })
        .collect()
}

fn algebra(
    basis: &[String],
    mult: &[Entry3],
    unit_e: &[Entry1],
    star: &[Entry2],
    n: u32,
    p: &[Seg],
) -> Located<Algebra> {
    let d = basis.len();
    let space = at(path(p, &[K("basis")]), BasedSpace::new(basis.to_vec()))?;
    let mut m = vec![SVec::new(); d * d];
    for (i, j, k, c) in entries3(mult, [d; 3], n, &path(p, &[K("mult")]))? {
        add_entry(&mut m[i * d + j], k, &c);
    }
    let u = vec1(unit_e, d, n, &path(p, &[K("unit")]))?;
    let st = cols2(star, d, n, &path(p, &[K("star")]))?;
    let st = at(path(p, &[K("star")]), LinearMap::new(d, d, st))?.antilinear();
    at(p.to_vec(), Algebra::ungraded(space, m, u, st))
}

fn hopf_kind(s: Option<&str>, p: Vec<Seg>) -> Located<HopfKind> {
    match s.unwrap_or("function") {
        "function" => Ok(HopfKind::FunctionAlgebra),
        "group-algebra" => Ok(HopfKind::GroupAlgebra),
        other => Err((p, Error::UnknownPreset(other.to_string()))),
    }
}

/// The section an axiom failure of a Hopf algebra points at.
fn hopf_field(e: &Error) -> &'static str {
    let Error::InvalidHopf(m) = e else { return "hopf" };
    if m.contains("antipode") {
        "antipode"
    } else if m.starts_with("counit-character") {
        "counit"
    } else if m.contains("coassoc") || m.contains("counit") || m.contains("coproduct") {
        "coproduct"
    } else {
        "mult"
    }
}

impl SpecFile {
    fn check(&self) -> Located<()> {
        if self.format != FORMAT_VERSION {
            return Err((vec![K("format")], input(format!("unsupported format version {}", self.format))));
        }
        if self.conductor == 0 {
            return Err((vec![K("conductor")], input("conductor must be positive")));
        }
        let h = &self.hopf;
        let hp = [K("hopf")];
        let dh = match &h.preset {
            Some(g) => {
                let explicit = h.basis.is_some() || h.mult.is_some() || h.coproduct.is_some();
                if explicit {
                    return Err((hp.to_vec(), input("`preset` excludes explicit structure constants")));
                }
                hopf_kind(h.kind.as_deref(), path(&hp, &[K("kind")]))?;
                let t = at(path(&hp, &[K("preset")]), GroupTable::preset(g))?;
                if self.conductor % preset_conductor(g) != 0 {
                    return Err((
                        vec![K("conductor")],
                        input(format!("preset {g} needs a conductor divisible by {}", preset_conductor(g))),
                    ));
                }
                t.order()
            }
            None => {
                if h.kind.is_some() {
                    return Err((path(&hp, &[K("kind")]), input("`kind` requires `preset`")));
                }
                self.hopf_parts()?;
                h.basis.as_ref().map_or(0, Vec::len)
            }
        };
        let bp = [K("bundle")];
        let b = &self.bundle;
        let points = match b.preset.as_deref() {
            Some(name) => {
                if b.basis.is_some() || b.mult.is_some() || b.coaction.is_some() {
                    return Err((bp.to_vec(), input("`preset` excludes explicit structure constants")));
                }
                match (name, b.base_points) {
                    ("point", None | Some(1)) => Some(1),
                    ("trivial", Some(n)) if n >= 1 => Some(n),
                    ("trivial", _) => return Err((bp.to_vec(), input("trivial bundle needs `base_points` ≥ 1"))),
                    ("point", Some(_)) => return Err((path(&bp, &[K("base_points")]), input("a point has one point"))),
                    _ => return Err((path(&bp, &[K("preset")]), Error::UnknownPreset(name.to_string()))),
                }
            }
            None => {
                if b.base_points.is_some() {
                    return Err((path(&bp, &[K("base_points")]), input("`base_points` requires `preset`")));
                }
                self.bundle_explicit_parts(dh)?;
                None
            }
        };
        if let Some(f) = &self.fodc {
            let fp = [K("fodc")];
            match (&f.preset, &f.ideal_basis) {
                (Some(p), None) if p == "universal" || p == "zero" => {}
                (Some(p), None) => return Err((path(&fp, &[K("preset")]), Error::UnknownPreset(p.clone()))),
                (None, Some(basis)) => {
                    for (i, v) in basis.iter().enumerate() {
                        vec1(v, dh, self.conductor, &path(&fp, &[K("ideal_basis"), I(i)]))?;
                    }
                }
                _ => return Err((fp.to_vec(), input("give exactly one of `preset` and `ideal_basis`"))),
            }
        }
        if let Some(c) = &self.base_calculus {
            at(vec![K("base_calculus"), K("preset")], BaseCalculus::parse(&c.preset))?;
            if points.is_none() {
                return Err((
                    vec![K("base_calculus")],
                    Error::NotProductBundle("a base calculus needs a point or trivial bundle".into()),
                ));
            }
        }
        if let Some(c) = &self.connection {
            if self.fodc.is_none() {
                return Err((vec![K("connection")], input("a connection needs an `fodc` section")));
            }
            for (i, row) in c.perturbation.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    scalar(s, self.conductor, vec![K("connection"), K("perturbation"), I(i), I(j)])?;
                }
            }
        }
        Ok(())
    }

    #[allow(clippy::type_complexity)]
    fn hopf_parts(&self) -> Located<(Algebra, Vec<Tensor>, Vec<Scalar>, LinearMap)> {
        let h = &self.hopf;
        let n = self.conductor;
        let hp = [K("hopf")];
        let basis = required(&h.basis, &hp, "basis")?;
        let alg = algebra(
            basis,
            required(&h.mult, &hp, "mult")?,
            required(&h.unit, &hp, "unit")?,
            required(&h.star, &hp, "star")?,
            n,
            &hp,
        )?;
        let d = basis.len();
        let mut coprod = vec![Tensor::zero(); d];
        for (i, j, k, c) in entries3(required(&h.coproduct, &hp, "coproduct")?, [d; 3], n, &path(&hp, &[K("coproduct")]))? {
            coprod[i].add_term(key(&[j as u32, k as u32]), c);
        }
        let eps = vec1(required(&h.counit, &hp, "counit")?, d, n, &path(&hp, &[K("counit")]))?;
        let counit = (0..d).map(|i| eps.get(&i).cloned().unwrap_or_else(Scalar::zero)).collect();
        let kappa = cols2(required(&h.antipode, &hp, "antipode")?, d, n, &path(&hp, &[K("antipode")]))?;
        let kappa = at(path(&hp, &[K("antipode")]), LinearMap::new(d, d, kappa))?;
        Ok((alg, coprod, counit, kappa))
    }

    fn hopf_explicit(&self) -> Located<Hopf> {
        let h = &self.hopf;
        let hp = [K("hopf")];
        let (alg, coprod, counit, kappa) = self.hopf_parts()?;
        let d = alg.dim();
        let n = self.conductor;
        let mut hopf = Hopf::build(alg, coprod, counit, kappa).map_err(|e| (path(&hp, &[K(hopf_field(&e))]), e))?;
        if let Some(irreps) = &h.irreps {
            let mut out = Vec::new();
            for (i, ir) in irreps.iter().enumerate() {
                let character = vec1(&ir.character, d, n, &path(&hp, &[K("irreps"), I(i), K("character")]))?;
                out.push(Irrep { name: ir.name.clone(), dim: ir.dim, character });
            }
            hopf = hopf.with_irreps(out);
        }
        Ok(hopf)
    }

    fn bundle_explicit_parts(&self, dh: usize) -> Located<(Algebra, Vec<Tensor>)> {
        let b = &self.bundle;
        let bp = [K("bundle")];
        let basis = required(&b.basis, &bp, "basis")?;
        let n = self.conductor;
        let alg = algebra(
            basis,
            required(&b.mult, &bp, "mult")?,
            required(&b.unit, &bp, "unit")?,
            required(&b.star, &bp, "star")?,
            n,
            &bp,
        )?;
        let d = basis.len();
        let mut coaction = vec![Tensor::zero(); d];
        let entries = required(&b.coaction, &bp, "coaction")?;
        for (p, q, h, c) in entries3(entries, [d, d, dh], n, &path(&bp, &[K("coaction")]))? {
            coaction[p].add_term(key(&[q as u32, h as u32]), c);
        }
        Ok((alg, coaction))
    }

    fn hopf_built(&self) -> Located<Hopf> {
        match &self.hopf.preset {
            Some(g) => {
                let kind = hopf_kind(self.hopf.kind.as_deref(), vec![K("hopf"), K("kind")])?;
                at(vec![K("hopf")], preset(g, kind))
            }
            None => self.hopf_explicit(),
        }
    }

    fn build_located(&self) -> Located<Built> {
        let group = self.hopf_built()?;
        let bp = [K("bundle")];
        let (bundle, points) = match self.bundle.preset.as_deref() {
            Some("trivial") => {
                let n = self.bundle.base_points.unwrap_or(1);
                (at(bp.to_vec(), Bundle::trivial(group, n))?, Some(n))
            }
            Some(_) => (at(bp.to_vec(), Bundle::point(group))?, Some(1)),
            None => {
                let (alg, coaction) = self.bundle_explicit_parts(group.dim())?;
                (at(path(&bp, &[K("coaction")]), Bundle::explicit(alg, group, coaction))?, None)
            }
        };
        let fodc = match &self.fodc {
            None => None,
            Some(f) => {
                let g = bundle.group.clone();
                let fp = [K("fodc")];
                Some(match (&f.preset, &f.ideal_basis) {
                    (Some(p), _) if p == "zero" => at(fp.to_vec(), Fodc::zero(g))?,
                    (Some(_), _) => at(fp.to_vec(), Fodc::universal(g))?,
                    (None, Some(vs)) => {
                        let p = path(&fp, &[K("ideal_basis")]);
                        let d = g.dim();
                        let vs = vs.iter().enumerate().map(|(i, v)| vec1(v, d, self.conductor, &path(&p, &[I(i)]))).collect::<Located<_>>()?;
                        at(p, Fodc::build(g, vs))?
                    }
                    (None, None) => unreachable!("checked at parse"),
                })
            }
        };
        let base_calculus = match &self.base_calculus {
            Some(c) => at(vec![K("base_calculus")], BaseCalculus::parse(&c.preset))?,
            None => BaseCalculus::Trivial,
        };
        let perturbation = match &self.connection {
            None => None,
            Some(c) => Some(
                c.perturbation
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, s)| scalar(s, self.conductor, vec![K("connection"), K("perturbation"), I(i), I(j)]))
                            .collect::<Located<Vec<_>>>()
                    })
                    .collect::<Located<Vec<_>>>()?,
            ),
        };
        Ok(Built { conductor: self.conductor, bundle, points, fodc, base_calculus, perturbation, expect: self.expect.clone() })
    }

    /// Build validated objects; failures point at the offending section of
    /// `text`, the source this file was parsed from.
    pub fn build(&self, text: &str) -> Result<Built> {
        self.build_located().map_err(|(p, e)| positioned(text, &p, e))
    }

    /// Pretty JSON with every array of scalars (a sparse entry, a basis) on
    /// one line.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        write_compact(&serde_json::to_value(self).expect("spec file serializes"), 0, &mut s);
        s.push('\n');
        s
    }
}

fn write_compact(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(xs) if xs.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_compact(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&format!("{}{}: ", pad(indent + 1), Value::String(k.clone())));
                write_compact(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(|x| serde_json::to_string(x).expect("json")).collect();
            out.push_str(&format!("[{}]", items.join(", ")));
        }
        _ => out.push_str(&serde_json::to_string(v).expect("json")),
    }
}

/// Parse and build in one step.
pub fn load(text: &str) -> Result<Built> {
    parse_spec(text)?.build(text)
}

/// The objects a specification file describes.
pub struct Built {
    pub conductor: u32,
    pub bundle: Bundle,
    /// Number of base points for point and trivial bundles; `None` for
    /// explicit bundles.
    pub points: Option<usize>,
    pub fodc: Option<Fodc>,
    pub base_calculus: BaseCalculus,
    pub perturbation: Option<Vec<Vec<Scalar>>>,
    pub expect: Option<Expect>,
}

// ---- generators ------------------------------------------------------------

pub const GENERATORS: [&str; 4] = ["c-group", "group-algebra", "trivial-bundle", "point-bundle"];

#[derive(Clone, Debug)]
pub struct GenOptions {
    pub group: String,
    pub kind: Option<String>,
    pub base_points: usize,
    pub fodc: Option<String>,
    pub base_calculus: Option<String>,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { group: "Z2".into(), kind: None, base_points: 1, fodc: None, base_calculus: None }
    }
}

fn lit(c: &Scalar) -> String {
    c.to_string()
}

fn entries_of(v: &SVec) -> Vec<Entry1> {
    v.iter().map(|(i, c)| (*i, lit(c))).collect()
}

/// Explicit structure constants of a Hopf algebra.
pub fn hopf_section(h: &Hopf) -> HopfSection {
    let d = h.dim();
    let alg = &h.alg;
    let mut mult = Vec::new();
    for i in 0..d {
        for j in 0..d {
            mult.extend(alg.mul_basis(i, j).iter().map(|(k, c)| (i, j, *k, lit(c))));
        }
    }
    let coproduct = (0..d).flat_map(|i| h.coprod[i].iter().map(move |(k, c)| (i, k[0] as usize, k[1] as usize, lit(c)))).collect();
    let map2 = |f: &dyn Fn(&SVec) -> SVec| -> Vec<Entry2> {
        (0..d).flat_map(|i| f(&unit(i)).into_iter().map(move |(j, c)| (i, j, lit(&c)))).collect()
    };
    HopfSection {
        basis: Some(alg.space.labels().to_vec()),
        mult: Some(mult),
        unit: Some(entries_of(&alg.unit)),
        coproduct: Some(coproduct),
        counit: Some(h.counit.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, lit(c))).collect()),
        antipode: Some(map2(&|v| h.kappa(v))),
        star: Some(map2(&|v| alg.star_of(v))),
        irreps: h.irreps.as_ref().map(|irs| {
            irs.iter().map(|ir| IrrepEntry { name: ir.name.clone(), dim: ir.dim, character: entries_of(&ir.character) }).collect()
        }),
        ..Default::default()
    }
}

/// A complete specification file for one of the shipped examples. The
/// `expect` block records dimensions known in closed form.
pub fn generate_example(name: &str, opts: &GenOptions) -> Result<SpecFile> {
    let kind_name = match name {
        "c-group" => "function",
        "group-algebra" => "group-algebra",
        "trivial-bundle" | "point-bundle" => opts.kind.as_deref().unwrap_or("function"),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    if opts.kind.as_deref().is_some_and(|k| k != kind_name) {
        return Err(input(format!("{name} fixes kind {kind_name}")));
    }
    let kind = hopf_kind(Some(kind_name), vec![]).map_err(|(_, e)| e)?;
    let points = if name == "trivial-bundle" { opts.base_points } else { 1 };
    if points == 0 || points > 3 {
        return Err(input(format!("base_points must be 1, 2 or 3, got {points}")));
    }
    if name != "trivial-bundle" && opts.base_points != 1 {
        return Err(input(format!("{name} lives over a point")));
    }
    let table = GroupTable::preset(&opts.group)?;
    let h = preset(&opts.group, kind)?;
    if let Some(f) = &opts.fodc {
        if f != "universal" && f != "zero" {
            return Err(Error::UnknownPreset(f.clone()));
        }
    }
    if let Some(c) = &opts.base_calculus {
        BaseCalculus::parse(c)?;
    }
    let order = table.order();
    let bundle = if name == "trivial-bundle" {
        BundleSection { preset: Some("trivial".into()), base_points: Some(points), ..Default::default() }
    } else {
        BundleSection { preset: Some("point".into()), ..Default::default() }
    };
    let gamma_inv = opts.fodc.as_deref().map(|f| if f == "universal" { order - 1 } else { 0 });
    Ok(SpecFile {
        format: FORMAT_VERSION,
        conductor: preset_conductor(&opts.group),
        hopf: hopf_section(&h),
        bundle,
        fodc: opts.fodc.clone().map(|p| FodcSection { preset: Some(p), ideal_basis: None }),
        base_calculus: opts.base_calculus.clone().map(|preset| BaseCalculusSection { preset }),
        connection: None,
        expect: Some(Expect {
            dims: Some(ExpectDims { hopf: Some(order), bundle: Some(points * order), base: Some(points), gamma_inv }),
            classical: Some(kind == HopfKind::FunctionAlgebra || table.is_abelian()),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const POINT_Z2: &str = r#"{
  "format": 1,
  "conductor": 1,
  "hopf": {"preset": "Z2"},
  "bundle": {"preset": "point"}
}"#;

    fn pos(e: Error) -> (usize, usize, Error) {
        match e {
            Error::Positioned { line, column, error } => (line, column, *error),
            e => panic!("unpositioned: {e}"),
        }
    }

    #[test]
    fn preset_reference_builds() {
        let b = load(POINT_Z2).unwrap();
        assert_eq!(b.bundle.dim(), 2);
        assert_eq!(b.points, Some(1));
        assert!(b.fodc.is_none());
    }

    #[test]
    fn bad_scalar_is_positioned() {
        let g = generate_example("c-group", &GenOptions::default()).unwrap();
        let text = g.to_json().replacen("\"1\"", "\"1/0\"", 1);
        let (line, col, e) = pos(parse_spec(&text).unwrap_err());
        assert!(matches!(e, Error::BadScalarLiteral(ref s) if s == "1/0"), "{e}");
        let at = text.lines().nth(line - 1).unwrap();
        assert_eq!(&at[col - 1..col + 4], "\"1/0\"");
    }

    #[test]
    fn index_out_of_range_is_positioned() {
        let g = generate_example("c-group", &GenOptions::default()).unwrap();
        let text = g.to_json();
        // the first mult entry is [0, 0, 0, "1"]; retarget it
        let start = text.find("\"mult\"").unwrap();
        let zero = start + text[start..].find("0,").unwrap();
        let broken = format!("{}7{}", &text[..zero], &text[zero + 1..]);
        let (line, col, e) = pos(parse_spec(&broken).unwrap_err());
        assert!(matches!(e, Error::Input(ref m) if m.contains("out of range")), "{e}");
        let at = broken.lines().nth(line - 1).unwrap();
        assert_eq!(&at[col - 1..col], "7");
    }

    #[test]
    fn syntax_and_unknown_keys() {
        let (line, _, e) = pos(parse_spec("{\n  \"format\": 1,\n  \"conductor\": ,\n}").unwrap_err());
        assert_eq!(line, 3);
        assert!(matches!(e, Error::Syntax(_)), "{e}");
        let text = POINT_Z2.replace("\"preset\": \"point\"", "\"preset\": \"point\", \"colour\": 1");
        let (line, _, e) = pos(parse_spec(&text).unwrap_err());
        assert_eq!(line, 5);
        assert!(matches!(e, Error::UnknownKey(_)), "{e}");
    }

    #[test]
    fn locator_walks_nested_values() {
        let text = "{\"a\": [1, {\"b\": \"x,]}\"}, [2, 3]], \"c\": {\"d\": 4}}";
        let off = |p: &[Seg]| locate(text, p);
        assert_eq!(&text[off(&[K("a"), I(2), I(1)])..][..1], "3");
        assert_eq!(&text[off(&[K("c"), K("d")])..][..1], "4");
        assert_eq!(&text[off(&[K("a"), I(1), K("b")])..][..3], "\"x,");
        // missing paths stop at the deepest existing value
        assert_eq!(off(&[K("c"), K("zz")]), off(&[K("c")]));
    }

    #[test]
    fn generated_files_round_trip() {
        for (name, group) in [("c-group", "Z3"), ("group-algebra", "S3"), ("trivial-bundle", "Z2")] {
            let opts = GenOptions {
                group: group.into(),
                base_points: if name == "trivial-bundle" { 2 } else { 1 },
                fodc: Some("universal".into()),
                ..Default::default()
            };
            let g = generate_example(name, &opts).unwrap();
            let text = g.to_json();
            let back = parse_spec(&text).unwrap();
            assert_eq!(back, g);
            let built = back.build(&text).unwrap();
            let direct = preset(group, if name == "group-algebra" { HopfKind::GroupAlgebra } else { HopfKind::FunctionAlgebra }).unwrap();
            assert_eq!(built.bundle.group.haar, direct.haar);
            assert_eq!(built.bundle.group.irreps, direct.irreps);
            assert_eq!(built.fodc.unwrap().dim(), direct.dim() - 1);
        }
        assert!(matches!(generate_example("torus", &GenOptions::default()), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn broken_antipode_points_at_antipode() {
        let g = generate_example("c-group", &GenOptions { group: "Z3".into(), ..Default::default() }).unwrap();
        let mut g2 = g.clone();
        let kappa = g2.hopf.antipode.as_mut().unwrap();
        // κ = id instead of inversion
        for e in kappa.iter_mut() {
            e.1 = e.0;
        }
        let text = g2.to_json();
        let spec = parse_spec(&text).unwrap();
        let (line, _, e) = pos(spec.build(&text).map(|_| ()).unwrap_err());
        assert!(matches!(e, Error::InvalidHopf(_)), "{e}");
        assert!(text.lines().nth(line - 1).unwrap().contains("\"antipode\""));
    }
}
