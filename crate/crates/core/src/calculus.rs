//! Product calculi `Ω(P) = Ω(M) ⊗̂ Γ^∧` up to total degree two, with the
//! extended translation map and braiding, the differential gauge coalgebra,
//! connections, curvature and covariant derivatives.

use std::collections::HashMap;

use crate::algebra::Algebra;
use crate::braiding::{braid_axioms, sample};
use crate::bundle::{points_algebra, Bundle, ProductForm};
use crate::error::{input, Error, Result};
use crate::fodc::{Envelope2, Fodc, Forms};
use crate::gauge::{f_block, Gauge};
use crate::linalg::{add_entry, kernel_of_columns, same_span, unit, BasedSpace, Echelon, LinearMap, SVec};
use crate::report::{first_mismatch, ValidationReport, Witness};
use crate::scalar::Scalar;
use crate::tensor::{key, sign, Key, KeyBasis, Tensor};

pub const MAX_FORM_DEGREE: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseCalculus {
    /// Functions only.
    Trivial,
    /// Universal calculus on the point set, truncated at degree two.
    Universal,
}

impl BaseCalculus {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(BaseCalculus::Trivial),
            "universal" => Ok(BaseCalculus::Universal),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseCalculus::Trivial => "trivial",
            BaseCalculus::Universal => "universal",
        }
    }
}

/// Calculus on `n` points, with the vertex at which each basis element ends.
/// Vertices come first in the basis.
pub fn base_calculus(kind: BaseCalculus, n: usize) -> Result<(Algebra, Vec<usize>)> {
    if n == 0 {
        return Err(input("base needs at least one point"));
    }
    match kind {
        BaseCalculus::Trivial => Ok((points_algebra(n), (0..n).collect())),
        BaseCalculus::Universal => universal_paths(n),
    }
}

/// Paths `x_{i₀}dx_{i₁}…dx_{i_k}` with consecutive vertices distinct and
/// `k ≤ 2`; the product concatenates paths.
fn universal_paths(n: usize) -> Result<(Algebra, Vec<usize>)> {
    if n > 3 {
        return Err(input(format!("universal base calculus supports at most 3 points, got {n}")));
    }
    let mut paths: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for len in 2..=3 {
        let prev: Vec<Vec<usize>> = paths.iter().filter(|p| p.len() == len - 1).cloned().collect();
        for p in prev {
            for j in 0..n {
                if j != *p.last().expect("path") {
                    let mut q = p.clone();
                    q.push(j);
                    paths.push(q);
                }
            }
        }
    }
    let index: HashMap<Vec<usize>, usize> = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let d = paths.len();
    let at = |p: &[usize]| index.get(p).copied();

    let mut mult = vec![SVec::new(); d * d];
    for (i, p) in paths.iter().enumerate() {
        for (j, q) in paths.iter().enumerate() {
            if p.last() == q.first() {
                let mut r = p.clone();
                r.extend_from_slice(&q[1..]);
                if let Some(k) = at(&r) {
                    mult[i * d + j] = unit(k);
                }
            }
        }
    }
    // (x_{i₀}dx_{i₁}…dx_{i_k})* = (−1)^{k(k+1)/2} x_{i_k}…dx_{i₀}
    let star_cols = paths
        .iter()
        .map(|p| {
            let k = p.len() - 1;
            let rev: Vec<usize> = p.iter().rev().copied().collect();
            [(index[&rev], sign((k * (k + 1) / 2) % 2 == 1))].into()
        })
        .collect();
    let one = Scalar::one();
    let minus = -Scalar::one();
    let diff_cols = paths
        .iter()
        .map(|p| {
            let mut v = SVec::new();
            match p.len() {
                1 => {
                    let i = p[0];
                    for a in (0..n).filter(|&a| a != i) {
                        add_entry(&mut v, index[&vec![a, i]], &one);
                        add_entry(&mut v, index[&vec![i, a]], &minus);
                    }
                }
                2 => {
                    let (i, j) = (p[0], p[1]);
                    for a in (0..n).filter(|&a| a != i) {
                        add_entry(&mut v, index[&vec![a, i, j]], &one);
                    }
                    for b in (0..n).filter(|&b| b != i && b != j) {
                        add_entry(&mut v, index[&vec![i, b, j]], &minus);
                    }
                    for c in (0..n).filter(|&c| c != j) {
                        add_entry(&mut v, index[&vec![i, j, c]], &one);
                    }
                }
                _ => {}
            }
            v
        })
        .collect();
    let labels = paths.iter().map(|p| p.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join("d")).collect();
    let deg = paths.iter().map(|p| (p.len() - 1) as u8).collect();
    let unit_v = (0..n).map(|i| (i, Scalar::one())).collect();
    let end = paths.iter().map(|p| *p.last().expect("path")).collect();
    let alg = Algebra::new(BasedSpace::new(labels)?, deg, mult, unit_v, LinearMap::new(d, d, star_cols)?)?
        .with_diff(LinearMap::new(d, d, diff_cols)?)?;
    Ok((alg, end))
}

pub fn check_degree(degree: u8) -> Result<()> {
    if degree > MAX_FORM_DEGREE {
        return Err(Error::DegreeBudget(format!("form degree {degree} requested, at most {MAX_FORM_DEGREE} supported")));
    }
    Ok(())
}

/// `Ω(P) = Ω(M) ⊗̂ Γ^∧` over a product bundle, truncated at degree two.
pub struct TotalCalculus {
    pub fodc: Fodc,
    pub envelope: Envelope2,
    pub forms: Forms,
    pub points: usize,
    pub base_kind: BaseCalculus,
    /// The graded bundle with structure Hopf algebra `Γ^∧`: its coaction is
    /// `F̂`, its translation map `τ̂` and its braiding `σ̂_M`.
    pub bundle: Bundle,
    /// Basis of the horizontal forms, as vectors in `Ω(P)`.
    pub hor: Vec<SVec>,
}

impl TotalCalculus {
    pub fn build(fodc: Fodc, points: usize, base_kind: BaseCalculus, degree: u8) -> Result<Self> {
        check_degree(degree)?;
        if degree < MAX_FORM_DEGREE {
            return Err(input(format!("the differential suite runs in degree {MAX_FORM_DEGREE}, got {degree}")));
        }
        let envelope = Envelope2::build(&fodc)?;
        let forms = Forms::build(&fodc, &envelope)?;
        let (base, end) = base_calculus(base_kind, points)?;
        let bundle = Bundle::product(base, end, forms.hopf.clone(), MAX_FORM_DEGREE)?;
        let mut tc = TotalCalculus { fodc, envelope, forms, points, base_kind, bundle, hor: Vec::new() };
        tc.hor = tc.filtration(0);
        Ok(tc)
    }

    pub fn dim(&self) -> usize {
        self.bundle.dim()
    }

    fn dh(&self) -> usize {
        self.bundle.dim_h()
    }

    fn pf(&self) -> &ProductForm {
        self.bundle.product_form().expect("product calculus")
    }

    pub fn base_dim(&self) -> usize {
        self.pf().base.dim()
    }

    pub fn degree(&self, p: usize) -> u8 {
        self.bundle.total.deg[p]
    }

    /// Dimensions of `Ω^k(P)`, `k = 0, 1, 2`.
    pub fn dims(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for p in 0..self.dim() {
            out[self.degree(p) as usize] += 1;
        }
        out
    }

    pub fn hor_dims(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for v in &self.hor {
            let g = self.bundle.total.degree_of(v).expect("homogeneous basis");
            out[g as usize] += 1;
        }
        out
    }

    /// `Ω(P)` index of `b ⊗ h` with `b` in `Ω(M)`, `h` in `Γ^∧`, if within
    /// the degree budget.
    pub fn index(&self, b: usize, h: usize) -> Option<usize> {
        self.pf().join(b, h).map(|p| p as usize)
    }

    /// `1 ⊗ (a ⊗ 1)` for `a ∈ A`, the embedding of the degree-zero algebra.
    pub fn function(&self, a: &SVec) -> SVec {
        self.lift_h(&self.forms.function(a))
    }

    /// `1 ⊗ h` for `h ∈ Γ^∧`.
    pub fn lift_h(&self, h: &SVec) -> SVec {
        let mut out = SVec::new();
        for v in 0..self.points {
            for (i, c) in h {
                add_entry(&mut out, self.index(v, *i).expect("vertex"), c);
            }
        }
        out
    }

    /// `ω ⊗ 1` for `ω ∈ Ω(M)`.
    pub fn lift_base(&self, w: &SVec) -> SVec {
        let mut out = SVec::new();
        for (u, cu) in &self.forms.hopf.alg.one() {
            for (b, c) in w {
                add_entry(&mut out, self.index(*b, *u).expect("degree-zero fibre"), &(cu * c));
            }
        }
        out
    }

    /// Slotwise differential on tensors whose first `t` slots are `Ω(P)`
    /// and remaining slots `Γ^∧`, with Koszul signs.
    pub fn d_slots(&self, x: &Tensor, t: usize) -> Tensor {
        let b = &self.bundle;
        let y = x.flat_map(|k, c, out| {
            let mut before = 0u32;
            for j in 0..k.len() {
                let s = sign(before % 2 == 1);
                let dv = if j < t { b.total.d_of(&unit(k[j] as usize)) } else { b.group.alg.d_of(&unit(k[j] as usize)) };
                for (r, cr) in &dv {
                    let mut nk = k.clone();
                    nk[j] = *r as u32;
                    out.add_term(nk, &s * &(c * cr));
                }
                before += b.slot_deg(k, t, j) as u32;
            }
        });
        b.normalize(&y, t)
    }

    pub fn d_vec(&self, v: &SVec) -> SVec {
        self.bundle.total.d_of(v)
    }

    pub fn f_hat(&self, v: &SVec) -> Tensor {
        self.bundle.coact_vec(v)
    }

    /// `F^∧`: `F̂` with the summands of positive `Γ^∧`-degree removed.
    pub fn f_wedge(&self, v: &SVec) -> Tensor {
        let b = &self.bundle;
        let full = self.f_hat(v);
        let mut out = Tensor::zero();
        for (k, c) in full.iter() {
            if b.deg_h(k[1]) == 0 {
                out.add_term(k.clone(), c.clone());
            }
        }
        out
    }

    /// `Ω_k(P) = F̂⁻¹(Ω(P) ⊗ Γ^∧_{≤k})`.
    pub fn filtration(&self, k: u8) -> Vec<SVec> {
        let b = &self.bundle;
        let dh = self.dh();
        let cols: Vec<SVec> = (0..self.dim())
            .map(|p| {
                b.coaction[p].iter().filter(|(fk, _)| b.deg_h(fk[1]) > k).map(|(fk, c)| (fk[0] as usize * dh + fk[1] as usize, c.clone())).collect()
            })
            .collect();
        kernel_of_columns(&cols)
    }

    /// Domain dimension, codomain dimension and rank of `X̂` in total degree `g`.
    pub fn galois_rank(&self, g: u32) -> (usize, usize, usize) {
        let b = &self.bundle;
        let dom: Vec<Key> = b.basis(2).into_iter().filter(|k| b.key_deg(k, 2) == g).collect();
        let cod = KeyBasis::new(b.basis_ph(1).into_iter().filter(|k| b.key_deg(k, 1) == g).collect());
        let cols = dom.iter().map(|k| cod.vec(&b.galois(&Tensor::pure(k))));
        (dom.len(), cod.len(), crate::linalg::span_rank(cols))
    }

    fn lab(&self, k: &[u32], t: usize) -> String {
        self.bundle.label_key(k, t)
    }

    fn p_label(&self, p: usize) -> String {
        self.bundle.total.space.label(p).to_string()
    }

    /// Structure of `Ω(P)`: the differential, `F̂`, horizontal forms, the
    /// base and `X̂`.
    pub fn structure_report(&self, p: &str) -> ValidationReport {
        let b = &self.bundle;
        let n = self.dim();
        let mut rep = ValidationReport::new();
        let pv = |v: &SVec| Tensor::from_svec(v);
        let all: Vec<usize> = (0..n).collect();

        rep.record(
            &format!("{p}.d-squared"),
            "d-squared",
            first_mismatch(all.iter().map(|&i| (self.p_label(i), pv(&self.d_vec(&self.d_vec(&unit(i)))), Tensor::zero()))),
        );
        rep.record(
            &format!("{p}.d-leibniz"),
            "d-leibniz",
            first_mismatch(sample(&all, 16).into_iter().flat_map(|i| all.iter().map(move |&j| (i, j))).map(|(i, j)| {
                let t = &b.total;
                let l = self.d_vec(t.mul_basis(i, j));
                let mut r = t.mul(&self.d_vec(&unit(i)), &unit(j));
                let s = sign(self.degree(i) % 2 == 1);
                for (k, c) in t.mul(&unit(i), &self.d_vec(&unit(j))) {
                    add_entry(&mut r, k, &(&s * &c));
                }
                (format!("({},{})", self.p_label(i), self.p_label(j)), pv(&l), pv(&r))
            })),
        );
        rep.record(
            &format!("{p}.d-star"),
            "d-star",
            first_mismatch(all.iter().map(|&i| {
                let t = &b.total;
                (self.p_label(i), pv(&self.d_vec(&t.star_of(&unit(i)))), pv(&t.star_of(&self.d_vec(&unit(i)))))
            })),
        );
        rep.record(
            &format!("{p}.F-hat-d"),
            "F-hat-differential",
            first_mismatch(all.iter().map(|&i| {
                let l = b.normalize(&self.f_hat(&self.d_vec(&unit(i))), 1);
                let r = self.d_slots(&b.coaction[i], 1);
                (self.p_label(i), l, r)
            })),
        );
        rep.record(
            &format!("{p}.F-hat-multiplicative"),
            "F-hat-multiplicative",
            first_mismatch(sample(&all, 16).into_iter().flat_map(|i| all.iter().map(move |&j| (i, j))).map(|(i, j)| {
                let l = self.f_hat(b.total.mul_basis(i, j));
                let r = b.normalize(&b.mul_ph(&b.coaction[i], &b.coaction[j]), 1);
                (format!("({},{})", self.p_label(i), self.p_label(j)), l, r)
            })),
        );
        rep.record(
            &format!("{p}.F-hat-star"),
            "F-hat-hermitian",
            first_mismatch(all.iter().map(|&i| (self.p_label(i), self.f_hat(&b.total.star_of(&unit(i))), b.star_ph(&b.coaction[i])))),
        );

        // horizontal forms: a subalgebra containing Ω(M), invariant under F^∧
        let mut hor = Echelon::new();
        for v in &self.hor {
            hor.insert(v.clone());
        }
        let not_hor = |v: &SVec, what: String| (!hor.contains(v)).then(|| Witness::new(what, pv(v), "a horizontal form"));
        rep.record(
            &format!("{p}.hor-subalgebra"),
            "hor",
            self.hor.iter().enumerate().flat_map(|(i, x)| self.hor.iter().enumerate().map(move |(j, y)| (i, x, j, y))).find_map(|(i, x, j, y)| {
                not_hor(&b.total.mul(x, y), format!("hor[{i}]·hor[{j}]"))
            }).or_else(|| self.hor.iter().enumerate().find_map(|(i, x)| not_hor(&b.total.star_of(x), format!("hor[{i}]*")))),
        );
        rep.record(
            &format!("{p}.hor-F-wedge"),
            "hor-F-wedge",
            self.hor.iter().enumerate().find_map(|(i, x)| {
                let f = self.f_wedge(x);
                let mut parts: HashMap<u32, SVec> = HashMap::new();
                for (k, c) in f.iter() {
                    add_entry(parts.entry(k[1]).or_default(), k[0] as usize, c);
                }
                parts.into_values().find_map(|v| not_hor(&v, format!("F^∧(hor[{i}])")))
            }),
        );
        let base_forms: Vec<SVec> = (0..self.base_dim()).map(|w| self.lift_base(&unit(w))).collect();
        rep.record(
            &format!("{p}.base-fixed-points"),
            "base-fixed-points",
            (!same_span(&base_forms, &b.base)).then(|| {
                Witness::new("Ω(M)", format!("fixed points of dimension {}", b.base.len()), format!("Ω(M) ⊗ 1 of dimension {}", base_forms.len()))
            }),
        );
        rep.record(
            &format!("{p}.base-horizontal"),
            "base-horizontal",
            base_forms.iter().enumerate().find_map(|(w, v)| not_hor(v, format!("Ω(M)[{w}]"))),
        );
        let mut base = Echelon::new();
        for v in &b.base {
            base.insert(v.clone());
        }
        rep.record(
            &format!("{p}.base-d-closed"),
            "base-d-closed",
            b.base.iter().enumerate().find_map(|(i, v)| {
                let dv = self.d_vec(v);
                (!base.contains(&dv)).then(|| Witness::new(format!("Ω(M)[{i}]"), pv(&dv), "an element of Ω(M)"))
            }),
        );
        for g in 0..=MAX_FORM_DEGREE as u32 {
            let (dom, cod, rank) = self.galois_rank(g);
            rep.record(
                &format!("{p}.X-hat-bijective-{g}"),
                "X-hat-bijective",
                (rank != dom || rank != cod).then(|| Witness::new(format!("degree {g}"), format!("rank {rank}"), format!("{dom} → {cod}"))),
            );
        }
        rep
    }
}

impl TotalCalculus {
    /// `ad(ϑ) = χ{κ(ϑ⁽¹⁾) ⊗ ϑ⁽²⁾} ϑ⁽³⁾ = ± ϑ⁽²⁾ ⊗ κ(ϑ⁽¹⁾)ϑ⁽³⁾` on `Γ^∧`.
    pub fn graded_adjoint(&self, th: usize) -> Tensor {
        let h = &self.forms.hopf;
        h.coprod[th].flat_map(|k1, c1, out| {
            for (k2, c2) in h.coprod[k1[1] as usize].iter() {
                let (a, b, c) = (k1[0], k2[0], k2[1]);
                let s = sign(h.deg(a) % 2 == 1 && h.deg(b) % 2 == 1);
                for (ka, ca) in &h.kappa(&unit(a as usize)) {
                    for (m, cm) in h.alg.mul_basis(*ka, c as usize) {
                        out.add_term(key(&[b, *m as u32]), &s * &(&(c1 * c2) * &(ca * cm)));
                    }
                }
            }
        })
    }

    /// The extended translation map: the identity block, `τ̂d = dτ̂`,
    /// `F̂₂τ̂ = (τ̂ ⊗ id)ad`, and agreement with `τ` in degree zero.
    pub fn tau_report(&self, p: &str) -> Result<ValidationReport> {
        let b = &self.bundle;
        let dh = self.dh();
        let mut rep = b.translation_identities(p);
        let hl = |i: usize| b.h_label(i).to_string();

        rep.record(
            &format!("{p}.tau-d"),
            "tau-d",
            first_mismatch((0..dh).map(|h| {
                let l = b.tau_of(&b.group.alg.d_of(&unit(h)));
                (hl(h), b.normalize(&l, 2), self.d_slots(&b.tau[h], 2))
            })),
        );
        rep.record(
            &format!("{p}.tau-ad"),
            "tau-ad",
            first_mismatch((0..dh).map(|h| {
                let l = f_block(b, &b.tau[h], 2, 0, 2);
                let r = self.graded_adjoint(h).flat_map(|k, c, out| {
                    out.add_scaled(&b.tau[k[0] as usize].kron(&Tensor::pure(&[k[1]])), c);
                });
                (hl(h), l, b.normalize(&r, 2))
            })),
        );

        // degree zero: the translation map of C(X) ⊗ A
        let plain = Bundle::product(points_algebra(self.points), (0..self.points).collect(), self.fodc.group.clone(), 0)?;
        let embed = |t: &Tensor| -> Tensor {
            t.flat_map(|k, c, out| {
                let nk: Key = k
                    .iter()
                    .map(|&q| {
                        let (v, a) = (q as usize / plain.dim_h(), q as usize % plain.dim_h());
                        self.index(v, self.forms.index(a, 0)).expect("degree zero") as u32
                    })
                    .collect();
                out.add_term(nk, c.clone());
            })
        };
        rep.record(
            &format!("{p}.tau-extends"),
            "tau-extends",
            first_mismatch((0..plain.dim_h()).map(|a| {
                let h = self.forms.index(a, 0);
                (hl(h), b.tau[h].clone(), embed(&plain.tau[a]))
            })),
        );
        Ok(rep)
    }

    /// Spanning set of `Ω_k(P) ⊗_M Ω(P)` (or the mirror image) in `𝓦₂`.
    fn filtered_pairs(&self, k: u8, left: bool, b2: &KeyBasis) -> Vec<SVec> {
        let b = &self.bundle;
        let mut ech = Echelon::new();
        for v in self.filtration(k) {
            for q in 0..self.dim() {
                let (x, y) = (Tensor::from_svec(&v), Tensor::pure(&[q as u32]));
                let t = if left { x.kron(&y) } else { y.kron(&x) };
                let t = b.normalize(&t, 2);
                if !t.is_zero() {
                    ech.insert(b2.vec(&t));
                }
            }
        }
        ech.basis()
    }

    /// `σ̂_M`: the braid axioms, filtration compatibility and `dσ̂ = σ̂d`.
    pub fn sigma_report(&self, p: &str) -> ValidationReport {
        let b = &self.bundle;
        let mut rep = braid_axioms(b, p, "g-inv");
        for r in &mut rep.records {
            let (id, label) = match r.paper_label.as_str() {
                "braid" => ("g-braid", "g-braid"),
                "prod-sM1" => ("prod-gsM1", "prod-gsM1"),
                "prod-sM2" => ("prod-gsM2", "prod-gsM2"),
                _ => continue,
            };
            r.identity_id = format!("{p}.{id}");
            r.paper_label = label.to_string();
        }
        let b2 = KeyBasis::new(b.basis(2));
        for k in 0..=MAX_FORM_DEGREE {
            let left = self.filtered_pairs(k, true, &b2);
            let right = self.filtered_pairs(k, false, &b2);
            let image: Vec<SVec> = left.iter().map(|v| b2.vec(&b.sigma_at(&b2.tensor(v), 2, 0))).collect();
            rep.record(
                &format!("{p}.gsM-filt-{k}"),
                "gsM-filt",
                (!same_span(&image, &right)).then(|| {
                    Witness::new(
                        format!("k = {k}"),
                        format!("σ̂(Ω_{k} ⊗ Ω) of dimension {}", crate::linalg::span_rank(image.iter().cloned())),
                        format!("Ω ⊗ Ω_{k} of dimension {}", right.len()),
                    )
                }),
            );
        }
        rep.record(
            &format!("{p}.d-commute"),
            "g-sigma-d",
            first_mismatch(b2.keys.iter().filter(|k| b.key_deg(k, 2) <= 1).map(|k| {
                let x = Tensor::pure(k);
                let l = self.d_slots(&b.sigma_at(&x, 2, 0), 2);
                let r = b.sigma_at(&self.d_slots(&x, 2), 2, 0);
                (self.lab(k, 2), l, r)
            })),
        );
        rep
    }

    /// The differential gauge coalgebra `𝓛̂` of `F̂₂`-invariants.
    pub fn gauge_report(&self, p: &str) -> Result<ValidationReport> {
        let b = &self.bundle;
        let g = Gauge::new(b)?;
        let mut rep = g.identities(p);
        rep.note(format!("{p}: dim L-hat = {}", g.dim()));
        rep.record(
            &format!("{p}.L-hat-d-closed"),
            "L-hat-d",
            g.basis.iter().enumerate().find_map(|(i, x)| {
                let dx = self.d_slots(x, 2);
                (!g.contains(&dx)).then(|| Witness::new(format!("L[{i}]"), dx, "an element of L-hat"))
            }),
        );
        rep.record(
            &format!("{p}.eps-d"),
            "eps-d",
            first_mismatch(g.basis.iter().enumerate().map(|(i, x)| {
                (format!("L[{i}]"), g.eps(&self.d_slots(x, 2)), self.d_slots(&g.eps(x), 1))
            })),
        );
        rep.record(
            &format!("{p}.Delta-hat-d"),
            "Delta-hat-d",
            first_mismatch((0..self.dim()).map(|q| {
                let l = g.delta_at(&Tensor::from_svec(&self.d_vec(&unit(q))), 1, 0);
                let r = self.d_slots(g.delta(q), 3);
                (self.p_label(q), l, r)
            })),
        );
        Ok(rep)
    }
}

impl TotalCalculus {
    /// Compatibility of `σ̂_M` with `F̂` expected for classical structure
    /// groups: `σ̂_M² = id` and `F̂₂σ̂_M = (σ̂_M ⊗ id)F̂₂`. Asserted only for
    /// the zero calculus; otherwise reported as notes.
    pub fn classical_report(&self, p: &str) -> ValidationReport {
        let b = &self.bundle;
        let keys = b.basis(2);
        let involutive = first_mismatch(keys.iter().map(|k| {
            let x = Tensor::pure(k);
            (self.lab(k, 2), b.sigma_at(&b.sigma_at(&x, 2, 0), 2, 0), x)
        }));
        let covariant = first_mismatch(keys.iter().map(|k| {
            let x = Tensor::pure(k);
            let l = f_block(b, &b.sigma_at(&x, 2, 0), 2, 0, 2);
            let r = b.sigma_at(&f_block(b, &x, 2, 0, 2), 2, 0);
            (self.lab(k, 2), l, r)
        }));
        let mut rep = ValidationReport::new();
        let checks = [("g-sigma-involutive", involutive), ("F2-sigma", covariant)];
        if self.fodc.dim() == 0 {
            for (id, w) in checks {
                rep.record(&format!("{p}.{id}"), id, w);
            }
        } else {
            for (id, w) in checks {
                rep.note(match w {
                    None => format!("{p}.{id} (exploratory): holds"),
                    Some(w) => format!("{p}.{id} (exploratory): fails at {}", w.at),
                });
            }
        }
        rep
    }
}

/// A connection `ω: Γ_inv → Ω¹(P)`.
pub struct Connection<'a> {
    pub calc: &'a TotalCalculus,
    /// `ω(η_i)` as vectors in `Ω(P)`.
    pub omega: Vec<SVec>,
    pub hermitian: bool,
    pub perturbed: bool,
}

impl TotalCalculus {
    /// Indices of the degree-one basis elements of `Ω(M)`.
    pub fn base_one_forms(&self) -> Vec<usize> {
        let base = &self.pf().base;
        (0..base.dim()).filter(|&w| base.deg[w] == 1).collect()
    }

    /// Maurer–Cartan connection `ω(θ) = 1 ⊗ θ`.
    pub fn maurer_cartan(&self) -> Connection<'_> {
        let omega: Vec<SVec> = (0..self.fodc.dim()).map(|i| self.lift_h(&self.forms.invariant(&unit(i)))).collect();
        let hermitian = self.is_hermitian(&omega);
        Connection { calc: self, omega, hermitian, perturbed: false }
    }

    /// `ω + λ` with `λ(η_i) = Σ_w lambda[i][w] w` over the degree-one basis of
    /// `Ω(M)`. The perturbation must be covariant: `Σ λ(θ_k) ⊗ c_k = λ(θ) ⊗ 1`.
    pub fn connection(&self, lambda: Option<&[Vec<Scalar>]>) -> Result<Connection<'_>> {
        let mut c = self.maurer_cartan();
        let Some(lambda) = lambda else { return Ok(c) };
        let r = self.fodc.dim();
        let ones = self.base_one_forms();
        if lambda.len() != r || lambda.iter().any(|row| row.len() != ones.len()) {
            return Err(input(format!("perturbation must be a {r}×{} matrix", ones.len())));
        }
        let lam: Vec<SVec> = lambda
            .iter()
            .map(|row| row.iter().zip(&ones).filter(|(x, _)| !x.is_zero()).map(|(x, &w)| (w, x.clone())).collect())
            .collect();
        let one_a = self.fodc.group.alg.one();
        for i in 0..r {
            let mut l = Tensor::zero();
            for (k, c) in self.fodc.varpi[i].iter() {
                for (w, x) in &lam[k[0] as usize] {
                    l.add_term(key(&[*w as u32, k[1]]), c * x);
                }
            }
            let mut rt = Tensor::zero();
            for (w, x) in &lam[i] {
                for (a, y) in &one_a {
                    rt.add_term(key(&[*w as u32, *a as u32]), x * y);
                }
            }
            if l != rt {
                return Err(Error::NotCovariant(format!("at {}: Σλ(θ_k)⊗c_k = {l}, λ(θ)⊗1 = {rt}", self.fodc.label(i))));
            }
        }
        for (o, l) in c.omega.iter_mut().zip(&lam) {
            for (p, x) in self.lift_base(l) {
                add_entry(o, p, &x);
            }
        }
        c.hermitian = self.is_hermitian(&c.omega);
        c.perturbed = lam.iter().any(|l| !l.is_empty());
        Ok(c)
    }

    /// `ω(θ*) = ω(θ)*` on the basis of `Γ_inv`.
    fn is_hermitian(&self, omega: &[SVec]) -> bool {
        let of = |v: &SVec| -> SVec {
            let mut out = SVec::new();
            for (i, c) in v {
                crate::linalg::axpy(&mut out, c, &omega[*i]);
            }
            out
        };
        (0..omega.len()).all(|i| of(&self.fodc.star.apply(&unit(i))) == self.bundle.total.star_of(&omega[i]))
    }
}

impl Connection<'_> {
    fn b(&self) -> &Bundle {
        &self.calc.bundle
    }

    pub fn omega_of(&self, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (i, c) in v {
            crate::linalg::axpy(&mut out, c, &self.omega[*i]);
        }
        out
    }

    /// `ωπ(a)` for `a ∈ A`.
    pub fn omega_pi(&self, a: usize) -> SVec {
        self.omega_of(&self.calc.fodc.pi(&unit(a)))
    }

    /// `R_ω(η_i) = dω(η_i) − Σ ω(θ¹)ω(θ²)` with `δ(η_i) = Σ θ¹ ⊗ θ²`.
    pub fn curvature(&self, i: usize) -> SVec {
        let t = &self.b().total;
        let r = self.calc.fodc.dim();
        let mut out = t.d_of(&self.omega[i]);
        for (jk, c) in &self.calc.envelope.delta[i] {
            let prod = t.mul(&self.omega[jk / r], &self.omega[jk % r]);
            crate::linalg::axpy(&mut out, &-c, &prod);
        }
        out
    }

    /// `F^∧(φ) = Σ φ_k ⊗ c_k` as pairs `(φ_k, c_k)` with `c_k` a basis index of `A`.
    fn f_wedge_parts(&self, phi: &SVec) -> Vec<(SVec, usize)> {
        let nx = self.calc.forms.nx;
        let mut parts: std::collections::BTreeMap<usize, SVec> = Default::default();
        for (k, c) in self.calc.f_wedge(phi).iter() {
            add_entry(parts.entry(k[1] as usize / nx).or_default(), k[0] as usize, c);
        }
        parts.into_iter().map(|(a, v)| (v, a)).collect()
    }

    /// `D_ω(φ) = dφ − (−1)^{∂φ} Σ φ_k ωπ(c_k)` for homogeneous horizontal `φ`.
    pub fn covariant_derivative(&self, phi: &SVec) -> Result<SVec> {
        let t = &self.b().total;
        let Some(g) = t.degree_of(phi) else {
            return Ok(SVec::new());
        };
        check_degree(g + 1)?;
        let mut out = t.d_of(phi);
        let s = sign(g % 2 == 1);
        for (v, a) in self.f_wedge_parts(phi) {
            crate::linalg::axpy(&mut out, &-&s, &t.mul(&v, &self.omega_pi(a)));
        }
        Ok(out)
    }

    /// `ϖ(η_i) = Σ θ_k ⊗ c_k` as triples `(θ_k, c_k, coefficient)`.
    fn varpi_terms(&self, i: usize) -> Vec<(usize, usize, Scalar)> {
        self.calc.fodc.varpi[i].iter().map(|(k, c)| (k[0] as usize, k[1] as usize, c.clone())).collect()
    }

    /// `τ(a)` for `a ∈ A`, read inside `𝓦₂`.
    fn tau_a(&self, a: usize) -> &Tensor {
        &self.b().tau[self.calc.forms.index(a, 0)]
    }

    fn hor_low(&self) -> Vec<(usize, SVec)> {
        let t = &self.b().total;
        self.calc.hor.iter().cloned().enumerate().filter(|(_, v)| t.degree_of(v).is_some_and(|g| g < MAX_FORM_DEGREE)).collect()
    }

    /// Every transformation law of connections, curvature and covariant
    /// derivative, evaluated on basis elements.
    pub fn verify_transformations(&self, p: &str) -> Result<ValidationReport> {
        let calc = self.calc;
        let b = self.b();
        let t = &b.total;
        let r = calc.fodc.dim();
        let na = calc.fodc.group.dim();
        let mut rep = ValidationReport::new();
        let pv = |v: &SVec| Tensor::from_svec(v);
        let th = |i: usize| calc.fodc.label(i);
        let gauge = Gauge::new(b)?;
        let hat_delta = |v: &SVec| gauge.delta_at(&pv(v), 1, 0);
        let one = t.one();
        let with_tau = |v: &SVec, a: usize| b.normalize(&pv(v).kron(self.tau_a(a)), 3);

        rep.note(format!(
            "{p}: {} connection, {}hermitian",
            if self.perturbed { "perturbed" } else { "Maurer–Cartan" },
            if self.hermitian { "" } else { "not " }
        ));
        rep.record(
            &format!("{p}.connection-law"),
            "connection",
            first_mismatch((0..r).map(|i| {
                let l = calc.f_hat(&self.omega[i]);
                let mut rt = Tensor::zero();
                for (k, a, c) in self.varpi_terms(i) {
                    let h = Tensor::pure(&[calc.forms.index(a, 0) as u32]);
                    rt.add_scaled(&pv(&self.omega[k]).kron(&h), &c);
                }
                rt.add(&pv(&one).kron(&pv(&calc.forms.invariant(&unit(i)))));
                (th(i), l, rt)
            })),
        );

        let curv: Vec<SVec> = (0..r).map(|i| self.curvature(i)).collect();
        let mut hor = Echelon::new();
        for v in &calc.hor {
            hor.insert(v.clone());
        }
        rep.record(
            &format!("{p}.R-horizontal"),
            "R-hor",
            curv.iter().enumerate().find_map(|(i, v)| (!hor.contains(v)).then(|| Witness::new(th(i), pv(v), "a horizontal form"))),
        );
        rep.record(
            &format!("{p}.R-covariant"),
            "R-cov",
            first_mismatch((0..r).map(|i| {
                let mut rt = Tensor::zero();
                for (k, a, c) in self.varpi_terms(i) {
                    rt.add_scaled(&pv(&curv[k]).kron(&Tensor::pure(&[calc.forms.index(a, 0) as u32])), &c);
                }
                (th(i), calc.f_hat(&curv[i]), rt)
            })),
        );

        let low = self.hor_low();
        let cov: Vec<(usize, SVec, SVec)> = low.iter().map(|(i, v)| Ok((*i, v.clone(), self.covariant_derivative(v)?))).collect::<Result<_>>()?;
        rep.record(
            &format!("{p}.D-horizontal"),
            "D-hor",
            cov.iter().find_map(|(i, _, d)| (!hor.contains(d)).then(|| Witness::new(format!("D(hor[{i}])"), pv(d), "a horizontal form"))),
        );

        rep.record(
            &format!("{p}.d-aP"),
            "d-aP",
            first_mismatch((0..na).map(|a| {
                let l = calc.d_slots(self.tau_a(a), 2);
                let mut rt = Tensor::zero();
                for (k, c) in calc.fodc.group.coprod[a].iter() {
                    let (a1, a2) = (k[0] as usize, k[1] as usize);
                    rt.add_scaled(&b.right_mul(self.tau_a(a1), 2, &self.omega_pi(a2)), c);
                    rt.add_scaled(&b.left_mul(&self.omega_pi(a1), self.tau_a(a2), 2), &-c);
                }
                (calc.fodc.group.label(a).to_string(), l, rt)
            })),
        );

        let tau_theta = |i: usize| b.tau_of(&calc.forms.invariant(&unit(i)));
        rep.record(
            &format!("{p}.gP-inv"),
            "gP-inv",
            first_mismatch((0..r).map(|i| {
                let mut rt = b.normalize(&pv(&one).kron(&pv(&self.omega[i])), 2);
                for (k, a, c) in self.varpi_terms(i) {
                    rt.add_scaled(&b.left_mul(&self.omega[k], self.tau_a(a), 2), &-c);
                }
                (th(i), tau_theta(i), rt)
            })),
        );

        // σ̂(ω(θ)⊗ψ) = Σω(θ_k)ψτ(c_k) − (−1)^∂ψ Σψω(θ_k)τ(c_k) + (−1)^∂ψ ψ⊗ω(θ)
        let psis: Vec<usize> = (0..calc.dim()).filter(|&q| calc.degree(q) < MAX_FORM_DEGREE).collect();
        rep.record(
            &format!("{p}.sigma-connection"),
            "braiding-connections",
            first_mismatch((0..r).flat_map(|i| psis.iter().map(move |&q| (i, q))).map(|(i, q)| {
                let psi = unit(q);
                let l = b.sigma_at(&b.normalize(&pv(&self.omega[i]).kron(&pv(&psi)), 2), 2, 0);
                let s = sign(calc.degree(q) % 2 == 1);
                let mut rt = b.normalize(&pv(&psi).kron(&pv(&self.omega[i])), 2).scaled(&s);
                for (k, a, c) in self.varpi_terms(i) {
                    rt.add_scaled(&b.left_mul(&t.mul(&self.omega[k], &psi), self.tau_a(a), 2), &c);
                    rt.add_scaled(&b.left_mul(&t.mul(&psi, &self.omega[k]), self.tau_a(a), 2), &-&(&s * &c));
                }
                (format!("({},{})", th(i), calc.p_label(q)), l, rt)
            })),
        );

        rep.record(
            &format!("{p}.tr-conn"),
            "tr-conn",
            first_mismatch((0..r).map(|i| {
                let mut rt = b.normalize(&pv(&one).kron(&tau_theta(i)), 3);
                for (k, a, c) in self.varpi_terms(i) {
                    rt.add_scaled(&with_tau(&self.omega[k], a), &c);
                }
                (th(i), hat_delta(&self.omega[i]), rt)
            })),
        );

        rep.record(
            &format!("{p}.tr-R2"),
            "tr-R2",
            first_mismatch((0..r).map(|i| {
                let mut rt = Tensor::zero();
                for (k, a, c) in self.varpi_terms(i) {
                    rt.add_scaled(&with_tau(&curv[k], a), &c);
                }
                (th(i), hat_delta(&curv[i]), rt)
            })),
        );
        // ς(c_k) R_ω(θ_k) in 𝓦₃: the product with 1⊗1⊗R_ω(θ_k) multiplies
        // the last slot, since σ̂(p ⊗ 1) = 1 ⊗ p
        let varsigma = |a: usize| crate::gauge::varsigma(b, &unit(calc.forms.index(a, 0)));
        rep.record(
            &format!("{p}.tr-R1"),
            "tr-R1",
            first_mismatch((0..r).map(|i| {
                let mut rt = Tensor::zero();
                for (k, a, c) in self.varpi_terms(i) {
                    rt.add_scaled(&b.right_mul(&varsigma(a), 3, &curv[k]), &c);
                }
                (th(i), hat_delta(&curv[i]), rt)
            })),
        );
        rep.note(format!("{p}: tr-R1/tr-D1 read ς(c)X as the product of ς(c) with 1⊗1⊗X in 𝓦₃ under the braided product"));

        rep.record(
            &format!("{p}.tr-D2"),
            "tr-D2",
            first_mismatch(cov.iter().map(|(i, phi, dphi)| {
                let mut rt = Tensor::zero();
                for (v, a) in self.f_wedge_parts(phi) {
                    rt.add(&with_tau(&self.covariant_derivative(&v).expect("degree checked"), a));
                }
                (format!("hor[{i}]"), hat_delta(dphi), rt)
            })),
        );
        rep.record(
            &format!("{p}.tr-D1"),
            "tr-D1",
            first_mismatch(cov.iter().map(|(i, phi, dphi)| {
                let mut rt = Tensor::zero();
                for (v, a) in self.f_wedge_parts(phi) {
                    rt.add(&b.right_mul(&varsigma(a), 3, &self.covariant_derivative(&v).expect("degree checked")));
                }
                (format!("hor[{i}]"), hat_delta(dphi), rt)
            })),
        );

        // ⟨τ̂,τ̂⟩(θ) = Σ τ̂(θ¹)τ̂(θ²) = dτ̂(θ)
        rep.record(
            &format!("{p}.tau-brackets"),
            "tau-brackets",
            first_mismatch((0..r).map(|i| {
                let mut l = Tensor::zero();
                for (jk, c) in &calc.envelope.delta[i] {
                    l.add_scaled(&b.braided_mul(&tau_theta(jk / r), &tau_theta(jk % r), 2), c);
                }
                (th(i), l, calc.d_slots(&tau_theta(i), 2))
            })),
        );
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{preset, HopfKind};

    fn calc(g: &str, points: usize, base: BaseCalculus) -> TotalCalculus {
        let f = Fodc::universal(preset(g, HopfKind::FunctionAlgebra).unwrap()).unwrap();
        TotalCalculus::build(f, points, base, 2).unwrap()
    }

    fn assert_pass(rep: &ValidationReport) {
        assert!(rep.all_pass(), "{}", rep.to_text());
    }

    #[test]
    fn universal_base_is_a_differential_algebra() {
        for n in 1..=3 {
            let (a, end) = base_calculus(BaseCalculus::Universal, n).unwrap();
            assert_pass(&a.validate("base"));
            let dim = a.dim();
            assert_eq!(dim, n + n * (n - 1) + n * (n - 1) * (n - 1));
            assert_eq!(end.len(), dim);
            for i in 0..dim {
                let e = unit(i);
                assert!(a.d_of(&a.d_of(&e)).is_empty());
                assert_eq!(a.d_of(&a.star_of(&e)), a.star_of(&a.d_of(&e)));
                for j in 0..dim {
                    let f = unit(j);
                    let mut r = a.mul(&a.d_of(&e), &f);
                    let s = sign(a.deg[i] % 2 == 1);
                    for (k, c) in a.mul(&e, &a.d_of(&f)) {
                        add_entry(&mut r, k, &(&s * &c));
                    }
                    // Leibniz, read modulo degree three
                    let r: SVec = r.into_iter().filter(|(k, _)| a.deg[*k] <= 2).collect();
                    assert_eq!(a.d_of(a.mul_basis(i, j)), r, "({i},{j})");
                }
            }
        }
        assert!(base_calculus(BaseCalculus::Universal, 4).is_err());
    }

    #[test]
    fn point_base_z2_dimensions() {
        let tc = calc("Z2", 1, BaseCalculus::Trivial);
        assert_eq!(tc.dims(), [2, 2, 2]);
        assert_eq!(tc.hor_dims(), [2, 0, 0]);
        for g in 0..=2 {
            let (dom, cod, rank) = tc.galois_rank(g);
            assert_eq!((dom, rank), (cod, cod));
        }
        assert_pass(&tc.structure_report("s"));
    }

    #[test]
    fn degree_budget() {
        let f = Fodc::universal(preset("Z2", HopfKind::FunctionAlgebra).unwrap()).unwrap();
        assert!(matches!(TotalCalculus::build(f, 1, BaseCalculus::Trivial, 3), Err(Error::DegreeBudget(_))));
    }

    #[test]
    fn suites_z2_point() {
        let tc = calc("Z2", 1, BaseCalculus::Trivial);
        assert_pass(&tc.tau_report("t").unwrap());
        assert_pass(&tc.sigma_report("s"));
        assert_pass(&tc.gauge_report("g").unwrap());
    }

    #[test]
    fn suites_z2_two_points() {
        let tc = calc("Z2", 2, BaseCalculus::Universal);
        assert_pass(&tc.structure_report("s"));
        assert_pass(&tc.tau_report("t").unwrap());
        assert_pass(&tc.sigma_report("s"));
        assert_pass(&tc.gauge_report("g").unwrap());
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect()
    }

    #[test]
    fn maurer_cartan_point_z2() {
        let tc = calc("Z2", 1, BaseCalculus::Trivial);
        let c = tc.maurer_cartan();
        assert!(c.hermitian);
        assert!(c.curvature(0).is_empty());
        for v in &tc.hor {
            assert!(c.covariant_derivative(v).unwrap().is_empty());
        }
        // D(1) = 0
        assert!(c.covariant_derivative(&tc.bundle.total.one()).unwrap().is_empty());
        assert_pass(&c.verify_transformations("c").unwrap());
        // τ̂(η) = 1⊗ω(η) − ω(η)τ(1), independently of the inversion of X̂
        let one = tc.bundle.total.one();
        let eta = tc.forms.invariant(&unit(0));
        let mut rhs = tc.bundle.normalize(&Tensor::from_svec(&one).kron(&Tensor::from_svec(&c.omega[0])), 2);
        let tau_one = tc.bundle.tau_of(&tc.forms.function(&tc.fodc.group.alg.one()));
        rhs.add_scaled(&tc.bundle.left_mul(&c.omega[0], &tau_one, 2), &-Scalar::one());
        assert_eq!(tc.bundle.tau_of(&eta), rhs);
        // degree two has no room for D
        let top = (0..tc.dim()).find(|&p| tc.degree(p) == 2).unwrap();
        assert!(matches!(c.covariant_derivative(&unit(top)), Err(Error::DegreeBudget(_))));
    }

    #[test]
    fn perturbed_connection_two_points() {
        let tc = calc("Z2", 2, BaseCalculus::Universal);
        let labels: Vec<&str> = tc.base_one_forms().iter().map(|&w| tc.pf().base.space.label(w)).collect();
        assert_eq!(labels, ["x0dx1", "x1dx0"]);
        let zero = tc.connection(Some(&ints(&[&[0, 0]]))).unwrap();
        assert_eq!(zero.omega, tc.maurer_cartan().omega);
        // λ(η) = α(x0dx1 + x1dx0) has R = 2α(1−α)(x0dx1dx0 + x1dx0dx1) ⊗ 1
        let c = tc.connection(Some(&ints(&[&[2, 2]]))).unwrap();
        assert!(c.perturbed);
        let base = &tc.pf().base;
        let mut expected = SVec::new();
        for path in ["x0dx1dx0", "x1dx0dx1"] {
            let w = base.space.index_of(path).unwrap();
            add_entry(&mut expected, w, &Scalar::from_int(-4));
        }
        assert_eq!(c.curvature(0), tc.lift_base(&expected));
        assert!(tc.connection(Some(&ints(&[&[1, 1]]))).unwrap().curvature(0).is_empty());
        assert_pass(&c.verify_transformations("c").unwrap());
        // a non-hermitian perturbation is flagged, not rejected
        let c = tc.connection(Some(&ints(&[&[1, 0]]))).unwrap();
        assert!(!c.hermitian);
        assert_pass(&c.verify_transformations("c").unwrap());
        assert!(tc.connection(Some(&ints(&[&[1]]))).is_err());
    }

    #[test]
    fn perturbation_must_be_covariant() {
        let g = preset("S3", HopfKind::FunctionAlgebra).unwrap();
        let ideal = vec![unit(3), unit(4)];
        let f = Fodc::build(g, ideal).unwrap();
        let tc = TotalCalculus::build(f, 2, BaseCalculus::Universal, 2).unwrap();
        let r = tc.fodc.dim();
        let mut rows = vec![vec![Scalar::zero(); 2]; r];
        rows[0][0] = Scalar::one();
        assert!(matches!(tc.connection(Some(&rows)), Err(Error::NotCovariant(_))));
    }

    #[test]
    fn zero_calculus() {
        for (n, base) in [(1, BaseCalculus::Trivial), (2, BaseCalculus::Trivial), (2, BaseCalculus::Universal)] {
            let f = Fodc::zero(preset("Z3", HopfKind::FunctionAlgebra).unwrap()).unwrap();
            let tc = TotalCalculus::build(f, n, base, 2).unwrap();
            let mut rep = tc.structure_report("s");
            rep.merge(tc.tau_report("t").unwrap());
            rep.merge(tc.sigma_report("x"));
            rep.merge(tc.classical_report("k"));
            rep.merge(tc.maurer_cartan().verify_transformations("c").unwrap());
            eprintln!("{}", rep.to_text());
            assert_pass(&rep);
        }
    }

    #[test]
    fn classical_checks_are_notes_for_nonzero_calculi() {
        let tc = calc("Z2", 1, BaseCalculus::Trivial);
        let rep = tc.classical_report("k");
        assert!(rep.records.is_empty());
        eprintln!("{:?}", rep.notes);
        assert_eq!(rep.notes.len(), 2);
    }
}
