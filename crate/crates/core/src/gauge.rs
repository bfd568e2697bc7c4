//! The gauge coalgebra `L ⊆ P ⊗_M P`, its braided Hopf structure when the
//! structure Hopf algebra is commutative, the gauge group, and the isotypic
//! decomposition of the total algebra.

use crate::braiding::sample;
use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::algebra::{show_vec, Algebra};
use crate::hopf::GroupTable;
use crate::linalg::{axpy, unit, BasedSpace, Echelon, LinearMap, SVec};
use crate::scalar::Scalar;
use crate::report::{first_mismatch, ValidationReport, Witness};
use crate::tensor::{Key, KeyBasis, Tensor};

/// Coact on the `P` slots `from..to` and multiply the resulting `H` factors
/// into a single new `H` slot at position `t`.
pub fn f_block(b: &Bundle, x: &Tensor, t: usize, from: usize, to: usize) -> Tensor {
    let mut y = x.clone();
    for pos in (from..to).rev() {
        y = b.coact_at(&y, t, pos, 0);
    }
    for _ in from + 1..to {
        y = b.h_mul_at(&y, t);
    }
    y
}

/// Whether the `P` slots `from..to` of a `P`-only tensor are coinvariant.
pub fn is_invariant(b: &Bundle, x: &Tensor, t: usize, from: usize, to: usize) -> bool {
    f_block(b, x, t, from, to) == b.append_h(x, &b.group.alg.one())
}

/// `(id ⊗ h) F₂` on slots `from, from+1`.
fn haar_block(b: &Bundle, x: &Tensor, t: usize, from: usize) -> Tensor {
    let haar = b.group.haar.as_ref().expect("Haar state");
    f_block(b, x, t, from, from + 2).flat_map(|k, c, out| {
        let h = &haar[k[t] as usize];
        if !h.is_zero() {
            let mut nk = k.clone();
            nk.remove(t);
            out.add_term(nk, c * h);
        }
    })
}

pub struct Gauge<'a> {
    pub bundle: &'a Bundle,
    pub b2: KeyBasis,
    /// Basis of `L` inside `P_2`, in reduced echelon form.
    pub basis: Vec<Tensor>,
    ech: Echelon,
    /// `δ₃(p) = (id ⊗ τ) F(p)` for each basis element of `P`.
    delta: Vec<Tensor>,
}

impl<'a> Gauge<'a> {
    /// `L` is the image of the Haar projection when a Haar state exists, and
    /// the kernel of `F₂ − (· ⊗ 1)` otherwise.
    pub fn new(b: &'a Bundle) -> Result<Self> {
        b.ensure_power(3)?;
        let b2 = KeyBasis::new(b.basis(2));
        let delta = (0..b.dim()).map(|p| b.tau_at(&b.coaction[p], 1)).collect();
        let vecs: Vec<SVec> = if b.group.haar.is_some() {
            b2.keys.iter().map(|k| b2.vec(&haar_block(b, &Tensor::pure(k), 2, 0))).collect()
        } else {
            fixed_points(b, &b2).iter().map(|t| b2.vec(t)).collect()
        };
        let mut ech = Echelon::new();
        for v in vecs {
            ech.insert(v);
        }
        let basis = ech.basis().iter().map(|v| b2.tensor(v)).collect();
        Ok(Gauge { bundle: b, b2, basis, ech, delta })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: &Tensor) -> bool {
        self.coords(x).is_some()
    }

    /// Coordinates in `basis`, if `x ∈ L`.
    pub fn coords(&self, x: &Tensor) -> Option<SVec> {
        let mut v = SVec::new();
        for (k, c) in x.iter() {
            v.insert(self.b2.index(k)?, c.clone());
        }
        if !self.ech.contains(&v) {
            return None;
        }
        Some(
            self.ech
                .pivots()
                .enumerate()
                .filter_map(|(i, p)| v.get(&p).map(|c| (i, c.clone())))
                .collect(),
        )
    }

    pub fn element(&self, coords: &SVec) -> Tensor {
        let mut out = Tensor::zero();
        for (i, c) in coords {
            out.add_scaled(&self.basis[*i], c);
        }
        out
    }

    /// `δ₃` applied to `P` slot `pos` of a `P`-only tensor with `t` slots.
    pub fn delta_at(&self, x: &Tensor, t: usize, pos: usize) -> Tensor {
        let y = x.flat_map(|k, c, out| {
            for (dk, dc) in self.delta[k[pos] as usize].iter() {
                let mut nk = Key::new();
                nk.extend_from_slice(&k[..pos]);
                nk.extend_from_slice(dk);
                nk.extend_from_slice(&k[pos + 1..]);
                out.add_term(nk, c * dc);
            }
        });
        self.bundle.normalize(&y, t + 2)
    }

    pub fn delta(&self, p: usize) -> &Tensor {
        &self.delta[p]
    }

    /// `φ_M = (δ₃ ⊗ id)` restricted to `L`, landing in `L ⊗_M L ⊆ P_4`.
    pub fn phi(&self, x: &Tensor) -> Tensor {
        self.delta_at(x, 2, 0)
    }

    /// `ε_M = μ` restricted to `L`.
    pub fn eps(&self, x: &Tensor) -> Tensor {
        self.bundle.mu_at(x, 2, 0)
    }

    /// The Haar projection onto `L`.
    pub fn project(&self, x: &Tensor) -> Option<Tensor> {
        self.bundle.group.haar.as_ref()?;
        Some(haar_block(self.bundle, x, 2, 0))
    }

    fn lab(&self, k: &[u32], t: usize) -> String {
        self.bundle.label_key(k, t)
    }

    /// Coalgebra identities of `L` and of the left `L`-coaction on `P`.
    pub fn identities(&self, p: &str) -> ValidationReport {
        let b = self.bundle;
        let mut rep = ValidationReport::new();
        let one = b.group.alg.one();
        let pure = |k: &Key| Tensor::pure(k);
        let p_keys: Vec<Key> = (0..b.dim() as u32).map(|i| crate::tensor::key(&[i])).collect();

        if b.group.haar.is_some() {
            let fixed: Vec<SVec> = fixed_points(b, &self.b2).iter().map(|t| self.b2.vec(t)).collect();
            let rank = crate::linalg::span_rank(fixed.iter().cloned());
            let same = crate::linalg::same_span(&fixed, &self.ech.basis());
            rep.record(
                &format!("{p}.L-fixed-points"),
                "L-fixed-points",
                (!same).then(|| Witness::new("L", format!("dim {}", self.dim()), format!("fixed points of rank {rank}"))),
            );
            rep.record(
                &format!("{p}.pL-idempotent"),
                "pL-idempotent",
                first_mismatch(self.b2.keys.iter().map(|k| {
                    let once = self.project(&pure(k)).expect("Haar");
                    (self.lab(k, 2), self.project(&once).expect("Haar"), once)
                })),
            );
        }

        rep.record(
            &format!("{p}.f3-incl"),
            "f3-incl",
            p_keys.iter().find_map(|k| {
                let d = &self.delta[k[0] as usize];
                (!is_invariant(b, d, 3, 0, 2)).then(|| {
                    Witness::new(self.lab(k, 1), f_block(b, d, 3, 0, 2), b.append_h(d, &one))
                })
            }),
        );

        rep.record(
            &format!("{p}.delta-bimodule"),
            "delta-bimodule",
            first_mismatch(p_keys.iter().flat_map(|k| b.base.iter().enumerate().map(move |(fi, f)| (k, fi, f))).flat_map(
                |(k, fi, f)| {
                    let x = pure(k);
                    let l1 = self.delta_at(&b.left_mul(f, &x, 1), 1, 0);
                    let r1 = b.left_mul(f, &self.delta_at(&x, 1, 0), 3);
                    let l2 = self.delta_at(&b.right_mul(&x, 1, f), 1, 0);
                    let r2 = b.right_mul(&self.delta_at(&x, 1, 0), 3, f);
                    [(format!("f{fi}·{}", self.lab(k, 1)), l1, r1), (format!("{}·f{fi}", self.lab(k, 1)), l2, r2)]
                },
            )),
        );

        rep.record(
            &format!("{p}.fgau-F"),
            "fgau-F",
            first_mismatch(p_keys.iter().map(|k| {
                let l = b.coact_at(&self.delta[k[0] as usize], 3, 2, 0);
                let r = self.delta_at(&b.coaction[k[0] as usize], 1, 0);
                (self.lab(k, 1), l, r)
            })),
        );

        rep.record(
            &format!("{p}.e-fgau"),
            "e-fgau",
            first_mismatch(p_keys.iter().map(|k| {
                let e = b.mu_at(&b.mu_at(&self.delta[k[0] as usize], 3, 0), 2, 0);
                (self.lab(k, 1), e, pure(k))
            })),
        );

        rep.record(
            &format!("{p}.delta-star"),
            "delta-star",
            first_mismatch(p_keys.iter().map(|k| {
                let l = self.delta_at(&Tensor::from_svec(&b.total.star_of(&unit(k[0] as usize))), 1, 0);
                let r = b.braided_star(&self.delta[k[0] as usize], 3);
                (self.lab(k, 1), l, r)
            })),
        );

        let left = sample(&p_keys, 12);
        rep.record(
            &format!("{p}.delta-multiplicative"),
            "delta-multiplicative",
            first_mismatch(left.iter().flat_map(|x| p_keys.iter().map(move |y| (x, y))).map(|(x, y)| {
                let xy = Tensor::from_svec(b.total.mul_basis(x[0] as usize, y[0] as usize));
                let l = self.delta_at(&xy, 1, 0);
                let r = b.braided_mul(&self.delta[x[0] as usize], &self.delta[y[0] as usize], 3);
                (format!("({},{})", self.lab(x, 1), self.lab(y, 1)), l, r)
            })),
        );

        // μ²(id² ⊗ σ)(δ₃ ⊗ id) = μ ⊗ 1 and μ²(σ ⊗ id²)(δ₃ ⊗ id) = 1 ⊗ μ
        let unit_p = Tensor::from_svec(&b.total.one());
        rep.record(
            &format!("{p}.lem-ant-1"),
            "lem:ant",
            first_mismatch(self.b2.keys.iter().map(|k| {
                let x = pure(k);
                let z = b.sigma_at(&self.delta_at(&x, 2, 0), 4, 2);
                let r = b.normalize(&b.mu_at(&x, 2, 0).kron(&unit_p), 2);
                (self.lab(k, 2), b.braided_mul_joined(&z, 2), r)
            })),
        );
        rep.record(
            &format!("{p}.lem-ant-2"),
            "lem:ant",
            first_mismatch(self.b2.keys.iter().map(|k| {
                let x = pure(k);
                let z = b.sigma_at(&self.delta_at(&x, 2, 0), 4, 0);
                let r = b.normalize(&unit_p.kron(&b.mu_at(&x, 2, 0)), 2);
                (self.lab(k, 2), b.braided_mul_joined(&z, 2), r)
            })),
        );

        let mut base = Echelon::new();
        for f in &b.base {
            base.insert(f.clone());
        }
        let images: Vec<SVec> = self.basis.iter().map(|r| self.eps(r).to_svec()).collect();
        let outside = images.iter().position(|v| !base.contains(v));
        let rank = crate::linalg::span_rank(images.iter().cloned());
        rep.record(
            &format!("{p}.mu-L"),
            "mu-L",
            match outside {
                Some(i) => Some(Witness::new(format!("L[{i}]"), self.eps(&self.basis[i]), "an element of the base")),
                None if rank != b.base.len() => Some(Witness::new("μ(L)", format!("rank {rank}"), format!("dim M = {}", b.base.len()))),
                None => None,
            },
        );

        rep.record(
            &format!("{p}.eps-hermitian"),
            "eps-hermitian",
            first_mismatch(self.basis.iter().enumerate().map(|(i, r)| {
                let l = self.eps(&b.standard_star(r, 2));
                let r = Tensor::from_svec(&b.total.star_of(&self.eps(r).to_svec()));
                (format!("L[{i}]"), l, r)
            })),
        );

        rep.record(
            &format!("{p}.L-standard-star"),
            "L-standard-star",
            self.basis.iter().enumerate().find_map(|(i, r)| {
                let s = b.standard_star(r, 2);
                (!self.contains(&s)).then(|| Witness::new(format!("L[{i}]"), s, "an element of L"))
            }),
        );
        let braided_closed = self.basis.iter().all(|r| self.contains(&b.braided_star(r, 2)));
        rep.note(format!(
            "{p}: L is {}closed under the conjugation induced by the braiding",
            if braided_closed { "" } else { "not " }
        ));

        rep.record(
            &format!("{p}.phi-incl"),
            "phi-incl",
            self.basis.iter().enumerate().find_map(|(i, r)| {
                let f = self.phi(r);
                (!(is_invariant(b, &f, 4, 0, 2) && is_invariant(b, &f, 4, 2, 4)))
                    .then(|| Witness::new(format!("L[{i}]"), f, "an element of L ⊗_M L"))
            }),
        );

        rep.record(
            &format!("{p}.counit"),
            "counit",
            first_mismatch(self.basis.iter().enumerate().flat_map(|(i, r)| {
                let f = self.phi(r);
                [
                    (format!("(ε⊗id) L[{i}]"), b.mu_at(&b.mu_at(&f, 4, 0), 3, 0), r.clone()),
                    (format!("(id⊗ε) L[{i}]"), b.mu_at(&b.mu_at(&f, 4, 2), 3, 1), r.clone()),
                ]
            })),
        );

        rep.record(
            &format!("{p}.coact"),
            "coact",
            first_mismatch(p_keys.iter().map(|k| {
                let d = &self.delta[k[0] as usize];
                (self.lab(k, 1), self.delta_at(d, 3, 2), self.delta_at(d, 3, 0))
            })),
        );

        if b.ensure_power(6).is_ok() {
            rep.record(
                &format!("{p}.coasso"),
                "coasso",
                first_mismatch(self.basis.iter().enumerate().map(|(i, r)| {
                    let f = self.phi(r);
                    (format!("L[{i}]"), self.delta_at(&f, 4, 0), self.delta_at(&f, 4, 2))
                })),
            );
        } else {
            rep.vacuous(&format!("{p}.coasso"), "coasso");
            rep.note(format!("{p}.coasso needs the sixth tensor power, above the budget of {}", b.budget));
        }
        rep
    }
}

impl Gauge<'_> {
    /// `Σ = (id⊗σ⊗id)(σ⊗σ)(id⊗σ⊗id)` on slots `pos..pos+4`.
    pub fn big_sigma_at(&self, x: &Tensor, t: usize, pos: usize) -> Tensor {
        let b = self.bundle;
        let mut y = b.sigma_at(x, t, pos + 1);
        y = b.sigma_at(&y, t, pos);
        y = b.sigma_at(&y, t, pos + 2);
        b.sigma_at(&y, t, pos + 1)
    }

    /// Spanning set of `L ⊗_M L` inside `P_4`.
    fn l_tensor_l(&self) -> Vec<(String, Tensor)> {
        let b = self.bundle;
        let mut out = Vec::new();
        for (i, x) in self.basis.iter().enumerate() {
            for (j, y) in self.basis.iter().enumerate() {
                let z = b.normalize(&x.kron(y), 4);
                if !z.is_zero() {
                    out.push((format!("L[{i}]⊗L[{j}]"), z));
                }
            }
        }
        out
    }

    /// Braided Hopf algebra identities of `L`, which hold when the braiding
    /// is involutive.
    pub fn classical_identities(&self, p: &str) -> Result<ValidationReport> {
        let b = self.bundle;
        if !b.group.alg.is_commutative() {
            return Err(Error::NotClassical("the structure Hopf algebra is not commutative".into()));
        }
        let mut rep = ValidationReport::new();
        let pure = |k: &Key| Tensor::pure(k);
        let ll = self.l_tensor_l();
        let lpairs: Vec<(usize, usize)> =
            (0..self.dim()).flat_map(|i| (0..self.dim()).map(move |j| (i, j))).collect();

        rep.record(
            &format!("{p}.tw"),
            "tw",
            first_mismatch(self.b2.keys.iter().map(|k| {
                let x = pure(k);
                let l = f_block(b, &b.sigma_at(&x, 2, 0), 2, 0, 2);
                let r = b.sigma_at(&f_block(b, &x, 2, 0, 2), 2, 0);
                (self.lab(k, 2), l, r)
            })),
        );

        rep.record(
            &format!("{p}.L-star-subalgebra"),
            "L-star-subalgebra",
            lpairs
                .iter()
                .find_map(|&(i, j)| {
                    let z = b.braided_mul(&self.basis[i], &self.basis[j], 2);
                    (!self.contains(&z)).then(|| Witness::new(format!("L[{i}]·L[{j}]"), z, "an element of L"))
                })
                .or_else(|| {
                    self.basis.iter().enumerate().find_map(|(i, r)| {
                        let z = b.braided_star(r, 2);
                        (!self.contains(&z)).then(|| Witness::new(format!("L[{i}]*"), z, "an element of L"))
                    })
                }),
        );

        rep.record(
            &format!("{p}.kappa-M"),
            "kappa-M",
            self.basis.iter().enumerate().find_map(|(i, r)| {
                let s = b.sigma_at(r, 2, 0);
                if !self.contains(&s) {
                    return Some(Witness::new(format!("L[{i}]"), s, "an element of L"));
                }
                let back = b.sigma_at(&s, 2, 0);
                (back != *r).then(|| Witness::new(format!("κ²L[{i}]"), back, r))
            }),
        );

        let b3 = KeyBasis::new(b.basis(3));
        let p_keys: Vec<Key> = (0..b.dim() as u32).map(|i| crate::tensor::key(&[i])).collect();
        let mut lb = Vec::new();
        let mut bl = Vec::new();
        for r in &self.basis {
            for q in &p_keys {
                lb.push(b.normalize(&r.kron(&pure(q)), 3));
                bl.push(b.normalize(&pure(q).kron(r), 3));
            }
        }
        let vecs = |ts: &[Tensor]| -> Vec<SVec> { ts.iter().map(|t| b3.vec(t)).collect() };
        let moved: Vec<Tensor> = lb.iter().map(|x| b.sigma_at(&b.sigma_at(x, 3, 1), 3, 0)).collect();
        rep.record(
            &format!("{p}.covariance-1"),
            "covariance",
            (!crate::linalg::same_span(&vecs(&moved), &vecs(&bl)))
                .then(|| Witness::new("(σ⊗id)(id⊗σ)(L⊗_M P)", "span of the image", "P ⊗_M L")),
        );
        let moved: Vec<Tensor> = bl.iter().map(|x| b.sigma_at(&b.sigma_at(x, 3, 0), 3, 1)).collect();
        rep.record(
            &format!("{p}.covariance-2"),
            "covariance",
            (!crate::linalg::same_span(&vecs(&moved), &vecs(&lb)))
                .then(|| Witness::new("(id⊗σ)(σ⊗id)(P⊗_M L)", "span of the image", "L ⊗_M P")),
        );

        rep.record(
            &format!("{p}.Sigma-involutive"),
            "Sigma-involutive",
            first_mismatch(ll.iter().map(|(at, x)| {
                (at.clone(), self.big_sigma_at(&self.big_sigma_at(x, 4, 0), 4, 0), x.clone())
            })),
        );
        rep.record(
            &format!("{p}.Sigma-star"),
            "Sigma-star",
            first_mismatch(ll.iter().map(|(at, x)| {
                let l = b.braided_star(&self.big_sigma_at(x, 4, 0), 4);
                let r = self.big_sigma_at(&b.braided_star(x, 4), 4, 0);
                (at.clone(), l, r)
            })),
        );
        if b.ensure_power(6).is_ok() {
            rep.record(
                &format!("{p}.Sigma-phi-1"),
                "Sigma-phi",
                first_mismatch(ll.iter().map(|(at, x)| {
                    let l = self.delta_at(&self.big_sigma_at(x, 4, 0), 4, 2);
                    let y = self.delta_at(x, 4, 0);
                    let r = self.big_sigma_at(&self.big_sigma_at(&y, 6, 2), 6, 0);
                    (at.clone(), l, r)
                })),
            );
            rep.record(
                &format!("{p}.Sigma-phi-2"),
                "Sigma-phi",
                first_mismatch(ll.iter().map(|(at, x)| {
                    let l = self.delta_at(&self.big_sigma_at(x, 4, 0), 4, 0);
                    let y = self.delta_at(x, 4, 2);
                    let r = self.big_sigma_at(&self.big_sigma_at(&y, 6, 0), 6, 2);
                    (at.clone(), l, r)
                })),
            );
        } else {
            for id in ["Sigma-phi-1", "Sigma-phi-2"] {
                rep.vacuous(&format!("{p}.{id}"), "Sigma-phi");
            }
            rep.note(format!("{p}.Sigma-phi-* need the sixth tensor power, above the budget of {}", b.budget));
        }

        rep.record(
            &format!("{p}.phi-multiplicative"),
            "phi-multiplicative",
            // products in P_8 are costly; an evenly spaced sample of pairs
            first_mismatch(sample(&lpairs, 6).into_iter().map(|(i, j)| {
                let (x, y) = (&self.basis[i], &self.basis[j]);
                let l = self.phi(&b.braided_mul(x, y, 2));
                let r = b.braided_mul(&self.phi(x), &self.phi(y), 4);
                (format!("(L[{i}],L[{j}])"), l, r)
            })),
        );
        rep.record(
            &format!("{p}.phi-star"),
            "phi-star",
            first_mismatch(self.basis.iter().enumerate().map(|(i, r)| {
                (format!("L[{i}]"), self.phi(&b.braided_star(r, 2)), b.braided_star(&self.phi(r), 4))
            })),
        );
        rep.record(
            &format!("{p}.eps-multiplicative"),
            "eps-multiplicative",
            first_mismatch(lpairs.iter().map(|&(i, j)| {
                let (x, y) = (&self.basis[i], &self.basis[j]);
                let l = self.eps(&b.braided_mul(x, y, 2));
                let r = Tensor::from_svec(&b.total.mul(&self.eps(x).to_svec(), &self.eps(y).to_svec()));
                (format!("(L[{i}],L[{j}])"), l, r)
            })),
        );

        // m(id ⊗ κ_M) φ_M = ε_M ⊗ 1 and m(κ_M ⊗ id) φ_M = 1 ⊗ ε_M
        let unit_p = Tensor::from_svec(&b.total.one());
        rep.record(
            &format!("{p}.antipode-1"),
            "antipode",
            first_mismatch(self.basis.iter().enumerate().map(|(i, r)| {
                let z = b.sigma_at(&self.phi(r), 4, 2);
                let rhs = b.normalize(&self.eps(r).kron(&unit_p), 2);
                (format!("L[{i}]"), b.braided_mul_joined(&z, 2), rhs)
            })),
        );
        rep.record(
            &format!("{p}.antipode-2"),
            "antipode",
            first_mismatch(self.basis.iter().enumerate().map(|(i, r)| {
                let z = b.sigma_at(&self.phi(r), 4, 0);
                let rhs = b.normalize(&unit_p.kron(&self.eps(r)), 2);
                (format!("L[{i}]"), b.braided_mul_joined(&z, 2), rhs)
            })),
        );
        Ok(rep)
    }
}

/// A unital `M`-linear *-homomorphism `γ: L → M`, stored by its values on
/// the basis of `L` (as elements of `P`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeTransformation {
    pub name: String,
    pub values: Vec<SVec>,
}

pub struct GaugeGroup {
    pub elements: Vec<GaugeTransformation>,
    pub table: Option<GroupTable>,
    pub report: ValidationReport,
}

impl Gauge<'_> {
    /// `L` as an abstract algebra with the braided product and star of `P_2`.
    pub fn l_algebra(&self) -> Result<Algebra> {
        let b = self.bundle;
        let d = self.dim();
        let inside = |x: Tensor, what: &str| {
            self.coords(&x).ok_or_else(|| Error::NotClassical(format!("{what} leaves the gauge coalgebra")))
        };
        let mut mult = Vec::with_capacity(d * d);
        for x in &self.basis {
            for y in &self.basis {
                mult.push(inside(b.braided_mul(x, y, 2), "a product")?);
            }
        }
        let one = Tensor::from_svec(&b.total.one());
        let unit_v = inside(b.normalize(&one.kron(&one), 2), "the unit")?;
        let cols = self.basis.iter().map(|x| inside(b.braided_star(x, 2), "the star")).collect::<Result<_>>()?;
        let star = LinearMap { dom: d, cod: d, cols, antilinear: true };
        Algebra::ungraded(BasedSpace::anonymous(d, "L"), mult, unit_v, star)
    }

    /// The base `M` as an abstract algebra in its echelon basis.
    pub fn m_algebra(&self) -> Result<Algebra> {
        let b = self.bundle;
        let mut ech = Echelon::new();
        for f in &b.base {
            ech.insert(f.clone());
        }
        let pivots: Vec<usize> = ech.pivots().collect();
        let coords = |v: &SVec| -> SVec { pivots.iter().enumerate().filter_map(|(i, p)| v.get(p).map(|c| (i, c.clone()))).collect() };
        let d = b.base.len();
        let mut mult = Vec::with_capacity(d * d);
        for f in &b.base {
            for g in &b.base {
                mult.push(coords(&b.total.mul(f, g)));
            }
        }
        let cols = b.base.iter().map(|f| coords(&b.total.star_of(f))).collect();
        let star = LinearMap { dom: d, cod: d, cols, antilinear: true };
        Algebra::ungraded(BasedSpace::anonymous(d, "m"), mult, coords(&b.total.one()), star)
    }

    fn in_base(&self, coords: &SVec) -> SVec {
        let mut out = SVec::new();
        for (i, c) in coords {
            axpy(&mut out, c, &self.bundle.base[*i]);
        }
        out
    }

    /// `γ ∘ p_L` on the canonical basis of `P_2`.
    fn extend(&self, g: &GaugeTransformation) -> Vec<SVec> {
        self.b2
            .keys
            .iter()
            .map(|k| {
                let pr = self.project(&Tensor::pure(k)).expect("Haar state");
                self.apply_coords(g, &self.coords(&pr).expect("projection lands in L"))
            })
            .collect()
    }

    fn apply_coords(&self, g: &GaugeTransformation, c: &SVec) -> SVec {
        let mut out = SVec::new();
        for (i, x) in c {
            axpy(&mut out, x, &g.values[*i]);
        }
        out
    }

    fn apply_ext(&self, ext: &[SVec], x: &Tensor) -> SVec {
        let mut out = SVec::new();
        for (k, c) in x.iter() {
            axpy(&mut out, c, &ext[self.b2.index(k).expect("canonical key")]);
        }
        out
    }

    /// `(γ ⊗ γ') φ_M`.
    pub fn compose(&self, g: &GaugeTransformation, h: &GaugeTransformation) -> GaugeTransformation {
        let b = self.bundle;
        let (eg, eh) = (self.extend(g), self.extend(h));
        let values = self
            .basis
            .iter()
            .map(|r| {
                let f = self.phi(r);
                let mut y = Tensor::zero();
                for (k, c) in f.iter() {
                    let v = &eh[self.b2.index(&k[2..]).expect("canonical key")];
                    y.add_scaled(&b.right_mul(&Tensor::pure(&k[..2]), 2, v), c);
                }
                self.apply_ext(&eg, &b.normalize(&y, 2))
            })
            .collect();
        GaugeTransformation { name: format!("{}{}", g.name, h.name), values }
    }

    /// `γ κ_M⁻¹`.
    pub fn inverse(&self, g: &GaugeTransformation) -> Option<GaugeTransformation> {
        let values = self
            .basis
            .iter()
            .map(|r| Some(self.apply_coords(g, &self.coords(&self.bundle.sigma_inv_at(r, 2, 0))?)))
            .collect::<Option<_>>()?;
        Some(GaugeTransformation { name: format!("{}⁻¹", g.name), values })
    }

    /// The counit `ε_M`, the unit of the gauge group.
    pub fn identity_transformation(&self) -> GaugeTransformation {
        GaugeTransformation { name: "ε".into(), values: self.basis.iter().map(|r| self.eps(r).to_svec()).collect() }
    }

    /// `γ · p = (γ ⊗ id) δ₃(p)`.
    pub fn act(&self, g: &GaugeTransformation, x: &SVec) -> SVec {
        let b = self.bundle;
        let ext = self.extend(g);
        let mut out = SVec::new();
        for (p, c) in x {
            for (k, d) in self.delta[*p].iter() {
                let v = &ext[self.b2.index(&k[..2]).expect("canonical key")];
                axpy(&mut out, &(c * d), &b.total.mul(v, &unit(k[2] as usize)));
            }
        }
        out
    }

    /// `γ(ρ) p = Σ p_j γ(ρ_j)` where `Σ p_j ⊗ ρ_j = (σ⊗id)(id⊗σ)(ρ ⊗ p)`.
    fn compatible(&self, g: &GaugeTransformation) -> Option<Witness> {
        let b = self.bundle;
        let ext = self.extend(g);
        for (i, r) in self.basis.iter().enumerate() {
            for q in 0..b.dim() as u32 {
                let l = b.total.mul(&g.values[i], &unit(q as usize));
                let x = b.normalize(&r.kron(&Tensor::pure(&[q])), 3);
                let y = b.sigma_at(&b.sigma_at(&x, 3, 1), 3, 0);
                let mut rhs = SVec::new();
                for (k, c) in y.iter() {
                    let v = &ext[self.b2.index(&k[1..]).expect("canonical key")];
                    axpy(&mut rhs, c, &b.total.mul(&unit(k[0] as usize), v));
                }
                if l != rhs {
                    return Some(Witness::new(
                        format!("(L[{i}],{})", b.total.space.label(q as usize)),
                        show_vec(&l, &b.total.space),
                        show_vec(&rhs, &b.total.space),
                    ));
                }
            }
        }
        None
    }

    /// Enumerate the gauge group of a classical bundle: a gauge
    /// transformation picks, for every point of `M`, a point of `L` over it.
    pub fn gauge_group(&self) -> Result<GaugeGroup> {
        let b = self.bundle;
        if !b.group.alg.is_commutative() {
            return Err(Error::NotClassical("the structure Hopf algebra is not commutative".into()));
        }
        if b.group.haar.is_none() {
            return Err(Error::NoHaar);
        }
        let l_pts = self.l_algebra()?.points()?;
        let m_pts = self.m_algebra()?.points()?;
        let one = Tensor::from_svec(&b.total.one());
        // characters of L restricted along f ↦ f ⊗ 1 and f ↦ 1 ⊗ f
        let embed = |f: &SVec, left: bool| -> SVec {
            let t = Tensor::from_svec(f);
            let x = if left { t.kron(&one) } else { one.kron(&t) };
            self.coords(&b.normalize(&x, 2)).expect("M ⊗ 1 lies in L")
        };
        let eval = |pt: &crate::algebra::Point, c: &SVec| -> Scalar {
            let mut s = Scalar::zero();
            for (i, x) in c {
                s += &(x * &pt.values[*i]);
            }
            s
        };
        let over: Vec<Vec<usize>> = m_pts
            .iter()
            .map(|mp| {
                (0..l_pts.len())
                    .filter(|&li| {
                        b.base.iter().enumerate().all(|(fi, f)| {
                            [true, false].iter().all(|&left| eval(&l_pts[li], &embed(f, left)) == mp.values[fi])
                        })
                    })
                    .collect()
            })
            .collect();
        let m_idem: Vec<SVec> = m_pts.iter().map(|mp| self.in_base(&mp.idempotent)).collect();

        let mut elements = Vec::new();
        let mut choice = vec![0usize; m_pts.len()];
        if over.iter().all(|o| !o.is_empty()) {
            loop {
                let values = (0..self.dim())
                    .map(|i| {
                        let mut v = SVec::new();
                        for (m, &c) in choice.iter().enumerate() {
                            axpy(&mut v, &l_pts[over[m][c]].values[i], &m_idem[m]);
                        }
                        v
                    })
                    .collect();
                let name = format!("γ[{}]", choice.iter().enumerate().map(|(m, &c)| over[m][c].to_string()).collect::<Vec<_>>().join(","));
                let g = GaugeTransformation { name, values };
                let star_ok = self.basis.iter().enumerate().all(|(i, r)| {
                    let c = self.coords(&b.braided_star(r, 2)).expect("L is a *-subalgebra");
                    self.apply_coords(&g, &c) == b.total.star_of(&g.values[i])
                });
                if star_ok && self.compatible(&g).is_none() {
                    elements.push(g);
                }
                // next choice, odometer style
                let mut m = 0;
                while m < choice.len() {
                    choice[m] += 1;
                    if choice[m] < over[m].len() {
                        break;
                    }
                    choice[m] = 0;
                    m += 1;
                }
                if m == choice.len() {
                    break;
                }
            }
        }
        Ok(self.group_report(elements))
    }

    fn group_report(&self, elements: Vec<GaugeTransformation>) -> GaugeGroup {
        let b = self.bundle;
        let mut rep = ValidationReport::new();
        let find = |g: &GaugeTransformation| elements.iter().position(|e| e.values == g.values);
        let unit_t = self.identity_transformation();
        let e = find(&unit_t);
        rep.record(
            "gauge-group.unit",
            "gauge-group",
            e.is_none().then(|| Witness::new("ε_M", "not among the enumerated transformations", "a gauge transformation")),
        );
        let n = elements.len();
        let mut mul = vec![vec![0usize; n]; n];
        let mut closed = None;
        'o: for i in 0..n {
            for j in 0..n {
                let c = self.compose(&elements[i], &elements[j]);
                match find(&c) {
                    Some(k) => mul[i][j] = k,
                    None => {
                        closed = Some(Witness::new(format!("({},{})", elements[i].name, elements[j].name), c.name, "a gauge transformation"));
                        break 'o;
                    }
                }
            }
        }
        rep.record("gauge-group.closed", "gauge-group", closed.clone());
        let inverse = elements.iter().find_map(|g| {
            let inv = self.inverse(g)?;
            let prod = self.compose(g, &inv);
            (find(&inv).is_none() || prod.values != unit_t.values)
                .then(|| Witness::new(g.name.clone(), format!("{:?}", prod.values), format!("{:?}", unit_t.values)))
        });
        rep.record("gauge-group.inverse", "gauge-group", inverse);
        let table = if closed.is_none() && e.is_some() && n > 0 {
            GroupTable::new(elements.iter().map(|g| g.name.clone()).collect(), mul).ok()
        } else {
            None
        };
        rep.record(
            "gauge-group.axioms",
            "gauge-group",
            table.is_none().then(|| Witness::new("multiplication table", "not a group", "a group")),
        );

        let p_vecs: Vec<SVec> = (0..b.dim()).map(unit).collect();
        let show = |v: &SVec| show_vec(v, &b.total.space);
        let acts: Vec<Vec<SVec>> = elements.iter().map(|g| p_vecs.iter().map(|x| self.act(g, x)).collect()).collect();
        let act_vec = |gi: usize, v: &SVec| -> SVec {
            let mut out = SVec::new();
            for (p, c) in v {
                axpy(&mut out, c, &acts[gi][*p]);
            }
            out
        };
        // (γγ')·b against γ·(γ'·b), and against γ'·(γ·b): with scalar-valued
        // transformations the convolution product makes the second one hold
        let composition = |reversed: bool| -> Option<Witness> {
            let t = table.as_ref()?;
            for i in 0..n {
                for j in 0..n {
                    for p in 0..b.dim() {
                        let l = &acts[t.mul[i][j]][p];
                        let r = if reversed { act_vec(j, &acts[i][p]) } else { act_vec(i, &acts[j][p]) };
                        if *l != r {
                            let at = format!("({},{},{})", elements[i].name, elements[j].name, b.total.space.label(p));
                            return Some(Witness::new(at, show(l), show(&r)));
                        }
                    }
                }
            }
            None
        };
        // on a nonabelian gauge group the two laws are exclusive; only the
        // reversed one is then asserted
        match (&table, composition(false)) {
            (Some(t), w) if !t.is_abelian() => rep.note(match w {
                None => "gauge-group.action-composition (nonabelian gauge group): holds".to_string(),
                Some(w) => format!("gauge-group.action-composition (nonabelian gauge group): fails at {}", w.at),
            }),
            (_, w) => rep.record("gauge-group.action-composition", "gauge-action", w),
        }
        rep.record("gauge-group.action-anti-composition", "gauge-action", composition(true));
        let unit_acts = first_vec_mismatch((0..b.dim()).map(|p| (b.total.space.label(p).to_string(), self.act(&unit_t, &p_vecs[p]), p_vecs[p].clone())), &show);
        rep.record("gauge-group.action-unit", "gauge-action", unit_acts);
        let equivariant = first_mismatch((0..n).flat_map(|i| (0..b.dim()).map(move |p| (i, p))).map(|(i, p)| {
            let l = b.coact_vec(&acts[i][p]);
            let r = b.coaction[p].flat_map(|k, c, out| {
                for (q, x) in &acts[i][k[0] as usize] {
                    out.add_term(crate::tensor::key(&[*q as u32, k[1]]), c * x);
                }
            });
            (format!("({},{})", elements[i].name, b.total.space.label(p)), l, r)
        }));
        rep.record("gauge-group.action-equivariant", "gauge-action", equivariant);
        let some = sample(&(0..b.dim()).collect::<Vec<_>>(), 12);
        let mult = first_vec_mismatch(
            (0..n).flat_map(|i| some.iter().flat_map(move |&p| (0..b.dim()).map(move |q| (i, p, q)))).map(|(i, p, q)| {
                let l = act_vec(i, b.total.mul_basis(p, q));
                let r = b.total.mul(&acts[i][p], &acts[i][q]);
                (format!("({},{},{})", elements[i].name, b.total.space.label(p), b.total.space.label(q)), l, r)
            }),
            &show,
        );
        rep.record("gauge-group.action-multiplicative", "gauge-action", mult);
        let star = first_vec_mismatch(
            (0..n).flat_map(|i| (0..b.dim()).map(move |p| (i, p))).map(|(i, p)| {
                let l = act_vec(i, &b.total.star_of(&p_vecs[p]));
                let r = b.total.star_of(&acts[i][p]);
                (format!("({},{})", elements[i].name, b.total.space.label(p)), l, r)
            }),
            &show,
        );
        rep.record("gauge-group.action-star", "gauge-action", star);
        GaugeGroup { elements, table, report: rep }
    }
}

impl Gauge<'_> {
    /// Check a candidate transformation given by its values on the basis of
    /// `L`; usable when `L` or `M` is noncommutative.
    pub fn verify_transformation(&self, g: &GaugeTransformation) -> ValidationReport {
        let b = self.bundle;
        let mut rep = ValidationReport::new();
        let show = |v: &SVec| show_vec(v, &b.total.space);
        let one = Tensor::from_svec(&b.total.one());
        let one2 = b.normalize(&one.kron(&one), 2);
        let unital = self.coords(&one2).map(|c| self.apply_coords(g, &c));
        rep.record(
            "gauge-transformation.unital",
            "gauge-group",
            (unital.as_ref() != Some(&b.total.one())).then(|| Witness::new("γ(1⊗1)", format!("{unital:?}"), show(&b.total.one()))),
        );
        let mut base = Echelon::new();
        for f in &b.base {
            base.insert(f.clone());
        }
        rep.record(
            "gauge-transformation.base-valued",
            "gauge-group",
            g.values.iter().enumerate().find_map(|(i, v)| (!base.contains(v)).then(|| Witness::new(format!("L[{i}]"), show(v), "an element of M"))),
        );
        let linear = first_vec_mismatch(
            self.basis.iter().enumerate().flat_map(|(i, r)| b.base.iter().enumerate().map(move |(fi, f)| (i, r, fi, f))).flat_map(|(i, r, fi, f)| {
                let fl = self.coords(&b.left_mul(f, r, 2)).map(|c| self.apply_coords(g, &c)).unwrap_or_default();
                let fr = self.coords(&b.right_mul(r, 2, f)).map(|c| self.apply_coords(g, &c)).unwrap_or_default();
                [
                    (format!("f{fi}·L[{i}]"), fl, b.total.mul(f, &g.values[i])),
                    (format!("L[{i}]·f{fi}"), fr, b.total.mul(&g.values[i], f)),
                ]
            }),
            &show,
        );
        rep.record("gauge-transformation.base-linear", "gauge-group", linear);
        let mult = first_vec_mismatch(
            (0..self.dim()).flat_map(|i| (0..self.dim()).map(move |j| (i, j))).map(|(i, j)| {
                let prod = b.braided_mul(&self.basis[i], &self.basis[j], 2);
                let l = self.coords(&prod).map(|c| self.apply_coords(g, &c)).unwrap_or_default();
                (format!("(L[{i}],L[{j}])"), l, b.total.mul(&g.values[i], &g.values[j]))
            }),
            &show,
        );
        rep.record("gauge-transformation.multiplicative", "gauge-group", mult);
        let star = first_vec_mismatch(
            self.basis.iter().enumerate().map(|(i, r)| {
                let l = self.coords(&b.braided_star(r, 2)).map(|c| self.apply_coords(g, &c)).unwrap_or_default();
                (format!("L[{i}]"), l, b.total.star_of(&g.values[i]))
            }),
            &show,
        );
        rep.record("gauge-transformation.star", "gauge-group", star);
        if b.group.haar.is_some() {
            rep.record("gauge-transformation.compatible", "gauge-group", self.compatible(g));
        } else {
            rep.vacuous("gauge-transformation.compatible", "gauge-group");
        }
        rep
    }
}

#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    pub irrep: String,
    pub irrep_dim: usize,
    /// Basis of the component inside `P`.
    pub basis: Vec<SVec>,
    /// `dim P^α / (d_α dim M)`, when that is an integer.
    pub multiplicity: Option<usize>,
    /// Dimension of `L ∩ (P^α ⊗_M P)`.
    pub gauge_dim: usize,
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomposition {
    pub components: Vec<IsotypicComponent>,
    pub report: ValidationReport,
}

impl Gauge<'_> {
    /// Split `P` along the irreducible corepresentations of `H`, using the
    /// projections `P_α = (id ⊗ ψ_α) F` with `ψ_α(a) = d_α h(κ(χ_α) a)`.
    pub fn isotypic_decompose(&self) -> Result<IsotypicDecomposition> {
        let b = self.bundle;
        let irreps = b.group.irreps.as_ref().ok_or(Error::IrrepsUnavailable)?;
        let haar = b.group.haar.as_ref().ok_or(Error::NoHaar)?;
        let d = b.dim();
        let psi: Vec<Vec<Scalar>> = irreps
            .iter()
            .map(|ir| {
                let kc = b.group.kappa(&ir.character);
                (0..b.dim_h())
                    .map(|j| {
                        let prod = b.group.alg.mul(&kc, &unit(j));
                        let mut s = Scalar::zero();
                        for (i, c) in &prod {
                            s += &(c * &haar[*i]);
                        }
                        &s * &Scalar::from_int(ir.dim as i64)
                    })
                    .collect()
            })
            .collect();
        let project = |a: usize, v: &SVec| -> SVec {
            let mut out = SVec::new();
            for (p, c) in v {
                for (k, x) in b.coaction[*p].iter() {
                    let w = &psi[a][k[1] as usize];
                    if !w.is_zero() {
                        crate::linalg::add_entry(&mut out, k[0] as usize, &(&(c * x) * w));
                    }
                }
            }
            out
        };
        let show = |v: &SVec| show_vec(v, &b.total.space);
        let mut rep = ValidationReport::new();
        let n = irreps.len();
        let images: Vec<Vec<SVec>> = (0..n).map(|a| (0..d).map(|p| project(a, &unit(p))).collect()).collect();

        rep.record(
            "isotypic.projector-idempotent",
            "isotypic",
            first_vec_mismatch(
                (0..n).flat_map(|a| (0..d).map(move |p| (a, p))).map(|(a, p)| {
                    (format!("{} on {}", irreps[a].name, b.total.space.label(p)), project(a, &images[a][p]), images[a][p].clone())
                }),
                &show,
            ),
        );
        rep.record(
            "isotypic.projector-orthogonal",
            "isotypic",
            first_vec_mismatch(
                (0..n)
                    .flat_map(|a| (0..n).filter(move |&c| c != a).map(move |c| (a, c)))
                    .flat_map(|(a, c)| (0..d).map(move |p| (a, c, p)))
                    .map(|(a, c, p)| {
                        let at = format!("{}∘{} on {}", irreps[a].name, irreps[c].name, b.total.space.label(p));
                        (at, project(a, &images[c][p]), SVec::new())
                    }),
                &show,
            ),
        );
        rep.record(
            "isotypic.complete",
            "isotypic",
            first_vec_mismatch(
                (0..d).map(|p| {
                    let mut sum = SVec::new();
                    for img in &images {
                        axpy(&mut sum, &Scalar::one(), &img[p]);
                    }
                    (b.total.space.label(p).to_string(), sum, unit(p))
                }),
                &show,
            ),
        );

        let b2_vecs = |f: &dyn Fn(&Tensor) -> Tensor| -> Vec<SVec> { self.b2.keys.iter().map(|k| self.b2.vec(&f(&Tensor::pure(k)))).collect() };
        let l_vecs = self.ech.basis();
        let m_dim = b.base.len();
        let mut components = Vec::new();
        for (a, ir) in irreps.iter().enumerate() {
            let basis = crate::linalg::span_basis(images[a].iter().cloned());
            let dim = basis.len();
            let div = ir.dim * m_dim;
            let multiplicity = (dim % div == 0).then_some(dim / div);
            // (P_α ⊗ id) on P_2
            let lifted = b2_vecs(&|x: &Tensor| {
                let y = b.coact_at(x, 2, 0, 0);
                y.flat_map(|k, c, out| {
                    let w = &psi[a][k[2] as usize];
                    if !w.is_zero() {
                        out.add_term(crate::tensor::key(&k[..2]), c * w);
                    }
                })
            });
            let ra = crate::linalg::span_rank(lifted.iter().cloned());
            let sum = crate::linalg::span_rank(lifted.iter().chain(l_vecs.iter()).cloned());
            let gauge_dim = ra + l_vecs.len() - sum;
            components.push(IsotypicComponent { irrep: ir.name.clone(), irrep_dim: ir.dim, basis, multiplicity, gauge_dim });
        }
        let total: usize = components.iter().map(|c| c.basis.len()).sum();
        rep.record(
            "isotypic.dimension-sum",
            "isotypic",
            (total != d).then(|| Witness::new("Σ dim P^α", total, d)),
        );
        let gauge_total: usize = components.iter().map(|c| c.gauge_dim).sum();
        rep.record(
            "isotypic.L-decomposition",
            "isotypic",
            (gauge_total != self.dim()).then(|| Witness::new("Σ dim L^α", gauge_total, self.dim())),
        );
        if b.is_point() {
            let squares: Option<usize> = components.iter().map(|c| c.multiplicity.map(|m| m * m)).sum();
            rep.record(
                "isotypic.multiplicity-squares",
                "isotypic",
                (squares != Some(self.dim())).then(|| Witness::new("Σ m_α²", format!("{squares:?}"), self.dim())),
            );
        } else {
            rep.vacuous("isotypic.multiplicity-squares", "isotypic");
        }
        Ok(IsotypicDecomposition { components, report: rep })
    }
}

/// `ς(a) = ℓ(κ⁻¹(a⁽¹⁾)) ⊗ τ(a⁽²⁾) r(κ⁻¹(a⁽¹⁾))` in `P_3`, for `a ∈ H` of degree zero.
pub fn varsigma(b: &Bundle, a: &SVec) -> Tensor {
    let mut out = Tensor::zero();
    for (k, c) in b.group.coproduct(a).iter() {
        let outer = b.tau_of(&b.group.kappa_inv(&unit(k[0] as usize)));
        let inner = &b.tau[k[1] as usize];
        for (ko, co) in outer.iter() {
            for (ki, ci) in inner.iter() {
                for (r, cr) in b.total.mul_basis(ki[1] as usize, ko[1] as usize) {
                    out.add_term(crate::tensor::key(&[ko[0], ki[0], *r as u32]), &(c * co) * &(ci * cr));
                }
            }
        }
    }
    b.normalize(&out, 3)
}

fn first_vec_mismatch(items: impl IntoIterator<Item = (String, SVec, SVec)>, show: &impl Fn(&SVec) -> String) -> Option<Witness> {
    items.into_iter().find(|(_, l, r)| l != r).map(|(at, l, r)| Witness::new(at, show(&l), show(&r)))
}

/// Kernel of `F₂ − (· ⊗ 1)` on `P_2`.
fn fixed_points(b: &Bundle, b2: &KeyBasis) -> Vec<Tensor> {
    let one = b.group.alg.one();
    b2.kernel(|x| f_block(b, x, 2, 0, 2).sub(&b.append_h(x, &one)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{preset, HopfKind};
    use crate::report::Status;

    fn point(g: &str, kind: HopfKind) -> Bundle {
        Bundle::point(preset(g, kind).unwrap()).unwrap()
    }

    #[test]
    fn gauge_dimensions() {
        // over a point L ≅ H with the adjoint-type identification, so dim L = dim H
        for (g, n) in [("Z2", 2), ("Z3", 3), ("S3", 6)] {
            for kind in [HopfKind::FunctionAlgebra, HopfKind::GroupAlgebra] {
                let b = point(g, kind);
                assert_eq!(Gauge::new(&b).unwrap().dim(), n, "{g} {kind:?}");
            }
        }
        // trivial bundle over X: L ≅ C(X) ⊗ H
        let b = Bundle::trivial(preset("Z2", HopfKind::FunctionAlgebra).unwrap(), 2).unwrap();
        assert_eq!(Gauge::new(&b).unwrap().dim(), 4);
    }

    #[test]
    fn identities_pass_on_presets() {
        for b in [
            point("Z2", HopfKind::FunctionAlgebra),
            point("Z3", HopfKind::GroupAlgebra),
            point("S3", HopfKind::FunctionAlgebra),
            point("S3", HopfKind::GroupAlgebra),
            Bundle::trivial(preset("Z2", HopfKind::FunctionAlgebra).unwrap(), 2).unwrap(),
        ] {
            let g = Gauge::new(&b).unwrap();
            let rep = g.identities("gauge");
            assert!(rep.all_pass(), "{}", rep.to_text());
        }
    }

    #[test]
    fn classical_identities_pass() {
        for b in [
            point("Z2", HopfKind::FunctionAlgebra),
            point("S3", HopfKind::FunctionAlgebra),
            Bundle::trivial(preset("Z2", HopfKind::FunctionAlgebra).unwrap(), 2).unwrap(),
        ] {
            let g = Gauge::new(&b).unwrap();
            let rep = g.classical_identities("classical").unwrap();
            assert!(rep.all_pass(), "{}", rep.to_text());
        }
        let b = point("S3", HopfKind::GroupAlgebra);
        assert!(matches!(Gauge::new(&b).unwrap().classical_identities("c"), Err(Error::NotClassical(_))));
    }

    #[test]
    fn gauge_group_is_maps_into_structure_group() {
        let cases = [("Z2", 2usize), ("Z3", 1), ("S3", 1), ("Z2", 3)];
        for (g, x) in cases {
            let b = Bundle::trivial(preset(g, HopfKind::FunctionAlgebra).unwrap(), x).unwrap();
            let gauge = Gauge::new(&b).unwrap();
            let gg = gauge.gauge_group().unwrap();
            let abelian = GroupTable::preset(g).unwrap().is_abelian();
            assert!(gg.report.all_pass(), "{g} over {x} points:\n{}", gg.report.to_text());
            // the literal composition law is asserted exactly on abelian groups
            assert_eq!(gg.report.get("gauge-group.action-composition").is_some(), abelian);
            if !abelian {
                assert!(gg.report.notes.iter().any(|n| n.contains("action-composition") && n.contains("fails at")));
            }
            let oracle = GroupTable::preset(g).unwrap().power(x);
            let table = gg.table.expect("group table");
            assert_eq!(table.order(), oracle.order());
            assert!(table.isomorphic_to(&oracle), "{g}^{x}");
        }
        let b = point("S3", HopfKind::GroupAlgebra);
        assert!(matches!(Gauge::new(&b).unwrap().gauge_group(), Err(Error::NotClassical(_))));
        // ℂ[Z3] is commutative with characters valued in cube roots of unity
        let b = point("Z3", HopfKind::GroupAlgebra);
        let gg = Gauge::new(&b).unwrap().gauge_group().unwrap();
        assert!(gg.report.all_pass(), "{}", gg.report.to_text());
        assert!(gg.table.unwrap().isomorphic_to(&GroupTable::cyclic(3)));
    }

    #[test]
    fn enumerated_transformations_verify() {
        let b = Bundle::trivial(preset("Z2", HopfKind::FunctionAlgebra).unwrap(), 2).unwrap();
        let g = Gauge::new(&b).unwrap();
        let gg = g.gauge_group().unwrap();
        assert_eq!(gg.elements.len(), 4);
        for t in &gg.elements {
            let rep = g.verify_transformation(t);
            assert!(rep.all_pass(), "{}", rep.to_text());
        }
        // doubling a transformation breaks unitality and multiplicativity
        let mut bad = gg.elements[0].clone();
        bad.values = bad.values.iter().map(|v| crate::linalg::scaled(v, &Scalar::from_int(2))).collect();
        let rep = g.verify_transformation(&bad);
        assert_eq!(rep.get("gauge-transformation.unital").unwrap().status, Status::Fail);
        assert_eq!(rep.get("gauge-transformation.multiplicative").unwrap().status, Status::Fail);
    }

    #[test]
    fn identity_transformation_acts_trivially() {
        let b = point("Z3", HopfKind::FunctionAlgebra);
        let g = Gauge::new(&b).unwrap();
        let e = g.identity_transformation();
        for p in 0..b.dim() {
            assert_eq!(g.act(&e, &unit(p)), unit(p));
        }
    }

    #[test]
    fn isotypic_multiplicities() {
        let b = point("S3", HopfKind::FunctionAlgebra);
        let g = Gauge::new(&b).unwrap();
        let iso = g.isotypic_decompose().unwrap();
        assert!(iso.report.all_pass(), "{}", iso.report.to_text());
        let mult: Vec<Option<usize>> = iso.components.iter().map(|c| c.multiplicity).collect();
        assert_eq!(mult, vec![Some(1), Some(1), Some(2)]);
        let dims: Vec<usize> = iso.components.iter().map(|c| c.basis.len()).collect();
        assert_eq!(dims, vec![1, 1, 4]);

        let b = point("Z2", HopfKind::FunctionAlgebra);
        let iso = Gauge::new(&b).unwrap().isotypic_decompose().unwrap();
        assert!(iso.report.all_pass());
        assert_eq!(iso.components.iter().map(|c| c.basis.len()).collect::<Vec<_>>(), vec![1, 1]);

        let b = point("Z1", HopfKind::FunctionAlgebra);
        let iso = Gauge::new(&b).unwrap().isotypic_decompose().unwrap();
        assert_eq!(iso.components.len(), 1);
        assert_eq!(iso.components[0].basis.len(), b.dim());

        for kind in [HopfKind::FunctionAlgebra, HopfKind::GroupAlgebra] {
            let b = Bundle::trivial(preset("S3", kind).unwrap(), 2).unwrap();
            let iso = Gauge::new(&b).unwrap().isotypic_decompose().unwrap();
            assert!(iso.report.all_pass(), "{}", iso.report.to_text());
        }
    }

    #[test]
    fn varsigma_examples() {
        // ς(1) = 1 ⊗ 1 ⊗ 1
        let b = point("S3", HopfKind::GroupAlgebra);
        let one = Tensor::from_svec(&b.total.one());
        assert_eq!(varsigma(&b, &b.group.alg.one()), b.normalize(&one.kron(&one).kron(&one), 3));
        // ℂ[Z2]: τ(g) = g ⊗ g, κ⁻¹(g) = g, so ς(g) = g ⊗ g ⊗ g·g = g ⊗ g ⊗ e
        let b = point("Z2", HopfKind::GroupAlgebra);
        assert_eq!(varsigma(&b, &unit(1)), Tensor::pure(&[1, 1, 0]));
    }

    #[test]
    fn varsigma_contracts_to_counit() {
        // (μ ⊗ id) ς(a) = ε(a) 1 ⊗ 1, since a⁽²⁾κ⁻¹(a⁽¹⁾) = ε(a)1
        for b in [point("S3", HopfKind::GroupAlgebra), point("S3", HopfKind::FunctionAlgebra)] {
            let one = Tensor::from_svec(&b.total.one());
            let one2 = b.normalize(&one.kron(&one), 2);
            for a in 0..b.dim_h() {
                let l = b.mu_at(&varsigma(&b, &unit(a)), 3, 0);
                assert_eq!(l, one2.scaled(&b.group.counit[a]), "{}", b.h_label(a));
            }
        }
    }
}
