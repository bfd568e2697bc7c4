//! The canonical braid operator, the braided products and stars it induces on
//! tensor powers, and the classicality test.
//!
//! Every check here is written for graded bundles with Koszul signs, so the
//! differential suite reuses it on the extended operator.

use std::collections::HashMap;

use serde_json::json;

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::linalg::{unit, LinearMap};
use crate::report::{first_mismatch, ValidationReport, Witness};
use crate::tensor::{Key, Tensor};

/// Matrices of `σ` and `σ⁻¹` on the canonical basis of `P_2`.
#[derive(Clone, Debug)]
pub struct BraidOperator {
    pub basis: Vec<Key>,
    pub forward: LinearMap,
    pub inverse: LinearMap,
}

fn to_columns(basis: &[Key], f: impl Fn(&Tensor) -> Tensor) -> LinearMap {
    let idx: HashMap<&Key, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let cols = basis.iter().map(|k| f(&Tensor::pure(k)).iter().map(|(k, c)| (idx[k], c.clone())).collect()).collect();
    LinearMap { dom: basis.len(), cod: basis.len(), cols, antilinear: false }
}

pub fn sigma_m(b: &Bundle) -> BraidOperator {
    let basis = b.basis(2);
    let forward = to_columns(&basis, |x| b.sigma_at(x, 2, 0));
    let inverse = to_columns(&basis, |x| b.sigma_inv_at(x, 2, 0));
    BraidOperator { basis, forward, inverse }
}

fn pure(k: &Key) -> Tensor {
    Tensor::pure(k)
}

/// Identities of the braid operator itself. `p` prefixes identity ids;
/// `labels` gives the label for (inverse, braid, prod1, prod2, comm, star).
pub fn braid_axioms(b: &Bundle, p: &str, inv_label: &str) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let b2 = b.basis(2);
    let b3 = b.basis(3);
    let lab = |k: &Key, t: usize| b.label_key(k, t);

    rep.record(
        &format!("{p}.{inv_label}"),
        inv_label,
        first_mismatch(b2.iter().flat_map(|k| {
            let x = pure(k);
            let a = b.sigma_inv_at(&b.sigma_at(&x, 2, 0), 2, 0);
            let c = b.sigma_at(&b.sigma_inv_at(&x, 2, 0), 2, 0);
            [(format!("σ⁻¹σ {}", lab(k, 2)), a, x.clone()), (format!("σσ⁻¹ {}", lab(k, 2)), c, x)]
        })),
    );

    rep.record(
        &format!("{p}.bimodule"),
        "bimodule",
        first_mismatch(b2.iter().flat_map(|k| b.base.iter().enumerate().map(move |(fi, f)| (k, fi, f))).flat_map(|(k, fi, f)| {
            let x = pure(k);
            let l1 = b.sigma_at(&b.left_mul(f, &x, 2), 2, 0);
            let r1 = b.left_mul(f, &b.sigma_at(&x, 2, 0), 2);
            let l2 = b.sigma_at(&b.right_mul(&x, 2, f), 2, 0);
            let r2 = b.right_mul(&b.sigma_at(&x, 2, 0), 2, f);
            [(format!("f{fi}·{}", lab(k, 2)), l1, r1), (format!("{}·f{fi}", lab(k, 2)), l2, r2)]
        })),
    );

    rep.record(
        &format!("{p}.braid"),
        "braid",
        first_mismatch(b3.iter().map(|k| {
            let x = pure(k);
            let l = b.sigma_at(&b.sigma_at(&b.sigma_at(&x, 3, 0), 3, 1), 3, 0);
            let r = b.sigma_at(&b.sigma_at(&b.sigma_at(&x, 3, 1), 3, 0), 3, 1);
            (lab(k, 3), l, r)
        })),
    );

    rep.record(
        &format!("{p}.prod-sM1"),
        "prod-sM1",
        first_mismatch(b3.iter().map(|k| {
            let x = pure(k);
            let l = b.sigma_at(&b.mu_at(&x, 3, 0), 2, 0);
            let r = b.mu_at(&b.sigma_at(&b.sigma_at(&x, 3, 1), 3, 0), 3, 1);
            (lab(k, 3), l, r)
        })),
    );
    rep.record(
        &format!("{p}.prod-sM2"),
        "prod-sM2",
        first_mismatch(b3.iter().map(|k| {
            let x = pure(k);
            let l = b.sigma_at(&b.mu_at(&x, 3, 1), 2, 0);
            let r = b.mu_at(&b.sigma_at(&b.sigma_at(&x, 3, 0), 3, 1), 3, 0);
            (lab(k, 3), l, r)
        })),
    );

    rep.record(
        &format!("{p}.comm"),
        "comm",
        first_mismatch(b2.iter().map(|k| {
            let x = pure(k);
            (lab(k, 2), b.mu_at(&b.sigma_at(&x, 2, 0), 2, 0), b.mu_at(&x, 2, 0))
        })),
    );

    // σ ∘ * = * ∘ σ⁻¹ with the standard conjugation
    rep.record(
        &format!("{p}.sigma-star"),
        "sigma-star",
        first_mismatch(b2.iter().map(|k| {
            let x = pure(k);
            let l = b.sigma_at(&b.standard_star(&x, 2), 2, 0);
            let r = b.standard_star(&b.sigma_inv_at(&x, 2, 0), 2);
            (lab(k, 2), l, r)
        })),
    );
    rep
}

/// Lemmas relating the braid to the translation map and the coaction.
pub fn tau_and_coaction(b: &Bundle, p: &str) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let dh = b.dim_h();
    let b2 = b.basis(2);
    let hl = |i: usize| b.h_label(i).to_string();

    rep.record(
        &format!("{p}.sigma-tau"),
        "sigma-tau",
        first_mismatch((0..dh).map(|a| {
            let l = b.sigma_at(&b.tau[a], 2, 0);
            let r = b.tau_of(&b.group.kappa(&unit(a)));
            (hl(a), l, r)
        })),
    );

    let star_hom = first_mismatch((0..dh).map(|a| {
        let l = b.braided_star(&b.tau[a], 2);
        let r = b.tau_of(&b.group.alg.star_of(&unit(a)));
        (format!("{}*", hl(a)), l, r)
    }))
    .or_else(|| {
        first_mismatch((0..dh).flat_map(|a| (0..dh).map(move |c| (a, c))).map(|(a, c)| {
            let l = b.braided_mul(&b.tau[a], &b.tau[c], 2);
            let r = b.tau_of(b.group.alg.mul_basis(a, c));
            (format!("({},{})", hl(a), hl(c)), l, r)
        }))
    });
    rep.record(&format!("{p}.tau-star-hom"), "tau-star-hom", star_hom);

    rep.record(
        &format!("{p}.aP-funct"),
        "aP-funct",
        first_mismatch((0..dh).flat_map(|a| (0..b.dim()).map(move |q| (a, q))).map(|(a, q)| {
            let x = b.normalize(&b.tau[a].kron(&Tensor::pure(&[q as u32])), 3);
            let l = b.sigma_at(&b.sigma_at(&x, 3, 1), 3, 0);
            // (id ⊗ τ) of the graded flip a ⊗ q ↦ ± q ⊗ a
            let odd = b.deg_h(a as u32) % 2 == 1 && b.deg_p(q as u32) % 2 == 1;
            let r = b.normalize(&Tensor::pure(&[q as u32]).kron(&b.tau[a]), 3).scaled(&crate::tensor::sign(odd));
            (format!("({},{})", hl(a), b.total.space.label(q)), l, r)
        })),
    );

    rep.record(
        &format!("{p}.F-funct"),
        "F-funct",
        first_mismatch(b2.iter().map(|k| {
            let x = pure(k);
            let l = b.sigma_at(&b.coact_at(&x, 2, 0, 0), 2, 0);
            let r = b.coact_at(&b.sigma_at(&x, 2, 0), 2, 1, 0);
            (b.label_key(k, 2), l, r)
        })),
    );
    rep
}

/// The braided algebra structure on `P_2` (and the star on `P_3`).
pub fn braided_structure(b: &Bundle, p: &str) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let b2 = b.basis(2);
    let b3 = b.basis(3);
    let one = b.total.one();
    let one2 = b.normalize(&Tensor::from_svec(&one).kron(&Tensor::from_svec(&one)), 2);
    let lab = |k: &Key, t: usize| b.label_key(k, t);

    rep.record(
        &format!("{p}.prodBB-unit"),
        "prodBB",
        first_mismatch(b2.iter().flat_map(|k| {
            let x = pure(k);
            [
                (format!("1·{}", lab(k, 2)), b.braided_mul(&one2, &x, 2), x.clone()),
                (format!("{}·1", lab(k, 2)), b.braided_mul(&x, &one2, 2), x),
            ]
        })),
    );

    let some = sample(&b2, 12);
    rep.record(
        &format!("{p}.prodBB-assoc"),
        "prodBB",
        first_mismatch(some.iter().flat_map(|x| some.iter().map(move |y| (x, y))).flat_map(|(x, y)| {
            let xy = b.braided_mul(&pure(x), &pure(y), 2);
            b2.iter().map(move |z| {
                let l = b.braided_mul(&xy, &pure(z), 2);
                let r = b.braided_mul(&pure(x), &b.braided_mul(&pure(y), &pure(z), 2), 2);
                (format!("({},{},{})", lab(x, 2), lab(y, 2), lab(z, 2)), l, r)
            })
        })),
    );

    rep.record(
        &format!("{p}.galois-multiplicative"),
        "galois-star-iso",
        first_mismatch(b2.iter().flat_map(|x| b2.iter().map(move |y| (x, y))).map(|(x, y)| {
            let l = b.galois(&b.braided_mul(&pure(x), &pure(y), 2));
            let r = b.mul_ph(&b.galois(&pure(x)), &b.galois(&pure(y)));
            (format!("({},{})", lab(x, 2), lab(y, 2)), l, trunc(b, &r))
        })),
    );
    rep.record(
        &format!("{p}.galois-hermitian"),
        "galois-star-iso",
        first_mismatch(b2.iter().map(|x| {
            let l = b.galois(&b.braided_star(&pure(x), 2));
            let r = b.star_ph(&b.galois(&pure(x)));
            (lab(x, 2), l, r)
        })),
    );

    for (n, basis) in [(2usize, &b2), (3, &b3)] {
        rep.record(
            &format!("{p}.star-involutive-{n}"),
            "braided-star",
            first_mismatch(basis.iter().map(|k| {
                let x = pure(k);
                (lab(k, n), b.braided_star(&b.braided_star(&x, n), n), x)
            })),
        );
        let some = sample(basis, 24);
        rep.record(
            &format!("{p}.star-antimultiplicative-{n}"),
            "braided-star",
            first_mismatch(some.iter().flat_map(|x| basis.iter().map(move |y| (x, y))).map(|(x, y)| {
                let l = b.braided_star(&b.braided_mul(&pure(x), &pure(y), n), n);
                let r = b.braided_mul(&b.braided_star(&pure(y), n), &b.braided_star(&pure(x), n), n);
                (format!("({},{})", lab(x, n), lab(y, n)), l, r)
            })),
        );
    }

    rep.record(
        &format!("{p}.mu-star-hom"),
        "mu-star-hom",
        first_mismatch(b2.iter().map(|k| {
            let x = pure(k);
            let l = b.mu_at(&b.braided_star(&x, 2), 2, 0);
            let r = Tensor::from_svec(&b.total.star_of(&b.mu_at(&x, 2, 0).to_svec()));
            (lab(k, 2), l, r)
        }))
        .or_else(|| {
            first_mismatch(some.iter().flat_map(|x| b2.iter().map(move |y| (x, y))).map(|(x, y)| {
                let l = b.mu_at(&b.braided_mul(&pure(x), &pure(y), 2), 2, 0);
                let r = Tensor::from_svec(&b.total.mul(&b.mu_at(&pure(x), 2, 0).to_svec(), &b.mu_at(&pure(y), 2, 0).to_svec()));
                (format!("({},{})", lab(x, 2), lab(y, 2)), l, trunc(b, &r))
            }))
        }),
    );
    rep
}

/// Drop terms above the degree budget from a `P ⊗ H` or `P` element.
fn trunc(b: &Bundle, x: &Tensor) -> Tensor {
    b.normalize(x, 1)
}

/// Evenly spaced subset of at most `n` items (all of them if there are fewer).
pub fn sample<T: Clone>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    (0..n).map(|i| items[i * items.len() / n].clone()).collect()
}

/// Outcome of the four equivalent classicality tests.
#[derive(Clone, Debug)]
pub struct Dichotomy {
    pub commutative: Option<Witness>,
    pub f_wrong: Option<Witness>,
    pub ap_wrong: Option<Witness>,
    pub involutive: Option<Witness>,
}

impl Dichotomy {
    pub fn flags(&self) -> [bool; 4] {
        [self.commutative.is_none(), self.f_wrong.is_none(), self.ap_wrong.is_none(), self.involutive.is_none()]
    }

    pub fn classical(&self) -> bool {
        self.flags()[0]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let w = |x: &Option<Witness>| x.as_ref().map(|w| json!({"at": w.at, "lhs": w.lhs, "rhs": w.rhs}));
        json!({
            "classical": self.classical(),
            "commutative": self.commutative.is_none(),
            "F-wrong": self.f_wrong.is_none(),
            "aP-wrong": self.ap_wrong.is_none(),
            "sigma-involutive": self.involutive.is_none(),
            "witnesses": {
                "commutative": w(&self.commutative),
                "F-wrong": w(&self.f_wrong),
                "aP-wrong": w(&self.ap_wrong),
                "sigma-involutive": w(&self.involutive),
            }
        })
    }
}

pub fn classicality_report(b: &Bundle) -> Result<Dichotomy> {
    let b2 = b.basis(2);
    let commutative = b.group.alg.commutativity_witness().map(|(i, j)| {
        let l = b.group.alg.mul_basis(i, j);
        let r = b.group.alg.mul_basis(j, i);
        Witness::new(
            format!("({},{})", b.h_label(i), b.h_label(j)),
            crate::algebra::show_vec(l, &b.group.alg.space),
            crate::algebra::show_vec(r, &b.group.alg.space),
        )
    });
    let f_wrong = first_mismatch(b2.iter().map(|k| {
        let x = pure(k);
        let l = b.coact_at(&b.sigma_at(&x, 2, 0), 2, 0, 0);
        let r = b.sigma_at(&b.coact_at(&x, 2, 1, 0), 2, 0);
        (b.label_key(k, 2), l, r)
    }));
    let ap_wrong = first_mismatch((0..b.dim()).flat_map(|q| (0..b.dim_h()).map(move |a| (q, a))).map(|(q, a)| {
        let l = b.normalize(&b.tau[a].kron(&Tensor::pure(&[q as u32])), 3);
        let x = b.normalize(&Tensor::pure(&[q as u32]).kron(&b.tau[a]), 3);
        let r = b.sigma_at(&b.sigma_at(&x, 3, 0), 3, 1);
        (format!("({},{})", b.total.space.label(q), b.h_label(a)), l, r)
    }));
    let involutive = first_mismatch(b2.iter().map(|k| {
        let x = pure(k);
        (b.label_key(k, 2), b.sigma_at(&b.sigma_at(&x, 2, 0), 2, 0), x)
    }));
    let d = Dichotomy { commutative, f_wrong, ap_wrong, involutive };
    let f = d.flags();
    if f.iter().any(|&x| x != f[0]) {
        return Err(Error::EquivalenceViolation(format!(
            "commutative={}, F-wrong={}, aP-wrong={}, involutive={}",
            f[0], f[1], f[2], f[3]
        )));
    }
    Ok(d)
}

/// All braiding checks for the degree-zero bundle.
pub fn verify_braiding_suite(b: &Bundle) -> ValidationReport {
    let mut rep = braid_axioms(b, "braiding", "inv");
    rep.merge(tau_and_coaction(b, "braiding"));
    rep.merge(braided_structure(b, "braiding"));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{preset, HopfKind};

    fn point(g: &str, kind: HopfKind) -> Bundle {
        Bundle::point(preset(g, kind).unwrap()).unwrap()
    }

    #[test]
    fn sigma_examples_group_algebra_z2() {
        let b = point("Z2", HopfKind::GroupAlgebra);
        // σ(g ⊗ e) = e ⊗ g, σ(g ⊗ g) = g ⊗ g
        assert_eq!(b.sigma_pair(1, 0), Tensor::pure(&[0, 1]));
        assert_eq!(b.sigma_pair(1, 1), Tensor::pure(&[1, 1]));
        // σ(1 ⊗ q) = q ⊗ 1
        for q in 0..2 {
            assert_eq!(b.sigma_pair(0, q), Tensor::pure(&[q, 0]));
        }
        let op = sigma_m(&b);
        assert!(op.forward.compose(&op.inverse).unwrap().is_identity());
    }

    #[test]
    fn suites_pass_on_presets() {
        for b in [
            point("Z2", HopfKind::FunctionAlgebra),
            point("Z3", HopfKind::FunctionAlgebra),
            point("S3", HopfKind::GroupAlgebra),
            Bundle::trivial(preset("Z2", HopfKind::FunctionAlgebra).unwrap(), 2).unwrap(),
        ] {
            let rep = verify_braiding_suite(&b);
            assert!(rep.all_pass(), "{}", rep.to_text());
        }
    }

    #[test]
    fn dichotomy() {
        for g in ["Z1", "Z2", "Z3", "S3"] {
            let d = classicality_report(&point(g, HopfKind::FunctionAlgebra)).unwrap();
            assert_eq!(d.flags(), [true; 4]);
        }
        let d = classicality_report(&point("S3", HopfKind::GroupAlgebra)).unwrap();
        assert_eq!(d.flags(), [false; 4]);
        assert!(d.involutive.is_some());
        let d = classicality_report(&point("Z1", HopfKind::GroupAlgebra)).unwrap();
        assert!(d.classical());
    }

    #[test]
    fn group_algebra_braid_is_not_involutive() {
        let b = point("S3", HopfKind::GroupAlgebra);
        let op = sigma_m(&b);
        assert!(!op.forward.compose(&op.forward).unwrap().is_identity());
    }
}
