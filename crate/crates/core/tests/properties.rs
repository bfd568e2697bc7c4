//! Property tests on random elements: algebraic invariants that the
//! exhaustive basis checks only cover through linearity.

use std::sync::OnceLock;

use proptest::prelude::*;

use qpb::bundle::Bundle;
use qpb::calculus::{BaseCalculus, TotalCalculus};
use qpb::fodc::Fodc;
use qpb::gauge::Gauge;
use qpb::hopf::{preset, Hopf, HopfKind};
use qpb::linalg::{add_entry, LinearMap, SVec, Solver};
use qpb::specfile::{generate_example, parse_spec, GenOptions};
use qpb::tensor::{key, Tensor};
use qpb::{Error, Scalar};

fn to_svec(xs: &[i64]) -> SVec {
    let mut v = SVec::new();
    for (i, &x) in xs.iter().enumerate() {
        add_entry(&mut v, i, &Scalar::from_int(x));
    }
    v
}

fn small_vec(d: usize) -> impl Strategy<Value = SVec> {
    prop::collection::vec(-3i64..=3, d).prop_map(|xs| to_svec(&xs))
}

fn hopfs() -> &'static [Hopf; 2] {
    static H: OnceLock<[Hopf; 2]> = OnceLock::new();
    H.get_or_init(|| [preset("S3", HopfKind::FunctionAlgebra).unwrap(), preset("S3", HopfKind::GroupAlgebra).unwrap()])
}

fn bundles() -> &'static [Bundle; 2] {
    static B: OnceLock<[Bundle; 2]> = OnceLock::new();
    B.get_or_init(|| {
        [
            Bundle::trivial(preset("Z2", HopfKind::FunctionAlgebra).unwrap(), 2).unwrap(),
            Bundle::point(preset("S3", HopfKind::GroupAlgebra).unwrap()).unwrap(),
        ]
    })
}

fn z2_two_points() -> &'static TotalCalculus {
    static C: OnceLock<TotalCalculus> = OnceLock::new();
    C.get_or_init(|| {
        let f = Fodc::universal(preset("Z2", HopfKind::FunctionAlgebra).unwrap()).unwrap();
        TotalCalculus::build(f, 2, BaseCalculus::Universal, 2).unwrap()
    })
}

/// An element of `P ⊗_M P` from coefficients on its canonical basis.
fn p2_element(b: &Bundle, coeffs: &[i64]) -> Tensor {
    let mut t = Tensor::zero();
    for (k, c) in b.basis(2).iter().zip(coeffs) {
        t.add_term(k.clone(), Scalar::from_int(*c));
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_and_solver(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-3i64..=3, 36), x in prop::collection::vec(-3i64..=3, 6)) {
        let columns: Vec<SVec> = (0..cols).map(|j| to_svec(&seed[j * rows..(j + 1) * rows])).collect();
        let a = LinearMap::new(cols, rows, columns).unwrap();
        let kernel = a.kernel();
        prop_assert_eq!(a.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(a.apply(v).is_empty());
        }
        let target = a.apply(&to_svec(&x[..cols]));
        let y = Solver::new(&a).solve(&target).unwrap();
        prop_assert_eq!(a.apply(&y), target);
    }

    #[test]
    fn hopf_coproduct_and_antipode_on_random_elements(which in 0usize..2, a in small_vec(6), b in small_vec(6)) {
        let h = &hopfs()[which];
        let ab = h.alg.mul(&a, &b);
        prop_assert_eq!(h.coproduct(&ab), h.mul2(&h.coproduct(&a), &h.coproduct(&b)));
        prop_assert_eq!(h.kappa(&ab), h.alg.mul(&h.kappa(&b), &h.kappa(&a)));
        prop_assert_eq!(h.kappa_inv(&h.kappa(&a)), a.clone());
    }

    #[test]
    fn haar_is_positive(which in 0usize..2, a in small_vec(6)) {
        let h = &hopfs()[which];
        let aa = h.alg.mul(&h.alg.star_of(&a), &a);
        let v = h.haar_of(&aa).as_rational().expect("rational");
        prop_assert!(v >= num_rational::BigRational::from_integer(0.into()));
        prop_assert_eq!(v == num_rational::BigRational::from_integer(0.into()), a.is_empty());
    }

    #[test]
    fn coaction_is_a_star_homomorphism(which in 0usize..2, p in small_vec(6), q in small_vec(6)) {
        let b = &bundles()[which];
        let d = b.dim();
        let (p, q): (SVec, SVec) = (p.into_iter().filter(|(i, _)| *i < d).collect(), q.into_iter().filter(|(i, _)| *i < d).collect());
        prop_assert_eq!(b.coact_vec(&b.total.mul(&p, &q)), b.mul_ph(&b.coact_vec(&p), &b.coact_vec(&q)));
        prop_assert_eq!(b.coact_vec(&b.total.star_of(&p)), b.star_ph(&b.coact_vec(&p)));
    }

    #[test]
    fn translation_map_inverts_galois(which in 0usize..2, a in small_vec(6)) {
        let b = &bundles()[which];
        let a: SVec = a.into_iter().filter(|(i, _)| *i < b.dim_h()).collect();
        let mut one_a = Tensor::zero();
        for (u, x) in &b.total.one() {
            for (i, y) in &a {
                one_a.add_term(key(&[*u as u32, *i as u32]), x * y);
            }
        }
        prop_assert_eq!(b.galois(&b.tau_of(&a)), one_a);
    }

    #[test]
    fn braiding_is_invertible(which in 0usize..2, coeffs in prop::collection::vec(-2i64..=2, 36)) {
        let b = &bundles()[which];
        let x = p2_element(b, &coeffs);
        prop_assert_eq!(b.sigma_inv_at(&b.sigma_at(&x, 2, 0), 2, 0), x.clone());
        prop_assert_eq!(b.sigma_at(&b.sigma_inv_at(&x, 2, 0), 2, 0), x);
    }

    #[test]
    fn gauge_projection_is_idempotent(which in 0usize..2, coeffs in prop::collection::vec(-2i64..=2, 36)) {
        let b = &bundles()[which];
        let g = Gauge::new(b).unwrap();
        let x = p2_element(b, &coeffs);
        let px = g.project(&x).unwrap();
        prop_assert!(g.contains(&px));
        prop_assert_eq!(g.project(&px).unwrap(), px);
    }

    #[test]
    fn spec_files_round_trip(name in 0usize..4, group in 0usize..3, points in 1usize..4, fodc in 0usize..3, ga in any::<bool>()) {
        let names = ["c-group", "group-algebra", "trivial-bundle", "point-bundle"];
        let name = names[name];
        let opts = GenOptions {
            group: ["Z2", "Z3", "S3"][group].into(),
            kind: (name == "point-bundle" && ga).then(|| "group-algebra".to_string()),
            base_points: if name == "trivial-bundle" { points } else { 1 },
            fodc: [None, Some("universal"), Some("zero")][fodc].map(Into::into),
            base_calculus: None,
        };
        let g = generate_example(name, &opts).unwrap();
        prop_assert_eq!(parse_spec(&g.to_json()).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Corrupted files are rejected with a position inside the text, never a
    /// panic.
    #[test]
    fn corrupted_files_fail_with_positions(at in 0usize..2000, byte in prop::sample::select(vec![b'{', b']', b',', b'"', b'7', b'x', b'-', b' '])) {
        let text = generate_example("c-group", &GenOptions::default()).unwrap().to_json();
        let mut bytes = text.into_bytes();
        let at = at % bytes.len();
        bytes[at] = byte;
        let text = String::from_utf8(bytes).unwrap();
        if let Err(e) = parse_spec(&text) {
            match e {
                Error::Positioned { line, column, .. } => {
                    prop_assert!(line >= 1 && line <= text.lines().count() + 1);
                    prop_assert!(column >= 1);
                }
                e => prop_assert!(false, "unpositioned error {}", e),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_squares_to_zero(coeffs in prop::collection::vec(-2i64..=2, 24)) {
        let tc = z2_two_points();
        let x: SVec = to_svec(&coeffs).into_iter().filter(|(i, _)| *i < tc.dim()).collect();
        prop_assert!(tc.d_vec(&tc.d_vec(&x)).is_empty());
    }

    /// λ(η) = α(x0dx1 + x1dx0) over two points has curvature
    /// 2α(1−α)(x0dx1dx0 + x1dx0dx1) ⊗ 1, derived by hand.
    #[test]
    fn curvature_matches_closed_form(alpha in -6i64..=6) {
        let tc = z2_two_points();
        let a = Scalar::from_int(alpha);
        let conn = tc.connection(Some(&[vec![a.clone(), a]])).unwrap();
        let base = &tc.bundle.product_form().unwrap().base;
        let mut expected = SVec::new();
        for path in ["x0dx1dx0", "x1dx0dx1"] {
            add_entry(&mut expected, base.space.index_of(path).unwrap(), &Scalar::from_int(2 * alpha * (1 - alpha)));
        }
        prop_assert_eq!(conn.curvature(0), tc.lift_base(&expected));
    }

    #[test]
    fn perturbed_connections_transform_correctly(l0 in -3i64..=3, l1 in -3i64..=3) {
        let tc = z2_two_points();
        let conn = tc.connection(Some(&[vec![Scalar::from_int(l0), Scalar::from_int(l1)]])).unwrap();
        prop_assert_eq!(conn.hermitian, l0 == l1);
        let rep = conn.verify_transformations("c").unwrap();
        prop_assert!(rep.all_pass(), "{}", rep.to_text());
    }
}
