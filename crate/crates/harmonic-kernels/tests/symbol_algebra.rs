use harmonic_kernels::poisson_recursion::compute_poisson_symbols;
use harmonic_kernels::symbol_algebra::jet::qr;
use harmonic_kernels::symbol_algebra::{
    leibniz_compose, BoundarySymbol, CJetPoly, DomainSpec, EvalPoint, JetMonomial, JetPoly, Monomial, SymbolKind,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn jet_poly() -> impl Strategy<Value = JetPoly> {
    prop::collection::vec((prop::collection::vec(0u8..3, 3), -5i64..6, 1i64..4), 0..5).prop_map(|terms| {
        let mut p = JetPoly::zero();
        for (e, num, den) in terms {
            p.add_term(JetMonomial::from_exps(e), &qr(num, den));
        }
        p
    })
}

/// Monomial in n = 3 with the given homogeneity degree.
fn monomial(degree: i32) -> impl Strategy<Value = Monomial> {
    (prop::collection::vec(0u8..3, 2), prop::collection::vec(0u8..4, 2)).prop_map(move |(xp, xi)| {
        let xi_deg: i32 = xi.iter().map(|&e| e as i32).sum();
        Monomial { xp, xi, w: degree - xi_deg, xn: 0, yn: 0 }
    })
}

fn psdo(degree: i32) -> impl Strategy<Value = BoundarySymbol> {
    (monomial(degree), monomial(degree), -3i64..4).prop_map(|(a, b, c)| {
        let s = BoundarySymbol::monomial(SymbolKind::Psdo, 3, 12, a, CJetPoly::one()).unwrap();
        let t = BoundarySymbol::monomial(SymbolKind::Psdo, 3, 12, b, CJetPoly::from_q(qr(c, 2))).unwrap();
        s.add(&t).unwrap()
    })
}

fn point() -> impl Strategy<Value = EvalPoint> {
    (prop::collection::vec(-1.0f64..1.0, 2), prop::collection::vec(0.2f64..2.0, 2))
        .prop_map(|(xp, xi)| EvalPoint { xp, xn: 0.0, yn: 0.0, xi })
}

proptest! {
    #[test]
    fn jet_ring_laws(a in jet_poly(), b in jet_poly(), c in jet_poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&JetPoly::one()), a.clone());
    }

    #[test]
    fn jet_display_parses_back(a in jet_poly()) {
        prop_assert_eq!(JetPoly::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn symbol_product_laws(a in psdo(1), b in psdo(-1), c in psdo(0), d in psdo(-1)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&d).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&d).unwrap()).unwrap());
    }

    #[test]
    fn canonical_form_keeps_values(m in monomial(2), pt in point()) {
        let s = BoundarySymbol::monomial(SymbolKind::Psdo, 3, 12, m.clone(), CJetPoly::one()).unwrap();
        prop_assert!(s.grades()[0].keys().all(|k| k.is_canonical()));
        let w = (pt.xi[0] * pt.xi[0] + pt.xi[1] * pt.xi[1]).sqrt();
        let mut direct = w.powi(m.w);
        for i in 0..2 {
            direct *= pt.xp[i].powi(m.xp[i] as i32) * pt.xi[i].powi(m.xi[i] as i32);
        }
        let got = s.eval_grade(0, &pt, &[]);
        prop_assert!((got - Complex64::new(direct, 0.0)).norm() <= 1e-10 * direct.abs().max(1.0));
    }

    #[test]
    fn composing_with_one_is_identity(a in psdo(1)) {
        let one = BoundarySymbol::one(3, 12);
        let left = leibniz_compose(&one, &a, 2).unwrap();
        let right = leibniz_compose(&a, &one, 2).unwrap();
        prop_assert_eq!(left.truncated(0, 12).grades().to_vec(), a.grades().to_vec());
        prop_assert_eq!(right.truncated(0, 12).grades().to_vec(), a.grades().to_vec());
        prop_assert!(left.is_zero_beyond(1) && right.is_zero_beyond(1));
    }

    #[test]
    fn symbol_json_round_trip(a in psdo(0)) {
        prop_assert_eq!(BoundarySymbol::from_json(&a.to_json().unwrap()).unwrap(), a);
    }
}

#[test]
fn poisson_symbols_are_homogeneous() {
    let k = compute_poisson_symbols(&DomainSpec::symbolic(3, 3).unwrap(), 3, 3).unwrap();
    let pt = EvalPoint { xp: vec![0.1, -0.2], xn: 0.3, yn: 0.0, xi: vec![0.7, 1.1] };
    assert!(k.homogeneity_defect(&pt, &[0.4, -0.3, 0.2], 1.7) < 1e-12);
    let back = BoundarySymbol::from_json(&k.to_json().unwrap()).unwrap();
    assert_eq!(back, k);
}

#[test]
fn pointwise_product_of_decaying_symbols_is_rejected() {
    let k = compute_poisson_symbols(&DomainSpec::half_space(3).unwrap(), 0, 0).unwrap();
    assert!(k.mul(&k).is_err());
}
