use num_complex::Complex64;
use proptest::prelude::*;

use nsdwt::laurent::{
    embed_horizontal, embed_vertical, interleave, polyphase_split, Coefficient, LaurentPoly1,
    LaurentPoly2, Mode,
};

fn poly1() -> impl Strategy<Value = LaurentPoly1> {
    prop::collection::vec((-4i32..=4, -9i64..=9, 1i64..=6), 0..6).prop_map(|terms| {
        terms.into_iter().fold(LaurentPoly1::zero(Mode::Exact), |acc, (k, n, d)| {
            acc.add(&LaurentPoly1::monomial(k, Coefficient::rational(n, d))).unwrap()
        })
    })
}

fn poly2() -> impl Strategy<Value = LaurentPoly2> {
    prop::collection::vec((-3i32..=3, -3i32..=3, -9i64..=9, 1i64..=6), 0..6).prop_map(|terms| {
        terms.into_iter().fold(LaurentPoly2::zero(Mode::Exact), |acc, (km, kn, n, d)| {
            acc.add(&LaurentPoly2::monomial((km, kn), Coefficient::rational(n, d)))
                .unwrap()
        })
    })
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #[test]
    fn ring_axioms(a in poly2(), b in poly2(), c in poly2()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&LaurentPoly2::one(Mode::Exact)).unwrap(), a.clone());
    }

    #[test]
    fn transpose_is_a_ring_homomorphism(a in poly2(), b in poly2()) {
        prop_assert_eq!(a.mul(&b).unwrap().transpose(), a.transpose().mul(&b.transpose()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().transpose(), a.transpose().add(&b.transpose()).unwrap());
        prop_assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn split_then_interleave_is_identity(g in poly1()) {
        let parts = polyphase_split(&g);
        prop_assert_eq!(interleave(&parts.even, &parts.odd).unwrap(), g);
    }

    #[test]
    fn evaluation_respects_arithmetic(a in poly2(), b in poly2(), re in 0.5f64..1.5, im in -1.0f64..1.0) {
        let zm = Complex64::new(re, im);
        let zn = Complex64::new(im, re);
        let prod = a.mul(&b).unwrap().eval(zm, zn);
        prop_assert!(close(prod, a.eval(zm, zn) * b.eval(zm, zn)));
        let sum = a.add(&b).unwrap().eval(zm, zn);
        prop_assert!(close(sum, a.eval(zm, zn) + b.eval(zm, zn)));
        prop_assert!(close(a.transpose().eval(zm, zn), a.eval(zn, zm)));
    }

    #[test]
    fn polyphase_components_evaluate_consistently(g in poly1(), re in 0.5f64..1.5, im in -1.0f64..1.0) {
        let z = Complex64::new(re, im);
        let parts = polyphase_split(&g);
        let rebuilt = parts.even.eval(z * z) + parts.odd.eval(z * z) / z;
        prop_assert!(close(g.eval(z), rebuilt));
    }

    #[test]
    fn embeddings_evaluate_along_one_axis(g in poly1(), re in 0.5f64..1.5, im in -1.0f64..1.0) {
        let z = Complex64::new(re, im);
        let other = Complex64::new(0.3, 2.0);
        prop_assert!(close(embed_horizontal(&g).eval(z, other), g.eval(z)));
        prop_assert!(close(embed_vertical(&g).eval(other, z), g.eval(z)));
        prop_assert_eq!(embed_vertical(&g), embed_horizontal(&g).transpose());
    }
}

#[test]
fn float_and_exact_do_not_mix() {
    let exact = LaurentPoly1::one(Mode::Exact);
    let float = LaurentPoly1::one(Mode::Float);
    assert!(exact.add(&float).is_err());
    assert!(exact.mul(&float).is_err());
}

#[test]
fn cdf53_predict_split() {
    let predict = LaurentPoly1::from_terms(
        Mode::Exact,
        [(0, Coefficient::rational(-1, 2)), (-1, Coefficient::rational(-1, 2))],
    )
    .unwrap();
    let parts = polyphase_split(&predict);
    assert_eq!(parts.even, LaurentPoly1::constant(Coefficient::rational(-1, 2)));
    assert_eq!(parts.odd, LaurentPoly1::monomial(-1, Coefficient::rational(-1, 2)));
    assert_eq!(parts.odd.to_string(), "-1/2·z");
}
