use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use slp_core::scalar::{field_create, rationals, FieldRef, FieldSpec};
use slp_core::{Error, Scalar};

fn fields() -> Vec<FieldRef> {
    vec![
        rationals(),
        field_create(FieldSpec::Quadratic(5)).unwrap(),
        field_create(FieldSpec::Quadratic(2)).unwrap(),
        field_create(FieldSpec::Cosine(7)).unwrap(),
        field_create(FieldSpec::Cosine(9)).unwrap(),
    ]
}

fn scalar_in(field: FieldRef) -> impl Strategy<Value = Scalar> {
    let deg = field.degree();
    prop::collection::vec((-40i64..40, 1i64..9), deg).prop_map(move |cs| {
        let coeffs = cs.into_iter().map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d))).collect();
        Scalar::from_coeffs(&field, coeffs)
    })
}

fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    (0..fields().len()).prop_flat_map(|k| {
        let f = fields()[k].clone();
        (scalar_in(f.clone()), scalar_in(f.clone()), scalar_in(f))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms((x, y, z) in triple()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn sign_is_multiplicative((x, y, _) in triple()) {
        prop_assert_eq!((&x * &y).sign(), x.sign() * y.sign());
        prop_assert_eq!((-&x).sign(), -x.sign());
    }

    #[test]
    fn sign_matches_rational_order(a in -500i64..500, b in 1i64..50) {
        let q = rationals();
        let x = Scalar::from_ratio(&q, a, b);
        prop_assert_eq!(x.sign() as i64, a.signum());
    }

    #[test]
    fn text_round_trip((x, _, _) in triple()) {
        let text = x.to_string();
        let back = Scalar::parse(&text, x.field()).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(back.to_string(), text);
    }
}

#[test]
fn golden_ratio_identities() {
    let f = field_create(FieldSpec::Cosine(5)).unwrap();
    assert_eq!(f.min_poly().iter().map(|c| c.to_string()).collect::<Vec<_>>(), ["-1", "-1", "1"]);
    let g = Scalar::generator(&f);
    assert_eq!(&g * &g, &g + &Scalar::one(&f));
    let s5 = field_create(FieldSpec::Quadratic(5)).unwrap();
    let a = Scalar::parse("1/2 + 1/2*g", &s5).unwrap();
    let b = Scalar::parse("-1/2 + 1/2*g", &s5).unwrap();
    assert!((&a * &b).is_one());
    assert_eq!(Scalar::parse("-1/4 + 1/4*g", &s5).unwrap().sign(), 1);
    assert_eq!(Scalar::parse("2 - g", &s5).unwrap().sign(), -1);
}

#[test]
fn small_cosine_fields_collapse() {
    assert_eq!(field_create(FieldSpec::Cosine(3)).unwrap().degree(), 1);
    let c4 = field_create(FieldSpec::Cosine(4)).unwrap();
    assert_eq!(c4.min_poly().iter().map(|c| c.to_string()).collect::<Vec<_>>(), ["-2", "0", "1"]);
    assert_eq!(field_create(FieldSpec::Cosine(7)).unwrap().degree(), 3);
}

#[test]
fn error_paths() {
    assert!(matches!(field_create(FieldSpec::Quadratic(12)), Err(Error::Parameter(_))));
    assert!(matches!(field_create(FieldSpec::Cosine(2)), Err(Error::Parameter(_))));
    let s5 = field_create(FieldSpec::Quadratic(5)).unwrap();
    let s2 = field_create(FieldSpec::Quadratic(2)).unwrap();
    assert!(matches!(Scalar::zero(&s5).inv(), Err(Error::DivisionByZero)));
    let mixed = Scalar::generator(&s5).try_add(&Scalar::generator(&s2));
    assert!(matches!(mixed, Err(Error::FieldMismatch { .. })));
    assert!(matches!(Scalar::parse("1 + */2", &s5), Err(Error::Parse { .. })));
    assert_eq!(Scalar::parse("2/4", &rationals()).unwrap().to_string(), "1/2");
}
