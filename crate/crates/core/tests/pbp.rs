use proptest::prelude::*;
use qfactor::pbp::{Half, PseudoBooleanPolynomial};

const VARS: u32 = 5;

fn poly(max_terms: usize) -> impl Strategy<Value = PseudoBooleanPolynomial> {
    prop::collection::vec(
        (-20i64..=20, prop::collection::vec(1..=VARS, 0..4)),
        0..max_terms,
    )
    .prop_map(PseudoBooleanPolynomial::from_terms)
}

fn bits() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), VARS as usize)
}

fn eval(p: &PseudoBooleanPolynomial, x: &[bool]) -> Half {
    p.evaluate_bits(x).unwrap()
}

proptest! {
    #[test]
    fn multiplication_commutes(a in poly(6), b in poly(6)) {
        prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
    }

    #[test]
    fn multiplication_associates(a in poly(4), b in poly(4), c in poly(4)) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in poly(6), b in poly(6), x in bits()) {
        prop_assert_eq!(eval(&(&a + &b), &x), eval(&a, &x) + eval(&b, &x));
        prop_assert_eq!(eval(&(&a - &b), &x), eval(&a, &x) - eval(&b, &x));
        let product = a.multiply(&b).unwrap();
        prop_assert_eq!(eval(&product, &x), eval(&a, &x).checked_mul(&eval(&b, &x)).unwrap());
    }

    #[test]
    fn normalize_is_idempotent(a in poly(8)) {
        let once = a.normalize();
        prop_assert_eq!(&once, &a);
        prop_assert_eq!(once.normalize(), once);
    }

    #[test]
    fn canonical_text_round_trips(a in poly(8)) {
        let text = a.to_canonical_text();
        prop_assert_eq!(PseudoBooleanPolynomial::from_canonical_text(&text).unwrap(), a);
    }

    #[test]
    fn squares_are_nonnegative(a in poly(6), x in bits()) {
        let sq = a.square().unwrap();
        prop_assert!(eval(&sq, &x) >= Half::zero());
        prop_assert!(sq.degree() <= VARS as usize);
    }

    #[test]
    fn subtracting_itself_gives_zero(a in poly(8)) {
        prop_assert!((&a - &a).is_zero());
    }
}
