use corona_core::{QuarticScalar as Q, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn scalar() -> impl Strategy<Value = Q> {
    (coeff(), coeff(), coeff(), coeff()).prop_map(|(a, b, c, d)| Q::new(a, b, c, d))
}

/// Enclosure of `√m` by rational bisection, width at most 2⁻ᵇⁱᵗˢ.
fn sqrt_bracket(m: i64, bits: u32) -> (Rational, Rational) {
    let target = Rational::from_integer(BigInt::from(m));
    let mut lo = Rational::one();
    let mut hi = Rational::from_integer(BigInt::from(m));
    let width = Rational::new(BigInt::one(), BigInt::one() << bits);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        if &mid * &mid <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Interval product of `c · [lo, hi]`.
fn term(c: &Rational, (lo, hi): &(Rational, Rational)) -> (Rational, Rational) {
    if c.is_negative() {
        (c * hi, c * lo)
    } else {
        (c * lo, c * hi)
    }
}

/// Sign of `a + b√2 + c√3 + d√6` from independent enclosures, or `None`
/// when the enclosure still straddles zero.
fn oracle_sign(s: &Q, bits: u32) -> Option<i8> {
    let [a, b, c, d] = s.coeffs();
    let (l2, l3, l6) = (sqrt_bracket(2, bits), sqrt_bracket(3, bits), sqrt_bracket(6, bits));
    let (b0, b1) = term(&b, &l2);
    let (c0, c1) = term(&c, &l3);
    let (d0, d1) = term(&d, &l6);
    let lo = &a + b0 + c0 + d0;
    let hi = &a + b1 + c1 + d1;
    if lo.is_positive() {
        Some(1)
    } else if hi.is_negative() {
        Some(-1)
    } else if lo.is_zero() && hi.is_zero() {
        Some(0)
    } else {
        None
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn addition_is_commutative_and_associative(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x - &x, Q::zero());
    }

    #[test]
    fn multiplication_is_commutative_associative_and_distributive(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &Q::one(), x.clone());
    }

    #[test]
    fn nonzero_elements_are_invertible(x in scalar()) {
        if x.is_zero() {
            prop_assert!(x.inverse().is_err());
        } else {
            prop_assert_eq!(&x * &x.inverse().unwrap(), Q::one());
        }
    }

    #[test]
    fn sign_matches_independent_enclosure(x in scalar()) {
        let want = (0..).map(|k| oracle_sign(&x, 64 << k)).find_map(|s| s).unwrap();
        prop_assert_eq!(x.sign(), want);
    }

    #[test]
    fn order_is_compatible_with_addition(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(x < y, &x + &z < &y + &z);
        prop_assert_eq!((&x * &x).sign() >= 0, true);
    }

    #[test]
    fn approximation_is_within_tolerance(x in scalar(), k in 4u32..120) {
        let eps = Rational::new(BigInt::one(), BigInt::one() << k);
        let r = x.approximate(&eps);
        let diff = &x - &Q::from_rational(&r);
        prop_assert!(diff.abs() <= Q::from_rational(&eps));
    }
}

#[test]
fn cancellation_near_zero() {
    // (√2 + √3)² − (5 + 2√6) = 0, and tiny perturbations keep their sign
    let s = Q::from_ints(0, 1, 1, 0);
    let z = &(&s * &s) - &Q::from_ints(5, 0, 0, 2);
    assert!(z.is_zero());
    let tiny = Q::frac(1, 1_000_000_000_000_000_000);
    assert_eq!((&(&s * &s) - &(&Q::from_ints(5, 0, 0, 2) - &tiny)).sign(), 1);
    // √2 minus a Pell convergent
    let near = Q::new(
        Rational::new(BigInt::from(-19601), BigInt::from(13860)),
        Rational::one(),
        Rational::zero(),
        Rational::zero(),
    );
    assert_eq!(near.sign(), oracle_sign(&near, 256).unwrap());
}
