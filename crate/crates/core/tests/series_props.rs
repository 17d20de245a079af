//! Ring laws and substitution rules of truncated series over random inputs.

use num_bigint::BigInt;
use proptest::prelude::*;

use digitlab::exec::Exec;
use digitlab::series::{LaurentPoly, MonomialSubstitution, TruncatedSeries};

const ORDER: usize = 10;

fn poly(min_exp: i64) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((min_exp..6i64, -5i64..=5), 0..4)
        .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn series_from(min_exp: i64) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(poly(min_exp), ORDER + 1).prop_map(|c| TruncatedSeries::from_coeffs(ORDER, c))
}

fn series() -> impl Strategy<Value = TruncatedSeries> {
    series_from(-3)
}

/// Constant term exactly 1, so the series is invertible.
fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
    series().prop_map(|mut s| {
        s.set_coeff(0, LaurentPoly::one());
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multiplication_is_a_commutative_ring(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &TruncatedSeries::one(ORDER), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &(-&a), TruncatedSeries::zero(ORDER));
    }

    #[test]
    fn parallel_product_is_identical(a in series(), b in series()) {
        prop_assert_eq!(a.try_mul_with(&b, Exec::Parallel).unwrap(), a.try_mul_with(&b, Exec::Sequential).unwrap());
    }

    #[test]
    fn reciprocal_inverts(a in unit_series()) {
        let inv = a.reciprocal().unwrap();
        prop_assert_eq!(&a * &inv, TruncatedSeries::one(ORDER));
        prop_assert_eq!(inv.reciprocal().unwrap(), a);
    }

    #[test]
    fn negated_unit_is_invertible(a in unit_series()) {
        let neg = -&a;
        prop_assert_eq!(&neg * &neg.reciprocal().unwrap(), TruncatedSeries::one(ORDER));
    }

    #[test]
    fn z_derivative_is_a_derivation(a in series(), b in series()) {
        let lhs = (&a * &b).z_derivative();
        let rhs = &(&a.z_derivative() * &b) + &(&a * &b.z_derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_at_one_is_a_homomorphism(a in series(), b in series()) {
        prop_assert_eq!((&a * &b).eval_z_at_one(), &a.eval_z_at_one() * &b.eval_z_at_one());
        prop_assert_eq!((&a + &b).eval_z_at_one(), &a.eval_z_at_one() + &b.eval_z_at_one());
    }

    #[test]
    fn substitution_is_a_homomorphism(
        a in series(),
        b in series(),
        zz in -3i64..=3,
        qz in -3i64..=3,
        qq in 1u64..=3,
    ) {
        let sub = MonomialSubstitution { z_to_z: zz, q_to_z: qz, q_to_q: qq };
        let sa = a.substitute(sub).unwrap();
        let sb = b.substitute(sub).unwrap();
        prop_assert_eq!((&a * &b).substitute(sub).unwrap(), &sa * &sb);
        prop_assert_eq!((&a + &b).substitute(sub).unwrap(), &sa + &sb);
        prop_assert_eq!(a.substitute(MonomialSubstitution::IDENTITY).unwrap(), a.clone());
    }

    #[test]
    fn z_truncation_commutes_with_products(a in series_from(0), b in series_from(0), cap in 0i64..8) {
        let direct = (&a * &b).truncate_z(cap);
        let early = (&a.truncate_z(cap) * &b.truncate_z(cap)).truncate_z(cap);
        prop_assert_eq!(direct, early);
    }

    #[test]
    fn geometric_inverts_binomial(ze in -4i64..=4, qe in 1usize..=ORDER + 2) {
        let g = TruncatedSeries::geometric(ze, qe, ORDER).unwrap();
        let b = TruncatedSeries::one_minus(ze, qe, ORDER).unwrap();
        prop_assert_eq!(&g * &b, TruncatedSeries::one(ORDER));
        prop_assert_eq!(b.reciprocal().unwrap(), g);
    }

    #[test]
    fn first_difference_finds_the_lowest_mismatch(a in series(), k in 0usize..=ORDER) {
        let mut b = a.clone();
        let bumped = a.coeff(k) + &LaurentPoly::z_pow(99);
        b.set_coeff(k, bumped);
        let (at, _, _) = a.first_difference(&b).unwrap().expect("differs");
        prop_assert_eq!(at, k);
        prop_assert!(a.first_difference(&a).unwrap().is_none());
    }
}

#[test]
fn mismatched_orders_are_rejected() {
    let a = TruncatedSeries::one(5);
    let b = TruncatedSeries::one(6);
    assert!(a.try_add(&b).is_err());
    assert!(a.try_mul(&b).is_err());
    assert!(a.first_difference(&b).is_err());
    assert!(TruncatedSeries::geometric(1, 0, 5).is_err());
    let mut c = TruncatedSeries::one(5);
    c.set_coeff(0, LaurentPoly::constant(2));
    assert!(c.reciprocal().is_err());
}
