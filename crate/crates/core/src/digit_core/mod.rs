//! Exact base-B digit arithmetic.
//!
//! Digits are stored little-endian: index `i` holds the coefficient of
//! `B^i`, which is also the column index of the addition algorithm in
//! [`trace`]. All values are arbitrary precision ([`Natural`]); the `_u64`
//! helpers are exact fast paths for hot loops whose bounds are stated on
//! each function.

mod divisors;
mod trace;

pub use divisors::{digit_sums_upto, divisor_digit_sum, divisor_digit_sums_upto, sigma};
pub use trace::{
    add_with_trace, carry_sum, carry_sum_repeat, correction, correction_nm1, correction_nm1_u64,
    correction_pair_u64, correction_repeat, digit_sum_recursion_check, AdditionTrace,
};

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigitError {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("digit {digit} is out of range for base {base}")]
    DigitOutOfRange { digit: u64, base: u64 },
    #[error("addition needs at least one summand")]
    EmptySummands,
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("step k = {k} must satisfy 1 <= k <= n = {n}")]
    StepOutOfRange { n: Natural, k: Natural },
}

/// A radix `B >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Base(u64);

impl Base {
    pub const TWO: Base = Base(2);
    pub const TEN: Base = Base(10);

    pub fn new(value: u64) -> Result<Self, DigitError> {
        if value < 2 {
            return Err(DigitError::InvalidBase(value));
        }
        Ok(Base(value))
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub(crate) fn big(self) -> Natural {
        Natural::from(self.0)
    }
}

impl TryFrom<u64> for Base {
    type Error = DigitError;

    fn try_from(value: u64) -> Result<Self, Self::Error> {
        Base::new(value)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Canonical little-endian digit vector. Zero is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitVec {
    base: Base,
    digits: Vec<u64>,
}

impl DigitVec {
    /// Builds a digit vector, dropping high zero digits.
    pub fn from_digits(base: Base, mut digits: Vec<u64>) -> Result<Self, DigitError> {
        if let Some(&digit) = digits.iter().find(|&&d| d >= base.get()) {
            return Err(DigitError::DigitOutOfRange {
                digit,
                base: base.get(),
            });
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(DigitVec { base, digits })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at column `i`, zero past the top.
    #[inline]
    pub fn digit(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    /// Number of digits; the top column index is `len() - 1`.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digit_sum(&self) -> Natural {
        let total: u128 = self.digits.iter().map(|&d| u128::from(d)).sum();
        Natural::from(total)
    }

    /// Horner evaluation of `Σ digits[i]·B^i`.
    pub fn value(&self) -> Natural {
        let b = self.base.big();
        self.digits
            .iter()
            .rev()
            .fold(Natural::zero(), |acc, &d| acc * &b + d)
    }
}

pub fn to_digits(n: &Natural, base: Base) -> DigitVec {
    let b = base.get();
    let mut digits: Vec<u64> = if b <= 256 {
        n.to_radix_le(b as u32).into_iter().map(u64::from).collect()
    } else if let Some(small) = n.to_u64() {
        digits_u64(small, base)
    } else {
        let big_b = base.big();
        let mut rest = n.clone();
        let mut out = Vec::new();
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&big_b);
            out.push(r.to_u64().expect("remainder is below a u64 base"));
            rest = q;
        }
        out
    };
    while digits.last() == Some(&0) {
        digits.pop();
    }
    DigitVec { base, digits }
}

pub fn digits_u64(mut n: u64, base: Base) -> Vec<u64> {
    let b = base.get();
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % b);
        n /= b;
    }
    out
}

/// `s_B(n)`, the sum of the base-B digits of `n`.
pub fn digit_sum(n: &Natural, base: Base) -> Natural {
    if let Some(small) = n.to_u64() {
        return Natural::from(digit_sum_u64(small, base));
    }
    to_digits(n, base).digit_sum()
}

/// `s_B(n)` for machine integers. Never overflows since `s_B(n) <= n`.
#[inline]
pub fn digit_sum_u64(mut n: u64, base: Base) -> u64 {
    let b = base.get();
    let mut s = 0;
    while n > 0 {
        s += n % b;
        n /= b;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> Natural {
        Natural::from(n)
    }

    #[test]
    fn base_rejects_zero_and_one() {
        assert_eq!(Base::new(0), Err(DigitError::InvalidBase(0)));
        assert_eq!(Base::new(1), Err(DigitError::InvalidBase(1)));
        assert!(Base::new(2).is_ok());
    }

    #[test]
    fn to_digits_examples() {
        assert!(to_digits(&nat(0), Base::TEN).is_zero());
        assert_eq!(to_digits(&nat(73), Base::TEN).digits(), &[3, 7]);
        assert_eq!(to_digits(&nat(246), Base::TEN).digits(), &[6, 4, 2]);
        let big = Base::new(1_000_003).unwrap();
        let n = nat(1_000_003u64 * 1_000_003 * 5 + 17);
        assert_eq!(to_digits(&n, big).digits(), &[17, 0, 5]);
    }

    #[test]
    fn to_digits_large_base_beyond_u64() {
        let base = Base::new(1 << 40).unwrap();
        let n: Natural = (Natural::from(3u32) << 80) + (Natural::from(9u32) << 40) + 4u32;
        let dv = to_digits(&n, base);
        assert_eq!(dv.digits(), &[4, 9, 3]);
        assert_eq!(dv.value(), n);
    }

    #[test]
    fn digit_sum_examples() {
        assert_eq!(digit_sum(&nat(73), Base::TEN), nat(10));
        assert_eq!(digit_sum(&nat(0), Base::new(7).unwrap()), nat(0));
        assert_eq!(digit_sum(&nat(5), Base::TWO), nat(2));
        assert_eq!(digit_sum_u64(u64::MAX, Base::TWO), 64);
    }

    #[test]
    fn digit_vec_canonicalizes_and_validates() {
        let dv = DigitVec::from_digits(Base::TEN, vec![3, 7, 0, 0]).unwrap();
        assert_eq!(dv.digits(), &[3, 7]);
        assert_eq!(dv.value(), nat(73));
        assert_eq!(
            DigitVec::from_digits(Base::TEN, vec![10]),
            Err(DigitError::DigitOutOfRange { digit: 10, base: 10 })
        );
    }

    #[test]
    fn digit_sum_congruent_mod_base_minus_one() {
        for b in [3u64, 10, 16] {
            let base = Base::new(b).unwrap();
            for n in 0..10_000u64 {
                assert_eq!(digit_sum_u64(n, base) % (b - 1), n % (b - 1), "n={n} B={b}");
            }
        }
    }

    #[test]
    fn digit_sum_is_identity_below_base() {
        let base = Base::new(97).unwrap();
        for n in 0..97u64 {
            assert_eq!(digit_sum(&nat(n), base), nat(n));
        }
    }
}
