use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Sparse Laurent polynomial in `z` with big-integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is exact
/// polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

#[inline]
fn add_exp(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("z-exponent overflow")
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c.into(), 0)
    }

    /// `c·z^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c.into());
        p
    }

    /// `z^exp`.
    pub fn z_pow(exp: i64) -> Self {
        Self::monomial(BigInt::one(), exp)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(i64, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&e, c)| (e, c))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, exp: i64, c: &BigInt) {
        match self.terms.get_mut(&exp) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(exp, c.clone());
                }
            }
        }
    }

    /// `self += a·b` without materializing the product.
    pub fn add_product(&mut self, a: &LaurentPoly, b: &LaurentPoly) {
        let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
        if let Some((e, c)) = b.as_monomial() {
            for (ea, ca) in a.terms() {
                let term = ca * c;
                self.add_term(add_exp(ea, e), term);
            }
            return;
        }
        for (ea, ca) in a.terms() {
            for (eb, cb) in b.terms() {
                self.add_term(add_exp(ea, eb), ca * cb);
            }
        }
    }

    /// `z·d/dz`: each term `c·z^k` becomes `k·c·z^k`.
    pub fn z_derivative(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * e)))
    }

    /// Value at `z = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `z ↦ z^a`. With `a = 0` this collapses to the constant `p(1)`.
    pub fn substitute_z_power(&self, a: i64) -> Self {
        Self::from_terms(
            self.terms()
                .map(|(e, c)| (e.checked_mul(a).expect("z-exponent overflow"), c.clone())),
        )
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (add_exp(e, k), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * s)))
    }

    /// Drops every term with exponent above `cap`.
    pub fn truncate_above(&mut self, cap: i64) {
        self.terms.retain(|&e, _| e <= cap);
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in rhs.terms() {
            self.add_term_ref(e, c);
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in rhs.terms() {
            self.add_term(e, -c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;

    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Highest power first, e.g. `3*z^2 - z + 1 - 2*z^-1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{e}")?,
                (_, false) => write!(f, "{mag}*z^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_drops_zeros() {
        let p = LaurentPoly::from_terms([(2, 3), (2, -3), (0, 1)]);
        assert_eq!(p, LaurentPoly::one());
        let mut q = LaurentPoly::z_pow(4);
        q -= &LaurentPoly::z_pow(4);
        assert!(q.is_zero());
        assert_eq!(q, LaurentPoly::zero());
    }

    #[test]
    fn multiplication_with_negative_exponents() {
        let a = LaurentPoly::from_terms([(1, 1), (-1, 1)]); // z + 1/z
        let sq = &a * &a;
        assert_eq!(sq, LaurentPoly::from_terms([(2, 1), (0, 2), (-2, 1)]));
    }

    #[test]
    fn derivative_and_evaluation() {
        let p = LaurentPoly::from_terms([(3, 1), (-2, 1), (0, 5)]);
        assert_eq!(p.z_derivative(), LaurentPoly::from_terms([(3, 3), (-2, -2)]));
        assert_eq!(p.eval_at_one(), BigInt::from(7));
        assert!(LaurentPoly::constant(9).z_derivative().is_zero());
    }

    #[test]
    fn substitution_and_shift() {
        let p = LaurentPoly::from_terms([(2, 1), (-1, 4)]);
        assert_eq!(p.substitute_z_power(-1), LaurentPoly::from_terms([(-2, 1), (1, 4)]));
        assert_eq!(p.substitute_z_power(0), LaurentPoly::constant(5));
        assert_eq!(p.shift(3), LaurentPoly::from_terms([(5, 1), (2, 4)]));
    }

    #[test]
    fn display() {
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        let p = LaurentPoly::from_terms([(2, 3), (1, -1), (0, 1), (-1, -2)]);
        assert_eq!(p.to_string(), "3*z^2 - z + 1 - 2*z^-1");
        assert_eq!(LaurentPoly::monomial(-1, 5).to_string(), "-z^5");
    }
}
