//! Truncated formal power series in `q` whose coefficients are Laurent
//! polynomials in `z`.
//!
//! A [`TruncatedSeries`] of order `N` keeps the coefficients of `q^0..=q^N`.
//! The order is fixed at construction: combining series of different orders
//! is an error, never an implicit truncation.

mod laurent;

pub use laurent::LaurentPoly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::exec::Exec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("the q-exponent must be at least 1")]
    NonPositiveQExponent,
    #[error("constant term {0} is not a unit (must be the constant 1 or -1)")]
    NonUnitConstant(String),
}

/// The change of variables `z ↦ z^z_to_z`, `q ↦ z^q_to_z · q^q_to_q`.
///
/// The image of `z` carries no power of `q` and the image of `q` has
/// positive `q`-degree, so a truncated input determines a truncated output
/// of the same order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialSubstitution {
    pub z_to_z: i64,
    pub q_to_z: i64,
    pub q_to_q: u64,
}

impl MonomialSubstitution {
    pub const IDENTITY: MonomialSubstitution = MonomialSubstitution {
        z_to_z: 1,
        q_to_z: 0,
        q_to_q: 1,
    };

    /// `z ↦ z^a`, `q` fixed.
    pub fn z_power(a: i64) -> Self {
        MonomialSubstitution {
            z_to_z: a,
            ..Self::IDENTITY
        }
    }

    /// `q ↦ z^c·q^m`, `z` fixed.
    pub fn q_monomial(c: i64, m: u64) -> Self {
        MonomialSubstitution {
            q_to_z: c,
            q_to_q: m,
            ..Self::IDENTITY
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<LaurentPoly>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![LaurentPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, LaurentPoly::one())
    }

    pub fn constant(order: usize, c: LaurentPoly) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c·z^z_exp·q^q_exp`, or zero when `q_exp > order`.
    pub fn monomial(order: usize, c: impl Into<BigInt>, z_exp: i64, q_exp: usize) -> Self {
        let mut s = Self::zero(order);
        if q_exp <= order {
            s.coeffs[q_exp] = LaurentPoly::monomial(c, z_exp);
        }
        s
    }

    /// Takes the first `order + 1` coefficients, padding with zeros.
    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = LaurentPoly>) -> Self {
        let mut coeffs: Vec<_> = coeffs.into_iter().take(order + 1).collect();
        coeffs.resize(order + 1, LaurentPoly::zero());
        TruncatedSeries { coeffs }
    }

    /// Builds coefficient `n` as `f(n)` for `0 <= n <= order`.
    pub fn from_fn(order: usize, exec: Exec, f: impl Fn(usize) -> LaurentPoly + Sync + Send) -> Self {
        TruncatedSeries {
            coeffs: exec.map_range(0..order as u64 + 1, |n| f(n as usize)),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &LaurentPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: LaurentPoly) {
        self.coeffs[n] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.try_mul_with(other, Exec::default())
    }

    /// Cauchy product truncated at the common order. Zero coefficients on
    /// either side are skipped, so products with sparse factors are cheap.
    pub fn try_mul_with(&self, other: &Self, exec: Exec) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let nz_a: Vec<usize> = nonzero_indices(&self.coeffs);
        let nz_b: Vec<usize> = nonzero_indices(&other.coeffs);
        let (outer, small, inner) = if nz_a.len() <= nz_b.len() {
            (&nz_a, &self.coeffs, &other.coeffs)
        } else {
            (&nz_b, &other.coeffs, &self.coeffs)
        };
        Ok(Self::from_fn(self.order(), exec, |n| {
            let mut acc = LaurentPoly::zero();
            for &i in outer.iter().take_while(|&&i| i <= n) {
                let b = &inner[n - i];
                if !b.is_zero() {
                    acc.add_product(&small[i], b);
                }
            }
            acc
        }))
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn scale_poly(&self, p: &LaurentPoly) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }

    pub fn scale(&self, s: impl Into<BigInt>) -> Self {
        let s = s.into();
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c.scale(&s)).collect(),
        }
    }

    /// Expansion of `1 / (1 - z^z_exp·q^q_exp)`.
    pub fn geometric(z_exp: i64, q_exp: usize, order: usize) -> Result<Self, SeriesError> {
        if q_exp == 0 {
            return Err(SeriesError::NonPositiveQExponent);
        }
        let mut s = Self::zero(order);
        for (m, n) in (0..=order).step_by(q_exp).enumerate() {
            let e = z_exp.checked_mul(m as i64).expect("z-exponent overflow");
            s.coeffs[n] = LaurentPoly::z_pow(e);
        }
        Ok(s)
    }

    /// The binomial `1 - z^z_exp·q^q_exp`.
    pub fn one_minus(z_exp: i64, q_exp: usize, order: usize) -> Result<Self, SeriesError> {
        if q_exp == 0 {
            return Err(SeriesError::NonPositiveQExponent);
        }
        let mut s = Self::one(order);
        if q_exp <= order {
            s.coeffs[q_exp] = LaurentPoly::monomial(-1, z_exp);
        }
        Ok(s)
    }

    /// Multiplicative inverse up to the truncation order. The constant term
    /// must be the constant polynomial `1` or `-1`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        let unit = match c0.as_monomial() {
            Some((0, c)) if c.abs().is_one() => c.clone(),
            _ => return Err(SeriesError::NonUnitConstant(c0.to_string())),
        };
        let nz: Vec<usize> = nonzero_indices(&self.coeffs)
            .into_iter()
            .filter(|&k| k > 0)
            .collect();
        let mut out = Self::zero(self.order());
        out.coeffs[0] = LaurentPoly::constant(unit.clone());
        // r_n = -u·Σ_{k=1}^{n} a_k r_{n-k}, with u = 1/a_0 = a_0
        let neg_unit = LaurentPoly::constant(-unit);
        for n in 1..=self.order() {
            let mut acc = LaurentPoly::zero();
            for &k in nz.iter().take_while(|&&k| k <= n) {
                acc.add_product(&self.coeffs[k], &out.coeffs[n - k]);
            }
            out.coeffs[n] = &acc * &neg_unit;
        }
        Ok(out)
    }

    /// The operator `z·d/dz`, applied coefficientwise.
    pub fn z_derivative(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(LaurentPoly::z_derivative).collect(),
        }
    }

    /// Sets `z = 1`; each coefficient becomes a constant polynomial.
    pub fn eval_z_at_one(&self) -> Self {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| LaurentPoly::constant(c.eval_at_one()))
                .collect(),
        }
    }

    /// `q ↦ q^m`.
    pub fn substitute_q_power(&self, m: usize) -> Result<Self, SeriesError> {
        self.substitute(MonomialSubstitution::q_monomial(0, m as u64))
    }

    /// Applies a monomial change of variables; see [`MonomialSubstitution`].
    pub fn substitute(&self, sub: MonomialSubstitution) -> Result<Self, SeriesError> {
        if sub.q_to_q == 0 {
            return Err(SeriesError::NonPositiveQExponent);
        }
        let order = self.order();
        let m = sub.q_to_q as usize;
        let mut out = Self::zero(order);
        for (n, c) in self.coeffs.iter().enumerate() {
            let Some(target) = n.checked_mul(m).filter(|&t| t <= order) else {
                break;
            };
            if c.is_zero() {
                continue;
            }
            let z_shift = sub.q_to_z.checked_mul(n as i64).expect("z-exponent overflow");
            out.coeffs[target] = c.substitute_z_power(sub.z_to_z).shift(z_shift);
        }
        Ok(out)
    }

    /// Drops every `z`-exponent above `cap` in every coefficient.
    ///
    /// For series whose coefficients have only nonnegative exponents this
    /// commutes with multiplication, which makes it a sound way to bound the
    /// cost of products.
    pub fn truncate_z(&self, cap: i64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            c.truncate_above(cap);
        }
        out
    }

    /// The smallest `q`-exponent where `self` and `other` differ, with both
    /// coefficients.
    pub fn first_difference(
        &self,
        other: &Self,
    ) -> Result<Option<(usize, LaurentPoly, LaurentPoly)>, SeriesError> {
        self.check_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(n, (a, b))| (n, a.clone(), b.clone())))
    }
}

fn nonzero_indices(coeffs: &[LaurentPoly]) -> Vec<usize> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .collect()
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let poly = if c.len() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            match n {
                0 => f.write_str(&poly)?,
                1 => write!(f, "{poly}*q")?,
                _ => write!(f, "{poly}*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}
