//! Series constructors shared by the identity checks.

use num_bigint::BigInt;

use crate::digit_core::{digit_sum_u64, digits_u64, Base};
use crate::exec::Exec;
use crate::series::{LaurentPoly, MonomialSubstitution, SeriesError, TruncatedSeries};

use super::GenfunError;

/// `B` as a `z`-exponent.
pub(crate) fn z_base(base: Base) -> Result<i64, GenfunError> {
    i64::try_from(base.get()).map_err(|_| GenfunError::BaseTooLarge(base.get()))
}

/// `B^k` when it does not exceed `order`.
pub(crate) fn bpow(base: Base, k: u32, order: usize) -> Option<usize> {
    base.get()
        .checked_pow(k)
        .and_then(|p| usize::try_from(p).ok())
        .filter(|&p| p <= order)
}

/// All `k` with `B^k <= order`, ascending.
pub(crate) fn exponents_upto(base: Base, order: usize) -> Vec<u32> {
    (0..).take_while(|&k| bpow(base, k, order).is_some()).collect()
}

/// `q^{B^k}` is zero at this truncation, so treat it as `order + 1`.
pub(crate) fn bpow_or_past(base: Base, k: u32, order: usize) -> usize {
    bpow(base, k, order).unwrap_or(order + 1)
}

/// `Σ_{n<=N} q^n z^{e(n)}`.
pub fn exponent_series(
    order: usize,
    exec: Exec,
    exponent: impl Fn(u64) -> i64 + Sync + Send,
) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, exec, |n| LaurentPoly::z_pow(exponent(n as u64)))
}

/// `Σ_{n<=N} c(n) q^n` with constant coefficients.
pub fn constant_series(
    order: usize,
    exec: Exec,
    coeff: impl Fn(u64) -> BigInt + Sync + Send,
) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, exec, |n| LaurentPoly::constant(coeff(n as u64)))
}

/// `Σ q^n z^{s_B(n)}`.
pub fn two_variable_sum(base: Base, order: usize, exec: Exec) -> TruncatedSeries {
    exponent_series(order, exec, |n| digit_sum_u64(n, base) as i64)
}

/// One factor `(1 - z^a q^b) / (1 - z^c q^d)`; the denominator is expanded
/// with [`TruncatedSeries::geometric`].
#[derive(Clone, Copy, Debug)]
pub(crate) struct Ratio {
    pub num: (i64, usize),
    pub den: (i64, usize),
}

/// Multiplies the ratios in the given order, numerator before denominator.
/// Feeding factors from the sparsest (largest `q`-step) down keeps the
/// intermediate products small.
pub(crate) fn ratio_product(
    order: usize,
    factors: impl IntoIterator<Item = Ratio>,
    exec: Exec,
) -> Result<TruncatedSeries, SeriesError> {
    let mut acc = TruncatedSeries::one(order);
    for r in factors {
        if r.num.1 <= order {
            acc = acc.try_mul_with(&TruncatedSeries::one_minus(r.num.0, r.num.1, order)?, exec)?;
        }
        if r.den.1 <= order {
            acc = acc.try_mul_with(&TruncatedSeries::geometric(r.den.0, r.den.1, order)?, exec)?;
        }
    }
    Ok(acc)
}

/// `Π_{i>=j} (1 - z^B q^{B^{i+1}}) / (1 - z q^{B^i})`.
pub fn two_variable_product_from(
    base: Base,
    j: u32,
    order: usize,
    exec: Exec,
) -> Result<TruncatedSeries, GenfunError> {
    let zb = z_base(base)?;
    let factors = exponents_upto(base, order)
        .into_iter()
        .filter(|&i| i >= j)
        .rev()
        .map(|i| Ratio {
            num: (zb, bpow_or_past(base, i + 1, order)),
            den: (1, bpow_or_past(base, i, order)),
        });
    Ok(ratio_product(order, factors, exec)?)
}

/// `Π_{i>=0} (1 - z^B q^{B^{i+1}}) / (1 - z q^{B^i})`.
pub fn two_variable_product(
    base: Base,
    order: usize,
    exec: Exec,
) -> Result<TruncatedSeries, GenfunError> {
    two_variable_product_from(base, 0, order, exec)
}

/// `Π_{i>=0} (1 - z^{B(B^i-1)} q^{B^{i+1}}) / (1 - z^{B^i-1} q^{B^i})`.
pub fn chat_ones_product(
    base: Base,
    order: usize,
    exec: Exec,
) -> Result<TruncatedSeries, GenfunError> {
    let zb = z_base(base)?;
    let factors: Vec<Ratio> = exponents_upto(base, order)
        .into_iter()
        .rev()
        .map(|i| {
            let bi = bpow_or_past(base, i, order) as i64;
            Ratio {
                num: (zb * (bi - 1), bpow_or_past(base, i + 1, order)),
                den: (bi - 1, bi as usize),
            }
        })
        .collect();
    Ok(ratio_product(order, factors, exec)?)
}

/// `Σ_{n<=N} q^n Π_{digits ν of n} f(ν)`, where `f(0) = 1`.
pub fn digit_weighted_sum(
    f: impl Fn(u64) -> LaurentPoly + Sync + Send,
    base: Base,
    order: usize,
    exec: Exec,
) -> Result<TruncatedSeries, GenfunError> {
    check_unit_weight(&f)?;
    Ok(TruncatedSeries::from_fn(order, exec, |n| {
        digits_u64(n as u64, base)
            .into_iter()
            .fold(LaurentPoly::one(), |acc, d| &acc * &f(d))
    }))
}

/// `Π_{B^i<=N} (1 + f(1) q^{B^i} + ... + f(B-1) q^{(B-1)B^i})`, truncated.
pub fn digit_weighted_product(
    f: impl Fn(u64) -> LaurentPoly,
    base: Base,
    order: usize,
    exec: Exec,
) -> Result<TruncatedSeries, GenfunError> {
    check_unit_weight(&f)?;
    let mut acc = TruncatedSeries::one(order);
    for i in exponents_upto(base, order).into_iter().rev() {
        let step = bpow_or_past(base, i, order);
        let mut factor = TruncatedSeries::one(order);
        for (m, q_exp) in (step..=order).step_by(step).enumerate() {
            let digit = m as u64 + 1;
            if digit >= base.get() {
                break;
            }
            factor.set_coeff(q_exp, f(digit));
        }
        acc = acc.try_mul_with(&factor, exec)?;
    }
    Ok(acc)
}

fn check_unit_weight(f: impl Fn(u64) -> LaurentPoly) -> Result<(), GenfunError> {
    let f0 = f(0);
    if !f0.is_one() {
        return Err(GenfunError::WeightAtZero(f0.to_string()));
    }
    Ok(())
}

/// `L_B(q) = Σ_{i>=1} q^{B^i} / (1 - q^{B^i})`.
pub fn lambert_lb(base: Base, order: usize) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(order);
    for i in exponents_upto(base, order).into_iter().skip(1) {
        let step = bpow_or_past(base, i, order);
        // q^{B^i}/(1-q^{B^i}) = Σ_{m>=1} q^{m B^i}
        for n in (step..=order).step_by(step) {
            let c = acc.coeff(n) + &LaurentPoly::one();
            acc.set_coeff(n, c);
        }
    }
    acc
}

/// `𝓛_B(z;q) = Σ_{i>=0} q^{B^i} / (1 - z q^{B^i})`, built from the
/// geometric expansion of each summand.
pub fn cal_l(base: Base, order: usize, exec: Exec) -> Result<TruncatedSeries, GenfunError> {
    let mut acc = TruncatedSeries::zero(order);
    for i in exponents_upto(base, order) {
        let step = bpow_or_past(base, i, order);
        let term = TruncatedSeries::monomial(order, 1, 0, step)
            .try_mul_with(&TruncatedSeries::geometric(1, step, order)?, exec)?;
        acc = acc.try_add(&term)?;
    }
    Ok(acc)
}

/// The same series as [`cal_l`] from the rearranged double sum
/// `Σ_{n>=0} z^n Σ_{i>=0} q^{(n+1)B^i}`.
pub fn cal_l_double_sum(base: Base, order: usize) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(order);
    for i in exponents_upto(base, order) {
        let step = bpow_or_past(base, i, order);
        for n in 0.. {
            let q_exp = (n + 1) * step;
            if q_exp > order {
                break;
            }
            let c = acc.coeff(q_exp) + &LaurentPoly::z_pow(n as i64);
            acc.set_coeff(q_exp, c);
        }
    }
    acc
}

/// `𝓛_B(z^B; q^B)`.
pub fn cal_l_rescaled(base: Base, order: usize, exec: Exec) -> Result<TruncatedSeries, GenfunError> {
    let zb = z_base(base)?;
    let sub = MonomialSubstitution {
        z_to_z: zb,
        q_to_z: 0,
        q_to_q: base.get(),
    };
    Ok(cal_l(base, order, exec)?.substitute(sub)?)
}

/// `1 / (1 - q)^k` as a constant series.
pub(crate) fn inverse_power_one_minus_q(k: u32, order: usize) -> Result<TruncatedSeries, SeriesError> {
    let base = TruncatedSeries::one_minus(0, 1, order)?;
    let mut denom = TruncatedSeries::one(order);
    for _ in 0..k {
        denom = denom.try_mul(&base)?;
    }
    denom.reciprocal()
}
