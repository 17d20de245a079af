//! Column-wise addition with full carry bookkeeping.
//!
//! For summands `a_1..a_r` with top digit position `t`, the carries are
//! `δ_0 = ⌊(Σ_i α_{i,0}) / B⌋` and `δ_j = ⌊(Σ_i α_{i,j} + δ_{j-1}) / B⌋` for
//! `1 <= j <= t`. The terminal carry `β = δ_t` is brought down whole and may
//! exceed `B - 1`. The correction term is `ĉ = β - s_B(β) + (B-1)·Σ_j δ_j`.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{digit_sum, digits_u64, to_digits, Base, DigitError, Natural};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionTrace {
    pub base: Base,
    pub summands: Vec<Natural>,
    /// `δ_0..δ_t`; empty when every summand is zero.
    pub column_carries: Vec<Natural>,
    pub terminal_carry: Natural,
    pub carry_sum: Natural,
    pub correction: Natural,
    pub total: Natural,
}

/// Carry data shared by the explicit and the repeated-summand algorithms.
struct Carries {
    column: Vec<Natural>,
    terminal: Natural,
    sum: Natural,
    correction: Natural,
}

impl Carries {
    fn from_columns(column: Vec<Natural>, base: Base) -> Self {
        let terminal = column.last().cloned().unwrap_or_default();
        let sum: Natural = column.iter().sum();
        let correction = &terminal - digit_sum(&terminal, base) + (base.get() - 1) * &sum;
        Carries {
            column,
            terminal,
            sum,
            correction,
        }
    }
}

/// Runs the addition algorithm on `summands`.
///
/// Column sums are accumulated in `u128`. This is exact: by induction every
/// carry is below `r`, so a column sum is below `r·B < 2^128`.
pub fn add_with_trace(summands: &[Natural], base: Base) -> Result<AdditionTrace, DigitError> {
    if summands.is_empty() {
        return Err(DigitError::EmptySummands);
    }
    let digit_vecs: Vec<_> = summands.iter().map(|a| to_digits(a, base)).collect();
    let width = digit_vecs.iter().map(|d| d.len()).max().unwrap_or(0);
    let b = u128::from(base.get());

    let mut carry: u128 = 0;
    let mut column = Vec::with_capacity(width);
    for j in 0..width {
        let col: u128 = digit_vecs.iter().map(|d| u128::from(d.digit(j))).sum::<u128>() + carry;
        carry = col / b;
        column.push(Natural::from(carry));
    }

    let carries = Carries::from_columns(column, base);
    Ok(AdditionTrace {
        base,
        summands: summands.to_vec(),
        column_carries: carries.column,
        terminal_carry: carries.terminal,
        carry_sum: carries.sum,
        correction: carries.correction,
        total: summands.iter().sum(),
    })
}

/// `c_B(a_1, ..., a_r)`.
pub fn carry_sum(summands: &[Natural], base: Base) -> Result<Natural, DigitError> {
    add_with_trace(summands, base).map(|t| t.carry_sum)
}

/// `ĉ_B(a_1, ..., a_r)`.
pub fn correction(summands: &[Natural], base: Base) -> Result<Natural, DigitError> {
    add_with_trace(summands, base).map(|t| t.correction)
}

/// Carries for `b` copies of `a`: column `j` sums to `b·α_j + δ_{j-1}`.
fn repeat_carries(a: &Natural, b: &Natural, base: Base) -> Carries {
    if a.is_zero() || b.is_zero() {
        return Carries::from_columns(Vec::new(), base);
    }
    let big_b = base.big();
    let digits = to_digits(a, base);
    let mut carry = Natural::zero();
    let mut column = Vec::with_capacity(digits.len());
    for &d in digits.digits() {
        let col = b * d + &carry;
        carry = col / &big_b;
        column.push(carry.clone());
    }
    Carries::from_columns(column, base)
}

/// `ĉ_B({a}^b)`, the correction for `a + a + ... + a` (`b` copies).
/// Zero when `b = 0`.
pub fn correction_repeat(a: &Natural, b: &Natural, base: Base) -> Natural {
    repeat_carries(a, b, base).correction
}

/// `c_B({a}^b)`, the carry sum for `b` copies of `a`.
pub fn carry_sum_repeat(a: &Natural, b: &Natural, base: Base) -> Natural {
    repeat_carries(a, b, base).sum
}

/// Fast closed form for `ĉ_B(n-1, 1) = (B-1)·ν_B(n)`, where `ν_B` is the
/// B-adic valuation.
pub fn correction_nm1(n: &Natural, base: Base) -> Result<Natural, DigitError> {
    if n.is_zero() {
        return Err(DigitError::NotPositive("n"));
    }
    if let Some(small) = n.to_u64() {
        return Ok(Natural::from(valuation_correction(small, base)));
    }
    let big_b = base.big();
    let mut rest = n.clone();
    let mut valuation = Natural::zero();
    loop {
        let (q, r) = rest.div_rem(&big_b);
        if !r.is_zero() {
            break;
        }
        valuation += 1u32;
        rest = q;
    }
    Ok(valuation * (base.get() - 1))
}

/// `ĉ_B(n-1, 1)` for machine integers. The result is at most `n - 1`
/// (`(B-1)·N <= B^N - 1`), so it cannot overflow.
pub fn correction_nm1_u64(n: u64, base: Base) -> Result<u64, DigitError> {
    if n == 0 {
        return Err(DigitError::NotPositive("n"));
    }
    Ok(valuation_correction(n, base))
}

#[inline]
pub(crate) fn valuation_correction(mut n: u64, base: Base) -> u64 {
    let b = base.get();
    let mut valuation = 0;
    while n > 0 && n.is_multiple_of(b) {
        n /= b;
        valuation += 1;
    }
    (b - 1) * valuation
}

/// `ĉ_B(a, b)` for two machine integers by direct carry counting. With two
/// summands every carry is 0 or 1 and the terminal carry contributes nothing.
pub fn correction_pair_u64(a: u64, b: u64, base: Base) -> u128 {
    let da = digits_u64(a, base);
    let db = digits_u64(b, base);
    let radix = u128::from(base.get());
    let mut carry = 0u128;
    let mut carries = 0u128;
    for j in 0..da.len().max(db.len()) {
        let col = u128::from(da.get(j).copied().unwrap_or(0))
            + u128::from(db.get(j).copied().unwrap_or(0))
            + carry;
        carry = col / radix;
        carries += carry;
    }
    (radix - 1) * carries
}

/// Evaluates both sides of the step-`k` digit-sum recursion
///
/// `s_B(n) = s_B(n - k⌊n/k⌋) + s_B(k)⌊n/k⌋ - Σ_{i=1}^{⌊n/k⌋} ĉ_B(n - ik, k)`
///
/// from independently computed pieces and reports whether they agree.
pub fn digit_sum_recursion_check(n: &Natural, k: &Natural, base: Base) -> Result<bool, DigitError> {
    if k.is_zero() || k > n {
        return Err(DigitError::StepOutOfRange {
            n: n.clone(),
            k: k.clone(),
        });
    }
    let steps = n / k;
    let remainder = n - k * &steps;
    let positive = digit_sum(&remainder, base) + digit_sum(k, base) * &steps;

    let mut corrections = Natural::zero();
    let mut i = Natural::one();
    while i <= steps {
        let rest = n - &i * k;
        corrections += correction(&[rest, k.clone()], base)?;
        i += 1u32;
    }
    Ok(digit_sum(n, base) + corrections == positive)
}
