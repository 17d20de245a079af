//! Equation lists for each exact catalog entry. The first equation of each
//! list is the headline identity; the rest replay the steps of its proof.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::digit_core::{
    add_with_trace, correction_nm1_u64, correction_pair_u64, correction_repeat,
    digit_sum_u64, digit_sums_upto, divisor_digit_sum, divisor_digit_sums_upto, Base, Natural,
};
use crate::exec::Exec;
use crate::series::{LaurentPoly, MonomialSubstitution, TruncatedSeries};

use super::build::{
    bpow, bpow_or_past, cal_l, cal_l_double_sum, cal_l_rescaled, chat_ones_product,
    constant_series, digit_weighted_product, digit_weighted_sum, exponent_series,
    exponents_upto, inverse_power_one_minus_q, lambert_lb, ratio_product, two_variable_product,
    two_variable_product_from, two_variable_sum, z_base, Ratio,
};
use super::{Equation, GenfunError, IdentityId, IdentitySpec};

type Eqs = Result<Vec<Equation>, GenfunError>;

/// Builds every equation checked for `spec`.
pub fn equations(spec: &IdentitySpec, exec: Exec) -> Eqs {
    if spec.order == 0 {
        return Err(GenfunError::OrderTooSmall);
    }
    let (base, order) = (spec.base, spec.order);
    match spec.id {
        IdentityId::TwoVariable => two_variable(base, order, exec),
        IdentityId::ShiftJ => shift(base, spec.j, order, exec),
        IdentityId::ChatOnesTwoVariable => chat_ones_two_variable(base, order, exec),
        IdentityId::Squared => squared(base, order, spec.z_cap, exec),
        IdentityId::Hypergeometric => hypergeometric(base, order, exec),
        IdentityId::SbGeneratingFunction => sb_generating_function(base, order, exec),
        IdentityId::ShiftCor => shiftcor(base, order, exec),
        IdentityId::ChatOnesGf => chat_ones_gf(base, order, exec),
        IdentityId::ChatRepeat => chat_repeat(spec.a, base, order, exec),
        IdentityId::LambertTransform => lambert_transform(base, order, exec),
        other => Err(GenfunError::NotExact(other.as_str())),
    }
}

fn nat_exp(n: &Natural) -> i64 {
    n.to_i64().expect("z-exponent overflow")
}

/// `q^k / (1 - q)`.
fn q_over_one_minus_q(k: usize, order: usize) -> Result<TruncatedSeries, GenfunError> {
    Ok(TruncatedSeries::monomial(order, 1, 0, k).try_mul(&TruncatedSeries::geometric(0, 1, order)?)?)
}

fn digit_sum_series(base: Base, order: usize) -> TruncatedSeries {
    let s = digit_sums_upto(order, base);
    TruncatedSeries::from_coeffs(order, s.into_iter().map(|v| LaurentPoly::constant(BigInt::from(v))))
}

/// `Σ_{n>=1} ĉ_B(n-1, 1) q^n` from the closed form.
fn nm1_series(base: Base, order: usize, exec: Exec) -> TruncatedSeries {
    constant_series(order, exec, |n| match n {
        0 => BigInt::from(0),
        n => BigInt::from(correction_nm1_u64(n, base).expect("n >= 1")),
    })
}

fn two_variable(base: Base, order: usize, exec: Exec) -> Eqs {
    let sum = two_variable_sum(base, order, exec);
    let product = two_variable_product(base, order, exec)?;
    let zi = |d: u64| LaurentPoly::z_pow(d as i64);
    let ones = TruncatedSeries::geometric(0, 1, order)?;
    Ok(vec![
        Equation::new("digit-sum series = product", sum.clone(), product.clone()),
        Equation::new(
            "digit-weighted sum = digit-weighted product",
            digit_weighted_sum(zi, base, order, exec)?,
            digit_weighted_product(zi, base, order, exec)?,
        ),
        Equation::new("series at z=1 = 1/(1-q)", sum.eval_z_at_one(), ones.clone()),
        Equation::new("product at z=1 = 1/(1-q)", product.eval_z_at_one(), ones),
    ])
}

fn shift(base: Base, j: Option<u32>, order: usize, exec: Exec) -> Eqs {
    let js = match j {
        Some(j) => vec![j],
        None => exponents_upto(base, order),
    };
    let zb = z_base(base)?;
    let sum = two_variable_sum(base, order, exec);
    let mut eqs = Vec::with_capacity(3 * js.len());
    for j in js {
        let step = bpow_or_past(base, j, order);
        // Σ_n q^{n B^j} z^{s_B(n)}; s_B(n B^j) = s_B(n)
        let mut direct = TruncatedSeries::zero(order);
        for m in (0..=order).step_by(step) {
            direct.set_coeff(m, LaurentPoly::z_pow(digit_sum_u64((m / step) as u64, base) as i64));
        }
        let tail = two_variable_product_from(base, j, order, exec)?;
        let inverse_prefix = (0..j).rev().map(|i| Ratio {
            num: (1, bpow_or_past(base, i, order)),
            den: (zb, bpow_or_past(base, i + 1, order)),
        });
        let corrected = ratio_product(order, inverse_prefix, exec)?.try_mul_with(&sum, exec)?;
        let substituted = sum.substitute_q_power(step)?;
        eqs.push(Equation::new(format!("j={j}: shifted series = tail product"), direct.clone(), tail.clone()));
        eqs.push(Equation::new(format!("j={j}: tail product = prefix-cancelled series"), tail, corrected));
        eqs.push(Equation::new(format!("j={j}: shifted series = series at q^(B^j)"), direct, substituted));
    }
    Ok(eqs)
}

fn chat_ones_two_variable(base: Base, order: usize, exec: Exec) -> Eqs {
    let one = Natural::from(1u32);
    let lhs = exponent_series(order, exec, |n| nat_exp(&correction_repeat(&one, &Natural::from(n), base)));
    let via_digit_sum = exponent_series(order, exec, |n| n as i64 - digit_sum_u64(n, base) as i64);
    let invert_z = MonomialSubstitution::z_power(-1);
    let q_to_zq = MonomialSubstitution::q_monomial(1, 1);
    let substituted_sum = two_variable_sum(base, order, exec).substitute(invert_z)?.substitute(q_to_zq)?;
    let substituted_product = two_variable_product(base, order, exec)?
        .substitute(invert_z)?
        .substitute(q_to_zq)?;
    let product = chat_ones_product(base, order, exec)?;
    Ok(vec![
        Equation::new("correction series = product", lhs.clone(), product.clone()),
        Equation::new("correction of n ones = n - s_B(n)", lhs.clone(), via_digit_sum),
        Equation::new("digit-sum series at (1/z, zq) = correction series", substituted_sum, lhs),
        Equation::new("product at (1/z, zq) = correction product", substituted_product, product),
    ])
}

fn squared(base: Base, order: usize, z_cap: Option<i64>, exec: Exec) -> Eqs {
    let cap = |s: TruncatedSeries| match z_cap {
        Some(c) => s.truncate_z(c),
        None => s,
    };
    let lhs = TruncatedSeries::from_fn(order, exec, |n| {
        let n = n as u64;
        let s = digit_sum_u64(n, base) as i64;
        let mut c = LaurentPoly::zero();
        for k in 0..=n {
            let e = s + correction_pair_u64(n - k, k, base) as i64;
            if z_cap.is_none_or(|cap| e <= cap) {
                c.add_term(e, BigInt::from(1));
            }
        }
        c
    });
    let product = cap(two_variable_product(base, order, exec)?);
    let sum = cap(two_variable_sum(base, order, exec));
    Ok(vec![
        Equation::new("pair-correction series = product squared", lhs.clone(), cap(product.try_mul_with(&product, exec)?)),
        Equation::new("digit-sum series squared = pair-correction series", cap(sum.try_mul_with(&sum, exec)?), lhs),
    ])
}

fn hypergeometric(base: Base, order: usize, exec: Exec) -> Eqs {
    let zb = z_base(base)?;
    let product = two_variable_product(base, order, exec)?;
    let head = TruncatedSeries::geometric(1, 1, order)?;
    let prefactor = LaurentPoly::from_terms([(1, 1), (zb, -1)]);
    let outer_geometric = TruncatedSeries::geometric(zb, 1, order)?;

    // n-th summand q^{B^n} Π_{j<n}(1 - z^B q^{B^j}) / Π_{j<=n}(1 - z q^{B^j}),
    // and the matching partial product Π_{1<=j<=n}(1 - z^B q^{B^j}) / Π_{j<=n}(1 - z q^{B^j}).
    let mut stated = TruncatedSeries::zero(order);
    let mut telescoped = TruncatedSeries::zero(order);
    let mut eqs = Vec::new();
    let mut partial_sum = head.clone();
    for n in exponents_upto(base, order).into_iter().skip(1) {
        let qbn = bpow(base, n, order).expect("B^n <= N");
        let factors = (0..=n).rev().map(|j| Ratio {
            num: (zb, if j < n { bpow_or_past(base, j, order) } else { order + 1 }),
            den: (1, bpow_or_past(base, j, order)),
        });
        let term = TruncatedSeries::monomial(order, 1, 0, qbn).try_mul_with(&ratio_product(order, factors, exec)?, exec)?;
        stated = stated.try_add(&term)?;

        let shifted = (1..=n).rev().map(|j| Ratio {
            num: (zb, if j < n { bpow_or_past(base, j, order) } else { order + 1 }),
            den: (1, order + 1),
        });
        let tele_term = TruncatedSeries::monomial(order, 1, 0, qbn)
            .try_mul_with(&ratio_product(order, shifted, exec)?, exec)?
            .try_mul_with(&two_variable_partial_den(n, base, order, exec)?, exec)?;
        telescoped = telescoped.try_add(&tele_term)?;
        partial_sum = partial_sum.try_add(&tele_term.scale_poly(&prefactor))?;
        eqs.push(Equation::new(
            format!("partial sum through n={n} = partial product"),
            partial_sum.clone(),
            partial_product(n, base, order, exec)?,
        ));
    }
    let rhs = head.try_add(&stated.try_mul_with(&outer_geometric, exec)?.scale_poly(&prefactor))?;
    let rhs_telescoped = head.try_add(&telescoped.scale_poly(&prefactor))?;
    let mut out = vec![
        Equation::new("product = hypergeometric series", product.clone(), rhs),
        Equation::new("product = telescoped series", product, rhs_telescoped),
    ];
    out.append(&mut eqs);
    Ok(out)
}

/// `1 / Π_{j<=n}(1 - z q^{B^j})`.
fn two_variable_partial_den(n: u32, base: Base, order: usize, exec: Exec) -> Result<TruncatedSeries, GenfunError> {
    let factors = (0..=n).rev().map(|j| Ratio {
        num: (0, order + 1),
        den: (1, bpow_or_past(base, j, order)),
    });
    Ok(ratio_product(order, factors, exec)?)
}

/// `Π_{j<n} (1 - z^B q^{B^{j+1}}) / (1 - z q^{B^j})` times `1/(1 - z q^{B^n})`.
fn partial_product(n: u32, base: Base, order: usize, exec: Exec) -> Result<TruncatedSeries, GenfunError> {
    let zb = z_base(base)?;
    let factors = (0..=n).rev().map(|j| Ratio {
        num: (zb, if j < n { bpow_or_past(base, j + 1, order) } else { order + 1 }),
        den: (1, bpow_or_past(base, j, order)),
    });
    Ok(ratio_product(order, factors, exec)?)
}

fn sb_generating_function(base: Base, order: usize, exec: Exec) -> Eqs {
    let b = base.get();
    let zb = z_base(base)?;
    let lhs = digit_sum_series(base, order);
    let lb = lambert_lb(base, order);
    let q_over_sq = TruncatedSeries::monomial(order, 1, 0, 1).try_mul(&inverse_power_one_minus_q(2, order)?)?;
    let rhs = q_over_sq.try_sub(
        &TruncatedSeries::geometric(0, 1, order)?
            .try_mul_with(&lb, exec)?
            .scale(b - 1),
    )?;

    let sum = two_variable_sum(base, order, exec);
    let product = two_variable_product(base, order, exec)?;
    let l = cal_l(base, order, exec)?;
    let bracket = l
        .scale_poly(&LaurentPoly::z_pow(1))
        .try_sub(&cal_l_rescaled(base, order, exec)?.scale_poly(&LaurentPoly::monomial(b, zb)))?;
    let derivative = sum.z_derivative();

    let l_at_one = l.eval_z_at_one();
    let q_geom = q_over_one_minus_q(1, order)?;
    let combined = l_at_one.try_sub(&l_at_one.substitute_q_power(b as usize)?.scale(b))?;
    let combined_rhs = q_geom.try_sub(&lb.scale(b - 1))?;

    let valuation_count = constant_series(order, exec, |n| {
        let mut n = n;
        let mut v = 0u64;
        while n > 0 && n % b == 0 {
            n /= b;
            v += 1;
        }
        BigInt::from(v)
    });

    Ok(vec![
        Equation::new("digit-sum series = q/(1-q)^2 - (B-1)/(1-q) L_B", lhs.clone(), rhs),
        Equation::new(
            "z d/dz of digit-sum series = product times logarithmic derivative",
            derivative.clone(),
            product.try_mul_with(&bracket, exec)?,
        ),
        Equation::new("logarithmic derivative at z=1 = digit-sum series", derivative.eval_z_at_one(), lhs),
        Equation::new("calL(1;q) - B calL(1;q^B) = q/(1-q) - (B-1) L_B", combined, combined_rhs),
        Equation::new("calL geometric expansion = double sum", l, cal_l_double_sum(base, order)),
        Equation::new("L_B = calL(1;q) - q/(1-q)", lb.clone(), l_at_one.try_sub(&q_geom)?),
        Equation::new("L_B coefficients = B-adic valuation", lb, valuation_count),
    ])
}

fn shiftcor(base: Base, order: usize, exec: Exec) -> Eqs {
    let traced = constant_series(order, exec, |n| match n {
        0 => BigInt::from(0),
        n => {
            let pair = [Natural::from(n - 1), Natural::from(1u32)];
            BigInt::from(add_with_trace(&pair, base).expect("two summands").correction)
        }
    });
    let rhs = lambert_lb(base, order).scale(base.get() - 1);
    let fast = nm1_series(base, order, exec);
    let s = digit_sum_series(base, order);
    let lhs_diff = TruncatedSeries::one_minus(0, 1, order)?.try_mul_with(&s, exec)?;
    let rhs_diff = q_over_one_minus_q(1, order)?.try_sub(&fast)?;
    Ok(vec![
        Equation::new("(n-1,1) correction series = (B-1) L_B", traced.clone(), rhs),
        Equation::new("valuation closed form = traced corrections", fast, traced),
        Equation::new("(1-q) digit-sum series = q/(1-q) - correction series", lhs_diff, rhs_diff),
    ])
}

fn chat_ones_gf(base: Base, order: usize, exec: Exec) -> Eqs {
    let one = Natural::from(1u32);
    let lhs = constant_series(order, exec, |n| BigInt::from(correction_repeat(&one, &Natural::from(n), base)));
    let lb = lambert_lb(base, order);
    let rhs = TruncatedSeries::geometric(0, 1, order)?
        .try_mul_with(&lb, exec)?
        .scale(base.get() - 1);
    let from_product = chat_ones_product(base, order, exec)?.z_derivative().eval_z_at_one();
    let diff = TruncatedSeries::one_minus(0, 1, order)?.try_mul_with(&lhs, exec)?;
    Ok(vec![
        Equation::new("correction of n ones series = (B-1)/(1-q) L_B", lhs.clone(), rhs),
        Equation::new("z-derivative of correction product at z=1", from_product, lhs),
        Equation::new("(1-q) correction series = (n-1,1) corrections", diff, nm1_series(base, order, exec)),
    ])
}

fn chat_repeat(a: u64, base: Base, order: usize, exec: Exec) -> Eqs {
    let a_nat = Natural::from(a);
    let lhs = constant_series(order, exec, |n| match n {
        0 => BigInt::from(0),
        n => BigInt::from(correction_repeat(&a_nat, &Natural::from(n), base)),
    });
    let step = constant_series(order, exec, |n| {
        let pair = [Natural::from(a) * n, a_nat.clone()];
        BigInt::from(add_with_trace(&pair, base).expect("two summands").correction)
    });
    let rhs = q_over_one_minus_q(1, order)?.try_mul_with(&step, exec)?;
    let explicit = constant_series(order, exec, |n| match n {
        0 => BigInt::from(0),
        n => {
            let copies = vec![a_nat.clone(); n as usize];
            BigInt::from(add_with_trace(&copies, base).expect("n >= 1").correction)
        }
    });
    let sa = digit_sum_u64(a, base) as i128;
    let by_digit_sums = constant_series(order, exec, |n| {
        let product = crate::digit_core::digit_sum(&(Natural::from(a) * n), base);
        BigInt::from(sa * n as i128) - BigInt::from(product)
    });
    Ok(vec![
        Equation::new("repeat correction series = q/(1-q) step corrections", lhs.clone(), rhs),
        Equation::new("repeated-column algorithm = explicit copies", lhs.clone(), explicit),
        Equation::new("repeat correction = n s_B(a) - s_B(na)", lhs, by_digit_sums),
    ])
}

fn lambert_transform(base: Base, order: usize, exec: Exec) -> Eqs {
    let s = digit_sums_upto(order, base);
    // Σ_n s_B(n) q^n / (1 - q^n) = Σ_n s_B(n) Σ_{m>=1} q^{nm}
    let mut lambert = vec![BigInt::from(0); order + 1];
    for n in 1..=order {
        for m in (n..=order).step_by(n) {
            lambert[m] += s[n];
        }
    }
    let lambert = TruncatedSeries::from_coeffs(order, lambert.into_iter().map(LaurentPoly::constant));
    let trial = constant_series(order, exec, |n| match n {
        0 => BigInt::from(0),
        n => BigInt::from(divisor_digit_sum(n, base).expect("n >= 1")),
    });
    let sieve = TruncatedSeries::from_coeffs(
        order,
        divisor_digit_sums_upto(order, base).into_iter().map(|v| LaurentPoly::constant(BigInt::from(v))),
    );
    Ok(vec![
        Equation::new("Lambert transform of digit sums = divisor digit sums", lambert, trial.clone()),
        Equation::new("divisor sieve = trial division", sieve, trial),
    ])
}
