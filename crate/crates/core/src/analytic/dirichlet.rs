//! Dirichlet partial sums with tail bounds, and the checks built on them.
//!
//! Every reported bound is `tail + roundoff + reference`, where `tail`
//! bounds the omitted terms, `roundoff` bounds floating point error in the
//! partial sum, and `reference` bounds the error of the zeta values on the
//! other side of the identity.

use std::ops::Range;

use serde::Serialize;

use crate::digit_core::{correction_nm1_u64, digit_sums_upto, divisor_digit_sums_upto, Base};
use crate::exec::{Exec, REDUCE_BLOCK};

use super::zeta::power;
use super::{finite, hurwitz_zeta, riemann_zeta, serialize_complex, AnalyticError, BoundKind, ComplexVal, NumericCheck, EPS};

/// Accuracy the zeta kernels are held to on `Re(s) >= 1.5`.
const ZETA_ACCURACY: f64 = 1e-12;

/// `Σ_{n<=N} a(n) n^{-s}` with enough bookkeeping to bound its rounding error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PartialSum {
    #[serde(serialize_with = "serialize_complex")]
    pub value: ComplexVal,
    /// `Σ_{n<=N} |a(n)| n^{-Re s}`.
    pub abs_sum: f64,
    pub terms: u64,
    /// Bound on `|value - exact partial sum|`.
    pub roundoff: f64,
    /// Bound on the omitted terms, as supplied by the caller.
    pub tail_bound: f64,
}

#[derive(Clone, Copy)]
struct Acc {
    value: ComplexVal,
    abs: f64,
}

/// Evaluates `Σ_{n=1}^{N} coeff(n)/n^s`. `tail(N, s)` must bound the
/// omitted terms `|Σ_{n>N} coeff(n)/n^s|`.
///
/// Blocks of [`REDUCE_BLOCK`] terms are summed independently and combined
/// in order, so parallel and sequential runs give bit-identical values.
pub fn dirichlet_partial(
    coeff: impl Fn(u64) -> f64 + Sync + Send,
    s: ComplexVal,
    n: u64,
    tail: impl Fn(u64, ComplexVal) -> f64,
    exec: Exec,
) -> Result<PartialSum, AnalyticError> {
    finite(s, "s")?;
    let block = |r: Range<u64>| {
        let mut acc = Acc {
            value: ComplexVal::new(0.0, 0.0),
            abs: 0.0,
        };
        // largest index first: terms shrink with n
        for k in r.rev() {
            let a = coeff(k);
            if a != 0.0 {
                let t = power(k as f64, -s) * a;
                acc.value += t;
                acc.abs += a.abs() * (k as f64).powf(-s.re);
            }
        }
        acc
    };
    let total = exec.reduce_blocks(
        1..n.saturating_add(1),
        block,
        |x, y| Acc {
            value: x.value + y.value,
            abs: x.abs + y.abs,
        },
        Acc {
            value: ComplexVal::new(0.0, 0.0),
            abs: 0.0,
        },
    );
    // recursive summation inside a block and across blocks, plus the
    // relative error of each term: exp/sin/cos of arguments up to |s| ln N
    let depth = (REDUCE_BLOCK + n / REDUCE_BLOCK + 2) as f64;
    let per_term = s.norm() * (n.max(2) as f64).ln() + 8.0;
    let roundoff = 2.0 * EPS * (depth + per_term) * total.abs;
    let tail_bound = tail(n, s);
    if !tail_bound.is_finite() {
        return Err(AnalyticError::NonFinite("tail bound"));
    }
    Ok(PartialSum {
        value: finite(total.value, "partial sum")?,
        abs_sum: total.abs,
        terms: n,
        roundoff,
        tail_bound,
    })
}

fn require_half_plane(s: ComplexVal, min: f64) -> Result<(), AnalyticError> {
    finite(s, "s")?;
    if s.re > min {
        Ok(())
    } else {
        Err(AnalyticError::RealPartTooSmall(s.re, min))
    }
}

fn require_terms(n: u64) -> Result<(), AnalyticError> {
    if n < 3 {
        return Err(AnalyticError::Domain(format!("need at least 3 terms, got {n}")));
    }
    Ok(())
}

/// `Σ_{n>N} ln(n) n^{-σ} <= N^{1-σ} (ln N/(σ-1) + 1/(σ-1)^2)`; the summand
/// decreases for `n >= 3` when `σ > 1`.
fn log_tail(n: u64, sigma: f64) -> f64 {
    let nf = n as f64;
    let d = sigma - 1.0;
    nf.powf(-d) * (nf.ln() / d + 1.0 / (d * d))
}

/// `Σ_{n>N} n^{1-σ} <= N^{2-σ}/(σ-2)` for `σ > 2`.
fn linear_tail(n: u64, sigma: f64) -> f64 {
    let d = sigma - 2.0;
    (n as f64).powf(-d) / d
}

/// `Σ_{n>=1} ĉ_B(n-1,1) n^{-s} = (B-1)/(B^s-1) ζ(s)` for `Re(s) > 2`.
///
/// Tail: `ĉ_B(n-1,1) = (B-1)ν_B(n) <= (B-1) ln n / ln B`.
pub fn verify_dirichlet_chat(base: Base, s: ComplexVal, n: u64, exec: Exec) -> Result<NumericCheck, AnalyticError> {
    require_half_plane(s, 2.0)?;
    require_terms(n)?;
    let b = base.get() as f64;
    let weight = (b - 1.0) / b.ln();
    let partial = dirichlet_partial(
        |k| correction_nm1_u64(k, base).expect("k >= 1") as f64,
        s,
        n,
        |n, s| weight * log_tail(n, s.re),
        exec,
    )?;
    let factor = (b - 1.0) / (power(b, s) - 1.0);
    let rhs = finite(factor * riemann_zeta(s)?, "rhs")?;
    let reference = factor.norm() * ZETA_ACCURACY;
    Ok(NumericCheck::new(
        partial.value,
        rhs,
        partial.tail_bound + partial.roundoff + reference,
        BoundKind::Rigorous,
    ))
}

/// `Σ_{n>=1} c_B({1}^n) n^{-s} = ζ(s-1)/B - B^{-(s+1)} Σ_{k=1}^{B-1} k ζ(s, k/B)`
/// for `Re(s) > 2`, with `c_B({1}^n) = ⌊n/B⌋ <= n/B`.
pub fn verify_dirichlet_carry(base: Base, s: ComplexVal, n: u64, exec: Exec) -> Result<NumericCheck, AnalyticError> {
    require_half_plane(s, 2.0)?;
    require_terms(n)?;
    let bu = base.get();
    let b = bu as f64;
    let partial = dirichlet_partial(
        |k| (k / bu) as f64,
        s,
        n,
        |n, s| linear_tail(n, s.re) / b,
        exec,
    )?;
    let scale = power(b, -(s + 1.0)); // B^{-(s+1)}
    let mut hurwitz = ComplexVal::new(0.0, 0.0);
    let mut weights = 0.0;
    for k in 1..bu {
        hurwitz += hurwitz_zeta(s, k as f64 / b)? * k as f64;
        weights += k as f64;
    }
    let rhs = finite(riemann_zeta(s - 1.0)? / b - scale * hurwitz, "rhs")?;
    let reference = ZETA_ACCURACY * (1.0 / b + scale.norm() * weights);
    Ok(NumericCheck::new(
        partial.value,
        rhs,
        partial.tail_bound + partial.roundoff + reference,
        BoundKind::Rigorous,
    ))
}

/// Matched partial sums of `ζ(s) Σ s_B(n) n^{-s} = Σ S_B(n) n^{-s}`.
///
/// The difference of the truncations is the part of the Dirichlet product
/// with `d <= N < dm`, bounded by `Σ_{n>N} S_B(n) n^{-σ}`. With
/// `S_B(n) <= σ(n) <= n(1 + ln n)` this is at most
/// `N^{2-σ}((1 + ln N)/(σ-2) + 1/(σ-2)^2)`.
pub fn verify_dirichlet_convolution(base: Base, s: ComplexVal, n: u64, exec: Exec) -> Result<NumericCheck, AnalyticError> {
    require_half_plane(s, 2.0)?;
    require_terms(n)?;
    let len = usize::try_from(n).map_err(|_| AnalyticError::Domain("too many terms".into()))?;
    let digit_sums = digit_sums_upto(len, base);
    let divisor_sums = divisor_digit_sums_upto(len, base);
    let lhs_sum = dirichlet_partial(|k| digit_sums[k as usize] as f64, s, n, |_, _| 0.0, exec)?;
    let rhs_sum = dirichlet_partial(|k| divisor_sums[k as usize] as f64, s, n, |_, _| 0.0, exec)?;
    let zeta = riemann_zeta(s)?;
    let lhs = finite(zeta * lhs_sum.value, "lhs")?;
    let d = s.re - 2.0;
    let nf = n as f64;
    let truncation = nf.powf(-d) * ((1.0 + nf.ln()) / d + 1.0 / (d * d));
    let bound = truncation
        + zeta.norm() * lhs_sum.roundoff
        + ZETA_ACCURACY * lhs_sum.abs_sum
        + rhs_sum.roundoff
        + 4.0 * EPS * lhs.norm();
    Ok(NumericCheck::new(lhs, rhs_sum.value, bound, BoundKind::Rigorous))
}

/// Partial sum for one base in [`verify_limit_large_base`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitEntry {
    pub base: Base,
    #[serde(serialize_with = "serialize_complex")]
    pub partial: ComplexVal,
    /// `Σ_{n<=N} (n - s_B(n)) n^{-Re s}`; zero exactly when `B > N`.
    pub deficit: f64,
    /// For `B > N`: the partial sum is bit-identical to `Σ_{n<=N} n^{1-s}`.
    pub matches_truncation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub entries: Vec<LimitEntry>,
    /// `Σ_{n<=N} n^{1-s}` against `ζ(s-1)`.
    pub check: NumericCheck,
    pub passed: bool,
}

/// `Σ_{n<=N} s_B(n) n^{-s}` for each base. For `B > N` every `s_B(n) = n`,
/// so the sum must equal the truncation of `ζ(s-1)` exactly; for `B <= N`
/// the deficit must be positive because `s_B(B) = 1 < B`. The truncation
/// itself must approximate `ζ(s-1)` within its tail bound.
pub fn verify_limit_large_base(s: ComplexVal, bases: &[Base], n: u64, exec: Exec) -> Result<LimitReport, AnalyticError> {
    require_half_plane(s, 2.0)?;
    require_terms(n)?;
    let len = usize::try_from(n).map_err(|_| AnalyticError::Domain("too many terms".into()))?;
    let truncation = dirichlet_partial(|k| k as f64, s, n, |n, s| linear_tail(n, s.re), exec)?;
    let mut entries = Vec::with_capacity(bases.len());
    let mut structure_ok = true;
    for &base in bases {
        let sums = digit_sums_upto(len, base);
        let partial = dirichlet_partial(|k| sums[k as usize] as f64, s, n, |_, _| 0.0, exec)?;
        let deficit = exec.reduce_blocks(
            1..n + 1,
            |r| r.map(|k| (k - sums[k as usize]) as f64 * (k as f64).powf(-s.re)).sum::<f64>(),
            |a, b| a + b,
            0.0,
        );
        let matches_truncation = partial.value == truncation.value;
        structure_ok &= if base.get() > n {
            matches_truncation && deficit == 0.0
        } else {
            deficit > 0.0
        };
        entries.push(LimitEntry {
            base,
            partial: partial.value,
            deficit,
            matches_truncation,
        });
    }
    let zeta = riemann_zeta(s - 1.0)?;
    let check = NumericCheck::new(
        truncation.value,
        zeta,
        truncation.tail_bound + truncation.roundoff + ZETA_ACCURACY,
        BoundKind::Rigorous,
    );
    Ok(LimitReport {
        passed: structure_ok && check.passed,
        entries,
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexVal {
        ComplexVal::new(re, im)
    }

    #[test]
    fn zeta_three_partial_sum() {
        let p = dirichlet_partial(|_| 1.0, c(3.0, 0.0), 10_000, |n, s| (n as f64).powf(1.0 - s.re) / (s.re - 1.0), Exec::default())
            .unwrap();
        let err = (p.value - riemann_zeta(c(3.0, 0.0)).unwrap()).norm();
        assert!(err < 5e-9);
        assert!(err <= p.tail_bound + p.roundoff + 1e-12);
    }

    #[test]
    fn zero_coefficients() {
        let p = dirichlet_partial(|_| 0.0, c(3.0, 0.0), 1000, |_, _| 0.0, Exec::Sequential).unwrap();
        assert_eq!(p.value, c(0.0, 0.0));
        assert_eq!(p.roundoff, 0.0);
    }

    #[test]
    fn modes_are_bit_identical() {
        let f = |k: u64| (k % 7) as f64;
        let a = dirichlet_partial(f, c(2.5, 1.0), 50_000, |_, _| 0.0, Exec::Sequential).unwrap();
        let b = dirichlet_partial(f, c(2.5, 1.0), 50_000, |_, _| 0.0, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn chat_and_carry_grid() {
        for b in [2u64, 3, 10] {
            for s in [c(3.0, 0.0), c(4.0, 0.0), c(2.5, 0.0), c(3.0, 2.0)] {
                let base = Base::new(b).unwrap();
                let chat = verify_dirichlet_chat(base, s, 100_000, Exec::default()).unwrap();
                assert!(chat.passed, "chat B={b} s={s}: {chat:?}");
                let carry = verify_dirichlet_carry(base, s, 100_000, Exec::default()).unwrap();
                assert!(carry.passed, "carry B={b} s={s}: {carry:?}");
            }
        }
    }

    #[test]
    fn chat_first_term_is_at_base() {
        let base = Base::new(1000).unwrap();
        let r = verify_dirichlet_chat(base, c(3.0, 0.0), 999, Exec::Sequential).unwrap();
        assert_eq!(r.lhs, c(0.0, 0.0));
        assert!(r.passed);
    }

    #[test]
    fn convolution() {
        let r = verify_dirichlet_convolution(Base::TEN, c(4.0, 0.0), 100_000, Exec::default()).unwrap();
        assert!(r.passed, "{r:?}");
        let r = verify_dirichlet_convolution(Base::TWO, c(3.0, 1.0), 20_000, Exec::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn limit_report() {
        let bases = [Base::TEN, Base::new(10_001).unwrap(), Base::new(100_000).unwrap()];
        let r = verify_limit_large_base(c(3.0, 0.0), &bases, 10_000, Exec::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(!r.entries[0].matches_truncation);
        assert!(r.entries[0].deficit > 0.0);
        assert!(r.entries[1].matches_truncation && r.entries[2].matches_truncation);
        assert!(r.entries[0].partial.re < r.entries[2].partial.re);
    }

    #[test]
    fn domain() {
        assert!(verify_dirichlet_chat(Base::TEN, c(2.0, 0.0), 100, Exec::Sequential).is_err());
        assert!(verify_dirichlet_carry(Base::TEN, c(3.0, 0.0), 2, Exec::Sequential).is_err());
    }
}
