use super::{digit_sum_u64, Base, DigitError};

/// `S_B(n) = Σ_{d | n} s_B(d)` by trial division.
pub fn divisor_digit_sum(n: u64, base: Base) -> Result<u128, DigitError> {
    if n == 0 {
        return Err(DigitError::NotPositive("n"));
    }
    Ok(divisor_fold(n, |d| u128::from(digit_sum_u64(d, base))))
}

/// Classical sum of divisors `σ(n)`; `σ(0) = 0`.
pub fn sigma(n: u64) -> u128 {
    if n == 0 {
        return 0;
    }
    divisor_fold(n, u128::from)
}

fn divisor_fold(n: u64, weight: impl Fn(u64) -> u128) -> u128 {
    let mut total = 0;
    let mut d = 1u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            total += weight(d);
            let co = n / d;
            if co != d {
                total += weight(co);
            }
        }
        d += 1;
    }
    total
}

/// `s_B(n)` for all `0 <= n <= limit`, via `s_B(n) = s_B(⌊n/B⌋) + n mod B`.
pub fn digit_sums_upto(limit: usize, base: Base) -> Vec<u64> {
    let b = base.get() as usize;
    let mut out = vec![0u64; limit + 1];
    for n in 1..=limit {
        out[n] = out[n / b] + (n % b) as u64;
    }
    out
}

/// `S_B(n)` for all `0 <= n <= limit` by a divisor sieve (index 0 holds 0).
pub fn divisor_digit_sums_upto(limit: usize, base: Base) -> Vec<u128> {
    let s = digit_sums_upto(limit, base);
    let mut out = vec![0u128; limit + 1];
    for d in 1..=limit {
        let w = u128::from(s[d]);
        for m in (d..=limit).step_by(d) {
            out[m] += w;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digit_core::correction_repeat;
    use crate::digit_core::Natural;

    #[test]
    fn examples() {
        assert_eq!(divisor_digit_sum(6, Base::TEN).unwrap(), 12);
        assert_eq!(divisor_digit_sum(1, Base::new(7).unwrap()).unwrap(), 1);
        // 1 + 2 + 3 + 4 + 6 + s(12) = 19
        assert_eq!(divisor_digit_sum(12, Base::TEN).unwrap(), 19);
        assert!(divisor_digit_sum(0, Base::TEN).is_err());
    }

    #[test]
    fn equals_sigma_when_divisors_below_base() {
        let base = Base::new(101).unwrap();
        for n in 1..=100u64 {
            assert_eq!(divisor_digit_sum(n, base).unwrap(), sigma(n));
        }
    }

    #[test]
    fn sigma_gap_is_sum_of_repeat_corrections() {
        for b in [2u64, 3, 10] {
            let base = Base::new(b).unwrap();
            for n in 1..=500u64 {
                let gap = sigma(n) - divisor_digit_sum(n, base).unwrap();
                let corr: Natural = (1..=n)
                    .filter(|d| n % d == 0)
                    .map(|d| correction_repeat(&Natural::from(1u32), &Natural::from(d), base))
                    .sum();
                assert_eq!(Natural::from(gap), corr, "n={n} B={b}");
            }
        }
    }

    #[test]
    fn sieves_match_direct() {
        let base = Base::new(3).unwrap();
        let s = digit_sums_upto(2000, base);
        let big_s = divisor_digit_sums_upto(2000, base);
        for n in 1..=2000u64 {
            assert_eq!(s[n as usize], digit_sum_u64(n, base));
            assert_eq!(big_s[n as usize], divisor_digit_sum(n, base).unwrap());
        }
    }
}
