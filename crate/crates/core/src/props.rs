//! Seeded randomized and exhaustive checks of the digit-sum identities.
//!
//! Case `i` of a suite draws from its own ChaCha stream, so results are
//! independent of thread count and identical for a given seed.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digit_core::{
    add_with_trace, carry_sum, carry_sum_repeat, correction, correction_nm1, correction_repeat,
    digit_sum, digit_sum_recursion_check, digit_sum_u64, Base, Natural,
};
use crate::exec::Exec;

/// Bases every suite runs on by default.
pub const DEFAULT_BASES: [u64; 4] = [2, 3, 10, 16];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Property {
    /// `s_B(Σ a_i) = Σ s_B(a_i) - ĉ_B(a_1, …, a_r)`.
    #[serde(rename = "prop-additivity")]
    Additivity,
    /// `ĉ_B(a_1, …, a_r) ≡ 0 (mod B-1)`.
    #[serde(rename = "prop-correction-congruence")]
    CorrectionCongruence,
    /// `s_B(n) ≡ n (mod B-1)` for `n <= 10^4`.
    #[serde(rename = "prop-digit-congruence")]
    DigitCongruence,
    /// The step-`k` digit-sum recursion.
    #[serde(rename = "prop-recursion")]
    Recursion,
    /// `s_B(ab) = b s_B(a) - ĉ_B({a}^b)`.
    #[serde(rename = "prop-multiplication")]
    Multiplication,
    /// `ĉ_B({a}^b) = ĉ_B({a}^{b-1}) + ĉ_B(a(b-1), a)`.
    #[serde(rename = "prop-repeat-recursion")]
    RepeatRecursion,
    /// `c_B({a}^b) = ⌊ab/B⌋` for every `1 <= a < B`, `1 <= b <= 200`.
    #[serde(rename = "prop-repeat-carry")]
    RepeatCarry,
    /// `ĉ_B(n-1, 1)` closed form against the trace for `n <= 10^5`.
    #[serde(rename = "prop-valuation-form")]
    ValuationForm,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Additivity,
        Property::CorrectionCongruence,
        Property::DigitCongruence,
        Property::Recursion,
        Property::Multiplication,
        Property::RepeatRecursion,
        Property::RepeatCarry,
        Property::ValuationForm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Additivity => "prop-additivity",
            Property::CorrectionCongruence => "prop-correction-congruence",
            Property::DigitCongruence => "prop-digit-congruence",
            Property::Recursion => "prop-recursion",
            Property::Multiplication => "prop-multiplication",
            Property::RepeatRecursion => "prop-repeat-recursion",
            Property::RepeatCarry => "prop-repeat-carry",
            Property::ValuationForm => "prop-valuation-form",
        }
    }

    /// Default number of cases; exhaustive suites ignore it.
    pub fn default_cases(self) -> u64 {
        match self {
            Property::Additivity | Property::CorrectionCongruence => 10_000,
            Property::DigitCongruence => 10_000,
            Property::ValuationForm => 100_000,
            Property::RepeatCarry => 200,
            Property::Recursion | Property::Multiplication | Property::RepeatRecursion => 1_000,
        }
    }

    fn salt(self) -> u64 {
        // distinct streams per suite
        0x9e37_79b9_7f4a_7c15u64.wrapping_mul(self as u64 + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Passed,
    Failed,
    /// The property is vacuous for this base (congruences mod 1).
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub id: Property,
    pub base: Base,
    pub seed: u64,
    pub cases: u64,
    pub failures: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Failed
    }
}

fn rng_for(property: Property, base: Base, seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ property.salt() ^ base.get().rotate_left(32));
    rng.set_stream(case);
    rng
}

fn n(v: u64) -> Natural {
    Natural::from(v)
}

/// One case; `Some(description)` on failure.
fn run_case(property: Property, base: Base, seed: u64, case: u64) -> Option<String> {
    let mut rng = rng_for(property, base, seed, case);
    match property {
        Property::Additivity | Property::CorrectionCongruence => {
            let r = rng.gen_range(1..=6);
            let summands: Vec<Natural> = (0..r).map(|_| n(rng.gen_range(0..1_000_000))).collect();
            let trace = add_with_trace(&summands, base).expect("nonempty");
            let ok = if property == Property::Additivity {
                let parts: Natural = summands.iter().map(|a| digit_sum(a, base)).sum();
                digit_sum(&trace.total, base) + &trace.correction == parts
            } else {
                (&trace.correction % (base.get() - 1)).is_zero()
            };
            (!ok).then(|| format!("summands {summands:?}"))
        }
        Property::DigitCongruence => {
            let v = case;
            (digit_sum_u64(v, base) % (base.get() - 1) != v % (base.get() - 1)).then(|| format!("n = {v}"))
        }
        Property::Recursion => {
            let total = rng.gen_range(1..10_000u64);
            let k = rng.gen_range(1..=total);
            match digit_sum_recursion_check(&n(total), &n(k), base) {
                Ok(true) => None,
                other => Some(format!("n = {total}, k = {k}: {other:?}")),
            }
        }
        Property::Multiplication => {
            let (a, b) = (rng.gen_range(0..1_000_000u64), rng.gen_range(0..10_000u64));
            let lhs = digit_sum(&(n(a) * b), base) + correction_repeat(&n(a), &n(b), base);
            (lhs != digit_sum(&n(a), base) * b).then(|| format!("a = {a}, b = {b}"))
        }
        Property::RepeatRecursion => {
            let (a, b) = (rng.gen_range(0..1_000_000u64), rng.gen_range(1..10_000u64));
            let step = correction(&[n(a) * (b - 1), n(a)], base).expect("two summands");
            let ok = correction_repeat(&n(a), &n(b), base) == correction_repeat(&n(a), &n(b - 1), base) + step;
            (!ok).then(|| format!("a = {a}, b = {b}"))
        }
        Property::RepeatCarry => {
            let b = case + 1;
            (1..base.get()).find_map(|a| {
                let expected = n(a * b / base.get());
                let fast = carry_sum_repeat(&n(a), &n(b), base);
                let copies = vec![n(a); b as usize];
                let slow = carry_sum(&copies, base).expect("b >= 1");
                (fast != expected || slow != expected).then(|| format!("a = {a}, b = {b}"))
            })
        }
        Property::ValuationForm => {
            let v = case + 1;
            let fast = correction_nm1(&n(v), base).expect("v >= 1");
            let slow = correction(&[n(v - 1), n(1)], base).expect("two summands");
            (fast != slow).then(|| format!("n = {v}"))
        }
    }
}

/// Runs `cases` cases of `property` (or the suite's fixed range when it is
/// exhaustive).
pub fn run_property(property: Property, base: Base, seed: u64, cases: Option<u64>, exec: Exec) -> PropertyReport {
    let start = Instant::now();
    let vacuous = base.get() == 2
        && matches!(property, Property::CorrectionCongruence | Property::DigitCongruence);
    let cases = match property {
        Property::RepeatCarry => property.default_cases(),
        Property::DigitCongruence => cases.unwrap_or(property.default_cases()) + 1,
        _ => cases.unwrap_or(property.default_cases()),
    };
    if vacuous {
        return PropertyReport {
            id: property,
            base,
            seed,
            cases: 0,
            failures: 0,
            status: Status::Skipped,
            first_failure: None,
            elapsed: start.elapsed(),
        };
    }
    let outcomes = exec.map_range(0..cases, |case| run_case(property, base, seed, case));
    let failures = outcomes.iter().filter(|o| o.is_some()).count() as u64;
    PropertyReport {
        id: property,
        base,
        seed,
        cases,
        failures,
        status: if failures == 0 { Status::Passed } else { Status::Failed },
        first_failure: outcomes.into_iter().flatten().next(),
        elapsed: start.elapsed(),
    }
}

/// Every suite for one base, in [`Property::ALL`] order.
pub fn run_all(base: Base, seed: u64, exec: Exec) -> Vec<PropertyReport> {
    Property::ALL
        .into_iter()
        .map(|p| run_property(p, base, seed, None, exec))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass_and_are_reproducible() {
        for b in DEFAULT_BASES {
            let base = Base::new(b).unwrap();
            for p in Property::ALL {
                let a = run_property(p, base, 7, Some(50), Exec::Sequential);
                assert!(a.passed(), "{a:?}");
                let c = run_property(p, base, 7, Some(50), Exec::Parallel);
                assert_eq!((a.cases, a.failures, a.status), (c.cases, c.failures, c.status));
            }
        }
    }

    #[test]
    fn base_two_congruences_are_skipped() {
        let r = run_property(Property::DigitCongruence, Base::TWO, 0, None, Exec::Sequential);
        assert_eq!(r.status, Status::Skipped);
        assert!(r.passed());
        let r = run_property(Property::DigitCongruence, Base::TEN, 0, Some(100), Exec::Sequential);
        assert_eq!((r.status, r.cases), (Status::Passed, 101));
    }

    #[test]
    fn streams_differ_by_case_and_seed() {
        let a: u64 = rng_for(Property::Additivity, Base::TEN, 0, 0).gen();
        let b: u64 = rng_for(Property::Additivity, Base::TEN, 0, 1).gen();
        let c: u64 = rng_for(Property::Additivity, Base::TEN, 1, 0).gen();
        assert!(a != b && a != c);
    }
}
