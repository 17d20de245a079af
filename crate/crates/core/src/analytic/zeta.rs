//! Hurwitz and Riemann zeta for `Re(s) > 1` by Euler-Maclaurin summation.
//!
//! `ζ(s, x) = Σ_{k<M} (k+x)^{-s} + (M+x)^{1-s}/(s-1) + (M+x)^{-s}/2
//!          + Σ_{j=1}^{p} B_{2j}/(2j)! · s(s+1)…(s+2j-2) · (M+x)^{-s-2j+1} + R`.

use super::{finite, AnalyticError, ComplexVal};

/// `B_2, B_4, …, B_20`.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Summation parameters: `cutoff` direct terms, then `bernoulli_terms`
/// correction terms (8 means through `B_16`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerMaclaurin {
    pub cutoff: u32,
    pub bernoulli_terms: usize,
}

impl Default for EulerMaclaurin {
    fn default() -> Self {
        EulerMaclaurin {
            cutoff: 50,
            bernoulli_terms: 8,
        }
    }
}

impl EulerMaclaurin {
    /// Defaults for [`riemann_zeta`]: a different truncation than
    /// [`hurwitz_zeta`], so `ζ(s, 1) = ζ(s)` compares two independent
    /// approximations.
    pub const RIEMANN: EulerMaclaurin = EulerMaclaurin {
        cutoff: 40,
        bernoulli_terms: 10,
    };

    fn validate(self) -> Result<Self, AnalyticError> {
        if self.cutoff == 0 {
            return Err(AnalyticError::ZeroCutoff);
        }
        if self.bernoulli_terms > BERNOULLI.len() {
            return Err(AnalyticError::TooManyBernoulliTerms {
                got: self.bernoulli_terms,
                max: BERNOULLI.len(),
            });
        }
        Ok(self)
    }
}

/// `ζ(s)` for `Re(s) > 1`, with [`EulerMaclaurin::RIEMANN`].
pub fn riemann_zeta(s: ComplexVal) -> Result<ComplexVal, AnalyticError> {
    riemann_zeta_with(s, EulerMaclaurin::RIEMANN)
}

pub fn riemann_zeta_with(s: ComplexVal, params: EulerMaclaurin) -> Result<ComplexVal, AnalyticError> {
    hurwitz_zeta_with(s, 1.0, params)
}

/// `ζ(s, x) = Σ_{n>=0} (n + x)^{-s}` for `Re(s) > 1`, `0 < x <= 1`.
pub fn hurwitz_zeta(s: ComplexVal, x: f64) -> Result<ComplexVal, AnalyticError> {
    hurwitz_zeta_with(s, x, EulerMaclaurin::default())
}

pub fn hurwitz_zeta_with(s: ComplexVal, x: f64, params: EulerMaclaurin) -> Result<ComplexVal, AnalyticError> {
    finite(s, "s")?;
    if !(s.re > 1.0) {
        return Err(AnalyticError::RealPartTooSmall(s.re, 1.0));
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(AnalyticError::HurwitzParameter(x));
    }
    let params = params.validate()?;
    let m = f64::from(params.cutoff);

    // smallest terms first
    let mut direct = ComplexVal::new(0.0, 0.0);
    for k in (0..params.cutoff).rev() {
        direct += power(f64::from(k) + x, -s);
    }

    let a = m + x;
    let a_pow = power(a, -s);
    let mut tail = a_pow * a / (s - 1.0) + a_pow * 0.5;

    // term j: B_{2j}/(2j)! · (s)_{2j-1} · a^{-s-2j+1}
    let mut rising = s; // s(s+1)…(s+2j-2)
    let mut factorial = 1.0; // (2j)!
    let mut a_power = a_pow / a; // a^{-s-2j+1}
    for (j, &b) in BERNOULLI.iter().take(params.bernoulli_terms).enumerate() {
        let k = (2 * j) as f64;
        if j > 0 {
            rising *= (s + (k - 1.0)) * (s + k);
            a_power /= a * a;
        }
        factorial *= (k + 1.0) * (k + 2.0);
        tail += rising * a_power * (b / factorial);
    }
    finite(direct + tail, "zeta value")
}

/// `t^{-s}` for real `t > 0`, written as `exp(-s ln t)`.
#[inline]
pub(crate) fn power(t: f64, minus_s: ComplexVal) -> ComplexVal {
    (minus_s * t.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> ComplexVal {
        ComplexVal::new(re, im)
    }

    // reference values computed at 30 digits with an independent library
    const ORACLES: [((f64, f64), f64, (f64, f64)); 8] = [
        ((2.0, 0.0), 1.0, (1.644934066848226436, 0.0)),
        ((3.0, 0.0), 1.0, (1.202056903159594285, 0.0)),
        ((1.5, 0.0), 1.0, (2.612375348685488343, 0.0)),
        ((2.0, 10.0), 1.0, (1.197982500674184608, -0.079170491720525747)),
        ((1.5, 50.0), 1.0, (0.662374956402240117, 0.195511186960723711)),
        ((3.0, -7.0), 1.0, (1.014200368971115932, -0.096125395858022432)),
        ((3.0, 2.0), 0.3, (-27.16587648492868664, 24.47862989429088179)),
        ((3.0, 0.0), 0.1, (1000.930728689172003, 0.0)),
    ];

    #[test]
    fn matches_reference_values() {
        for ((sr, si), x, (er, ei)) in ORACLES {
            let got = hurwitz_zeta(c(sr, si), x).unwrap();
            let err = (got - c(er, ei)).norm();
            assert!(err <= 1e-12 * c(er, ei).norm().max(1.0), "s={sr}+{si}i x={x}: err {err:e}");
        }
    }

    #[test]
    fn closed_forms() {
        assert!((riemann_zeta(c(2.0, 0.0)).unwrap() - c(PI * PI / 6.0, 0.0)).norm() < 1e-12);
        assert!((hurwitz_zeta(c(2.0, 0.0), 0.5).unwrap() - c(PI * PI / 2.0, 0.0)).norm() < 1e-12);
        assert!((riemann_zeta(c(4.0, 0.0)).unwrap() - c(PI.powi(4) / 90.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn large_real_part_approaches_one() {
        let z = riemann_zeta(c(50.0, 0.0)).unwrap();
        assert!((z - c(1.0, 0.0)).norm() < 1e-14);
        let z = riemann_zeta(c(40.0, 30.0)).unwrap();
        assert!((z - c(1.0, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn riemann_agrees_with_hurwitz_at_one() {
        for s in [c(2.0, 0.0), c(1.7, 3.0), c(6.0, -20.0), c(1.5, 50.0)] {
            let gap = (riemann_zeta(s).unwrap() - hurwitz_zeta(s, 1.0).unwrap()).norm();
            assert!(gap < 1e-13, "s={s}: {gap:e}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(riemann_zeta(c(1.0, 5.0)), Err(AnalyticError::RealPartTooSmall(..))));
        assert!(matches!(hurwitz_zeta(c(2.0, 0.0), 0.0), Err(AnalyticError::HurwitzParameter(_))));
        assert!(matches!(hurwitz_zeta(c(2.0, 0.0), 1.5), Err(AnalyticError::HurwitzParameter(_))));
        assert!(matches!(riemann_zeta(c(f64::NAN, 0.0)), Err(AnalyticError::NonFinite(_))));
        let bad = EulerMaclaurin { cutoff: 50, bernoulli_terms: 11 };
        assert!(riemann_zeta_with(c(2.0, 0.0), bad).is_err());
    }

    #[test]
    fn parameters_are_configuration() {
        let coarse = EulerMaclaurin { cutoff: 10, bernoulli_terms: 4 };
        let a = riemann_zeta_with(c(3.0, 0.0), coarse).unwrap();
        let b = riemann_zeta(c(3.0, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-9);
    }
}
