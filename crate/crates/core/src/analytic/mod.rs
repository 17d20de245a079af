//! Double-precision numerics: Riemann and Hurwitz zeta, tail-bounded
//! Dirichlet partial sums, and the bilateral three-variable series.
//!
//! Every public operation returns an error instead of a NaN or infinity.

mod bilateral;
mod dirichlet;
mod shift;
mod zeta;

pub use bilateral::{
    bilateral_lhat, default_bilateral_points, verify_bilateral_equations, BilateralCheck,
    BilateralPoint, BilateralSum, LogQ, RealBase,
};
pub use dirichlet::{
    dirichlet_partial, verify_dirichlet_carry, verify_dirichlet_chat, verify_dirichlet_convolution,
    verify_limit_large_base, LimitEntry, LimitReport, PartialSum,
};
pub use shift::{default_shift_points, verify_negative_shift, ShiftPoint};
pub use zeta::{hurwitz_zeta, hurwitz_zeta_with, riemann_zeta, riemann_zeta_with, EulerMaclaurin};

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Complex double. Finite by construction in every value this module returns.
pub type ComplexVal = num_complex::Complex64;

/// Machine epsilon.
pub(crate) const EPS: f64 = f64::EPSILON;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("Re(s) = {0} is outside the supported half-plane (need Re(s) > {1})")]
    RealPartTooSmall(f64, f64),
    #[error("Hurwitz parameter x = {0} must lie in (0, 1]")]
    HurwitzParameter(f64),
    #[error("non-finite input or intermediate value: {0}")]
    NonFinite(&'static str),
    #[error("at most {max} Bernoulli correction terms are tabulated, got {got}")]
    TooManyBernoulliTerms { got: usize, max: usize },
    #[error("Euler-Maclaurin cutoff must be at least 1")]
    ZeroCutoff,
    #[error("need |q| < 1, got |q| = {0}")]
    QOutsideDisk(f64),
    #[error("real base must be positive and different from 1, got {0}")]
    InvalidRealBase(f64),
    #[error("pole: |1 - x q^(B^{index})| = {distance:e} is below 1e-12")]
    Pole { index: i64, distance: f64 },
    #[error("t must be nonzero")]
    ZeroStride,
    #[error("{0}")]
    Domain(String),
}

/// Whether a bound is proved for the inputs or merely estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Rigorous,
    Heuristic,
}

/// A numeric comparison: `passed` is exactly `abs_error <= bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericCheck {
    #[serde(serialize_with = "serialize_complex")]
    pub lhs: ComplexVal,
    #[serde(serialize_with = "serialize_complex")]
    pub rhs: ComplexVal,
    pub abs_error: f64,
    pub bound: f64,
    pub bound_kind: BoundKind,
    pub passed: bool,
}

impl NumericCheck {
    pub fn new(lhs: ComplexVal, rhs: ComplexVal, bound: f64, bound_kind: BoundKind) -> Self {
        let abs_error = (lhs - rhs).norm();
        NumericCheck {
            lhs,
            rhs,
            abs_error,
            bound,
            bound_kind,
            passed: abs_error <= bound,
        }
    }
}

/// `[re, im]`.
pub fn serialize_complex<S: Serializer>(z: &ComplexVal, serializer: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(serializer)
}

pub(crate) fn finite(z: ComplexVal, what: &'static str) -> Result<ComplexVal, AnalyticError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(AnalyticError::NonFinite(what))
    }
}

/// Parses `3`, `2.5`, `3+2i`, `3-2i`, `-i`, `0.5i`.
pub fn parse_complex(text: &str) -> Result<ComplexVal, AnalyticError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || AnalyticError::Domain(format!("cannot parse complex number `{text}`"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        return finite(ComplexVal::new(re, 0.0), "parsed value");
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse().map_err(|_| bad())?,
    };
    let re: f64 = re_part.parse().map_err(|_| bad())?;
    finite(ComplexVal::new(re, im), "parsed value")
}
