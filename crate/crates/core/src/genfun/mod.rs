//! Exact generating-function identities, checked coefficient by coefficient.
//!
//! Each catalog entry builds one or more [`Equation`]s whose two sides are
//! truncated series computed along independent routes (digit arithmetic on
//! one side, products, reciprocals and substitutions on the other). The
//! first equation is always the headline identity; the rest check the
//! intermediate steps of its derivation.

pub mod build;
mod identities;

pub use build::{
    cal_l, cal_l_double_sum, constant_series, digit_weighted_product, digit_weighted_sum, exponent_series,
    lambert_lb,
    two_variable_product, two_variable_sum,
};
pub use identities::equations;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::digit_core::{Base, DigitError};
use crate::exec::Exec;
use crate::series::{LaurentPoly, SeriesError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenfunError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Digit(#[from] DigitError),
    #[error("unknown identity id `{0}`")]
    UnknownId(String),
    #[error("`{0}` is a numeric identity, not an exact series identity")]
    NotExact(&'static str),
    #[error("truncation order must be at least 1")]
    OrderTooSmall,
    #[error("base {0} is too large to appear as a z-exponent")]
    BaseTooLarge(u64),
    #[error("digit weight at 0 must be the constant 1, got {0}")]
    WeightAtZero(String),
    #[error("perturbation exponent {exponent} exceeds truncation order {order}")]
    PerturbationOutOfRange { exponent: usize, order: usize },
}

/// Stable identifiers for every identity the laboratory checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    TwoVariable,
    ShiftJ,
    ChatOnesTwoVariable,
    Squared,
    Hypergeometric,
    SbGeneratingFunction,
    ShiftCor,
    ChatOnesGf,
    ChatRepeat,
    LambertTransform,
    DirichletChat,
    DirichletCarry,
    DirichletConvolution,
    DirichletLimit,
    BilateralEquations,
}

impl IdentityId {
    pub const ALL: [IdentityId; 15] = [
        IdentityId::TwoVariable,
        IdentityId::ShiftJ,
        IdentityId::ChatOnesTwoVariable,
        IdentityId::Squared,
        IdentityId::Hypergeometric,
        IdentityId::SbGeneratingFunction,
        IdentityId::ShiftCor,
        IdentityId::ChatOnesGf,
        IdentityId::ChatRepeat,
        IdentityId::LambertTransform,
        IdentityId::DirichletChat,
        IdentityId::DirichletCarry,
        IdentityId::DirichletConvolution,
        IdentityId::DirichletLimit,
        IdentityId::BilateralEquations,
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            IdentityId::TwoVariable => "thm-two-variable",
            IdentityId::ShiftJ => "eq-shift-j",
            IdentityId::ChatOnesTwoVariable => "cor-chat-ones-2var",
            IdentityId::Squared => "cor-squared",
            IdentityId::Hypergeometric => "thm-hypergeom",
            IdentityId::SbGeneratingFunction => "cor-sB-gf",
            IdentityId::ShiftCor => "cor-shiftcor",
            IdentityId::ChatOnesGf => "cor-chat-ones-gf",
            IdentityId::ChatRepeat => "thm-chat-repeat",
            IdentityId::LambertTransform => "eq-lambert-transform",
            IdentityId::DirichletChat => "dir-chat",
            IdentityId::DirichletCarry => "dir-carry",
            IdentityId::DirichletConvolution => "dir-convolution",
            IdentityId::DirichletLimit => "dir-limit",
            IdentityId::BilateralEquations => "bilateral-eqs",
        }
    }

    /// Exact series identities, checked by this module.
    pub fn is_exact(self) -> bool {
        !matches!(
            self,
            IdentityId::DirichletChat
                | IdentityId::DirichletCarry
                | IdentityId::DirichletConvolution
                | IdentityId::DirichletLimit
                | IdentityId::BilateralEquations
        )
    }

    pub fn exact() -> impl Iterator<Item = IdentityId> {
        Self::ALL.into_iter().filter(|id| id.is_exact())
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = GenfunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| GenfunError::UnknownId(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Parameters of one exact identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentitySpec {
    pub id: IdentityId,
    pub base: Base,
    pub order: usize,
    /// Repeated summand for `thm-chat-repeat`.
    pub a: u64,
    /// Shift for `eq-shift-j`; `None` checks every `j` with `B^j <= N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    /// Optional cap on `z`-degrees for `cor-squared`. Every coefficient there
    /// has nonnegative exponents, so capping commutes with the products.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_cap: Option<i64>,
}

impl IdentitySpec {
    pub const DEFAULT_A: u64 = 7;

    pub fn new(id: IdentityId, base: Base, order: usize) -> Self {
        IdentitySpec {
            id,
            base,
            order,
            a: Self::DEFAULT_A,
            j: None,
            z_cap: None,
        }
    }
}

/// Two series that must agree through the truncation order.
#[derive(Clone, Debug)]
pub struct Equation {
    pub label: String,
    pub lhs: TruncatedSeries,
    pub rhs: TruncatedSeries,
}

impl Equation {
    pub fn new(label: impl Into<String>, lhs: TruncatedSeries, rhs: TruncatedSeries) -> Self {
        Equation {
            label: label.into(),
            lhs,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub equation: String,
    pub exponent: usize,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub spec: IdentitySpec,
    pub passed: bool,
    pub equations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_divergence: Option<Divergence>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Deliberate corruption of the headline left-hand side, used to confirm a
/// check can fail. The coefficient of `q^exponent` is multiplied by `z`
/// (for `thm-two-variable` this is `s_B(n) + 1`), or set to `1` if it was
/// zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub exponent: usize,
}

impl Perturbation {
    fn apply(self, series: &mut TruncatedSeries) -> Result<(), GenfunError> {
        if self.exponent > series.order() {
            return Err(GenfunError::PerturbationOutOfRange {
                exponent: self.exponent,
                order: series.order(),
            });
        }
        let c = series.coeff(self.exponent);
        let bumped = if c.is_zero() {
            LaurentPoly::one()
        } else {
            c.shift(1)
        };
        series.set_coeff(self.exponent, bumped);
        Ok(())
    }
}

/// Compares the equations in order and stops at the first divergence.
pub fn compare(spec: IdentitySpec, equations: &[Equation], elapsed: Duration) -> Result<VerificationReport, GenfunError> {
    let mut first_divergence = None;
    for eq in equations {
        if let Some((exponent, lhs, rhs)) = eq.lhs.first_difference(&eq.rhs)? {
            first_divergence = Some(Divergence {
                equation: eq.label.clone(),
                exponent,
                lhs,
                rhs,
            });
            break;
        }
    }
    Ok(VerificationReport {
        spec,
        passed: first_divergence.is_none(),
        equations: equations.len(),
        first_divergence,
        elapsed,
    })
}

pub fn verify(spec: &IdentitySpec) -> Result<VerificationReport, GenfunError> {
    verify_with(spec, None, Exec::default())
}

pub fn verify_with(
    spec: &IdentitySpec,
    perturbation: Option<Perturbation>,
    exec: Exec,
) -> Result<VerificationReport, GenfunError> {
    let start = Instant::now();
    let mut eqs = equations(spec, exec)?;
    if let Some(p) = perturbation {
        p.apply(&mut eqs[0].lhs)?;
    }
    compare(spec.clone(), &eqs, start.elapsed())
}

fn run(id: IdentityId, base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    verify(&IdentitySpec::new(id, base, order))
}

/// `Σ q^n z^{s_B(n)}` against its infinite product.
pub fn verify_two_variable(base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    run(IdentityId::TwoVariable, base, order)
}

/// The `q ↦ q^{B^j}` shift for one `j >= 0`.
pub fn verify_shift(base: Base, j: u32, order: usize) -> Result<VerificationReport, GenfunError> {
    verify(&IdentitySpec {
        j: Some(j),
        ..IdentitySpec::new(IdentityId::ShiftJ, base, order)
    })
}

pub fn verify_chat_ones_two_variable(base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    run(IdentityId::ChatOnesTwoVariable, base, order)
}

pub fn verify_squared(base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    run(IdentityId::Squared, base, order)
}

pub fn verify_hypergeometric_form(base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    run(IdentityId::Hypergeometric, base, order)
}

pub fn verify_sb_generating_function(base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    run(IdentityId::SbGeneratingFunction, base, order)
}

pub fn verify_shiftcor(base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    run(IdentityId::ShiftCor, base, order)
}

pub fn verify_chat_ones_gf(base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    run(IdentityId::ChatOnesGf, base, order)
}

pub fn verify_chat_repeat(a: u64, base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    verify(&IdentitySpec {
        a,
        ..IdentitySpec::new(IdentityId::ChatRepeat, base, order)
    })
}

pub fn verify_lambert_transform(base: Base, order: usize) -> Result<VerificationReport, GenfunError> {
    run(IdentityId::LambertTransform, base, order)
}
