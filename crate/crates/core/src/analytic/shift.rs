//! Numeric spot checks of the shifted product identity
//!
//! `Σ_{n>=0} z^{s_B(n)} q^{n B^j} = Π_{i>=j} (1 - z^B q^{B^{i+1}}) / (1 - z q^{B^i})`
//!
//! for negative `j`, where `q^{B^j}` is a fractional power. The exact
//! engine covers `j >= 0`; here `q^{B^i} = exp(B^i λ)` with `λ = log q`.

use serde::Serialize;

use crate::digit_core::{digit_sum_u64, Base};

use super::{finite, serialize_complex, AnalyticError, BoundKind, ComplexVal, LogQ, NumericCheck, EPS};

/// Hard cap on the number of series terms.
const MAX_TERMS: u64 = 1_000_000;
/// Product factors with `|q^{B^i}|` below this are treated as 1.
const FACTOR_CUTOFF: f64 = 1e-18;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShiftPoint {
    pub base: Base,
    pub j: i32,
    #[serde(serialize_with = "serialize_complex")]
    pub z: ComplexVal,
    #[serde(serialize_with = "serialize_complex")]
    pub q: ComplexVal,
}

pub fn default_shift_points() -> Vec<ShiftPoint> {
    let c = ComplexVal::new;
    vec![
        ShiftPoint { base: Base::TWO, j: -1, z: c(0.7, 0.0), q: c(0.3, 0.0) },
        ShiftPoint { base: Base::new(3).expect("valid"), j: -2, z: c(0.5, 0.5), q: c(0.2, 0.1) },
        ShiftPoint { base: Base::TEN, j: -1, z: c(-0.9, 0.0), q: c(0.05, 0.0) },
        ShiftPoint { base: Base::TWO, j: -3, z: c(1.0, 0.0), q: c(0.1, 0.0) },
    ]
}

/// Compares the series and the product at one point with `|z| <= 1`.
///
/// The series tail is bounded by `|Q|^{K+1}/(1-|Q|)` with `Q = q^{B^j}`,
/// because `|z|^{s_B(n)} <= 1`. The product is cut where its factors are
/// within `1e-18` of 1, which is estimated rather than proved, so the
/// check is heuristic.
pub fn verify_negative_shift(point: &ShiftPoint) -> Result<NumericCheck, AnalyticError> {
    let z = finite(point.z, "z")?;
    if z.norm() > 1.0 {
        return Err(AnalyticError::Domain(format!("need |z| <= 1, got |z| = {}", z.norm())));
    }
    let lambda = LogQ::from_q(point.q)?;
    let b = point.base.get() as f64;
    let big_q = lambda.power(b.powi(point.j));
    let q_abs = big_q.0.re.exp();
    if !(q_abs < 1.0) {
        return Err(AnalyticError::QOutsideDisk(q_abs));
    }

    // Σ z^{s_B(n)} Q^n until the geometric tail drops below 1e-17
    let mut series = ComplexVal::new(0.0, 0.0);
    let mut power = ComplexVal::new(1.0, 0.0);
    let q_val = big_q.q();
    let mut terms = 0u64;
    let mut tail = 1.0 / (1.0 - q_abs);
    while tail > 1e-17 {
        if terms >= MAX_TERMS {
            return Err(AnalyticError::Domain(format!("|q^(B^j)| = {q_abs} converges too slowly")));
        }
        series += z.powi(digit_sum_u64(terms, point.base) as i32) * power;
        power *= q_val;
        terms += 1;
        tail *= q_abs;
    }

    // Π_{i>=j}, with factor i built from q^{B^i} = exp(B^i λ)
    let zb = z.powi(point.base.get() as i32);
    let mut product = ComplexVal::new(1.0, 0.0);
    let mut i = point.j;
    loop {
        let u = lambda.power(b.powi(i)).q();
        if u.norm() < FACTOR_CUTOFF {
            break;
        }
        let u_next = lambda.power(b.powi(i + 1)).q();
        product *= (ComplexVal::new(1.0, 0.0) - zb * u_next) / (ComplexVal::new(1.0, 0.0) - z * u);
        i += 1;
    }
    let product = finite(product, "product")?;
    let roundoff = 64.0 * EPS * (terms as f64 / (1.0 - q_abs)).max(product.norm());
    let bound = tail + roundoff + 4.0 * FACTOR_CUTOFF;
    Ok(NumericCheck::new(series, product, bound, BoundKind::Heuristic))
}
