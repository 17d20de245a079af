//! The bilateral series `𝓛̂_B(x; z, q) = Σ_{n∈ℤ} z^n q^{B^n} / (1 - x q^{B^n})`.
//!
//! `B` is any positive real other than 1, and `q` is carried by its
//! logarithm `λ` so that `q^{B^n} = exp(B^n λ)` is single-valued and
//! `(q^{B^r})^{B^n} = q^{B^{n+r}}` holds by construction. For `B > 1` the
//! terms with `n → -∞` decay like `|z|^n` (so `|z| > B` is required) and
//! those with `n → +∞` decay doubly exponentially; for `B < 1` the roles
//! of the two directions swap and `|z| < B` is required.

use serde::Serialize;

use super::{finite, serialize_complex, AnalyticError, BoundKind, ComplexVal, NumericCheck, EPS};

/// `exp` underflows to zero below this argument.
const UNDERFLOW: f64 = -745.0;
/// Denominators closer than this to zero are poles.
const POLE_DISTANCE: f64 = 1e-12;
/// Agreement required of each functional equation.
const EQUATION_TOLERANCE: f64 = 1e-10;
/// Agreement required between windows `M` and `2M`.
const STABILITY_TOLERANCE: f64 = 1e-12;

/// A positive real base other than 1, stored as its logarithm so that
/// powers and inverses are exact in the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealBase {
    ln: f64,
}

impl RealBase {
    pub fn new(b: f64) -> Result<Self, AnalyticError> {
        if !(b.is_finite() && b > 0.0 && b != 1.0) {
            return Err(AnalyticError::InvalidRealBase(b));
        }
        Ok(RealBase { ln: b.ln() })
    }

    pub fn value(self) -> f64 {
        self.ln.exp()
    }

    /// `B^t`.
    pub fn pow(self, t: i32) -> Result<Self, AnalyticError> {
        if t == 0 {
            return Err(AnalyticError::ZeroStride);
        }
        Ok(RealBase { ln: self.ln * f64::from(t) })
    }

    /// `1/B`.
    pub fn inverse(self) -> Self {
        RealBase { ln: -self.ln }
    }
}

/// `q` in the unit disk, represented by `λ = log q` (principal branch
/// when built from `q`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogQ(pub ComplexVal);

impl LogQ {
    pub fn from_q(q: ComplexVal) -> Result<Self, AnalyticError> {
        finite(q, "q")?;
        let m = q.norm();
        if !(m > 0.0 && m < 1.0) {
            return Err(AnalyticError::QOutsideDisk(m));
        }
        Ok(LogQ(q.ln()))
    }

    pub fn q(self) -> ComplexVal {
        self.0.exp()
    }

    /// `q^w`, as the log `wλ`.
    pub fn power(self, w: f64) -> LogQ {
        LogQ(self.0 * w)
    }
}

/// A windowed evaluation with the magnitudes of its edge terms, so that
/// convergence of the window is observable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BilateralSum {
    #[serde(serialize_with = "serialize_complex")]
    pub value: ComplexVal,
    /// `|term|` at the most negative index.
    pub low_edge: f64,
    /// `|term|` at the most positive index.
    pub high_edge: f64,
    /// Terms below the floating point range, replaced by zero.
    pub clamped: u32,
    /// Estimated rounding error, from the relative error of each exponent.
    pub error_estimate: f64,
}

struct Series {
    base: RealBase,
    x: ComplexVal,
    ln_z: ComplexVal,
    lambda: ComplexVal,
}

enum Term {
    Value { term: ComplexVal, rel_err: f64 },
    Clamped,
}

impl Series {
    fn new(base: RealBase, x: ComplexVal, z: ComplexVal, q: LogQ) -> Result<Self, AnalyticError> {
        finite(x, "x")?;
        finite(z, "z")?;
        finite(q.0, "log q")?;
        if !(q.0.re < 0.0) {
            return Err(AnalyticError::QOutsideDisk(q.0.re.exp()));
        }
        let zm = z.norm();
        let b = base.value();
        let inside = if base.ln > 0.0 { zm > b } else { zm < b };
        if !inside {
            let rel = if base.ln > 0.0 { '>' } else { '<' };
            return Err(AnalyticError::Domain(format!(
                "need |z| {rel} B for convergence, got |z| = {zm}, B = {b}"
            )));
        }
        Ok(Series {
            base,
            x,
            ln_z: z.ln(),
            lambda: q.0,
        })
    }

    /// `z^n q^{B^n} / (1 - x q^{B^n})`, evaluated in log space.
    fn term(&self, n: i64) -> Result<Term, AnalyticError> {
        let nf = n as f64;
        let w = (nf * self.base.ln).exp();
        if w.is_infinite() {
            return Ok(Term::Clamped);
        }
        let e = self.lambda * w;
        let z_part = self.ln_z * nf;
        if z_part.re + e.re < UNDERFLOW {
            return Ok(Term::Clamped);
        }
        let qw = if e.re < UNDERFLOW { ComplexVal::new(0.0, 0.0) } else { e.exp() };
        let denom = ComplexVal::new(1.0, 0.0) - self.x * qw;
        let distance = denom.norm();
        if distance < POLE_DISTANCE {
            return Err(AnalyticError::Pole { index: n, distance });
        }
        let term = (z_part + e).exp() / denom;
        // error in e from w = exp(n ln B) and the products, in z_part from n ln z
        let rel_err = EPS * (z_part.norm() + e.norm() * (nf.abs() * self.base.ln.abs() + 2.0) + 8.0);
        Ok(Term::Value {
            term: finite(term, "bilateral term")?,
            rel_err,
        })
    }

    fn sum(&self, indices: impl Iterator<Item = i64>) -> Result<BilateralSum, AnalyticError> {
        let mut out = BilateralSum {
            value: ComplexVal::new(0.0, 0.0),
            low_edge: 0.0,
            high_edge: 0.0,
            clamped: 0,
            error_estimate: 0.0,
        };
        let mut first = true;
        for n in indices {
            let magnitude = match self.term(n)? {
                Term::Value { term, rel_err } => {
                    out.value += term;
                    out.error_estimate += term.norm() * rel_err;
                    term.norm()
                }
                Term::Clamped => {
                    out.clamped += 1;
                    0.0
                }
            };
            if first {
                out.low_edge = magnitude;
                first = false;
            }
            out.high_edge = magnitude;
        }
        out.error_estimate += EPS * out.value.norm();
        Ok(out)
    }
}

/// `Σ_{n=-M}^{M} z^n q^{B^n} / (1 - x q^{B^n})`.
pub fn bilateral_lhat(
    base: RealBase,
    x: ComplexVal,
    z: ComplexVal,
    q: LogQ,
    window: u32,
) -> Result<BilateralSum, AnalyticError> {
    let m = i64::from(window);
    Series::new(base, x, z, q)?.sum(-m..=m)
}

/// One sample point for the functional equations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BilateralPoint {
    pub base: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub x: ComplexVal,
    #[serde(serialize_with = "serialize_complex")]
    pub z: ComplexVal,
    #[serde(serialize_with = "serialize_complex")]
    pub q: ComplexVal,
    pub r: i32,
    pub t: i32,
}

impl BilateralPoint {
    pub fn new(base: f64, x: (f64, f64), z: (f64, f64), q: (f64, f64), r: i32, t: i32) -> Self {
        let c = |(re, im): (f64, f64)| ComplexVal::new(re, im);
        BilateralPoint {
            base,
            x: c(x),
            z: c(z),
            q: c(q),
            r,
            t,
        }
    }
}

/// Sample points inside the convergence region: real and complex
/// arguments, a non-integer base, negative `q`, and negative `r` and `t`.
pub fn default_bilateral_points() -> Vec<BilateralPoint> {
    vec![
        BilateralPoint::new(2.0, (0.3, 0.0), (3.0, 0.0), (0.4, 0.0), 1, 2),
        BilateralPoint::new(2.0, (-0.5, 0.0), (2.5, 1.0), (0.6, 0.0), 2, 3),
        BilateralPoint::new(3.0, (0.2, 0.1), (4.0, 0.0), (0.3, 0.2), -1, 2),
        BilateralPoint::new(1.5, (0.1, 0.0), (2.5, 0.0), (0.5, 0.0), 1, -1),
        BilateralPoint::new(10.0, (0.5, 0.0), (12.0, -3.0), (0.9, 0.0), 1, 2),
        BilateralPoint::new(2.0, (0.0, 0.0), (-3.0, 0.0), (-0.5, 0.0), 3, -2),
        BilateralPoint::new(4.0, (1.5, 0.0), (0.0, 5.0), (0.0, 0.2), 0, 1),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BilateralCheck {
    pub point: BilateralPoint,
    pub window: u32,
    /// `𝓛̂_{1/B}(x; 1/z, q) = 𝓛̂_B(x; z, q)`.
    pub inversion: NumericCheck,
    /// `z^r 𝓛̂_B(x; z, q^{B^r}) = 𝓛̂_B(x; z, q)`.
    pub shift: NumericCheck,
    /// `z^r 𝓛̂_{B^t}(x; z^t, q^{B^r}) = Σ_{n ≡ r (mod t)} z^n q^{B^n}/(1 - x q^{B^n})`.
    pub congruence: NumericCheck,
    /// Largest `|value(M) - value(2M)|` over every evaluated series.
    pub window_drift: f64,
    pub stable: bool,
    pub passed: bool,
}

/// Checks the three functional equations at `point` with window `M`, and
/// that every series involved moves by less than `1e-12` from `M` to `2M`.
pub fn verify_bilateral_equations(point: &BilateralPoint, window: u32) -> Result<BilateralCheck, AnalyticError> {
    if point.t == 0 {
        return Err(AnalyticError::ZeroStride);
    }
    let base = RealBase::new(point.base)?;
    let q = LogQ::from_q(point.q)?;
    let (x, z, r, t) = (point.x, point.z, point.r, point.t);
    let zr = z.powi(r);
    let shifted_q = q.power((base.ln * f64::from(r)).exp());
    let stride = base.pow(t)?;

    let mut drift: f64 = 0.0;
    let mut eval = |series: &Series, indices: &dyn Fn(i64) -> Vec<i64>| -> Result<ComplexVal, AnalyticError> {
        let m = i64::from(window);
        let small = series.sum(indices(m).into_iter())?;
        let large = series.sum(indices(2 * m).into_iter())?;
        drift = drift.max((small.value - large.value).norm());
        Ok(small.value)
    };
    let symmetric = |m: i64| (-m..=m).collect::<Vec<_>>();

    let reference = eval(&Series::new(base, x, z, q)?, &symmetric)?;
    let inverted = eval(&Series::new(base.inverse(), x, z.inv(), q)?, &symmetric)?;
    let shifted = zr * eval(&Series::new(base, x, z, shifted_q)?, &symmetric)?;
    let strided = zr * eval(&Series::new(stride, x, z.powi(t), shifted_q)?, &symmetric)?;
    let (tr, ta) = (i64::from(r), i64::from(t.unsigned_abs()));
    let class = move |m: i64| {
        let reach = ta * m + tr.abs();
        (-reach..=reach).filter(|n| (n - tr).rem_euclid(ta) == 0).collect::<Vec<_>>()
    };
    let class_sum = eval(&Series::new(base, x, z, q)?, &class)?;

    let check = |lhs, rhs| NumericCheck::new(lhs, rhs, EQUATION_TOLERANCE, BoundKind::Heuristic);
    let inversion = check(inverted, reference);
    let shift = check(shifted, reference);
    let congruence = check(strided, class_sum);
    let stable = drift < STABILITY_TOLERANCE;
    Ok(BilateralCheck {
        point: *point,
        window,
        passed: stable && inversion.passed && shift.passed && congruence.passed,
        inversion,
        shift,
        congruence,
        window_drift: drift,
        stable,
    })
}
