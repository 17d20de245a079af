//! Acceptance suite: one PASS or FAIL line per criterion, nonzero exit if
//! any criterion fails. Runs without the test harness so every line is
//! printed.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use digitlab::analytic::{
    default_bilateral_points, hurwitz_zeta, riemann_zeta, verify_bilateral_equations, verify_dirichlet_carry,
    verify_dirichlet_chat,
};
use digitlab::digit_core::{digit_sum_u64, Base};
use digitlab::exec::Exec;
use digitlab::genfun::{exponent_series, two_variable_product, verify_with, IdentityId, IdentitySpec, Perturbation};
use digitlab::props::{run_property, Property, Status};

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn base(b: u64) -> Base {
    Base::new(b).expect("valid base")
}

fn within(elapsed: Duration, limit_secs: u64, what: &str) -> Result<(), String> {
    if elapsed <= Duration::from_secs(limit_secs) {
        Ok(())
    } else {
        Err(format!("{what} took {:.1}s, limit {limit_secs}s", elapsed.as_secs_f64()))
    }
}

/// Digit-sum identities on random and exhaustive inputs for B in {2,3,10,16}.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for b in [2, 3, 10, 16] {
        for p in Property::ALL {
            let r = run_property(p, base(b), 0, None, Exec::default());
            if r.status == Status::Failed {
                return Err(format!("{} B={b}: {} failures, first {:?}", p.as_str(), r.failures, r.first_failure));
            }
            let required = match p {
                Property::Additivity => 10_000,
                Property::Recursion | Property::Multiplication | Property::RepeatRecursion => 1_000,
                Property::RepeatCarry => 200,
                _ => 0,
            };
            if r.cases < required {
                return Err(format!("{} B={b}: only {} cases", p.as_str(), r.cases));
            }
            cases += r.cases;
        }
    }
    within(start.elapsed(), 60, "suite")?;
    Ok(format!("{cases} cases, 0 failures"))
}

/// Every exact identity for B in {2,3,5,10} at N = 200 (128 for cor-squared).
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for b in [2, 3, 5, 10] {
        for id in IdentityId::exact() {
            let order = if id == IdentityId::Squared { 128 } else { 200 };
            let spec = IdentitySpec::new(id, base(b), order);
            let r = verify_with(&spec, None, Exec::default()).map_err(|e| format!("{id} B={b}: {e}"))?;
            if let Some(d) = r.first_divergence {
                return Err(format!("{id} B={b}: diverges at q^{} in {}", d.exponent, d.equation));
            }
            checked += r.equations;
        }
    }
    within(start.elapsed(), 300, "catalog")?;
    Ok(format!("{checked} equations coefficient-exact"))
}

/// A +1 on one digit-sum value in the left-hand side is caught at that
/// exponent, and the same holds for the headline equation of every identity.
fn criterion_3() -> Outcome {
    let order = 200;
    for b in [2, 3, 5, 10] {
        let bb = base(b);
        let product = two_variable_product(bb, order, Exec::default()).map_err(|e| e.to_string())?;
        for bump in [0usize, 1, 13, 64, 199, 200] {
            let lhs = exponent_series(order, Exec::default(), |n| {
                digit_sum_u64(n, bb) as i64 + i64::from(n as usize == bump)
            });
            let found = lhs.first_difference(&product).map_err(|e| e.to_string())?.map(|d| d.0);
            if found != Some(bump) {
                return Err(format!("B={b}: bump at q^{bump} reported at {found:?}"));
            }
        }
    }
    for id in IdentityId::exact() {
        for exponent in [5usize, 37] {
            let spec = IdentitySpec::new(id, base(3), 64);
            let r = verify_with(&spec, Some(Perturbation { exponent }), Exec::default()).map_err(|e| e.to_string())?;
            let at = r.first_divergence.map(|d| d.exponent);
            if at != Some(exponent) {
                return Err(format!("{id}: perturbation at q^{exponent} reported at {at:?}"));
            }
        }
    }
    Ok("every perturbation reported at its exponent".into())
}

/// `(B, s, (B-1)/(B^s-1) ζ(s), carry closed form)`, from mpmath at 30 digits.
const DIRICHLET_CASES: [(u64, f64, f64, f64); 2] = [
    (10, 3.0, 0.010829341469906254823, 0.0088526729101925558864),
    (2, 4.0, 0.072154882247409212768, 0.093689435777701115427),
];

/// dir-chat at N = 10^6 against the rigorous tail bound and 1e-4.
fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (b, s, closed, _) in DIRICHLET_CASES {
        let r = verify_dirichlet_chat(base(b), c(s, 0.0), 1_000_000, Exec::default()).map_err(|e| e.to_string())?;
        if !r.passed || r.abs_error >= 1e-4 {
            return Err(format!("B={b} s={s}: error {:e}, bound {:e}", r.abs_error, r.bound));
        }
        if (r.rhs.re - closed).abs() > 1e-15 {
            return Err(format!("B={b} s={s}: closed form {} vs oracle {closed}", r.rhs.re));
        }
        worst = worst.max(r.abs_error);
    }
    within(start.elapsed(), 60, "partial sums")?;
    Ok(format!("max error {worst:.2e}"))
}

/// dir-carry at N = 10^6 against the rigorous tail bound.
fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for (b, s, _, closed) in DIRICHLET_CASES {
        let r = verify_dirichlet_carry(base(b), c(s, 0.0), 1_000_000, Exec::default()).map_err(|e| e.to_string())?;
        if !r.passed {
            return Err(format!("B={b} s={s}: error {:e}, bound {:e}", r.abs_error, r.bound));
        }
        if (r.rhs.re - closed).abs() > 1e-14 {
            return Err(format!("B={b} s={s}: closed form {} vs oracle {closed}", r.rhs.re));
        }
        worst = worst.max(r.abs_error / r.bound);
        if r.bound > 1e-5 {
            return Err(format!("B={b} s={s}: bound {:e} is looser than the tail", r.bound));
        }
    }
    Ok(format!("max error/bound {worst:.6}"))
}

/// Zeta kernels against closed forms and direct summation.
fn criterion_6() -> Outcome {
    let pi2 = std::f64::consts::PI.powi(2);
    let z2 = riemann_zeta(c(2.0, 0.0)).map_err(|e| e.to_string())?;
    if (z2 - c(pi2 / 6.0, 0.0)).norm() > 1e-12 {
        return Err(format!("zeta(2) = {z2}"));
    }
    // Σ_{n<K} (n+1/2)^{-2} with the Euler-Maclaurin tail through 1/a^3
    let k = 2_000_000u64;
    let head: f64 = (0..k).rev().map(|n| (n as f64 + 0.5).powi(-2)).sum();
    let a = k as f64 + 0.5;
    let direct = head + 1.0 / a + 0.5 / (a * a) + 1.0 / (6.0 * a * a * a);
    let h = hurwitz_zeta(c(2.0, 0.0), 0.5).map_err(|e| e.to_string())?;
    if (h.re - direct).abs() > 1e-10 || h.im != 0.0 {
        return Err(format!("zeta(2, 1/2) = {h}, direct {direct}"));
    }
    let points = [
        c(1.5, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.5, 0.0), c(10.0, 0.0),
        c(2.0, 1.0), c(3.0, -7.5), c(1.6, 20.0), c(5.0, 3.0), c(2.5, -40.0),
    ];
    let mut worst: f64 = 0.0;
    for s in points {
        let gap = (hurwitz_zeta(s, 1.0).map_err(|e| e.to_string())? - riemann_zeta(s).map_err(|e| e.to_string())?).norm();
        if gap > 1e-13 {
            return Err(format!("hurwitz(s,1) vs riemann(s) at s={s}: {gap:e}"));
        }
        worst = worst.max(gap);
    }
    Ok(format!("hurwitz(s,1) vs riemann(s) max gap {worst:.1e}"))
}

/// The three bilateral functional equations at every sample point.
fn criterion_7() -> Outcome {
    let points = default_bilateral_points();
    if points.len() < 5 {
        return Err(format!("only {} sample points", points.len()));
    }
    let mut drift: f64 = 0.0;
    for p in &points {
        let r = verify_bilateral_equations(p, 40).map_err(|e| format!("{p:?}: {e}"))?;
        for (name, check) in [("inversion", r.inversion), ("shift", r.shift), ("congruence", r.congruence)] {
            if !(check.passed && check.abs_error <= 1e-10) {
                return Err(format!("{name} at {p:?}: error {:e}", check.abs_error));
            }
        }
        if !(r.stable && r.window_drift < 1e-12) {
            return Err(format!("window drift {:e} at {p:?}", r.window_drift));
        }
        drift = drift.max(r.window_drift);
    }
    Ok(format!("{} points, max window drift {drift:.1e}", points.len()))
}

/// Exit codes, golden fixtures, and the full default catalog run.
fn criterion_8() -> Outcome {
    common::check_golden(false)?;
    let expectations: [(&[&str], i32); 4] = [
        (&["verify", "thm-two-variable", "--order", "50", "--perturb", "7"], 1),
        (&["verify", "no-such-identity"], 2),
        (&["verify-all", "--order", "0"], 2),
        (&["dirichlet", "dir-chat", "--s", "2"], 2),
    ];
    for (args, want) in expectations {
        let (code, _, _) = common::run(args);
        if code != want {
            return Err(format!("{args:?} exited {code}, expected {want}"));
        }
    }
    let start = Instant::now();
    let (code, stdout, stderr) = common::run(&["--format", "json", "verify-all"]);
    let elapsed = start.elapsed();
    if code != 0 {
        return Err(format!("default verify-all exited {code}: {stderr}"));
    }
    let records: Vec<serde_json::Value> = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
    if records.iter().any(|r| r["passed"] != true) {
        return Err("default verify-all reported a failing record with exit 0".into());
    }
    within(elapsed, 600, "default verify-all")?;
    Ok(format!("{} records, default catalog in {:.1}s", records.len(), elapsed.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("digit-sum identities, randomized and exhaustive", criterion_1),
        ("generating-function catalog, coefficient-exact", criterion_2),
        ("mutation sensitivity", criterion_3),
        ("dir-chat at N = 10^6", criterion_4),
        ("dir-carry at N = 10^6", criterion_5),
        ("zeta kernels", criterion_6),
        ("bilateral functional equations", criterion_7),
        ("CLI contract", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
