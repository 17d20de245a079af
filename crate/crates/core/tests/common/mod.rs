//! Helpers shared by the CLI test targets.
//!
//! Timings are dropped before fixture comparison and floats are compared to
//! a relative 1e-9 (absolute 1e-12), so fixtures survive libm differences.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case { name: "digits_73", args: &["--format", "json", "digits", "--base", "10", "73"], exit: 0 },
    Case { name: "digits_big", args: &["--format", "json", "digits", "--base", "16", "340282366920938463463374607431768211457"], exit: 0 },
    Case { name: "trace_58_67", args: &["trace", "--base", "10", "58", "67"], exit: 0 },
    Case { name: "trace_ones_b2", args: &["trace", "--base", "2", "1", "1", "1", "1", "1"], exit: 0 },
    Case { name: "verify_two_variable_b3", args: &["--format", "json", "verify", "thm-two-variable", "--base", "3", "--order", "40"], exit: 0 },
    Case {
        name: "verify_perturbed",
        args: &["--format", "json", "verify", "thm-two-variable", "--base", "2", "--order", "40", "--perturb", "13"],
        exit: 1,
    },
    Case { name: "verify_shift_j1", args: &["--format", "json", "verify", "eq-shift-j", "--base", "2", "--order", "40", "--j", "1"], exit: 0 },
    Case { name: "dirichlet_small", args: &["--format", "json", "dirichlet", "--base", "10", "--terms", "10000"], exit: 0 },
    Case { name: "bilateral_point", args: &["--format", "json", "bilateral", "--base", "2", "--z", "3+1i", "--r", "2"], exit: 0 },
    Case {
        name: "verify_all_b3",
        args: &["--format", "json", "verify-all", "--base", "3", "--order", "40", "--terms", "10000", "--seed", "5"],
        exit: 0,
    },
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

pub fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_digitlab")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exited"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

pub fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

pub fn close(a: &Value, b: &Value, path: &str) -> Result<(), String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) if x.is_f64() || y.is_f64() => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            let tol = 1e-9 * x.abs().max(y.abs()) + 1e-12;
            if (x - y).abs() <= tol {
                Ok(())
            } else {
                Err(format!("{path}: {x} vs {y}"))
            }
        }
        (Value::Object(x), Value::Object(y)) => {
            let mut kx: Vec<_> = x.keys().collect();
            let mut ky: Vec<_> = y.keys().collect();
            kx.sort();
            ky.sort();
            if kx != ky {
                return Err(format!("{path}: keys {kx:?} vs {ky:?}"));
            }
            x.iter().try_for_each(|(k, v)| close(v, &y[k], &format!("{path}.{k}")))
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return Err(format!("{path}: length {} vs {}", x.len(), y.len()));
            }
            x.iter().zip(y).enumerate().try_for_each(|(i, (u, v))| close(u, v, &format!("{path}[{i}]")))
        }
        _ if a == b => Ok(()),
        _ => Err(format!("{path}: {a} vs {b}")),
    }
}

/// Runs every fixture case; with `update` the fixtures are rewritten instead.
pub fn check_golden(update: bool) -> Result<(), String> {
    let mut failures = Vec::new();
    for case in CASES {
        let (code, stdout, stderr) = run(case.args);
        if code != case.exit {
            failures.push(format!("{}: exit {code}, expected {}; stderr: {stderr}", case.name, case.exit));
            continue;
        }
        let mut got: Value = serde_json::from_str(&stdout).map_err(|e| format!("{}: {e}", case.name))?;
        strip_timings(&mut got);
        let path = golden_path(case.name);
        if update {
            std::fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").map_err(|e| e.to_string())?;
            continue;
        }
        let text = std::fs::read_to_string(&path).map_err(|_| format!("missing fixture {}", path.display()))?;
        let want: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        if let Err(e) = close(&got, &want, case.name) {
            failures.push(e);
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(format!("golden mismatches:\n{}", failures.join("\n")))
    }
}
