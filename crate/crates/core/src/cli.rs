//! The `digitlab` command line.
//!
//! Output goes to the supplied writers so the whole front end can be driven
//! from tests. Exit codes: 0 when every executed check passed, 1 when any
//! check failed, 2 for usage and domain errors.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::analytic::{
    default_bilateral_points, default_shift_points, parse_complex, verify_bilateral_equations,
    verify_dirichlet_carry, verify_dirichlet_chat, verify_dirichlet_convolution,
    verify_limit_large_base, verify_negative_shift, BilateralPoint, ComplexVal, NumericCheck,
};
use crate::digit_core::{add_with_trace, digit_sum, to_digits, Base, Natural};
use crate::exec::Exec;
use crate::genfun::{verify_with, Divergence, IdentityId, IdentitySpec, Perturbation};
use crate::props::{run_all, Status};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const CATALOG_HELP: &str = "Identity ids:
  exact:   thm-two-variable eq-shift-j cor-chat-ones-2var cor-squared thm-hypergeom
           cor-sB-gf cor-shiftcor cor-chat-ones-gf thm-chat-repeat eq-lambert-transform
  numeric: dir-chat dir-carry dir-convolution dir-limit bilateral-eqs";

#[derive(Parser, Debug)]
#[command(name = "digitlab", version, about = "Exact digit-sum arithmetic and identity verification", after_help = CATALOG_HELP)]
pub struct Cli {
    /// Output format (default: human, except `trace` which defaults to json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest truncation order accepted for series checks.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub max_order: usize,
    /// Largest number of Dirichlet terms accepted.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub max_terms: u64,
    /// Run everything on the current thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Base-B digits (least significant first) and digit sum of N.
    Digits {
        #[arg(long, default_value = "10", value_parser = parse_base)]
        base: Base,
        #[arg(value_parser = parse_natural)]
        n: Natural,
    },
    /// Column-wise addition with every carry recorded.
    Trace {
        #[arg(long, default_value = "10", value_parser = parse_base)]
        base: Base,
        #[arg(required = true, value_parser = parse_natural)]
        summands: Vec<Natural>,
    },
    /// Verify the named identities.
    Verify {
        #[arg(required = true)]
        ids: Vec<String>,
        #[command(flatten)]
        params: CheckParams,
        /// Shift for eq-shift-j (default: every j with B^j <= N).
        #[arg(long)]
        j: Option<u32>,
        /// Cap on z-degrees for cor-squared.
        #[arg(long)]
        z_cap: Option<i64>,
        /// Corrupt the headline left-hand side at this q-exponent.
        #[arg(long)]
        perturb: Option<usize>,
    },
    /// Verify the whole catalog plus the randomized digit-sum suites.
    VerifyAll {
        #[command(flatten)]
        params: CheckParams,
        /// Truncation order for cor-squared, capped at --order.
        #[arg(long, default_value_t = 128)]
        squared_order: usize,
        /// Skip the randomized digit-sum suites.
        #[arg(long)]
        no_props: bool,
    },
    /// Dirichlet-series checks (all four when no id is given).
    Dirichlet {
        ids: Vec<String>,
        #[command(flatten)]
        params: CheckParams,
    },
    /// Functional equations of the bilateral series. Without point options
    /// the built-in sample points are used.
    Bilateral {
        #[arg(long)]
        base: Option<f64>,
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        x: Option<ComplexVal>,
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        z: Option<ComplexVal>,
        #[arg(long, value_parser = parse_complex_arg, allow_hyphen_values = true)]
        q: Option<ComplexVal>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i32>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<i32>,
        #[arg(long, default_value_t = 40)]
        window: u32,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CheckParams {
    #[arg(long, default_value = "10", value_parser = parse_base)]
    pub base: Base,
    /// Truncation order N for exact series checks.
    #[arg(long, default_value_t = 200)]
    pub order: usize,
    /// Dirichlet variable, e.g. 3 or 3+2i.
    #[arg(long, default_value = "3", value_parser = parse_complex_arg, allow_hyphen_values = true)]
    pub s: ComplexVal,
    /// Number of Dirichlet terms.
    #[arg(long, default_value_t = 1_000_000)]
    pub terms: u64,
    /// Bilateral window M.
    #[arg(long, default_value_t = 40)]
    pub window: u32,
    /// Repeated summand for thm-chat-repeat.
    #[arg(long, default_value_t = IdentitySpec::DEFAULT_A)]
    pub a: u64,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_base(s: &str) -> Result<Base, String> {
    let v: u64 = s.parse().map_err(|e| format!("{e}"))?;
    Base::new(v).map_err(|e| e.to_string())
}

fn parse_natural(s: &str) -> Result<Natural, String> {
    s.parse::<Natural>().map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

fn parse_complex_arg(s: &str) -> Result<ComplexVal, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

/// Usage or domain error: reported on stderr with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Naturals as JSON numbers when they fit in `u64`, else as decimal strings.
fn ser_natural<S: Serializer>(n: &Natural, s: S) -> Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.collect_str(n),
    }
}

fn ser_naturals<S: Serializer>(ns: &[Natural], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ns.iter().map(|n| match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }))
}

/// One line of a verification report.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub id: String,
    pub kind: &'static str,
    pub base: Value,
    pub order: u64,
    pub params: Value,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_divergence: Option<Divergence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_kind: Option<crate::analytic::BoundKind>,
    pub elapsed_ms: f64,
}

impl Record {
    fn numeric(id: &str, base: Value, order: u64, params: Value, check: &NumericCheck, start: Instant) -> Self {
        Record {
            id: id.to_string(),
            kind: "numeric",
            base,
            order,
            params,
            passed: check.passed,
            first_divergence: None,
            abs_error: Some(check.abs_error),
            bound: Some(check.bound),
            bound_kind: Some(check.bound_kind),
            elapsed_ms: ms(start),
        }
    }
}

fn ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn complex_json(z: ComplexVal) -> Value {
    json!([z.re, z.im])
}

fn point_json(p: &BilateralPoint) -> Value {
    json!({
        "x": complex_json(p.x),
        "z": complex_json(p.z),
        "q": complex_json(p.q),
        "r": p.r,
        "t": p.t,
    })
}

/// Work items that `verify` and `verify-all` fan out.
#[derive(Clone, Debug)]
enum Job {
    Exact(IdentitySpec, Option<Perturbation>),
    Dirichlet(IdentityId, Base, ComplexVal, u64),
    Bilateral(BilateralPoint, u32),
    NegativeShift,
    Props(Base, u64),
}

fn run_job(job: &Job, exec: Exec) -> Result<Vec<Record>, UsageError> {
    let start = Instant::now();
    match job {
        Job::Exact(spec, perturbation) => {
            let report = verify_with(spec, *perturbation, exec)?;
            let mut params = serde_json::Map::new();
            params.insert("equations".into(), json!(report.equations));
            if spec.id == IdentityId::ChatRepeat {
                params.insert("a".into(), json!(spec.a));
            }
            if let Some(j) = spec.j {
                params.insert("j".into(), json!(j));
            }
            if let Some(cap) = spec.z_cap {
                params.insert("z_cap".into(), json!(cap));
            }
            if let Some(p) = perturbation {
                params.insert("perturb".into(), json!(p.exponent));
            }
            Ok(vec![Record {
                id: spec.id.to_string(),
                kind: "exact",
                base: json!(spec.base.get()),
                order: spec.order as u64,
                params: Value::Object(params),
                passed: report.passed,
                first_divergence: report.first_divergence,
                abs_error: None,
                bound: None,
                bound_kind: None,
                elapsed_ms: ms(start),
            }])
        }
        Job::Dirichlet(id, base, s, terms) => {
            let params = json!({ "s": complex_json(*s) });
            let check = match id {
                IdentityId::DirichletChat => verify_dirichlet_chat(*base, *s, *terms, exec)?,
                IdentityId::DirichletCarry => verify_dirichlet_carry(*base, *s, *terms, exec)?,
                IdentityId::DirichletConvolution => verify_dirichlet_convolution(*base, *s, *terms, exec)?,
                IdentityId::DirichletLimit => {
                    let bases = [*base, Base::new(terms + 1)?, Base::new(terms.saturating_mul(10))?];
                    let report = verify_limit_large_base(*s, &bases, *terms, exec)?;
                    let mut record = Record::numeric(id.as_str(), json!(base.get()), *terms, params, &report.check, start);
                    record.passed = report.passed;
                    record.params["bases"] = json!(report.entries);
                    return Ok(vec![record]);
                }
                other => unreachable!("{other} is not a Dirichlet check"),
            };
            Ok(vec![Record::numeric(id.as_str(), json!(base.get()), *terms, params, &check, start)])
        }
        Job::Bilateral(point, window) => {
            let r = verify_bilateral_equations(point, *window)?;
            let mut params = point_json(point);
            params["window_drift"] = json!(r.window_drift);
            params["stable"] = json!(r.stable);
            let mut records = Vec::new();
            for (label, check) in [("inversion", &r.inversion), ("shift", &r.shift), ("congruence", &r.congruence)] {
                let mut p = params.clone();
                p["equation"] = json!(label);
                let mut record = Record::numeric("bilateral-eqs", json!(point.base), u64::from(*window), p, check, start);
                record.passed = check.passed && r.stable;
                records.push(record);
            }
            Ok(records)
        }
        Job::NegativeShift => default_shift_points()
            .iter()
            .map(|p| {
                let start = Instant::now();
                let check = verify_negative_shift(p)?;
                let params = json!({ "j": p.j, "z": complex_json(p.z), "q": complex_json(p.q) });
                Ok(Record::numeric("eq-shift-j", json!(p.base.get()), 0, params, &check, start))
            })
            .collect(),
        Job::Props(base, seed) => Ok(run_all(*base, *seed, exec)
            .into_iter()
            .map(|r| Record {
                id: r.id.as_str().to_string(),
                kind: "property",
                base: json!(base.get()),
                order: r.cases,
                params: json!({
                    "seed": r.seed,
                    "failures": r.failures,
                    "status": r.status,
                    "first_failure": r.first_failure,
                }),
                passed: r.status != Status::Failed,
                first_divergence: None,
                abs_error: None,
                bound: None,
                bound_kind: None,
                elapsed_ms: r.elapsed.as_secs_f64() * 1e3,
            })
            .collect()),
    }
}

fn check_limits(cli: &Cli, params: &CheckParams) -> Result<(), UsageError> {
    if params.order == 0 {
        return Err(UsageError("--order must be at least 1".into()));
    }
    if params.order > cli.max_order {
        return Err(UsageError(format!(
            "--order {} exceeds the ceiling {} (raise it with --max-order)",
            params.order, cli.max_order
        )));
    }
    if params.terms > cli.max_terms {
        return Err(UsageError(format!(
            "--terms {} exceeds the ceiling {} (raise it with --max-terms)",
            params.terms, cli.max_terms
        )));
    }
    Ok(())
}

fn exact_spec(id: IdentityId, params: &CheckParams, order: usize) -> IdentitySpec {
    IdentitySpec {
        a: params.a,
        ..IdentitySpec::new(id, params.base, order)
    }
}

fn job_for(id: IdentityId, params: &CheckParams) -> Vec<Job> {
    match id {
        IdentityId::BilateralEquations => default_bilateral_points()
            .into_iter()
            .map(|p| Job::Bilateral(p, params.window))
            .collect(),
        id if id.is_exact() => vec![Job::Exact(exact_spec(id, params, params.order), None)],
        id => vec![Job::Dirichlet(id, params.base, params.s, params.terms)],
    }
}

fn run_jobs(jobs: &[Job], exec: Exec) -> Result<Vec<Record>, UsageError> {
    let results = exec.map_slice(jobs, |job| run_job(job, exec));
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    // stable: records sharing an id keep job order
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(records)
}

fn parse_ids(ids: &[String]) -> Result<Vec<IdentityId>, UsageError> {
    ids.iter().map(|s| s.parse::<IdentityId>().map_err(UsageError::from)).collect()
}

fn emit_records(records: &[Record], format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, records)?;
            writeln!(out)
        }
        Format::Human => {
            for r in records {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                write!(out, "{mark}  {:<26} B={:<6} N={:<8}", r.id, r.base.to_string(), r.order)?;
                if let (Some(err), Some(bound)) = (r.abs_error, r.bound) {
                    let kind = serde_json::to_value(r.bound_kind).unwrap_or(Value::Null);
                    write!(out, " |error|={err:.3e} bound={bound:.3e} ({})", kind.as_str().unwrap_or("-"))?;
                }
                if r.kind == "property" {
                    write!(out, " {} failures, {}", r.params["failures"], r.params["status"].as_str().unwrap_or(""))?;
                }
                if let Some(d) = &r.first_divergence {
                    write!(out, " first divergence at q^{} in \"{}\": lhs {} vs rhs {}", d.exponent, d.equation, d.lhs, d.rhs)?;
                }
                writeln!(out, " ({:.1} ms)", r.elapsed_ms)?;
            }
            let failed = records.iter().filter(|r| !r.passed).count();
            writeln!(out, "{} checks, {} failed", records.len(), failed)
        }
    }
}

#[derive(Serialize)]
struct DigitsOut<'a> {
    #[serde(serialize_with = "ser_natural")]
    n: &'a Natural,
    base: u64,
    digits: &'a [u64],
    #[serde(serialize_with = "ser_natural")]
    digit_sum: &'a Natural,
}

#[derive(Serialize)]
struct TraceOut<'a> {
    base: u64,
    #[serde(serialize_with = "ser_naturals")]
    summands: &'a [Natural],
    #[serde(serialize_with = "ser_naturals")]
    carries: &'a [Natural],
    #[serde(serialize_with = "ser_natural")]
    carry_sum: &'a Natural,
    #[serde(serialize_with = "ser_natural")]
    beta: &'a Natural,
    #[serde(serialize_with = "ser_natural")]
    correction: &'a Natural,
    #[serde(serialize_with = "ser_natural")]
    total: &'a Natural,
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool, UsageError> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let human = cli.format.unwrap_or(Format::Human) == Format::Human;
    let records = match &cli.command {
        Command::Digits { base, n } => {
            let d = to_digits(n, *base);
            let s = digit_sum(n, *base);
            if human {
                writeln!(out, "{n} in base {base}: digits {:?} (least significant first), digit sum {s}", d.digits())?;
            } else {
                let body = DigitsOut { n, base: base.get(), digits: d.digits(), digit_sum: &s };
                writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
            }
            return Ok(true);
        }
        Command::Trace { base, summands } => {
            let t = add_with_trace(summands, *base)?;
            if cli.format == Some(Format::Human) {
                writeln!(out, "summands    {summands:?}", summands = t.summands.iter().map(|v| v.to_string()).collect::<Vec<_>>())?;
                writeln!(out, "carries     {:?}", t.column_carries.iter().map(|v| v.to_string()).collect::<Vec<_>>())?;
                writeln!(out, "carry sum   {}", t.carry_sum)?;
                writeln!(out, "beta        {}", t.terminal_carry)?;
                writeln!(out, "correction  {}", t.correction)?;
                writeln!(out, "total       {}", t.total)?;
            } else {
                let body = TraceOut {
                    base: base.get(),
                    summands: &t.summands,
                    carries: &t.column_carries,
                    carry_sum: &t.carry_sum,
                    beta: &t.terminal_carry,
                    correction: &t.correction,
                    total: &t.total,
                };
                writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
            }
            return Ok(true);
        }
        Command::Verify { ids, params, j, z_cap, perturb } => {
            check_limits(cli, params)?;
            let ids = parse_ids(ids)?;
            let mut jobs = Vec::new();
            for id in ids {
                if id.is_exact() {
                    let spec = IdentitySpec {
                        j: *j,
                        z_cap: *z_cap,
                        ..exact_spec(id, params, params.order)
                    };
                    jobs.push(Job::Exact(spec, perturb.map(|exponent| Perturbation { exponent })));
                } else if perturb.is_some() {
                    return Err(UsageError(format!("--perturb applies to exact identities only, not {id}")));
                } else {
                    jobs.extend(job_for(id, params));
                }
            }
            run_jobs(&jobs, exec)?
        }
        Command::VerifyAll { params, squared_order, no_props } => {
            check_limits(cli, params)?;
            let mut jobs: Vec<Job> = Vec::new();
            for id in IdentityId::ALL {
                if id == IdentityId::Squared {
                    let order = params.order.min(*squared_order).max(1);
                    jobs.push(Job::Exact(exact_spec(id, params, order), None));
                } else {
                    jobs.extend(job_for(id, params));
                }
            }
            jobs.push(Job::NegativeShift);
            if !no_props {
                jobs.push(Job::Props(params.base, params.seed));
            }
            run_jobs(&jobs, exec)?
        }
        Command::Dirichlet { ids, params } => {
            check_limits(cli, params)?;
            let ids = if ids.is_empty() {
                vec![
                    IdentityId::DirichletChat,
                    IdentityId::DirichletCarry,
                    IdentityId::DirichletConvolution,
                    IdentityId::DirichletLimit,
                ]
            } else {
                parse_ids(ids)?
            };
            let mut jobs = Vec::new();
            for id in ids {
                match id {
                    IdentityId::DirichletChat
                    | IdentityId::DirichletCarry
                    | IdentityId::DirichletConvolution
                    | IdentityId::DirichletLimit => jobs.push(Job::Dirichlet(id, params.base, params.s, params.terms)),
                    other => return Err(UsageError(format!("{other} is not a Dirichlet check"))),
                }
            }
            run_jobs(&jobs, exec)?
        }
        Command::Bilateral { base, x, z, q, r, t, window } => {
            let custom = base.is_some() || x.is_some() || z.is_some() || q.is_some() || r.is_some() || t.is_some();
            let points = if custom {
                let d = default_bilateral_points()[0];
                vec![BilateralPoint {
                    base: base.unwrap_or(d.base),
                    x: x.unwrap_or(d.x),
                    z: z.unwrap_or(d.z),
                    q: q.unwrap_or(d.q),
                    r: r.unwrap_or(d.r),
                    t: t.unwrap_or(d.t),
                }]
            } else {
                default_bilateral_points()
            };
            let jobs: Vec<Job> = points.into_iter().map(|p| Job::Bilateral(p, *window)).collect();
            run_jobs(&jobs, exec)?
        }
    };
    emit_records(&records, cli.format.unwrap_or(Format::Human), out)?;
    Ok(records.iter().all(|r| r.passed))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("digitlab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn digits_example() {
        let (code, out, _) = run_str(&["digits", "--base", "10", "73"]);
        assert_eq!(code, 0);
        assert!(out.contains("[3, 7]") && out.contains("digit sum 10"), "{out}");
    }

    #[test]
    fn trace_defaults_to_json() {
        let (code, out, _) = run_str(&["trace", "--base", "10", "58", "67"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["carries"], json!([1, 1]));
        assert_eq!(v["carry_sum"], json!(2));
        assert_eq!(v["beta"], json!(1));
        assert_eq!(v["correction"], json!(18));
        assert_eq!(v["total"], json!(125));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["verify", "thm-nope"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["digits", "--base", "1", "5"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "thm-two-variable", "--order", "20000"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["dirichlet", "dir-chat", "--s", "2"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_PASS);
    }

    #[test]
    fn perturbation_flips_exit_code() {
        let (ok, ..) = run_str(&["verify", "thm-two-variable", "--order", "50"]);
        assert_eq!(ok, EXIT_PASS);
        let (code, out, _) = run_str(&["--format", "json", "verify", "thm-two-variable", "--order", "50", "--perturb", "13"]);
        assert_eq!(code, EXIT_FAIL);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["first_divergence"]["exponent"], json!(13));
    }
}
