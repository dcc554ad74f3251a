//! Command-line front end. [`run`] parses arguments, writes the report to
//! `out` and returns the process exit code: 0 on success, 1 when a
//! verification check fails, 2 on bad usage.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::arith::{parse_rat, Basis, Poly, Rat, Real};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::identities::{run_suite, IdentityResult, SuiteConfig};
use crate::numerics::{integral_suite, IntegralSuiteConfig, VerifyReport, DEFAULT_TOLERANCE};
use crate::reduction::{reduce_sum, y_levels, y_power, y_rising, SumKind};
use crate::sequences::{table, SeqKind};
use crate::transforms::TransformKind;

pub const DEFAULT_MAX_N: u32 = 500;
pub const MAX_N_ENV: &str = "FACSUM_MAX_N";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "facsum",
    version,
    about = "Exact summation reduction for binomial and Stirling triangles"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Relative tolerance for numeric checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE, allow_hyphen_values = true)]
    tol: Real,

    /// Print intermediate reduction vectors.
    #[arg(long, global = true)]
    trace: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rows 0..=n of a triangle.
    Table(TableArgs),
    /// Row sum of a triangle, optionally weighted by x^k or x^(k rising).
    Sum(SumArgs),
    /// Rising or falling factorial transform of a power-basis polynomial.
    Transform(TransformArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TableArgs {
    /// binomial, stirling1, stirling2, rstirling1 or rstirling2
    kind: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightArg {
    Power,
    Rising,
}

#[derive(Debug, Args)]
struct SumArgs {
    /// binomial, stirling1 or stirling2
    kind: String,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    n0: u32,
    #[arg(long, value_enum)]
    weight: Option<WeightArg>,
    /// Exact rational, "p/q" or an integer.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformOp {
    Rft,
    Fft,
}

#[derive(Debug, Args)]
struct TransformArgs {
    op: TransformOp,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    power: i32,
    /// Power-basis coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Integrals,
    Identities,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    suite: Suite,
}

/// Either a usage problem (exit 2) or an I/O failure while writing.
enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> std::result::Result<bool, Failure> {
    match &cli.command {
        Command::Table(a) => cmd_table(a, cli.format, out).map(|()| true),
        Command::Sum(a) => cmd_sum(a, cli.format, cli.trace, out).map(|()| true),
        Command::Transform(a) => cmd_transform(a, cli.format, out).map(|()| true),
        Command::Verify(a) => cmd_verify(a.suite, cli.tol, cli.format, out),
    }
}

fn max_n() -> std::result::Result<u32, Failure> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{MAX_N_ENV} must be a non-negative integer, got '{v}'"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn cmd_table(
    a: &TableArgs,
    format: OutputFormat,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let kind: SeqKind = a.kind.parse()?;
    let r = match (kind.is_r_variant(), a.r) {
        (true, Some(r)) => r,
        (true, None) => return Err(Failure::Usage(format!("{kind} needs --r"))),
        (false, None) => 0,
        (false, Some(_)) => return Err(Failure::Usage(format!("{kind} takes no --r"))),
    };
    let cap = max_n()?;
    if a.n > cap {
        return Err(Failure::Usage(format!(
            "n={} exceeds the cap {cap} (set {MAX_N_ENV} to raise it)",
            a.n
        )));
    }
    let t = table(kind, r);
    let rows = (0..=a.n).map(|n| t.row(n).iter().map(ToString::to_string).collect::<Vec<_>>());
    match format {
        OutputFormat::Text => {
            for row in rows {
                writeln!(out, "{}", row.join(" "))?;
            }
        }
        OutputFormat::Json => {
            for (n, row) in rows.enumerate() {
                writeln!(
                    out,
                    "{}",
                    json!({ "kind": kind.to_string(), "r": r, "n": n, "row": row })
                )?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "k", "value"])?;
            for (n, row) in rows.enumerate() {
                for (k, v) in row.iter().enumerate() {
                    w.write_record([n.to_string(), k.to_string(), v.clone()])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_sum(
    a: &SumArgs,
    format: OutputFormat,
    trace: bool,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let kind: SumKind = a.kind.parse()?;
    let rec = kind.recurrence();
    let x = a.x.as_deref().map(parse_rat).transpose()?;
    let (value, steps, step_name) = match (a.weight, x) {
        (None, None) => {
            let (value, tr) = reduce_sum(&rec, a.n, a.n0)?;
            (value, tr.steps, "c")
        }
        (None, Some(_)) => return Err(Failure::Usage("--x needs --weight".into())),
        (Some(_), None) => return Err(Failure::Usage("--weight needs --x".into())),
        (Some(w), Some(x)) => {
            let (value, basis, name) = match w {
                WeightArg::Power => (y_power(&rec, a.n, a.n0, &x)?, Basis::Power, "Y"),
                WeightArg::Rising => (y_rising(&rec, a.n, a.n0, &x)?, Basis::Rising, "y"),
            };
            let levels = y_levels(&rec, a.n, a.n - a.n0, a.n0, &x, basis)?;
            (value, levels.into_iter().skip(1).collect(), name)
        }
    };
    let join = |v: &[Rat]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    match format {
        OutputFormat::Text => {
            if trace {
                for (s, step) in steps.iter().enumerate() {
                    writeln!(out, "{step_name}_{}: {}", s + 1, join(step).join(" "))?;
                }
            }
            writeln!(out, "{value}")?;
        }
        OutputFormat::Json => {
            let mut obj = Map::new();
            obj.insert("kind".into(), json!(kind.to_string()));
            obj.insert("n".into(), json!(a.n));
            obj.insert("n0".into(), json!(a.n0));
            if let (Some(w), Some(x)) = (a.weight, &a.x) {
                obj.insert("weight".into(), json!(format!("{w:?}").to_lowercase()));
                obj.insert("x".into(), json!(parse_rat(x)?.to_string()));
            }
            obj.insert("value".into(), json!(value.to_string()));
            if trace {
                obj.insert(
                    "trace".into(),
                    json!(steps.iter().map(|s| join(s)).collect::<Vec<_>>()),
                );
            }
            writeln!(out, "{}", Value::Object(obj))?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["kind", "n", "n0", "value"])?;
            w.write_record([
                kind.to_string(),
                a.n.to_string(),
                a.n0.to_string(),
                value.to_string(),
            ])?;
            if trace {
                w.write_record(["step", "values", "", ""])?;
                for (s, step) in steps.iter().enumerate() {
                    w.write_record([
                        format!("{step_name}_{}", s + 1),
                        join(step).join(" "),
                        String::new(),
                        String::new(),
                    ])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Comma-separated exact rationals.
fn parse_coeffs(s: &str) -> Result<Poly> {
    let coeffs = s
        .split(',')
        .map(|c| parse_rat(c.trim()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::power(coeffs))
}

fn cmd_transform(
    a: &TransformArgs,
    format: OutputFormat,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let p = parse_coeffs(&a.coeffs)?;
    let kind = match a.op {
        TransformOp::Rft => TransformKind::Rft(a.power),
        TransformOp::Fft => TransformKind::new_fft(a.power)?,
    };
    let q = kind.apply(&p)?;
    match format {
        OutputFormat::Text => writeln!(out, "{q}")?,
        OutputFormat::Json => {
            let coeffs: Vec<String> = q.coeffs().iter().map(ToString::to_string).collect();
            let op = format!("{:?}", a.op).to_lowercase();
            writeln!(
                out,
                "{}",
                json!({ "op": op, "power": a.power, "input": p.to_string(), "coeffs": coeffs })
            )?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["k", "coeff"])?;
            for (k, c) in q.coeffs().iter().enumerate() {
                w.write_record([k.to_string(), c.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// A verification record in the shape shared by both suites.
struct Record {
    id: String,
    params: Vec<(String, String)>,
    exact: String,
    numeric: Value,
    abs_error: Value,
    rel_error: Value,
    passed: bool,
    tolerance: Option<Real>,
    printed_variant: Option<String>,
    note: Option<String>,
}

fn real_json(x: Real) -> Value {
    // NaN and infinities become null.
    json!(x)
}

fn real_text(v: &Value) -> String {
    match v {
        Value::Null => "nan".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl From<VerifyReport> for Record {
    fn from(r: VerifyReport) -> Self {
        Record {
            id: r.label,
            params: r.params,
            exact: r.exact_value.to_string(),
            numeric: real_json(r.numeric_value),
            abs_error: real_json(r.abs_error),
            rel_error: real_json(r.rel_error),
            passed: r.passed,
            tolerance: Some(r.tolerance),
            printed_variant: None,
            note: r.note,
        }
    }
}

impl From<IdentityResult> for Record {
    fn from(r: IdentityResult) -> Self {
        let diff = (&r.lhs - &r.rhs).abs();
        let rel = if r.rhs.is_zero() {
            diff.clone()
        } else {
            &diff / r.rhs.abs()
        };
        Record {
            id: r.identity_id,
            params: r.parameters,
            exact: r.rhs.to_string(),
            numeric: json!(r.lhs.to_string()),
            abs_error: json!(diff.to_string()),
            rel_error: json!(rel.to_string()),
            passed: r.passed,
            tolerance: None,
            printed_variant: r.printed_variant_lhs.map(|v| v.to_string()),
            note: (!r.note.is_empty()).then_some(r.note),
        }
    }
}

impl Record {
    fn params_flat(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn to_json(&self) -> Value {
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        let mut obj = Map::new();
        obj.insert("id".into(), json!(self.id));
        obj.insert("params".into(), Value::Object(params));
        obj.insert("exact".into(), json!(self.exact));
        obj.insert("numeric".into(), self.numeric.clone());
        obj.insert("abs_error".into(), self.abs_error.clone());
        obj.insert("rel_error".into(), self.rel_error.clone());
        obj.insert("passed".into(), json!(self.passed));
        if let Some(t) = self.tolerance {
            obj.insert("tolerance".into(), json!(t));
        }
        if let Some(v) = &self.printed_variant {
            obj.insert("printed_variant".into(), json!(v));
        }
        if let Some(n) = &self.note {
            obj.insert("note".into(), json!(n));
        }
        Value::Object(obj)
    }

    fn to_text(&self) -> String {
        let mut line = format!(
            "{} {} {} exact={} numeric={} rel_error={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" "),
            self.exact,
            real_text(&self.numeric),
            real_text(&self.rel_error),
        );
        if let Some(v) = &self.printed_variant {
            line.push_str(&format!(" printed_variant={v}"));
        }
        if let Some(n) = &self.note {
            line.push_str(&format!(" note=\"{n}\""));
        }
        line
    }
}

fn cmd_verify(
    suite: Suite,
    tol: Real,
    format: OutputFormat,
    out: &mut dyn Write,
) -> std::result::Result<bool, Failure> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Failure::Usage(format!(
            "--tol must be a positive finite number, got {tol}"
        )));
    }
    let exec = Exec::default();
    let mut records: Vec<Record> = Vec::new();
    if matches!(suite, Suite::Integrals | Suite::All) {
        let config = IntegralSuiteConfig::default().with_tolerance(tol);
        records.extend(integral_suite(&config, exec).into_iter().map(Record::from));
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        records.extend(
            run_suite(&SuiteConfig::default(), exec)
                .into_iter()
                .map(Record::from),
        );
    }
    let failed = records.iter().filter(|r| !r.passed).count();
    match format {
        OutputFormat::Text => {
            for r in &records {
                writeln!(out, "{}", r.to_text())?;
            }
            writeln!(out, "summary: {} checks, {} failed", records.len(), failed)?;
        }
        OutputFormat::Json => {
            for r in &records {
                writeln!(out, "{}", r.to_json())?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "id",
                "params",
                "exact",
                "numeric",
                "abs_error",
                "rel_error",
                "passed",
                "printed_variant",
                "note",
            ])?;
            for r in &records {
                w.write_record([
                    r.id.clone(),
                    r.params_flat(),
                    r.exact.clone(),
                    real_text(&r.numeric),
                    real_text(&r.abs_error),
                    real_text(&r.rel_error),
                    r.passed.to_string(),
                    r.printed_variant.clone().unwrap_or_default(),
                    r.note.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(failed == 0)
}
