//! Command-line frontend. Exit codes: 0 success, 1 verification failure,
//! 2 input or validation error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::acceptance::{self, SuiteConfig};
use crate::charfn::{self, RecurrenceReport, Side, Spectrum};
use crate::deltas;
use crate::error::{Error, Result};
use crate::json;
use crate::random;
use crate::symspaces::{self, ConvergenceOptions, TraceCheckReport};
use crate::vzforms::{self, FormCandidate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const MAX_GENERATORS_ENV: &str = "SUPERBER_MAX_GENERATORS";
const DEFAULT_MAX_GENERATORS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "superber", version, about = "Exact Berezinian expansions and supertrace checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Spectrum, matrix or form JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Annular region `s` (0 near zero, m near infinity).
    #[arg(long, alias = "s")]
    pub region: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<i64>,
    /// Truncation order for the intermediate regions.
    #[arg(long, default_value_t = 30)]
    pub pmax: u32,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = acceptance::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laurent coefficients of Ber(E + zA) in one region.
    Expand(Common),
    /// Run one verification family.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        #[command(flatten)]
        common: Common,
    },
    /// Berezinian of an even supermatrix.
    Ber(Common),
    /// The full acceptance suite.
    Selftest {
        #[command(flatten)]
        common: Common,
        /// Smaller samples.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Recurrence,
    Gamma,
    Region,
    Duality,
    Forms,
    Deltas,
}

pub struct Outcome {
    pub passed: bool,
    pub stdout: String,
}

fn max_generators() -> Result<usize> {
    match std::env::var(MAX_GENERATORS_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::Parse(format!("{MAX_GENERATORS_ENV} must be an integer"))),
        Err(_) => Ok(DEFAULT_MAX_GENERATORS),
    }
}

fn check_generators(g: u8) -> Result<()> {
    let cap = max_generators()?;
    if g as usize > cap {
        return Err(Error::TooManyGenerators(g as usize, cap));
    }
    Ok(())
}

fn read_json(path: &Option<PathBuf>) -> Result<Value> {
    let path = path
        .as_ref()
        .ok_or_else(|| Error::Parse("--input is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_spectrum(c: &Common) -> Result<Spectrum> {
    let s = json::spectrum_from_json(&read_json(&c.input)?)?;
    check_generators(s.generators())?;
    Ok(s)
}

fn window(c: &Common, lo: i64, hi: i64) -> Result<(i64, i64)> {
    let (lo, hi) = (c.from.unwrap_or(lo), c.to.unwrap_or(hi));
    if lo > hi {
        return Err(Error::InvalidRange(format!("empty window [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

fn render(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn csv_rows(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn run_expand(c: &Common) -> Result<Outcome> {
    let spec = read_spectrum(c)?;
    let s = c.region.unwrap_or(0);
    let (lo, hi) = window(c, 0, 5)?;
    let w = charfn::expand_window(&spec, s, lo, hi)?;
    let stdout = match c.format {
        Format::Json => render(&json::window_to_json(&w)),
        Format::Csv => json::window_to_csv(&w),
    };
    Ok(Outcome { passed: true, stdout })
}

fn recurrence_rows(r: &RecurrenceReport) -> Vec<Vec<String>> {
    r.entries
        .iter()
        .map(|e| {
            vec![
                r.label.clone(),
                e.k.to_string(),
                if e.passed() { "pass" } else { "fail" }.to_string(),
            ]
        })
        .collect()
}

fn recurrence_json(r: &RecurrenceReport) -> Value {
    json!({
        "label": r.label,
        "passed": r.passed(),
        "entries": r.entries.iter().map(|e| json!({
            "k": e.k,
            "passed": e.passed(),
            "residual": json::grassmann_to_json(&e.residual),
        })).collect::<Vec<_>>(),
    })
}

fn emit_recurrences(c: &Common, reports: &[RecurrenceReport]) -> Outcome {
    let passed = reports.iter().all(RecurrenceReport::passed);
    let stdout = match c.format {
        Format::Json => render(&json!({
            "passed": passed,
            "reports": reports.iter().map(recurrence_json).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_rows(
            "check,k,status",
            &reports.iter().flat_map(recurrence_rows).collect::<Vec<_>>(),
        ),
    };
    Outcome { passed, stdout }
}

fn emit_trace(c: &Common, r: &TraceCheckReport) -> Outcome {
    let passed = r.passed();
    let stdout = match c.format {
        Format::Json => render(&json!({
            "label": r.label,
            "passed": passed,
            "entries": json::trace_report_to_json(r),
        })),
        Format::Csv => csv_rows(
            "N,status,max_error",
            &r.entries
                .iter()
                .map(|e| {
                    vec![
                        e.n.to_string(),
                        e.status.as_str().to_string(),
                        e.errors.last().map(|x| x.to_string()).unwrap_or_default(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    Outcome { passed, stdout }
}

fn form_rows(label: &str, s: &vzforms::FormSummary) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = s
        .report
        .conditions
        .iter()
        .map(|c| vec![label.to_string(), c.condition.clone(), pass(c.passed)])
        .collect();
    rows.push(vec![label.to_string(), "stress".into(), pass(s.stress_zero)]);
    rows.push(vec![label.to_string(), "closed".into(), pass(s.closed)]);
    for (i, &ok) in s.charts_closed.iter().enumerate() {
        rows.push(vec![label.to_string(), format!("chart{}", i + 1), pass(ok)]);
    }
    rows
}

fn pass(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

fn run_forms(c: &Common) -> Result<Outcome> {
    let forms: Vec<(String, FormCandidate)> = match &c.input {
        Some(_) => {
            let f = json::form_from_json(&read_json(&c.input)?)?;
            check_generators(f.space.generators)?;
            vec![("input".to_string(), f)]
        }
        None => (1..=3)
            .map(|n| Ok((format!("witness {n}|1"), vzforms::ber_witness(n, 1)?)))
            .collect::<Result<_>>()?,
    };
    let mut summaries = Vec::new();
    for (label, f) in &forms {
        summaries.push((label.clone(), vzforms::summarize(f)?));
    }
    let passed = summaries.iter().all(|(_, s)| s.passed());
    let stdout = match c.format {
        Format::Json => render(&json!({
            "passed": passed,
            "forms": summaries.iter().map(|(l, s)| json!({"label": l, "summary": s})).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_rows(
            "form,check,status",
            &summaries.iter().flat_map(|(l, s)| form_rows(l, s)).collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome { passed, stdout })
}

fn run_deltas(c: &Common) -> Result<Outcome> {
    let matrices = match &c.input {
        Some(_) => {
            let t = json::matrix_from_json(&read_json(&c.input)?)?;
            check_generators(t.like().generators())?;
            vec![t]
        }
        None => {
            let mut rng = random::rng(c.seed);
            [(1, 1), (2, 1), (1, 2), (2, 2)]
                .iter()
                .map(|&(n, m)| random::even_invertible(&mut rng, n, m, 2))
                .collect::<Result<_>>()?
        }
    };
    let mut rows = Vec::new();
    let mut passed = true;
    for t in &matrices {
        let (factor, ber) = deltas::delta_as_ber_basis(t)?;
        let ok = factor == ber;
        passed &= ok;
        rows.push((t.dim(), factor, ber, ok));
    }
    let stdout = match c.format {
        Format::Json => render(&json!({
            "passed": passed,
            "seed": c.seed,
            "substitutions": rows.iter().map(|(d, f, b, ok)| json!({
                "dim": {"even": d.0, "odd": d.1},
                "factor": json::grassmann_to_json(f),
                "ber": json::grassmann_to_json(b),
                "passed": ok,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_rows(
            "even,odd,factor,ber,status",
            &rows
                .iter()
                .map(|(d, f, b, ok)| vec![d.0.to_string(), d.1.to_string(), f.to_string(), b.to_string(), pass(*ok)])
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome { passed, stdout })
}

fn run_verify(kind: VerifyKind, c: &Common) -> Result<Outcome> {
    match kind {
        VerifyKind::Recurrence => {
            let spec = read_spectrum(c)?;
            let top = spec.n() as i64 - spec.m() as i64;
            let (lo, hi) = window(c, -12, top + 12)?;
            let mut reports = Vec::new();
            if hi > top {
                reports.push(charfn::verify_recurrence(&spec, Side::Zero, lo.max(top + 1), hi)?);
            }
            if lo < 0 {
                reports.push(charfn::verify_recurrence(&spec, Side::Infinity, lo, hi.min(-1))?);
            }
            Ok(emit_recurrences(c, &reports))
        }
        VerifyKind::Gamma => {
            let spec = read_spectrum(c)?;
            let (lo, hi) = window(c, -8, 8)?;
            Ok(emit_recurrences(c, &[charfn::verify_gamma(&spec, lo, hi)?]))
        }
        VerifyKind::Region => {
            let spec = read_spectrum(c)?;
            let s = c
                .region
                .ok_or_else(|| Error::Parse("--region is required".into()))?;
            if c.tol.is_nan() || c.tol <= 0.0 {
                return Err(Error::InvalidRange("--tol must be positive".into()));
            }
            let (lo, hi) = window(c, -4, 4)?;
            let r = symspaces::verify_region(&spec, s, lo, hi, c.pmax, c.tol, ConvergenceOptions::default())?;
            Ok(emit_trace(c, &r))
        }
        VerifyKind::Duality => {
            let spec = read_spectrum(c)?;
            let top = spec.n() as i64 - spec.m() as i64;
            let (lo, hi) = window(c, top - 8, top)?;
            Ok(emit_trace(c, &symspaces::verify_infinity_duality(&spec, lo, hi)?))
        }
        VerifyKind::Forms => run_forms(c),
        VerifyKind::Deltas => run_deltas(c),
    }
}

fn run_ber(c: &Common) -> Result<Outcome> {
    let t = json::matrix_from_json(&read_json(&c.input)?)?;
    check_generators(t.like().generators())?;
    let b = t.ber()?;
    let stdout = match c.format {
        Format::Json => render(&json!({"ber": json::grassmann_to_json(&b)})),
        Format::Csv => {
            let mut out = String::from("gens,coeff\n");
            for (mask, r) in b.terms() {
                let gens: Vec<String> = crate::GrassmannElement::mask_indices(mask)
                    .iter()
                    .map(|g| g.to_string())
                    .collect();
                out.push_str(&format!("{},{}\n", gens.join(" "), crate::grassmann::format_rational(r)));
            }
            out
        }
    };
    Ok(Outcome { passed: true, stdout })
}

fn run_selftest(c: &Common, quick: bool) -> Result<Outcome> {
    let cfg = SuiteConfig { seed: c.seed, quick };
    let results = acceptance::run_all(&cfg);
    let passed = results.iter().all(|r| r.passed);
    let stdout = match c.format {
        Format::Json => render(&json!({"seed": c.seed, "quick": quick, "passed": passed, "criteria": results})),
        Format::Csv => csv_rows(
            "criterion,name,status,elapsed_ms",
            &results
                .iter()
                .map(|r| vec![r.id.to_string(), r.name.clone(), pass(r.passed), r.elapsed_ms.to_string()])
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome { passed, stdout })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::InvalidRange(_) | Error::InvalidRegion { .. } => "range",
        Error::TooManyGenerators(..) | Error::GeneratorOutOfRange { .. } | Error::GeneratorMismatch { .. } => {
            "generators"
        }
        _ => "validation",
    }
}

/// Runs a parsed command, writing the report to `out` and errors as JSON
/// to `err`. Returns the exit code.
pub fn run(cli: Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let result = match &cli.command {
        Command::Expand(c) => run_expand(c),
        Command::Verify { kind, common } => run_verify(*kind, common),
        Command::Ber(c) => run_ber(c),
        Command::Selftest { common, quick } => run_selftest(common, *quick),
    };
    match result {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            if o.passed {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let body = json!({"error": error_kind(&e), "message": e.to_string()});
            let _ = writeln!(err, "{body}");
            EXIT_INPUT
        }
    }
}
