//! `okounkov`: batch front end for exact Newton–Okounkov body computations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use okounkov_core::config::{load_config, max_level_cap, MAX_LEVEL_CAP_VAR};
use okounkov_core::linalg::{parse_rational, to_f64_lossy};
use okounkov_core::okounkov::{AxiomReport, DEFAULT_WITNESS_CAP};
use okounkov_core::okounkov::{DecompositionResult, TheoremReport};
use okounkov_core::{
    body_approx, decompose, enumerate_semigroup, lemma_witness, predicted_body, scaling_check, validate_flag,
    valuation_axiom_check, verify_theorem, volume_vs_hilbert, Error, FlagSpec, Model, Rational, SemigroupSample,
    VPolytope,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "okounkov", version, about = "Exact Newton–Okounkov bodies of line bundles with respect to flags")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Model and flag description (TOML, or JSON with a .json extension).
    #[arg(long)]
    config: PathBuf,
    /// Truncation level K.
    #[arg(long = "max-level", short = 'K', default_value_t = 1)]
    max_level: u32,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Add display-only decimal approximations next to exact values.
    #[arg(long)]
    decimal: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated body and the per-level valuation images.
    Body(Common),
    /// Compare the truncated body with the predicted simplex.
    VerifyTheorem(Common),
    /// Write a semigroup point as a combination of the simplex vertices.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Valuation vector, comma separated.
        #[arg(long, value_delimiter = ',', required_unless_present = "all")]
        a: Option<Vec<u32>>,
        /// Level of the point.
        #[arg(long, required_unless_present = "all")]
        k: Option<u32>,
        /// Decompose every point of the semigroup up to the truncation level.
        #[arg(long, conflicts_with_all = ["a", "k"])]
        all: bool,
    },
    /// Lift a section with a prescribed valuation from the flag curve.
    LemmaWitness {
        #[command(flatten)]
        common: Common,
        /// Target c in (0, b), as an exact rational such as 7/2.
        #[arg(long)]
        c: String,
        /// Search bound on m and N.
        #[arg(long, default_value_t = DEFAULT_WITNESS_CAP)]
        cap: u32,
    },
    /// Check body(L^m) = m body(L) at the truncation level.
    ScalingCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
    /// Normalized Hilbert function against truncated body volumes.
    VolumeTable {
        #[command(flatten)]
        common: Common,
        /// Levels at which body volumes are computed (defaults to min(K, level cap)).
        #[arg(long)]
        body_levels: Option<u32>,
    },
    /// Randomized check of the valuation axioms.
    AxiomCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failure with its exit code and message for standard error.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_)
            | Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. }
            | Error::EmptyInput(_) => 2,
            Error::Hypothesis(_) | Error::Mismatch(_) => 3,
            Error::Guard(_) => 4,
            Error::Decomposition(_) | Error::SearchBound(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Rendered output plus whether the run counts as a success.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Body(c) | Command::VerifyTheorem(c) => c,
        Command::Decompose { common, .. }
        | Command::LemmaWitness { common, .. }
        | Command::ScalingCheck { common, .. }
        | Command::VolumeTable { common, .. }
        | Command::AxiomCheck { common, .. } => common,
    };
    let result = run(&cli.command).and_then(|outcome| {
        emit(&outcome.text, common.out.as_deref())?;
        Ok(outcome.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    let res = match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure { code: 1, message: format!("writing output: {e}") })
}

/// Loads the config and rejects flags that fail validation before any
/// computation starts.
fn load(common: &Common) -> Result<(Model, FlagSpec), Failure> {
    let (model, flag) = load_config(&common.config)?;
    let report = validate_flag(&model, &flag).map_err(|e| Failure::config(e.to_string()))?;
    if !report.passed() {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        return Err(Failure::config(format!("flag validation failed: {}\n{}", names.join(", "), report.to_json())));
    }
    Ok((model, flag))
}

fn check_level(k: u32, what: &str) -> Result<(), Failure> {
    let cap = max_level_cap()?;
    if k == 0 {
        return Err(Failure::config(format!("{what} must be >= 1")));
    }
    if k > cap {
        return Err(Failure::config(format!(
            "{what} = {k} exceeds the level cap {cap} (set {MAX_LEVEL_CAP_VAR} to raise it)"
        )));
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("output serialization is infallible");
    s.push('\n');
    s
}

fn csv_unsupported(common: &Common, command: &str) -> Result<(), Failure> {
    if common.format == Some(Format::Csv) {
        return Err(Failure::config(format!("{command} has no CSV output; use --format json")));
    }
    Ok(())
}

fn decimals(values: &[Rational]) -> Vec<f64> {
    values.iter().map(to_f64_lossy).collect()
}

fn vertex_decimals(p: &VPolytope) -> Vec<Vec<f64>> {
    p.vertices().iter().map(|v| decimals(v.coords())).collect()
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Body(c) => cmd_body(c),
        Command::VerifyTheorem(c) => cmd_verify_theorem(c),
        Command::Decompose { common, a, k, all } => cmd_decompose(common, a.as_deref(), *k, *all),
        Command::LemmaWitness { common, c, cap } => cmd_lemma_witness(common, c, *cap),
        Command::ScalingCheck { common, m } => cmd_scaling(common, *m),
        Command::VolumeTable { common, body_levels } => cmd_volume_table(common, *body_levels),
        Command::AxiomCheck { common, trials, seed } => cmd_axiom_check(common, *trials, *seed),
    }
}

#[derive(Serialize)]
struct BodyOutput<'a> {
    #[serde(rename = "K")]
    max_level: u32,
    body: &'a VPolytope,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices_decimal: Option<Vec<Vec<f64>>>,
    semigroup: &'a SemigroupSample,
}

fn cmd_body(common: &Common) -> Result<Outcome, Failure> {
    let (model, flag) = load(common)?;
    check_level(common.max_level, "max level")?;
    let sample = enumerate_semigroup(&model, &flag, common.max_level)?;
    let body = body_approx(&sample)?;
    if common.format == Some(Format::Csv) {
        return Ok(Outcome::ok(vertex_csv(&body, common.decimal)));
    }
    let vertices_decimal = common.decimal.then(|| vertex_decimals(&body));
    Ok(Outcome::ok(json(&BodyOutput {
        max_level: common.max_level,
        body: &body,
        vertices_decimal,
        semigroup: &sample,
    })))
}

fn vertex_csv(body: &VPolytope, decimal: bool) -> String {
    let n = body.ambient_dim();
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    if decimal {
        header.extend((1..=n).map(|i| format!("x{i}_decimal")));
    }
    let mut out = header.join(",");
    out.push('\n');
    for v in body.vertices() {
        let mut cells = v.to_strings();
        if decimal {
            cells.extend(decimals(v.coords()).iter().map(|x| format!("{x:.6}")));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct TheoremOutput<'a> {
    #[serde(flatten)]
    report: &'a TheoremReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    e1_gap_decimal: Option<f64>,
}

fn cmd_verify_theorem(common: &Common) -> Result<Outcome, Failure> {
    csv_unsupported(common, "verify-theorem")?;
    let (model, flag) = load(common)?;
    check_level(common.max_level, "max level")?;
    let report = verify_theorem(&model, &flag, common.max_level)?;
    let e1_gap_decimal = common.decimal.then(|| to_f64_lossy(&report.e1_gap));
    Ok(Outcome { text: json(&TheoremOutput { report: &report, e1_gap_decimal }), ok: report.contained })
}

#[derive(Serialize)]
struct DecomposeRow {
    #[serde(flatten)]
    result: Option<DecompositionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients_decimal: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<(u32, Vec<u32>)>,
}

fn cmd_decompose(common: &Common, a: Option<&[u32]>, k: Option<u32>, all: bool) -> Result<Outcome, Failure> {
    let (model, flag) = load(common)?;
    let prediction = predicted_body(&model, &flag)?;
    let n = model.dim();
    let row = |a: &[u32], k: u32| match decompose(a, k, prediction.b, n) {
        Ok(r) => {
            let coefficients_decimal = common.decimal.then(|| decimals(&r.coefficients));
            DecomposeRow { result: Some(r), coefficients_decimal, error: None, point: None }
        }
        Err(e) => DecomposeRow {
            result: None,
            coefficients_decimal: None,
            error: Some(e.to_string()),
            point: Some((k, a.to_vec())),
        },
    };
    if !all {
        let (a, k) = (a.expect("required by clap"), k.expect("required by clap"));
        let r = decompose(a, k, prediction.b, n)?;
        if common.format == Some(Format::Csv) {
            return Ok(Outcome::ok(decompose_csv(std::slice::from_ref(&r), common.decimal)));
        }
        let coefficients_decimal = common.decimal.then(|| decimals(&r.coefficients));
        return Ok(Outcome::ok(json(&DecomposeRow {
            result: Some(r),
            coefficients_decimal,
            error: None,
            point: None,
        })));
    }
    check_level(common.max_level, "max level")?;
    let sample = enumerate_semigroup(&model, &flag, common.max_level)?;
    let rows: Vec<DecomposeRow> = sample.points().map(|p| row(&p.value, p.level)).collect();
    let ok = rows.iter().all(|r| r.error.is_none());
    if common.format == Some(Format::Csv) {
        let results: Vec<_> = rows.into_iter().filter_map(|r| r.result).collect();
        return Ok(Outcome { text: decompose_csv(&results, common.decimal), ok });
    }
    Ok(Outcome { text: json(&rows), ok })
}

fn decompose_csv(rows: &[DecompositionResult], decimal: bool) -> String {
    let Some(first) = rows.first() else { return String::new() };
    let n = first.a.len();
    let mut header = vec!["k".to_string()];
    header.extend((1..=n).map(|i| format!("a{i}")));
    header.extend((0..=n).map(|i| format!("x{i}")));
    if decimal {
        header.extend((0..=n).map(|i| format!("x{i}_decimal")));
    }
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let mut cells = vec![r.k.to_string()];
        cells.extend(r.a.iter().map(u32::to_string));
        cells.extend(r.coefficients.iter().map(Rational::to_string));
        if decimal {
            cells.extend(decimals(&r.coefficients).iter().map(|x| format!("{x:.6}")));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn cmd_lemma_witness(common: &Common, c: &str, cap: u32) -> Result<Outcome, Failure> {
    csv_unsupported(common, "lemma-witness")?;
    let c = parse_rational(c).map_err(|e| Failure::config(format!("--c: {e}")))?;
    let (model, flag) = load(common)?;
    let w = lemma_witness(&model, &flag, &c, cap)?;
    let mut value = serde_json::to_value(&w).expect("witness serialization is infallible");
    if common.decimal {
        value["c_decimal"] = to_f64_lossy(&c).into();
    }
    Ok(Outcome::ok(json(&value)))
}

fn cmd_scaling(common: &Common, m: u32) -> Result<Outcome, Failure> {
    csv_unsupported(common, "scaling-check")?;
    let (model, flag) = load(common)?;
    check_level(common.max_level, "max level")?;
    check_level(m.saturating_mul(common.max_level), "m * max level")?;
    let report = scaling_check(&model, &flag, m, common.max_level)?;
    Ok(Outcome { text: json(&report), ok: report.equal })
}

fn cmd_volume_table(common: &Common, body_levels: Option<u32>) -> Result<Outcome, Failure> {
    let (model, flag) = load(common)?;
    if common.max_level == 0 {
        return Err(Failure::config("max level must be >= 1"));
    }
    // Hilbert rows are closed-form and cheap; only body levels are capped.
    let body_levels = match body_levels {
        Some(b) => {
            if b > 0 {
                check_level(b, "body levels")?;
            }
            b
        }
        None => common.max_level.min(max_level_cap()?),
    };
    let table = volume_vs_hilbert(&model, &flag, common.max_level, body_levels)?;
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(common.decimal),
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn cmd_axiom_check(common: &Common, trials: usize, seed: u64) -> Result<Outcome, Failure> {
    csv_unsupported(common, "axiom-check")?;
    let (model, flag) = load(common)?;
    let report: AxiomReport = valuation_axiom_check(&model, &flag, trials, seed)?;
    Ok(Outcome { text: json(&report), ok: report.passed() })
}
