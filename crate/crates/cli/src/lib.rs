//! The `fixloc` command line: `compute`, `verify`, `catalog`, `numcheck` and
//! `export`.
//!
//! [`run`] does all the work and returns the text for stdout and stderr along
//! with the exit code, so the binary is a thin wrapper and tests can drive
//! the commands in process.

use std::ffi::OsString;
use std::io::Read;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fixloc::classes::ClassDegree;
use fixloc::localization::{
    characteristic_number, ev_zero, localization_sum, verify_model, LocalizationError, Model, SignConvention,
    VerifyOutcome, VerifyReport,
};
use fixloc::models::{builtin_from_spec, catalog, load_model, load_model_str, save_model};
use fixloc::numcheck::{dh_refinement_ratio, dh_suite, random_point_oracle, NumcheckError, QuadratureSpec};
use fixloc::poly::format_rational;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

const DEFAULT_NUMCHECK_MODEL: &str = "cpn:2";
const DEFAULT_NUMCHECK_CLASS: &str = "p1";

#[derive(Debug, Parser)]
#[command(name = "fixloc", version, about = "Characteristic numbers of torus actions and Killing foliations by localization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Localization sum of a class and, in degree q, its characteristic number
    Compute(ComputeArgs),
    /// Check that every generator monomial up to a degree cancels as it must
    Verify(VerifyArgs),
    /// List the builtin models and their known characteristic numbers
    Catalog(FormatArgs),
    /// Floating-point oracles: random points and sphere quadrature
    Numcheck(NumcheckArgs),
    /// Print a model as a canonical document
    Export(ExportArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ModelSource {
    /// Model document; `-` reads standard input
    #[arg(long, value_name = "PATH")]
    pub model: Option<String>,
    /// Builtin such as `cpn:2`, `s2_rotation` or `s2*cpn:1`
    #[arg(long, value_name = "NAME[:PARAMS]")]
    pub builtin: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct OptionalModelSource {
    /// Model document; `-` reads standard input
    #[arg(long, value_name = "PATH")]
    pub model: Option<String>,
    /// Builtin such as `cpn:2` (default when no model is given)
    #[arg(long, value_name = "NAME[:PARAMS]")]
    pub builtin: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    #[value(name = "classical")]
    Classical,
    #[value(name = "paper_corollary")]
    PaperCorollary,
}

impl From<ConventionArg> for SignConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Classical => SignConvention::Classical,
            ConventionArg::PaperCorollary => SignConvention::PaperCorollary,
        }
    }
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub source: ModelSource,
    /// Polynomial in e, p1, p2, ... such as `p1^2 - 2*p2`
    #[arg(long)]
    pub class: String,
    /// Override the model's sign convention
    #[arg(long, value_enum)]
    pub sign_convention: Option<ConventionArg>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: ModelSource,
    /// Highest class degree to check (default q)
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=64))]
    pub max_degree: Option<u32>,
    #[arg(long, value_enum)]
    pub sign_convention: Option<ConventionArg>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct NumcheckArgs {
    #[command(flatten)]
    pub source: OptionalModelSource,
    /// Class for the random-point oracle (default p1 on the default model, e otherwise)
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..=100_000))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bound on both the oracle's relative error and the quadrature's absolute error
    #[arg(long, default_value_t = 1e-9, value_parser = positive_f64)]
    pub tolerance: f64,
    /// Parameters of the sphere integral
    #[arg(long = "t", value_delimiter = ',', default_value = "0.5,1,2", allow_negative_numbers = true)]
    pub ts: Vec<f64>,
    #[arg(long, default_value_t = 512)]
    pub n_theta: usize,
    #[arg(long, default_value_t = 64)]
    pub n_phi: usize,
    /// Coarse n_theta for the refinement check (compared with twice its value)
    #[arg(long, default_value_t = 16)]
    pub refine_base: usize,
    #[arg(long, value_enum)]
    pub sign_convention: Option<ConventionArg>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: ModelSource,
    #[arg(long, value_enum)]
    pub sign_convention: Option<ConventionArg>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a positive finite number".into())
    }
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<LocalizationError> for CliError {
    fn from(e: LocalizationError) -> Self {
        match e {
            LocalizationError::NotPolynomial(_) => CliError::Failure(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

struct Report {
    text: String,
    code: i32,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, code: EXIT_OK }
    }
}

/// Terminal styling for pass/fail tags.
#[derive(Debug, Clone, Copy, Default)]
pub struct Style {
    pub color: bool,
}

impl Style {
    fn tag(self, pass: bool) -> String {
        match (pass, self.color) {
            (true, true) => "\x1b[32mPASS\x1b[0m".into(),
            (false, true) => "\x1b[31mFAIL\x1b[0m".into(),
            (true, false) => "PASS".into(),
            (false, false) => "FAIL".into(),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, style: Style) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Output {
                stdout,
                stderr,
                code: e.exit_code(),
            };
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => cmd_compute(a, stdin),
        Command::Verify(a) => cmd_verify(a, stdin, style),
        Command::Catalog(a) => cmd_catalog(a, style),
        Command::Numcheck(a) => cmd_numcheck(a, stdin, style),
        Command::Export(a) => cmd_export(a, stdin),
    };
    match result {
        Ok(r) => Output {
            stdout: r.text,
            stderr: String::new(),
            code: r.code,
        },
        Err(CliError::Usage(msg)) => Output {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_USAGE,
        },
        Err(CliError::Failure(msg)) => Output {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_FAILURE,
        },
    }
}

fn load_source(
    model: Option<&str>,
    builtin: Option<&str>,
    stdin: &mut dyn Read,
    convention: Option<ConventionArg>,
) -> Result<Model, CliError> {
    let mut m = match (model, builtin) {
        (Some("-"), _) => {
            let mut text = String::new();
            stdin.read_to_string(&mut text).map_err(CliError::usage)?;
            load_model_str(&text).map_err(CliError::usage)?
        }
        (Some(path), _) => load_model(Path::new(path)).map_err(|e| CliError::Usage(format!("{path}: {e}")))?,
        (None, Some(spec)) => builtin_from_spec(spec).map_err(CliError::usage)?,
        (None, None) => builtin_from_spec(DEFAULT_NUMCHECK_MODEL).map_err(CliError::usage)?,
    };
    if let Some(c) = convention {
        m.sign_convention = c.into();
    }
    Ok(m)
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

struct Part {
    degree: u32,
    sum: String,
    number: Option<String>,
    consistent: bool,
    note: String,
}

fn cmd_compute(a: &ComputeArgs, stdin: &mut dyn Read) -> Result<Report, CliError> {
    let m = load_source(a.source.model.as_deref(), a.source.builtin.as_deref(), stdin, a.sign_convention)?;
    let class = m.parse_class(&a.class).map_err(CliError::usage)?;
    let pieces = match class.degree() {
        ClassDegree::Zero => Vec::new(),
        ClassDegree::Homogeneous(d) => vec![(d, class.clone())],
        ClassDegree::Inhomogeneous => class.homogeneous_parts(),
    };
    let mut parts = Vec::new();
    for (degree, piece) in &pieces {
        let sum = localization_sum(&m, piece)?;
        let constant = sum.is_zero() || sum.degree() == Some(0);
        let (number, consistent, note) = if *degree < m.q {
            (None, sum.is_zero(), "degree < q".to_string())
        } else if *degree == m.q {
            let n = format_rational(&ev_zero(&sum));
            (Some(n), constant, String::new())
        } else {
            (None, true, format!("degree {degree} > q = {}", m.q))
        };
        parts.push(Part {
            degree: *degree,
            sum: sum.to_string(),
            number,
            consistent,
            note,
        });
    }
    let code = if parts.iter().all(|p| p.consistent) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    let text = match a.format {
        Format::Structured => to_json_text(&json!({
            "model": m.name,
            "q": m.q,
            "class": class.to_string(),
            "consistent": code == EXIT_OK,
            "parts": parts.iter().map(|p| json!({
                "degree": p.degree,
                "sum": p.sum,
                "characteristic_number": p.number,
                "consistent": p.consistent,
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let line = |p: &Part| {
                let mut s = match (&p.number, p.consistent) {
                    (Some(n), true) => n.clone(),
                    (Some(n), false) => format!("{} (not constant; constant term {n})", p.sum),
                    (None, _) if p.note.is_empty() => p.sum.clone(),
                    (None, _) => format!("{} ({})", p.sum, p.note),
                };
                if !p.consistent && p.number.is_none() {
                    s.push_str(", expected 0");
                }
                s
            };
            match parts.as_slice() {
                [] => "0\n".to_string(),
                [p] => format!("{}\n", line(p)),
                many => many.iter().map(|p| format!("degree {}: {}\n", p.degree, line(p))).collect(),
            }
        }
    };
    Ok(Report { text, code })
}

fn outcome_json(o: &VerifyOutcome) -> Value {
    match o {
        VerifyOutcome::Polynomial {
            sum,
            degree_ok,
            vanishing_ok,
        } => json!({
            "kind": "polynomial",
            "sum": sum.to_string(),
            "degree_ok": degree_ok,
            "vanishing_ok": vanishing_ok,
        }),
        VerifyOutcome::NotPolynomial { remainder } => json!({
            "kind": "not_polynomial",
            "remainder": remainder.to_string(),
        }),
        VerifyOutcome::Error(msg) => json!({ "kind": "error", "message": msg }),
    }
}

fn outcome_text(o: &VerifyOutcome) -> String {
    match o {
        VerifyOutcome::Polynomial {
            sum,
            degree_ok,
            vanishing_ok,
        } => {
            let mut s = sum.to_string();
            if !vanishing_ok {
                s.push_str("  (should vanish below degree q)");
            } else if !degree_ok {
                s.push_str("  (wrong degree)");
            }
            s
        }
        VerifyOutcome::NotPolynomial { remainder } => format!("not a polynomial, remainder {remainder}"),
        VerifyOutcome::Error(msg) => format!("error: {msg}"),
    }
}

fn verify_text(r: &VerifyReport, style: Style) -> String {
    let width = r.entries.iter().map(|e| e.class.len()).max().unwrap_or(0);
    let mut out = format!("verify {}: q = {}, classes of degree 0..{}\n", r.model, r.q, r.max_degree);
    for e in &r.entries {
        out.push_str(&format!(
            "{}  deg {:>2}  {:<width$}  {}\n",
            style.tag(e.passed()),
            e.degree,
            e.class,
            outcome_text(&e.outcome),
        ));
    }
    let failed = r.failures().count();
    if failed == 0 {
        out.push_str(&format!("all {} classes pass\n", r.entries.len()));
    } else {
        out.push_str(&format!("{failed} of {} classes fail\n", r.entries.len()));
    }
    out
}

fn cmd_verify(a: &VerifyArgs, stdin: &mut dyn Read, style: Style) -> Result<Report, CliError> {
    let m = load_source(a.source.model.as_deref(), a.source.builtin.as_deref(), stdin, a.sign_convention)?;
    let report = verify_model(&m, a.max_degree.unwrap_or(m.q));
    let code = if report.passed() { EXIT_OK } else { EXIT_FAILURE };
    let text = match a.format {
        Format::Text => verify_text(&report, style),
        Format::Structured => to_json_text(&json!({
            "model": report.model,
            "q": report.q,
            "max_degree": report.max_degree,
            "passed": report.passed(),
            "entries": report.entries.iter().map(|e| json!({
                "class": e.class,
                "degree": e.degree,
                "passed": e.passed(),
                "outcome": outcome_json(&e.outcome),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Report { text, code })
}

fn cmd_catalog(a: &FormatArgs, style: Style) -> Result<Report, CliError> {
    let mut all_ok = true;
    let mut rows = Vec::new();
    for entry in catalog() {
        let mut known = Vec::new();
        for (spec, class, expected) in &entry.known {
            let computed = builtin_from_spec(spec)
                .map_err(|e| e.to_string())
                .and_then(|m| {
                    let c = m.parse_class(class).map_err(|e| e.to_string())?;
                    characteristic_number(&m, &c).map_err(|e| e.to_string())
                })
                .map(|v| format_rational(&v));
            let ok = computed.as_deref() == Ok(*expected);
            all_ok &= ok;
            known.push((*spec, *class, *expected, computed, ok));
        }
        rows.push((entry, known));
    }
    let text = match a.format {
        Format::Text => {
            let mut out = String::new();
            for (entry, known) in &rows {
                let params = if entry.params.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", entry.params)
                };
                out.push_str(&format!("{}{}\n    {}\n", entry.name, params, entry.description));
                for (spec, class, expected, computed, ok) in known {
                    let shown = match computed {
                        Ok(v) => v.clone(),
                        Err(e) => format!("error: {e}"),
                    };
                    let mismatch = if *ok { String::new() } else { format!(" (expected {expected})") };
                    out.push_str(&format!("    {}  {spec} {class} = {shown}{mismatch}\n", style.tag(*ok)));
                }
            }
            out
        }
        Format::Structured => to_json_text(&json!({
            "builtins": rows.iter().map(|(entry, known)| json!({
                "name": entry.name,
                "params": entry.params,
                "description": entry.description,
                "known": known.iter().map(|(spec, class, expected, computed, ok)| json!({
                    "model": spec,
                    "class": class,
                    "expected": expected,
                    "computed": computed.as_ref().ok(),
                    "passed": ok,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Report {
        text,
        code: if all_ok { EXIT_OK } else { EXIT_FAILURE },
    })
}

fn numcheck_usage(e: NumcheckError) -> CliError {
    match e {
        NumcheckError::ResamplingExhausted(_) => CliError::Failure(e.to_string()),
        NumcheckError::Localization(le) => le.into(),
        other => CliError::usage(other),
    }
}

fn cmd_numcheck(a: &NumcheckArgs, stdin: &mut dyn Read, style: Style) -> Result<Report, CliError> {
    let defaulted = a.source.model.is_none() && a.source.builtin.is_none();
    let m = load_source(a.source.model.as_deref(), a.source.builtin.as_deref(), stdin, a.sign_convention)?;
    let class_text = match (&a.class, defaulted) {
        (Some(c), _) => c.as_str(),
        (None, true) => DEFAULT_NUMCHECK_CLASS,
        (None, false) => "e",
    };
    let class = m.parse_class(class_text).map_err(CliError::usage)?;
    // validate every quadrature input before any work is done
    for &t in &a.ts {
        QuadratureSpec::new(t, a.n_theta, a.n_phi, a.tolerance).map_err(numcheck_usage)?;
        QuadratureSpec::new(t, a.refine_base, a.n_phi, a.tolerance).map_err(numcheck_usage)?;
        if t == 0.0 {
            return Err(numcheck_usage(NumcheckError::PoleAtZero));
        }
    }

    let oracle = random_point_oracle(&m, &class, a.trials as usize, a.seed).map_err(numcheck_usage)?;
    let max_err = oracle.max_rel_error();
    let oracle_ok = !oracle.not_polynomial && max_err.is_some_and(|e| e < a.tolerance);

    let cases = dh_suite(&a.ts, a.n_theta, a.n_phi, a.tolerance).map_err(numcheck_usage)?;
    let mut ratios = Vec::new();
    for &t in &a.ts {
        ratios.push((t, dh_refinement_ratio(t, a.refine_base, a.n_phi).map_err(numcheck_usage)?));
    }
    let ratios_ok = ratios.iter().all(|&(_, r)| r >= 4.0);
    let all_ok = oracle_ok && ratios_ok && cases.iter().all(|c| c.passed);

    let text = match a.format {
        Format::Text => {
            let mut out = format!(
                "random-point oracle: {}, class {}, {} trials, seed {}\n",
                m.name, class, a.trials, a.seed
            );
            if oracle.not_polynomial {
                out.push_str(&format!("  {}  the exact sum is not a polynomial\n", style.tag(false)));
            } else {
                out.push_str(&format!(
                    "  {}  max relative error {:.3e} (tolerance {:e})\n",
                    style.tag(oracle_ok),
                    max_err.unwrap_or(f64::NAN),
                    a.tolerance
                ));
            }
            out.push_str(&format!(
                "sphere quadrature vs fixed points: grid {} x {}, tolerance {:e}\n",
                a.n_theta, a.n_phi, a.tolerance
            ));
            for c in &cases {
                out.push_str(&format!(
                    "  {}  t = {}  quadrature {:.12}  fixed points {:.12}  error {:.3e}\n",
                    style.tag(c.passed),
                    c.t,
                    c.quadrature,
                    c.localization,
                    c.abs_error
                ));
            }
            out.push_str(&format!(
                "refinement n_theta {} -> {} (error ratio must be >= 4)\n",
                a.refine_base,
                2 * a.refine_base
            ));
            for (t, r) in &ratios {
                out.push_str(&format!("  {}  t = {t}  ratio {r:.3}\n", style.tag(*r >= 4.0)));
            }
            out.push_str(&format!("result: {}\n", style.tag(all_ok)));
            out
        }
        Format::Structured => to_json_text(&json!({
            "passed": all_ok,
            "oracle": {
                "model": m.name,
                "class": class.to_string(),
                "trials": a.trials,
                "seed": a.seed,
                "tolerance": a.tolerance,
                "not_polynomial": oracle.not_polynomial,
                "max_rel_error": max_err,
                "passed": oracle_ok,
            },
            "quadrature": {
                "n_theta": a.n_theta,
                "n_phi": a.n_phi,
                "tolerance": a.tolerance,
                "cases": cases.iter().map(|c| json!({
                    "t": c.t,
                    "quadrature": c.quadrature,
                    "localization": c.localization,
                    "abs_error": c.abs_error,
                    "passed": c.passed,
                })).collect::<Vec<_>>(),
                "refinement": {
                    "base": a.refine_base,
                    "ratios": ratios.iter().map(|(t, r)| json!({"t": t, "ratio": r})).collect::<Vec<_>>(),
                    "passed": ratios_ok,
                },
            },
        })),
    };
    Ok(Report {
        text,
        code: if all_ok { EXIT_OK } else { EXIT_FAILURE },
    })
}

fn cmd_export(a: &ExportArgs, stdin: &mut dyn Read) -> Result<Report, CliError> {
    let m = load_source(a.source.model.as_deref(), a.source.builtin.as_deref(), stdin, a.sign_convention)?;
    Ok(Report::ok(save_model(&m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Output {
        let mut argv = vec!["fixloc"];
        argv.extend_from_slice(args);
        run(argv, &mut std::io::empty(), Style::default())
    }

    #[test]
    fn compute_examples() {
        assert_eq!(go(&["compute", "--builtin", "cpn:2", "--class", "e"]).stdout, "3\n");
        assert_eq!(go(&["compute", "--builtin", "cpn:2", "--class", "p1"]).stdout, "3\n");
        assert_eq!(
            go(&["compute", "--builtin", "s2_rotation", "--class", "1"]).stdout,
            "0 (degree < q)\n"
        );
        assert_eq!(go(&["compute", "--builtin", "cp2", "--class", "0"]).stdout, "0\n");
    }

    #[test]
    fn compute_splits_inhomogeneous_classes() {
        let out = go(&["compute", "--builtin", "cp2", "--class", "1 + p1 + e*p1"]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout.lines().count(), 3);
        assert!(out.stdout.starts_with("degree 0: 0 (degree < q)\ndegree 4: 3\n"), "{}", out.stdout);
    }

    #[test]
    fn model_source_is_exclusive_and_required() {
        assert_eq!(go(&["compute", "--class", "e"]).code, EXIT_USAGE);
        assert_eq!(
            go(&["compute", "--builtin", "cp2", "--model", "x.json", "--class", "e"]).code,
            EXIT_USAGE
        );
    }

    #[test]
    fn stdin_model() {
        let doc = save_model(&builtin_from_spec("cp2").unwrap());
        let out = run(
            ["fixloc", "compute", "--model", "-", "--class", "p1"],
            &mut doc.as_bytes(),
            Style::default(),
        );
        assert_eq!(out.stdout, "3\n");
    }

    #[test]
    fn colored_tags() {
        let out = run(["fixloc", "verify", "--builtin", "s2"], &mut std::io::empty(), Style { color: true });
        assert!(out.stdout.contains("\x1b[32mPASS"));
        assert!(!go(&["verify", "--builtin", "s2"]).stdout.contains('\x1b'));
    }

    #[test]
    fn help_goes_to_stdout() {
        let out = go(&["--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("compute"));
    }
}
