//! Command dispatch for the `nilherm` binary.
//!
//! [`run`] takes the full argument vector and returns the exit code with the
//! rendered output, so tests drive it without spawning processes.
//!
//! Exit codes: 0 success, 1 invalid algebra (`d² ≠ 0`), 2 a result that
//! contradicts the balanced + SKT ⇒ abelian theorem, 3 usage, I/O or parse
//! errors (single-line diagnostic).

use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraFile, ComplexNilAlgebra, GeneratorResidual, NormalFormOutcome};
use crate::catalog::{self, ExpectedProperties};
use crate::metrics::{self, HermitianMetric, MetricClass};
use crate::scalar::{format_cq, format_rational, Cq};
use crate::search::{self, BothReport, FeasibilityReport, SearchOptions, SearchStatus, SearchTarget};
use crate::verifier::{self, Conclusion, ProofTrace, SweepTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Skt,
    Balanced,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "nilherm", version, about = "Invariant Hermitian metrics on nilpotent Lie algebras with complex structure")]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Seed for every randomised phase.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check d² = 0, nilpotency step and normal form.
    Validate {
        /// Algebra file or built-in name.
        algebra: String,
    },
    /// Classify a metric as Kähler / SKT / balanced.
    Check {
        algebra: String,
        /// Metric file or `identity`.
        #[arg(long, default_value = "identity")]
        metric: String,
    },
    /// Search for SKT and/or balanced metrics.
    Search {
        algebra: String,
        #[arg(long, value_enum, default_value = "both")]
        target: TargetArg,
        #[arg(long, default_value_t = 16)]
        seeds: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = 500)]
        max_iter: usize,
    },
    /// Run the balanced + SKT ⇒ abelian chain on a metric pair.
    Verify {
        algebra: String,
        /// Balanced metric file; searched for when omitted.
        #[arg(long = "balanced-metric")]
        balanced_metric: Option<String>,
        /// SKT metric file; searched for when omitted.
        #[arg(long = "skt-metric")]
        skt_metric: Option<String>,
    },
    /// Built-in algebras.
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
    /// Both searches over several algebras (default: the catalog).
    Sweep {
        algebras: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// Names with expected properties.
    List,
    /// An entry in the algebra file format.
    Export { name: String },
}

struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

type Outcome = Result<(i32, String), Failure>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string()),
                _ => {
                    let first = e.to_string().lines().next().unwrap_or("error: bad arguments").to_string();
                    (EXIT_INPUT, format!("{first}\n"))
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => out,
        Err(f) => (f.code, format!("error: {}\n", f.message.replace('\n', " "))),
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Validate { algebra } => validate(&load_algebra(algebra)?, fmt),
        Command::Check { algebra, metric } => {
            let a = load_valid(algebra)?;
            let h = load_metric(metric, a.n())?;
            check(&a, &h, fmt)
        }
        Command::Search { algebra, target, seeds, tol, max_iter } => {
            let a = load_valid(algebra)?;
            if *seeds == 0 {
                return Err(input_error("--seeds must be at least 1"));
            }
            if !(tol.is_finite() && *tol >= 0.0) {
                return Err(input_error("--tol must be a finite nonnegative number"));
            }
            let opts = SearchOptions { seeds: *seeds, max_iter: *max_iter, tol: *tol, seed: cli.seed };
            search_cmd(&a, *target, &opts, fmt)
        }
        Command::Verify { algebra, balanced_metric, skt_metric } => {
            let a = load_valid(algebra)?;
            let opts = SearchOptions { seed: cli.seed, ..SearchOptions::default() };
            verify(&a, balanced_metric.as_deref(), skt_metric.as_deref(), &opts, fmt)
        }
        Command::Catalog { action } => match action.as_ref().unwrap_or(&CatalogAction::List) {
            CatalogAction::List => catalog_list(fmt),
            CatalogAction::Export { name } => {
                let e = catalog::by_name(name).ok_or_else(|| input_error(format!("no built-in algebra named {name:?}")))?;
                Ok((EXIT_OK, json(&AlgebraFile::from(&e.algebra))))
            }
        },
        Command::Sweep { algebras } => {
            let list = if algebras.is_empty() {
                catalog::builtin().into_iter().map(|e| e.algebra).collect()
            } else {
                algebras.iter().map(|s| load_algebra(s)).collect::<Result<Vec<_>, _>>()?
            };
            let opts = SearchOptions { seed: cli.seed, ..SearchOptions::default() };
            sweep(&list, &opts, fmt)
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serialises");
    s.push('\n');
    s
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| input_error(format!("cannot read {path}: {e}")))
}

/// Built-in name, else a file in the algebra format.
fn load_algebra(arg: &str) -> Result<ComplexNilAlgebra, Failure> {
    if let Some(e) = catalog::by_name(arg) {
        return Ok(e.algebra);
    }
    let text = read(arg)?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{arg}: {e}")))
}

fn load_valid(arg: &str) -> Result<ComplexNilAlgebra, Failure> {
    let a = load_algebra(arg)?;
    let report = a.validate();
    if !report.valid {
        let gens: Vec<String> = report.residuals.iter().map(|r| r.j.to_string()).collect();
        return Err(Failure {
            code: EXIT_INVALID,
            message: format!("{}: d² ≠ 0 on generator(s) {}", a.name(), gens.join(", ")),
        });
    }
    Ok(a)
}

fn load_metric(arg: &str, n: usize) -> Result<HermitianMetric, Failure> {
    let h = if arg == "identity" {
        HermitianMetric::identity(n)
    } else {
        let text = read(arg)?;
        serde_json::from_str::<HermitianMetric>(&text).map_err(|e| input_error(format!("{arg}: {e}")))?
    };
    if h.n() != n {
        return Err(input_error(format!("{arg}: metric has n = {}, algebra has n = {n}", h.n())));
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidateReport {
    pub algebra: String,
    pub n: usize,
    pub valid: bool,
    pub residuals: Vec<GeneratorResidual>,
    pub nilpotency_step: Option<usize>,
    pub normal_form_k: Option<usize>,
    pub outside_normal_form: Option<usize>,
}

fn validate(a: &ComplexNilAlgebra, fmt: OutputFormat) -> Outcome {
    let v = a.validate();
    let (mut step, mut nf_k, mut outside) = (None, None, None);
    if v.valid {
        step = a.nilpotency_step().ok();
        if step.is_some_and(|s| s <= 2) {
            match a.to_normal_form() {
                NormalFormOutcome::Normal(nf) => nf_k = Some(nf.k()),
                NormalFormOutcome::OutsideLemmaClass { offending_generator, .. } => outside = Some(offending_generator),
            }
        }
    }
    let report = ValidateReport {
        algebra: a.name().to_string(),
        n: a.n(),
        valid: v.valid,
        residuals: v.residuals,
        nilpotency_step: step,
        normal_form_k: nf_k,
        outside_normal_form: outside,
    };
    let code = if report.valid { EXIT_OK } else { EXIT_INVALID };
    let out = match fmt {
        OutputFormat::Structured => json(&report),
        OutputFormat::Text => {
            let mut s = format!("algebra: {} (n = {})\n", report.algebra, report.n);
            if report.valid {
                s.push_str("d² = 0: yes\n");
            } else {
                s.push_str("d² = 0: no\n");
                for r in &report.residuals {
                    let _ = writeln!(s, "  d(dα^{}) = {}", r.j, r.d_squared);
                }
            }
            match report.nilpotency_step {
                Some(k) => {
                    let _ = writeln!(s, "nilpotent: yes, step {k}");
                }
                None if report.valid => s.push_str("nilpotent: no\n"),
                None => {}
            }
            if let Some(k) = report.normal_form_k {
                let _ = writeln!(s, "normal form: yes, k = {k}");
            }
            if let Some(j) = report.outside_normal_form {
                let _ = writeln!(s, "normal form: no (dα^{j} leaves the closed directions)");
            }
            s
        }
    };
    Ok((code, out))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check(a: &ComplexNilAlgebra, h: &HermitianMetric, fmt: OutputFormat) -> Outcome {
    let class: MetricClass = metrics::classify(h, a).map_err(|e| input_error(e.to_string()))?;
    let out = match fmt {
        OutputFormat::Structured => json(&class),
        OutputFormat::Text => {
            let line = |name: &str, ok: bool, defect: &num_rational::BigRational, form: &crate::forms::Form<Cq>| {
                if ok {
                    format!("{name}: yes\n")
                } else {
                    format!("{name}: no (defect {}; {form})\n", format_rational(defect))
                }
            };
            let mut s = format!("algebra: {}\n", a.name());
            s += &line("kähler", class.kahler, &class.kahler_defect, &class.d_omega);
            s += &line("skt", class.skt, &class.skt_defect, &class.ddbar_omega);
            s += &line("balanced", class.balanced, &class.balanced_defect, &class.d_omega_power);
            s
        }
    };
    Ok((EXIT_OK, out))
}

fn render_matrix(h: &HermitianMetric) -> String {
    let rows: Vec<String> = h
        .matrix()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(format_cq).collect::<Vec<_>>().join(", ")))
        .collect();
    rows.join(" ")
}

fn status_str(s: SearchStatus) -> &'static str {
    match s {
        SearchStatus::Feasible => "feasible",
        SearchStatus::InfeasibleCertified => "infeasibleCertified",
        SearchStatus::Unknown => "unknown",
    }
}

fn render_report(r: &FeasibilityReport) -> String {
    let target = match r.target {
        SearchTarget::Skt => "skt",
        SearchTarget::Balanced => "balanced",
        SearchTarget::Both => "both",
    };
    let mut s = format!("target: {target}\nstatus: {}\n", status_str(r.status));
    if let Some(w) = &r.witness {
        let _ = writeln!(s, "witness: {}", render_matrix(w));
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(s, "certificate: {}", c.statement);
        if let Some(sep) = &c.separator {
            let rows: Vec<String> = sep.iter().map(|r| format!("[{}]", r.join(", "))).collect();
            let _ = writeln!(s, "separator: {}", rows.join(" "));
        }
    }
    let _ = writeln!(s, "defect: {:e}", r.defect);
    let _ = writeln!(s, "seeds tried: {}", r.seeds_tried);
    if let Some(v) = r.best_min_eigenvalue {
        let _ = writeln!(s, "best min eigenvalue: {v:e}");
    }
    if let Some(n) = &r.note {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

fn search_cmd(a: &ComplexNilAlgebra, target: TargetArg, opts: &SearchOptions, fmt: OutputFormat) -> Outcome {
    match target {
        TargetArg::Skt | TargetArg::Balanced => {
            let r = if target == TargetArg::Skt {
                search::find_skt_metric(a, opts)
            } else {
                search::find_balanced_metric(a, opts)
            };
            let out = match fmt {
                OutputFormat::Structured => json(&r),
                OutputFormat::Text => format!("algebra: {}\n{}", a.name(), render_report(&r)),
            };
            Ok((EXIT_OK, out))
        }
        TargetArg::Both => {
            let r: BothReport = search::find_both(a, opts);
            let code = if r.theorem_violation { EXIT_INCONSISTENT } else { EXIT_OK };
            let out = match fmt {
                OutputFormat::Structured => json(&r),
                OutputFormat::Text => format!(
                    "algebra: {}\n{}\n{}\nabelian: {}\nconsistent with balanced + SKT ⇒ abelian: {}\n",
                    a.name(),
                    render_report(&r.skt),
                    render_report(&r.balanced),
                    yes_no(r.abelian),
                    yes_no(!r.theorem_violation)
                ),
            };
            Ok((code, out))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub balanced_metric_source: String,
    pub skt_metric_source: String,
    pub balanced_metric: HermitianMetric,
    pub skt_metric: HermitianMetric,
    pub trace: ProofTrace,
}

fn metric_or_search(
    arg: Option<&str>,
    a: &ComplexNilAlgebra,
    find: impl Fn() -> FeasibilityReport,
) -> Result<(HermitianMetric, String), Failure> {
    if let Some(path) = arg {
        return Ok((load_metric(path, a.n())?, format!("file {path}")));
    }
    let r = find();
    match r.witness {
        Some(w) => Ok((w, "search witness".into())),
        None => Ok((HermitianMetric::identity(a.n()), format!("identity (search: {})", status_str(r.status)))),
    }
}

fn verify(
    a: &ComplexNilAlgebra,
    balanced: Option<&str>,
    skt: Option<&str>,
    opts: &SearchOptions,
    fmt: OutputFormat,
) -> Outcome {
    let (g, g_src) = metric_or_search(balanced, a, || search::find_balanced_metric(a, opts))?;
    let (gs, gs_src) = metric_or_search(skt, a, || search::find_skt_metric(a, opts))?;
    let trace = verifier::proof_chain(a, &g, &gs).map_err(|e| input_error(e.to_string()))?;
    let code = if matches!(trace.conclusion, Conclusion::Contradiction { .. }) { EXIT_INCONSISTENT } else { EXIT_OK };
    let report = VerifyReport {
        balanced_metric_source: g_src,
        skt_metric_source: gs_src,
        balanced_metric: g,
        skt_metric: gs,
        trace,
    };
    let out = match fmt {
        OutputFormat::Structured => json(&report),
        OutputFormat::Text => {
            let mut s = format!("algebra: {}\n", report.trace.algebra);
            let _ = writeln!(s, "balanced metric: {} = {}", report.balanced_metric_source, render_matrix(&report.balanced_metric));
            let _ = writeln!(s, "skt metric: {} = {}", report.skt_metric_source, render_matrix(&report.skt_metric));
            for (i, st) in report.trace.steps.iter().enumerate() {
                let outcome = match st.outcome {
                    verifier::StepOutcome::Holds => "holds",
                    verifier::StepOutcome::Fails => "fails",
                    verifier::StepOutcome::Skipped => "skipped",
                };
                let _ = writeln!(s, "{}. {} [{outcome}] {}", i + 1, st.step.as_str(), st.details);
                let _ = writeln!(s, "   digest {}", st.inputs_digest);
            }
            let verdict = match &report.trace.conclusion {
                Conclusion::ForcedAbelian => "forcedAbelian".to_string(),
                Conclusion::HypothesisFailed { which, defect, .. } => {
                    format!("hypothesisFailed({}), defect {}", which.as_str(), format_rational(defect))
                }
                Conclusion::OutsideLemmaClass { reason } => format!("outsideLemmaClass: {reason}"),
                Conclusion::Contradiction { step, detail } => format!("contradiction at {}: {detail}", step.as_str()),
            };
            let _ = writeln!(s, "conclusion: {verdict}");
            s
        }
    };
    Ok((code, out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogRow {
    pub name: String,
    pub n: usize,
    pub note: String,
    pub expected: ExpectedRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpectedRow {
    pub skt_feasible: bool,
    pub balanced_feasible: bool,
    pub abelian: bool,
}

impl From<ExpectedProperties> for ExpectedRow {
    fn from(e: ExpectedProperties) -> Self {
        ExpectedRow { skt_feasible: e.skt_feasible, balanced_feasible: e.balanced_feasible, abelian: e.abelian }
    }
}

fn catalog_list(fmt: OutputFormat) -> Outcome {
    let rows: Vec<CatalogRow> = catalog::builtin()
        .into_iter()
        .map(|e| CatalogRow { name: e.name.into(), n: e.algebra.n(), note: e.note.into(), expected: e.expected.into() })
        .collect();
    let out = match fmt {
        OutputFormat::Structured => json(&rows),
        OutputFormat::Text => {
            let mut s = format!("{:<22} {:>2}  {:<4} {:<8} {:<7}\n", "name", "n", "skt", "balanced", "abelian");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:<22} {:>2}  {:<4} {:<8} {:<7}",
                    r.name,
                    r.n,
                    yes_no(r.expected.skt_feasible),
                    yes_no(r.expected.balanced_feasible),
                    yes_no(r.expected.abelian)
                );
            }
            s
        }
    };
    Ok((EXIT_OK, out))
}

fn sweep(list: &[ComplexNilAlgebra], opts: &SearchOptions, fmt: OutputFormat) -> Outcome {
    let table: SweepTable = verifier::theorem_sweep(list, opts);
    let code = if table.all_consistent() { EXIT_OK } else { EXIT_INCONSISTENT };
    let out = match fmt {
        OutputFormat::Structured => json(&table),
        OutputFormat::Text => {
            let mut s = format!("{:<22} {:<20} {:<20} {:<7} {}\n", "algebra", "skt", "balanced", "abelian", "consistent");
            for r in &table.rows {
                let _ = writeln!(
                    s,
                    "{:<22} {:<20} {:<20} {:<7} {}",
                    r.algebra,
                    status_str(r.skt_status),
                    status_str(r.balanced_status),
                    yes_no(r.abelian),
                    yes_no(r.consistent)
                );
            }
            for e in &table.excluded {
                let _ = writeln!(s, "excluded {}: {}", e.algebra, e.reason);
            }
            s
        }
    };
    Ok((code, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_list_has_six_rows() {
        let (code, out) = run(["nilherm", "catalog", "list"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 7);
    }

    #[test]
    fn unknown_command_is_single_line() {
        let (code, out) = run(["nilherm", "frobnicate"]);
        assert_eq!(code, EXIT_INPUT);
        assert_eq!(out.lines().count(), 1);
    }
}
