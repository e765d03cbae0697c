//! The `infoloss` command line.
//!
//! ```text
//! infoloss entropy  <space-file> [--order α | --shannon] [--bits]
//! infoloss loss     <map-file> [--order α] [--constant c] [--method difference|conditional|both]
//! infoloss pipeline <pipeline-file> [--order α] [--infer-codomain]
//! infoloss verify   [--suite name|all] [--seed s] [--trials t] [--json] [--inject squared|indicator]
//! ```
//!
//! Exit codes: 0 success, 1 a law or check failed, 2 the input did not parse,
//! 3 the input parsed but is not a valid measure or map, 4 bad usage.
//!
//! [`run`] does everything except touching the process; the binary only
//! prints the returned [`Outcome`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::entropy::{tsallis, EntropyOrder};
use crate::error::{CombinatorError, LossError};
use crate::format::{load_pipeline, FormatError, Scope};
use crate::harness::{
    check_additivity, check_alpha_continuity, check_bijection_invariance,
    check_conditional_equivalence, check_continuity, check_convex_linearity,
    check_faddeev_equation, check_functoriality, check_homogeneity, check_phi_additivity,
    check_reconstruction, check_strong_additivity, check_uniform_closed_form, estimate_constant,
    EntropyThreshold, GeneratorConfig, LawReport, MapFunctional, SquaredLoss, ABSOLUTE_TOLERANCE,
    CONTINUITY_LIMIT, PROBE_TOLERANCE, RELATIVE_TOLERANCE,
};
use crate::loss::LossFunctional;
use crate::space::FiniteMeasureSpace;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    LawFailure = 1,
    Parse = 2,
    Validation = 3,
    Usage = 4,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// What a run would print, and how it would exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit: Exit,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            exit: Exit::Success,
        }
    }

    fn error(exit: Exit, message: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            exit,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "infoloss",
    version,
    about = "Entropy and information loss of finite measure-preserving maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy of every space declared in a file.
    Entropy(EntropyArgs),
    /// Information lost by every map declared in a file.
    Loss(LossArgs),
    /// Per-stage loss of a pipeline and its total.
    Pipeline(PipelineArgs),
    /// Run the law-checking suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    pub file: PathBuf,
    /// Tsallis order: a positive rational such as `2` or `1/2`.
    #[arg(long, conflicts_with = "shannon")]
    pub order: Option<EntropyOrder>,
    /// Order 1 (the default).
    #[arg(long)]
    pub shannon: bool,
    /// Print bits instead of nats. Order 1 only.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Difference,
    Conditional,
    Both,
}

#[derive(Debug, Args)]
pub struct LossArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "1")]
    pub order: EntropyOrder,
    #[arg(long, default_value_t = 1.0)]
    pub constant: f64,
    #[arg(long, value_enum, default_value_t = Method::Difference)]
    pub method: Method,
    /// Derive codomain weights from the pushforward where they are left out.
    #[arg(long)]
    pub infer_codomain: bool,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "1")]
    pub order: EntropyOrder,
    #[arg(long, default_value_t = 1.0)]
    pub constant: f64,
    #[arg(long)]
    pub infer_codomain: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Functoriality,
    ConvexLinearity,
    Continuity,
    Additivity,
    Homogeneity,
    StrongAdditivity,
    Grouping,
    ConstantRecovery,
    BijectionInvariance,
    ConditionalForm,
    Reconstruction,
    OrderContinuity,
    PhiAdditivity,
    UniformClosedForm,
}

/// Deliberately broken functionals for checking that the suites can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Inject {
    /// The square of the loss.
    Squared,
    /// 1 when the domain entropy exceeds that of a fair coin, else 0.
    Indicator,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 8)]
    pub max_points: usize,
    #[arg(long, default_value_t = 1000)]
    pub denominator_bound: u32,
    /// Orders to check; repeatable. Defaults to 1, 2 and 3.
    #[arg(long = "order")]
    pub orders: Vec<EntropyOrder>,
    #[arg(long, default_value_t = 1.0)]
    pub constant: f64,
    #[arg(long, value_enum)]
    pub inject: Option<Inject>,
    #[arg(long)]
    pub json: bool,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    exit: Exit::Usage,
                }
            } else {
                Outcome::ok(text)
            }
        }
    }
}

pub fn execute(command: Command) -> Outcome {
    match command {
        Command::Entropy(args) => entropy(&args),
        Command::Loss(args) => loss(&args),
        Command::Pipeline(args) => pipeline(&args),
        Command::Verify(args) => verify(&args),
    }
}

/// Formats with 15 significant digits, trailing zeros dropped.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    if !(-6..=15).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let point = exp as usize + 1;
        if digits.len() <= point {
            format!("{digits}{}", "0".repeat(point - digits.len()))
        } else {
            format!("{}.{}", &digits[..point], &digits[point..])
        }
    };
    format!("{sign}{body}")
}

fn format_failure(e: &FormatError) -> Outcome {
    let exit = match innermost(e) {
        FormatError::InvalidSpace { .. }
        | FormatError::InvalidMap { .. }
        | FormatError::MissingWeight { .. } => Exit::Validation,
        _ => Exit::Parse,
    };
    Outcome::error(exit, e)
}

fn innermost(e: &FormatError) -> &FormatError {
    match e {
        FormatError::InFile { source, .. } => innermost(source),
        other => other,
    }
}

fn load(path: &Path) -> Result<Scope, Outcome> {
    Scope::load(path).map_err(|e| format_failure(&e))
}

/// One value per item: bare when there is a single item, else `name value`.
fn listing(rows: &[(String, String)]) -> String {
    let mut out = String::new();
    for (name, value) in rows {
        if rows.len() == 1 {
            writeln!(out, "{value}").unwrap();
        } else {
            writeln!(out, "{name} {value}").unwrap();
        }
    }
    out
}

fn entropy(args: &EntropyArgs) -> Outcome {
    let order = if args.shannon {
        EntropyOrder::shannon()
    } else {
        args.order.unwrap_or_default()
    };
    if args.bits && !order.is_one() {
        return Outcome::error(Exit::Usage, "--bits is only defined for order 1");
    }
    let scope = match load(&args.file) {
        Ok(s) => s,
        Err(out) => return out,
    };
    if scope.space_names().is_empty() {
        return Outcome::error(
            Exit::Parse,
            format!("{}: no space declared", args.file.display()),
        );
    }
    let mut rows = Vec::new();
    for name in scope.space_names() {
        let space = match scope.space(name) {
            Ok(s) => s,
            Err(e) => return format_failure(&e),
        };
        let h = tsallis(order, &space);
        let value = if args.bits { h.bits() } else { h.nats() };
        rows.push((name.clone(), format_number(value)));
    }
    Outcome::ok(listing(&rows))
}

fn functional(order: EntropyOrder, c: f64) -> Result<LossFunctional, Outcome> {
    LossFunctional::new(c, order).map_err(|e| Outcome::error(Exit::Usage, e))
}

fn loss_failure(e: LossError) -> Outcome {
    match e {
        LossError::OrderNotOne | LossError::NegativeConstant(_) => Outcome::error(Exit::Usage, e),
        other => Outcome::error(Exit::Validation, other),
    }
}

fn loss(args: &LossArgs) -> Outcome {
    let f = match functional(args.order, args.constant) {
        Ok(f) => f,
        Err(out) => return out,
    };
    if args.method != Method::Difference && !args.order.is_one() {
        return loss_failure(LossError::OrderNotOne);
    }
    let scope = match load(&args.file) {
        Ok(s) => s,
        Err(out) => return out,
    };
    let maps = match scope.own_maps(args.infer_codomain) {
        Ok(m) => m,
        Err(e) => return format_failure(&e),
    };
    if maps.is_empty() {
        return Outcome::error(
            Exit::Parse,
            format!("{}: no map declared", args.file.display()),
        );
    }
    let mut out = String::new();
    let mut rows = Vec::new();
    for (name, map) in &maps {
        let difference = f.loss(map);
        let conditional = f.loss_conditional_form(map);
        match args.method {
            Method::Difference => match difference {
                Ok(v) => rows.push((name.clone(), format_number(v))),
                Err(e) => return loss_failure(e),
            },
            Method::Conditional => match conditional {
                Ok(v) => rows.push((name.clone(), format_number(v))),
                Err(e) => return loss_failure(e),
            },
            Method::Both => {
                let (d, c) = match (difference, conditional) {
                    (Ok(d), Ok(c)) => (d, c),
                    (Err(e), _) | (_, Err(e)) => return loss_failure(e),
                };
                let prefix = if maps.len() == 1 {
                    String::new()
                } else {
                    format!("{name} ")
                };
                writeln!(out, "{prefix}difference {}", format_number(d)).unwrap();
                writeln!(out, "{prefix}conditional {}", format_number(c)).unwrap();
                writeln!(out, "{prefix}delta {}", format_number(d - c)).unwrap();
            }
        }
    }
    if args.method != Method::Both {
        out = listing(&rows);
    }
    Outcome::ok(out)
}

fn pipeline(args: &PipelineArgs) -> Outcome {
    let f = match functional(args.order, args.constant) {
        Ok(f) => f,
        Err(out) => return out,
    };
    let (name, stages) = match load_pipeline(&args.file, args.infer_codomain) {
        Ok(p) => p,
        Err(e) => return format_failure(&e),
    };
    for pair in stages.windows(2) {
        if let Some(label) = pair[0]
            .map
            .codomain()
            .first_difference(pair[1].map.domain())
        {
            let e = CombinatorError::NotComposable(label);
            return Outcome::error(
                Exit::Validation,
                format!(
                    "between stages `{}` and `{}`: {e}",
                    pair[0].name, pair[1].name
                ),
            );
        }
    }
    let chain: Vec<_> = stages.iter().map(|s| s.map.clone()).collect();
    let report = match f.pipeline_loss(&chain) {
        Ok(r) => r,
        Err(e) => return loss_failure(e),
    };
    let composite = match f.composite_loss(&chain) {
        Ok(v) => v,
        Err(e) => return loss_failure(e),
    };

    let mut rows: Vec<[String; 3]> = vec![["stage".into(), "domain-mass".into(), "loss".into()]];
    for (stage, value) in stages.iter().zip(&report.stages) {
        rows.push([
            stage.name.clone(),
            stage.map.domain().total_mass().to_string(),
            format_number(*value),
        ]);
    }
    rows.push(["total".into(), String::new(), format_number(report.total)]);
    let w0 = rows.iter().map(|r| r[0].chars().count()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r[1].chars().count()).max().unwrap_or(0);
    let mut out = format!("pipeline {name}\n");
    for [a, b, c] in &rows {
        let line = format!("{a:<w0$}  {b:<w1$}  {c}");
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    let gap = (report.total - composite).abs();
    let agrees = gap <= ABSOLUTE_TOLERANCE;
    writeln!(
        out,
        "check composite {} |total - composite| {} {}",
        format_number(composite),
        format_number(gap),
        if agrees { "ok" } else { "FAILED" }
    )
    .unwrap();
    Outcome {
        stdout: out,
        stderr: String::new(),
        exit: if agrees {
            Exit::Success
        } else {
            Exit::LawFailure
        },
    }
}

#[derive(Serialize)]
struct Tolerances {
    absolute: f64,
    relative: f64,
    probe: f64,
    continuity: f64,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    seed: u64,
    trials: usize,
    max_points: usize,
    denominator_bound: u32,
    orders: Vec<String>,
    injected: Option<String>,
    tolerances: Tolerances,
    passed: bool,
    reports: &'a [LawReport],
}

fn wants(selected: Suite, suite: Suite) -> bool {
    selected == Suite::All || selected == suite
}

/// Runs the selected suites in a fixed order.
pub fn run_suites(
    suite: Suite,
    orders: &[EntropyOrder],
    c: f64,
    inject: Option<Inject>,
    config: &GeneratorConfig,
) -> Result<Vec<LawReport>, LossError> {
    let mut reports = Vec::new();
    for &order in orders {
        let loss = LossFunctional::new(c, order)?;
        let squared = SquaredLoss(loss);
        let indicator = EntropyThreshold {
            order,
            threshold: tsallis(order, &FiniteMeasureSpace::uniform(2)).nats(),
        };
        let f: &dyn MapFunctional = match inject {
            None => &loss,
            Some(Inject::Squared) => &squared,
            Some(Inject::Indicator) => &indicator,
        };
        if wants(suite, Suite::Functoriality) {
            reports.push(check_functoriality(f, config));
        }
        if wants(suite, Suite::ConvexLinearity) {
            reports.push(check_convex_linearity(f, order, config));
        }
        if wants(suite, Suite::Continuity) {
            reports.push(check_continuity(f, config));
        }
        if wants(suite, Suite::Additivity) {
            reports.push(check_additivity(f, config));
        }
        if wants(suite, Suite::Homogeneity) {
            reports.push(check_homogeneity(f, order, config));
        }
        if wants(suite, Suite::ConstantRecovery) {
            reports.push(estimate_constant(f, order, config).report);
        }
        if wants(suite, Suite::StrongAdditivity) {
            reports.push(check_strong_additivity(order, config));
        }
        if wants(suite, Suite::Grouping) {
            reports.push(check_faddeev_equation(order, config));
        }
        if wants(suite, Suite::BijectionInvariance) {
            reports.push(check_bijection_invariance(order, config));
        }
        if wants(suite, Suite::UniformClosedForm) {
            reports.push(check_uniform_closed_form(order, 64));
        }
    }
    if wants(suite, Suite::ConditionalForm) {
        reports.push(check_conditional_equivalence(
            &LossFunctional::new(c, EntropyOrder::shannon())?,
            config,
        ));
    }
    if wants(suite, Suite::Reconstruction) {
        reports.push(check_reconstruction(config));
    }
    if wants(suite, Suite::OrderContinuity) {
        reports.push(check_alpha_continuity(config));
    }
    if wants(suite, Suite::PhiAdditivity) {
        reports.push(check_phi_additivity(64));
    }
    Ok(reports)
}

fn verify(args: &VerifyArgs) -> Outcome {
    let config = match GeneratorConfig::new(
        args.max_points,
        args.denominator_bound,
        args.trials,
        args.seed,
    ) {
        Ok(c) => c,
        Err(e) => return Outcome::error(Exit::Usage, e),
    };
    let orders = if args.orders.is_empty() {
        ["1", "2", "3"]
            .iter()
            .map(|s| s.parse().expect("valid order"))
            .collect()
    } else {
        args.orders.clone()
    };
    let reports = match run_suites(args.suite, &orders, args.constant, args.inject, &config) {
        Ok(r) => r,
        Err(e) => return loss_failure(e),
    };
    let passed = reports.iter().all(|r| r.passed);
    let stdout = if args.json {
        let doc = VerifyReport {
            seed: args.seed,
            trials: args.trials,
            max_points: args.max_points,
            denominator_bound: args.denominator_bound,
            orders: orders.iter().map(ToString::to_string).collect(),
            injected: args.inject.map(|i| format!("{i:?}").to_lowercase()),
            tolerances: Tolerances {
                absolute: ABSOLUTE_TOLERANCE,
                relative: RELATIVE_TOLERANCE,
                probe: PROBE_TOLERANCE,
                continuity: CONTINUITY_LIMIT,
            },
            passed,
            reports: &reports,
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("reports serialize");
        text.push('\n');
        text
    } else {
        let mut out = String::new();
        for r in &reports {
            writeln!(out, "{}", r.summary()).unwrap();
            if let Some(example) = &r.counterexample {
                for line in example.lines() {
                    if line.is_empty() {
                        out.push('\n');
                    } else {
                        writeln!(out, "    {line}").unwrap();
                    }
                }
            }
        }
        let ok = reports.iter().filter(|r| r.passed).count();
        writeln!(
            out,
            "{ok}/{} laws passed (seed {})",
            reports.len(),
            args.seed
        )
        .unwrap();
        out
    };
    Outcome {
        stdout,
        stderr: String::new(),
        exit: if passed {
            Exit::Success
        } else {
            Exit::LawFailure
        },
    }
}
