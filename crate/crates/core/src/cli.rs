//! Command-line front end: `verify`, `recover`, `mc` and `suite`.
//!
//! Every report echoes the parsed command so a run can be repeated exactly.
//! Exit status: 0 when all checks pass, 1 when a check fails, 2 on bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::continuous_families::{ContinuousFamily, PeriodicHazard};
use crate::discrete_families::DiscretizedFamily;
use crate::discrete_laws::{DiscreteLaw, Support};
use crate::error::{param, Error, Result};
use crate::extremes_mc::{mc_stability_test, McConfig, McReport, DEFAULT_SIGNIFICANCE};
use crate::pgf_recovery::{power_pgf_check, recover, ExtractionConfig, PgfEstimate};
use crate::stability::{
    auto_constant, registry_suite, verify_stability, GridSpec, HazardVariant, Role, StabilityMode,
    StabilityProblem, StabilityReport, SuiteConfig, DEFAULT_TOLERANCE,
};
use crate::variate::Variate;

pub const REPORT_VERSION: u32 = 1;
pub const SEED_ENV: &str = "MAXMIN_SEED";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[command(
    name = "maxmin",
    version,
    about = "Max/min stability checks under random sample size"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Residuals of the stability equation on a grid.
    Verify(VerifyArgs),
    /// Implied PGF coefficients and a PGF verdict.
    Recover(RecoverArgs),
    /// Monte Carlo KS test of simulated extremes.
    Mc(McArgs),
    /// Every registry pairing plus negative controls.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Exponential,
    SemiWeibull,
    Gsp,
    SemiPareto,
    ExtLogLogistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawKind {
    Sibuya,
    Harris,
    Geometric,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportArg {
    I0,
    I1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Max,
    Min,
}

impl From<ModeArg> for StabilityMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Max => StabilityMode::Max,
            ModeArg::Min => StabilityMode::Min,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Use the discretized version of the family on {0, 1, ...}.
    #[arg(long)]
    pub discrete: bool,
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Hazard scaling constant.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Periodic amplitude of the hazard.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phase: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Power k of the extended log-logistic family.
    #[arg(long = "ll-k", default_value_t = 1)]
    pub ll_k: u32,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct LawArgs {
    #[arg(long, value_enum)]
    pub law: Option<LawKind>,
    #[arg(long, default_value_t = 0.5)]
    pub v: f64,
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    /// Harris power or degenerate value.
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = SupportArg::I1)]
    pub support: SupportArg,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Stability constant, or "auto" to take it from the registry.
    #[arg(long, default_value = "auto")]
    pub c: String,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub grid_lo: f64,
    #[arg(long, default_value_t = 1e3)]
    pub grid_hi: f64,
    #[arg(long, default_value_t = 200)]
    pub grid_points: usize,
    /// Largest integer of the grid for discrete families.
    #[arg(long, default_value_t = 200)]
    pub grid_max_j: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RecoverArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Law to compare against (also resolves `--c auto`).
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Max)]
    pub mode: ModeArg,
    #[arg(long, default_value = "auto")]
    pub c: String,
    /// Test `Q(s^t)` for the given law instead of a family's implied PGF.
    #[arg(long)]
    pub power: Option<f64>,
    #[arg(long, default_value_t = 30)]
    pub nmax: usize,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Largest allowed |coefficient - pmf| when a law is given.
    #[arg(long, default_value_t = 1e-8)]
    pub match_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct McArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub law: LawArgs,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long, default_value = "auto")]
    pub c: String,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SIGNIFICANCE)]
    pub significance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Skip the negative controls.
    #[arg(long)]
    pub positives_only: bool,
    /// Hazard amplitude as a fraction of its monotonicity bound.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub eps_fraction: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phase: f64,
    /// Also run a Monte Carlo test for every entry.
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl FamilyArgs {
    fn hazard(&self) -> Result<PeriodicHazard> {
        PeriodicHazard::new(self.alpha, self.p, self.eps, self.phase)
    }

    pub fn continuous(&self) -> Result<ContinuousFamily> {
        let kind = self
            .family
            .ok_or_else(|| Error::Parameter("--family is required".into()))?;
        match kind {
            FamilyKind::Exponential => ContinuousFamily::exponential(self.rate),
            FamilyKind::SemiWeibull => Ok(ContinuousFamily::semi_weibull(self.hazard()?)),
            FamilyKind::Gsp => ContinuousFamily::generalized_semi_pareto(self.hazard()?, self.beta),
            FamilyKind::SemiPareto => Ok(ContinuousFamily::semi_pareto(self.hazard()?)),
            FamilyKind::ExtLogLogistic => {
                ContinuousFamily::extended_log_logistic(self.alpha, self.ll_k)
            }
        }
    }

    pub fn variate(&self) -> Result<Variate> {
        let f = self.continuous()?;
        if self.discrete {
            Ok(Variate::Discrete(DiscretizedFamily::new(f)?))
        } else {
            Ok(Variate::Continuous(f))
        }
    }
}

impl LawArgs {
    pub fn law(&self) -> Result<Option<DiscreteLaw>> {
        let Some(kind) = self.law else {
            return Ok(None);
        };
        let need_k = || {
            self.k
                .ok_or_else(|| Error::Parameter("--k is required for this law".into()))
        };
        let law = match kind {
            LawKind::Sibuya => DiscreteLaw::sibuya(self.v)?,
            LawKind::Harris => {
                let k = u32::try_from(need_k()?)
                    .map_err(|_| Error::Parameter("Harris k too large".into()))?;
                DiscreteLaw::harris(self.a, k)?
            }
            LawKind::Geometric => DiscreteLaw::geometric(
                self.q,
                match self.support {
                    SupportArg::I0 => Support::I0,
                    SupportArg::I1 => Support::I1,
                },
            )?,
            LawKind::Degenerate => DiscreteLaw::degenerate(need_k()?)?,
        };
        Ok(Some(law))
    }

    fn required(&self) -> Result<DiscreteLaw> {
        self.law()?
            .ok_or_else(|| Error::Parameter("--law is required".into()))
    }
}

/// Parses `--c`, resolving "auto" through the registry.
fn resolve_c(
    raw: &str,
    variate: &Variate,
    law: Option<&DiscreteLaw>,
    mode: StabilityMode,
) -> Result<f64> {
    if raw.eq_ignore_ascii_case("auto") {
        let law = law.ok_or_else(|| Error::Parameter("--c auto needs --law".into()))?;
        return auto_constant(variate, law, mode).map(|(_, c)| c);
    }
    let c: f64 = raw
        .parse()
        .map_err(|_| Error::Parameter(format!("cannot parse c = {raw:?}")))?;
    if !(c > 0.0 && c < 1.0) {
        return param(format!("stability constant c = {c} must lie in (0, 1)"));
    }
    Ok(c)
}

#[derive(Debug, Clone, Serialize)]
struct Envelope<'a, T: Serialize> {
    version: u32,
    spec: &'a Command,
    pass: bool,
    results: T,
}

#[derive(Debug, Clone, Serialize)]
struct SuiteRecord {
    #[serde(flatten)]
    stability: StabilityReport,
    as_expected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc: Option<McReport>,
}

#[derive(Debug, Clone, Serialize)]
struct RecoverRecord {
    family: Option<String>,
    law: Option<String>,
    mode: Option<StabilityMode>,
    c: Option<f64>,
    power: Option<f64>,
    #[serde(flatten)]
    estimate: PgfEstimate,
    law_pmf: Option<Vec<f64>>,
    max_abs_diff: Option<f64>,
    match_tol: f64,
}

/// A rendered report plus its overall verdict.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub rendered: String,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify(a) => run_verify(&cli.command, a),
        Command::Recover(a) => run_recover(&cli.command, a),
        Command::Mc(a) => run_mc(&cli.command, a),
        Command::Suite(a) => run_suite(&cli.command, a),
    }
}

fn run_verify(spec: &Command, a: &VerifyArgs) -> Result<Outcome> {
    let variate = a.family.variate()?;
    let law = a.law.required()?;
    let mode = a.mode.into();
    let c = resolve_c(&a.c, &variate, Some(&law), mode)?;
    let problem = StabilityProblem::new(variate, law, mode, c)?;
    let grid = if variate.is_discrete() {
        GridSpec::Integer {
            max_j: a.grid_max_j,
        }
    } else {
        GridSpec::Log {
            lo: a.grid_lo,
            hi: a.grid_hi,
            points: a.grid_points,
        }
    };
    let report = verify_stability(&problem, &grid, a.tol)?;
    let pass = report.pass;
    let rendered = match a.output.format {
        Format::Json => to_json(&Envelope {
            version: REPORT_VERSION,
            spec,
            pass,
            results: [&report],
        }),
        Format::Csv => stability_csv(std::slice::from_ref(&report), &[None])?,
        Format::Text => stability_text(std::slice::from_ref(&report), &[None]),
    };
    Ok(Outcome { pass, rendered })
}

fn run_recover(spec: &Command, a: &RecoverArgs) -> Result<Outcome> {
    let law = a.law.law()?;
    let mut cfg = ExtractionConfig::new(a.nmax);
    cfg.radius = a.radius;
    cfg.samples = a.samples;
    let mode: StabilityMode = a.mode.into();
    let mut record = if let Some(t) = a.power {
        let law = law.ok_or_else(|| Error::Parameter("--power needs --law".into()))?;
        RecoverRecord {
            family: None,
            law: Some(law.to_string()),
            mode: None,
            c: None,
            power: Some(t),
            estimate: power_pgf_check(&law, t, &cfg)?,
            law_pmf: None,
            max_abs_diff: None,
            match_tol: a.match_tol,
        }
    } else {
        let variate = a.family.variate()?;
        let c = resolve_c(&a.c, &variate, law.as_ref(), mode)?;
        let estimate = recover(variate.continuous(), c, mode, &cfg)?;
        let pmf: Option<Vec<f64>> = law.map(|l| (0..=a.nmax as u64).map(|n| l.pmf(n)).collect());
        let max_abs_diff = pmf.as_ref().map(|p| {
            p.iter()
                .zip(&estimate.coeffs)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        });
        RecoverRecord {
            family: Some(variate.continuous().to_string()),
            law: law.map(|l| l.to_string()),
            mode: Some(mode),
            c: Some(c),
            power: None,
            estimate,
            law_pmf: pmf,
            max_abs_diff,
            match_tol: a.match_tol,
        }
    };
    let pass =
        record.estimate.verdict.is_valid() && record.max_abs_diff.is_none_or(|d| d < a.match_tol);
    if record.law_pmf.is_none() && record.power.is_some() {
        record.law_pmf = None;
    }
    let rendered = match a.output.format {
        Format::Json => to_json(&Envelope {
            version: REPORT_VERSION,
            spec,
            pass,
            results: [&record],
        }),
        Format::Csv => recover_csv(&record)?,
        Format::Text => recover_text(&record),
    };
    Ok(Outcome { pass, rendered })
}

fn run_mc(spec: &Command, a: &McArgs) -> Result<Outcome> {
    let variate = a.family.variate()?;
    let law = a.law.required()?;
    let mode = a.mode.into();
    let c = resolve_c(&a.c, &variate, Some(&law), mode)?;
    let problem = StabilityProblem::new(variate, law, mode, c)?;
    let cfg = McConfig {
        trials: a.trials,
        seed: a.seed,
        significance: a.significance,
    };
    let report = mc_stability_test(&problem, &cfg)?;
    let pass = report.pass;
    let rendered = match a.output.format {
        Format::Json => to_json(&Envelope {
            version: REPORT_VERSION,
            spec,
            pass,
            results: [&report],
        }),
        Format::Csv => mc_csv(std::slice::from_ref(&report))?,
        Format::Text => mc_text(std::slice::from_ref(&report)),
    };
    Ok(Outcome { pass, rendered })
}

fn run_suite(spec: &Command, a: &SuiteArgs) -> Result<Outcome> {
    let cfg = SuiteConfig {
        tolerance: a.tol,
        variant: HazardVariant {
            eps_fraction: a.eps_fraction,
            phase: a.phase,
        },
        with_controls: !a.positives_only,
        ..SuiteConfig::default()
    };
    let reports = registry_suite(&cfg)?;
    let mut records = Vec::with_capacity(reports.len());
    for r in reports {
        let mc = if a.mc && matches!(r.role, Role::Positive | Role::PerturbedC) {
            let entry = crate::stability::registry(cfg.variant, true)?
                .into_iter()
                .find(|e| e.id() == r.pairing)
                .ok_or_else(|| Error::Registry(r.pairing.clone()))?;
            Some(mc_stability_test(
                &entry.problem,
                &McConfig::new(a.trials, a.seed),
            )?)
        } else {
            None
        };
        let mc_ok = mc
            .as_ref()
            .is_none_or(|m| m.pass == (r.role == Role::Positive));
        records.push(SuiteRecord {
            as_expected: r.as_expected() && mc_ok,
            stability: r,
            mc,
        });
    }
    let pass = records.iter().all(|r| r.as_expected);
    let rendered = match a.output.format {
        Format::Json => to_json(&Envelope {
            version: REPORT_VERSION,
            spec,
            pass,
            results: &records,
        }),
        Format::Csv => {
            let reps: Vec<StabilityReport> = records.iter().map(|r| r.stability.clone()).collect();
            let mcs: Vec<Option<&McReport>> = records.iter().map(|r| r.mc.as_ref()).collect();
            stability_csv(&reps, &mcs)?
        }
        Format::Text => {
            let reps: Vec<StabilityReport> = records.iter().map(|r| r.stability.clone()).collect();
            let mcs: Vec<Option<&McReport>> = records.iter().map(|r| r.mc.as_ref()).collect();
            stability_text(&reps, &mcs)
        }
    };
    Ok(Outcome { pass, rendered })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// CSV columns for stability results, in order.
pub const STABILITY_CSV_COLUMNS: [&str; 13] = [
    "pairing",
    "role",
    "mode",
    "variate",
    "law",
    "c",
    "tolerance",
    "sup_residual",
    "pass",
    "as_expected",
    "ks_stat",
    "ks_critical",
    "mc_pass",
];

fn stability_csv(reports: &[StabilityReport], mc: &[Option<&McReport>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parameter(e.to_string());
    w.write_record(STABILITY_CSV_COLUMNS).map_err(io)?;
    for (i, r) in reports.iter().enumerate() {
        let m = mc.get(i).copied().flatten();
        w.write_record([
            r.pairing.clone(),
            r.role.label().to_string(),
            r.mode.to_string(),
            r.variate.clone(),
            r.law.clone(),
            format!("{:e}", r.c_used),
            format!("{:e}", r.tolerance),
            format!("{:e}", r.sup_residual),
            r.pass.to_string(),
            r.as_expected().to_string(),
            m.map(|m| format!("{:e}", m.ks_stat)).unwrap_or_default(),
            m.map(|m| format!("{:e}", m.ks_critical))
                .unwrap_or_default(),
            m.map(|m| m.pass.to_string()).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    finish_csv(w)
}

/// CSV columns for Monte Carlo results, in order.
pub const MC_CSV_COLUMNS: [&str; 10] = [
    "variate",
    "law",
    "mode",
    "c",
    "trials",
    "seed",
    "significance",
    "ks_stat",
    "ks_critical",
    "pass",
];

fn mc_csv(reports: &[McReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parameter(e.to_string());
    w.write_record(MC_CSV_COLUMNS).map_err(io)?;
    for r in reports {
        w.write_record([
            r.variate.clone(),
            r.law.clone(),
            r.mode.to_string(),
            format!("{:e}", r.c),
            r.trials.to_string(),
            r.seed.to_string(),
            r.significance.to_string(),
            format!("{:e}", r.ks_stat),
            format!("{:e}", r.ks_critical),
            r.pass.to_string(),
        ])
        .map_err(io)?;
    }
    finish_csv(w)
}

/// CSV columns for recovered coefficients, in order.
pub const RECOVER_CSV_COLUMNS: [&str; 4] = ["n", "coeff", "law_pmf", "abs_diff"];

fn recover_csv(r: &RecoverRecord) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parameter(e.to_string());
    w.write_record(RECOVER_CSV_COLUMNS).map_err(io)?;
    for (n, a) in r.estimate.coeffs.iter().enumerate() {
        let pmf = r.law_pmf.as_ref().map(|p| p[n]);
        w.write_record([
            n.to_string(),
            format!("{a:e}"),
            pmf.map(|p| format!("{p:e}")).unwrap_or_default(),
            pmf.map(|p| format!("{:e}", (p - a).abs()))
                .unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Parameter(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parameter(e.to_string()))
}

fn stability_text(reports: &[StabilityReport], mc: &[Option<&McReport>]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<52} {:<4} {:>12} {:>12} {:>7} {:>9}\n",
        "pairing", "mode", "c", "sup_resid", "verdict", "expected"
    ));
    for (i, r) in reports.iter().enumerate() {
        out.push_str(&format!(
            "{:<52} {:<4} {:>12.6e} {:>12.3e} {:>7} {:>9}",
            r.pairing,
            r.mode.to_string(),
            r.c_used,
            r.sup_residual,
            verdict_word(r.pass),
            if r.as_expected() { "yes" } else { "NO" },
        ));
        if let Some(m) = mc.get(i).copied().flatten() {
            out.push_str(&format!(
                "  ks={:.3e}/{:.3e} {}",
                m.ks_stat,
                m.ks_critical,
                verdict_word(m.pass)
            ));
        }
        out.push('\n');
    }
    if let [single] = reports {
        out.push_str(&format!(
            "variate: {}\nlaw: {}\n",
            single.variate, single.law
        ));
    }
    out
}

fn mc_text(reports: &[McReport]) -> String {
    reports
        .iter()
        .map(|r| {
            format!(
                "{} | {} | {} c={:.6e} trials={} seed={}\nks={:.4e} critical={:.4e} ({}) {}\n",
                r.variate,
                r.law,
                r.mode,
                r.c,
                r.trials,
                r.seed,
                r.ks_stat,
                r.ks_critical,
                r.significance,
                verdict_word(r.pass)
            )
        })
        .collect()
}

fn recover_text(r: &RecoverRecord) -> String {
    let mut out = String::new();
    if let Some(f) = &r.family {
        out.push_str(&format!("family: {f}\n"));
    }
    if let Some(l) = &r.law {
        out.push_str(&format!("law: {l}\n"));
    }
    if let Some(c) = r.c {
        out.push_str(&format!("c: {c}\n"));
    }
    if let Some(t) = r.power {
        out.push_str(&format!("power t: {t}\n"));
    }
    out.push_str(&format!(
        "radius: {}  samples: {}  recon_error: {:.3e}  total_mass: {:.15}\n",
        r.estimate.radius, r.estimate.samples, r.estimate.recon_error, r.estimate.total_mass
    ));
    out.push_str(&format!(
        "{:>4} {:>22} {:>22} {:>10}\n",
        "n", "coeff", "law_pmf", "abs_diff"
    ));
    for (n, a) in r.estimate.coeffs.iter().enumerate() {
        match r.law_pmf.as_ref().map(|p| p[n]) {
            Some(p) => out.push_str(&format!(
                "{n:>4} {a:>22.15e} {p:>22.15e} {:>10.2e}\n",
                (p - a).abs()
            )),
            None => out.push_str(&format!("{n:>4} {a:>22.15e}\n")),
        }
    }
    out.push_str(&format!("verdict: {:?}\n", r.estimate.verdict));
    out
}

/// Re-runs the command echoed in a JSON report's `spec` field.
pub fn replay(report_json: &str) -> Result<Outcome> {
    #[derive(Deserialize)]
    struct Echo {
        spec: Command,
    }
    let echo: Echo = serde_json::from_str(report_json)
        .map_err(|e| Error::Parameter(format!("bad report: {e}")))?;
    run(&Cli { command: echo.spec })
}

/// Parses arguments, runs, writes the report; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let out_path = match &cli.command {
        Command::Verify(a) => a.output.out.as_ref(),
        Command::Recover(a) => a.output.out.as_ref(),
        Command::Mc(a) => a.output.out.as_ref(),
        Command::Suite(a) => a.output.out.as_ref(),
    };
    let written = match out_path {
        Some(p) => std::fs::write(p, outcome.rendered.as_bytes()),
        None => std::io::stdout().write_all(outcome.rendered.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if outcome.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
