//! Residual checks of `Q(F(x)) = F(cx)` (max) and `Q(R(cx)) = R(x)` (min),
//! and the registry of known stabilizing pairings.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuous_families::{ContinuousFamily, PeriodicHazard};
use crate::discrete_families::DiscretizedFamily;
use crate::discrete_laws::{DiscreteLaw, Support};
use crate::error::{param, Error, Result};
use crate::variate::Variate;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_LOG_GRID: GridSpec = GridSpec::Log {
    lo: 1e-3,
    hi: 1e3,
    points: 200,
};
pub const DEFAULT_INTEGER_GRID: GridSpec = GridSpec::Integer { max_j: 200 };
/// Multiplier applied to c by the perturbed-c controls.
pub const C_PERTURBATION: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityMode {
    Max,
    Min,
}

impl StabilityMode {
    pub fn flipped(self) -> Self {
        match self {
            StabilityMode::Max => StabilityMode::Min,
            StabilityMode::Min => StabilityMode::Max,
        }
    }
}

impl fmt::Display for StabilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityMode::Max => "max",
            StabilityMode::Min => "min",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityProblem {
    pub variate: Variate,
    pub law: DiscreteLaw,
    pub mode: StabilityMode,
    pub c: f64,
}

impl StabilityProblem {
    pub fn new(
        variate: impl Into<Variate>,
        law: DiscreteLaw,
        mode: StabilityMode,
        c: f64,
    ) -> Result<Self> {
        check_c(c)?;
        Ok(StabilityProblem {
            variate: variate.into(),
            law,
            mode,
            c,
        })
    }

    /// Problem with c resolved from the matching registry claim.
    pub fn auto(
        variate: impl Into<Variate>,
        law: DiscreteLaw,
        mode: StabilityMode,
    ) -> Result<Self> {
        let variate = variate.into();
        let (_, c) = auto_constant(&variate, &law, mode)?;
        Self::new(variate, law, mode, c)
    }

    /// `|LHS - RHS|` of the stability equation at `x`.
    pub fn residual_at(&self, x: f64) -> f64 {
        match self.mode {
            StabilityMode::Max => {
                let lhs = self.law.pgf_prob(self.variate.prob_ext(x));
                let rhs = self.variate.prob_ext(self.c * x);
                (lhs.value - rhs.value).abs()
            }
            StabilityMode::Min => {
                let lhs = self.law.pgf_prob(self.variate.prob_ext(self.c * x).flip());
                let rhs = self.variate.prob_ext(x);
                (lhs.value - rhs.complement).abs()
            }
        }
    }
}

fn check_c(c: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return param(format!("stability constant c = {c} must lie in (0, 1)"));
    }
    Ok(())
}

/// Evaluation points for a residual sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "grid", rename_all = "lowercase")]
pub enum GridSpec {
    /// `points` log-spaced values on `[lo, hi]`.
    Log { lo: f64, hi: f64, points: usize },
    /// The integers `0..=max_j`.
    Integer { max_j: u64 },
}

impl GridSpec {
    pub fn default_for(variate: &Variate) -> Self {
        if variate.is_discrete() {
            DEFAULT_INTEGER_GRID
        } else {
            DEFAULT_LOG_GRID
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        match *self {
            GridSpec::Log { lo, hi, points } => {
                if !(lo > 0.0 && hi >= lo && points >= 1) {
                    return param(format!("bad log grid [{lo}, {hi}] x {points}"));
                }
                if points == 1 {
                    return Ok(vec![lo]);
                }
                let (a, b) = (lo.ln(), hi.ln());
                let last = (points - 1) as f64;
                Ok((0..points)
                    .map(|i| (a + (b - a) * i as f64 / last).exp())
                    .collect())
            }
            GridSpec::Integer { max_j } => Ok((0..=max_j).map(|j| j as f64).collect()),
        }
    }
}

/// Outcome of one residual sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub pairing: String,
    /// Registry claim this check instantiates, or "ad hoc".
    pub provenance: String,
    pub role: Role,
    pub variate: String,
    pub law: String,
    pub mode: StabilityMode,
    pub c_used: f64,
    pub tolerance: f64,
    /// Discrete checks evaluate F(cj) through the continuous extension of m.
    pub continuous_extension: bool,
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    pub sup_residual: f64,
    pub pass: bool,
}

impl StabilityReport {
    /// Whether the verdict is the one the role predicts.
    pub fn as_expected(&self) -> bool {
        self.pass == (self.role == Role::Positive)
    }
}

pub fn verify_stability(
    problem: &StabilityProblem,
    grid: &GridSpec,
    tol: f64,
) -> Result<StabilityReport> {
    check_c(problem.c)?;
    let points = grid.points()?;
    let residuals: Vec<f64> = points.iter().map(|&x| problem.residual_at(x)).collect();
    let sup_residual = residuals.iter().copied().fold(0.0, f64::max);
    let provenance = identify_claim(&problem.variate, &problem.law, problem.mode)
        .map(|c| c.id().to_string())
        .unwrap_or_else(|| "ad hoc".into());
    Ok(StabilityReport {
        pairing: provenance.clone(),
        provenance,
        role: Role::Positive,
        variate: problem.variate.to_string(),
        law: problem.law.to_string(),
        mode: problem.mode,
        c_used: problem.c,
        tolerance: tol,
        continuous_extension: problem.variate.is_discrete(),
        grid: points,
        residuals,
        sup_residual,
        pass: sup_residual < tol,
    })
}

/// A known stabilizing pairing of a family of X with a law of N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    ExponentialSibuyaMax,
    ExponentialDegenerateMin,
    SemiWeibullSibuyaMax,
    SemiWeibullDegenerateMin,
    GspHarrisMin,
    SemiParetoGeometricMin,
    SemiParetoGeometricMax,
    ExtLogLogisticHarrisMax,
    DiscreteGeometricSibuyaMax,
    DiscreteGeometricDegenerateMin,
    DiscreteSemiWeibullSibuyaMax,
    DiscreteSemiWeibullDegenerateMin,
    DiscreteGspHarrisMin,
    DiscreteSemiParetoGeometricMin,
    DiscreteSemiParetoGeometricMax,
}

impl Claim {
    pub const ALL: [Claim; 15] = [
        Claim::ExponentialSibuyaMax,
        Claim::ExponentialDegenerateMin,
        Claim::SemiWeibullSibuyaMax,
        Claim::SemiWeibullDegenerateMin,
        Claim::GspHarrisMin,
        Claim::SemiParetoGeometricMin,
        Claim::SemiParetoGeometricMax,
        Claim::ExtLogLogisticHarrisMax,
        Claim::DiscreteGeometricSibuyaMax,
        Claim::DiscreteGeometricDegenerateMin,
        Claim::DiscreteSemiWeibullSibuyaMax,
        Claim::DiscreteSemiWeibullDegenerateMin,
        Claim::DiscreteGspHarrisMin,
        Claim::DiscreteSemiParetoGeometricMin,
        Claim::DiscreteSemiParetoGeometricMax,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::ExponentialSibuyaMax => "exponential/sibuya/max",
            Claim::ExponentialDegenerateMin => "exponential/degenerate/min",
            Claim::SemiWeibullSibuyaMax => "semi-weibull/sibuya/max",
            Claim::SemiWeibullDegenerateMin => "semi-weibull/degenerate/min",
            Claim::GspHarrisMin => "gsp/harris/min",
            Claim::SemiParetoGeometricMin => "semi-pareto/geometric-i1/min",
            Claim::SemiParetoGeometricMax => "semi-pareto/geometric-i1/max",
            Claim::ExtLogLogisticHarrisMax => "ext-log-logistic/harris/max",
            Claim::DiscreteGeometricSibuyaMax => "discrete-geometric-i0/sibuya/max",
            Claim::DiscreteGeometricDegenerateMin => "discrete-geometric-i0/degenerate/min",
            Claim::DiscreteSemiWeibullSibuyaMax => "discrete-semi-weibull/sibuya/max",
            Claim::DiscreteSemiWeibullDegenerateMin => "discrete-semi-weibull/degenerate/min",
            Claim::DiscreteGspHarrisMin => "discrete-gsp/harris/min",
            Claim::DiscreteSemiParetoGeometricMin => "discrete-semi-pareto/geometric-i1/min",
            Claim::DiscreteSemiParetoGeometricMax => "discrete-semi-pareto/geometric-i1/max",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == id)
            .ok_or_else(|| Error::Registry(id.to_string()))
    }

    pub fn mode(self) -> StabilityMode {
        if self.id().ends_with("/max") {
            StabilityMode::Max
        } else {
            StabilityMode::Min
        }
    }

    pub fn is_discrete(self) -> bool {
        self.id().starts_with("discrete-")
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Matches `(X, N, mode)` against the registry by family and law kind.
pub fn identify_claim(variate: &Variate, law: &DiscreteLaw, mode: StabilityMode) -> Option<Claim> {
    use ContinuousFamily as F;
    use DiscreteLaw as L;
    use StabilityMode::{Max, Min};
    let family = variate.continuous();
    let is_semi_pareto = match family {
        F::SemiPareto { .. } => true,
        F::GeneralizedSemiPareto { beta, .. } => *beta == 1.0,
        _ => false,
    };
    let claim = match (family, law, mode) {
        (F::Exponential { .. }, L::Sibuya(_), Max) => Claim::ExponentialSibuyaMax,
        (F::Exponential { .. }, L::Degenerate(_), Min) => Claim::ExponentialDegenerateMin,
        (F::SemiWeibull { .. }, L::Sibuya(_), Max) => Claim::SemiWeibullSibuyaMax,
        (F::SemiWeibull { .. }, L::Degenerate(_), Min) => Claim::SemiWeibullDegenerateMin,
        (F::GeneralizedSemiPareto { .. } | F::SemiPareto { .. }, L::Harris(_), Min) => {
            Claim::GspHarrisMin
        }
        (_, L::Geometric(g), Min) if is_semi_pareto && g.support() == Support::I1 => {
            Claim::SemiParetoGeometricMin
        }
        (_, L::Geometric(g), Max) if is_semi_pareto && g.support() == Support::I1 => {
            Claim::SemiParetoGeometricMax
        }
        (F::ExtendedLogLogistic { .. }, L::Harris(_), Max) => Claim::ExtLogLogisticHarrisMax,
        _ => return None,
    };
    if !variate.is_discrete() {
        return Some(claim);
    }
    Some(match claim {
        Claim::ExponentialSibuyaMax => Claim::DiscreteGeometricSibuyaMax,
        Claim::ExponentialDegenerateMin => Claim::DiscreteGeometricDegenerateMin,
        Claim::SemiWeibullSibuyaMax => Claim::DiscreteSemiWeibullSibuyaMax,
        Claim::SemiWeibullDegenerateMin => Claim::DiscreteSemiWeibullDegenerateMin,
        Claim::GspHarrisMin => Claim::DiscreteGspHarrisMin,
        Claim::SemiParetoGeometricMin => Claim::DiscreteSemiParetoGeometricMin,
        Claim::SemiParetoGeometricMax => Claim::DiscreteSemiParetoGeometricMax,
        Claim::ExtLogLogisticHarrisMax => return None,
        other => other,
    })
}

/// The stability constant a claim prescribes, from the law of N and the
/// hazard exponent α of X.
///
/// Every claim links the two as `c^α = scale(N)`, where the scale is `v` for
/// Sibuya, `1/k` for degenerate, `1/a` for Harris and `q` for geometric.
pub fn stability_constant(claim: Claim, law: &DiscreteLaw, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return param(format!("alpha = {alpha} must be positive"));
    }
    let scale = match (claim, law) {
        (
            Claim::ExponentialSibuyaMax
            | Claim::SemiWeibullSibuyaMax
            | Claim::DiscreteGeometricSibuyaMax
            | Claim::DiscreteSemiWeibullSibuyaMax,
            DiscreteLaw::Sibuya(s),
        ) => s.v(),
        (
            Claim::ExponentialDegenerateMin
            | Claim::SemiWeibullDegenerateMin
            | Claim::DiscreteGeometricDegenerateMin
            | Claim::DiscreteSemiWeibullDegenerateMin,
            DiscreteLaw::Degenerate(d),
        ) => {
            if d.k() < 2 {
                return param("a stabilizing degenerate law needs k > 1");
            }
            1.0 / d.k() as f64
        }
        (
            Claim::GspHarrisMin | Claim::DiscreteGspHarrisMin | Claim::ExtLogLogisticHarrisMax,
            DiscreteLaw::Harris(h),
        ) => 1.0 / h.a(),
        (
            Claim::SemiParetoGeometricMin
            | Claim::SemiParetoGeometricMax
            | Claim::DiscreteSemiParetoGeometricMin
            | Claim::DiscreteSemiParetoGeometricMax,
            DiscreteLaw::Geometric(g),
        ) if g.support() == Support::I1 => g.q(),
        _ => return Err(Error::Registry(format!("{claim} does not pair with {law}"))),
    };
    Ok(scale.powf(1.0 / alpha))
}

/// Resolves c for `(X, N, mode)` through the registry.
pub fn auto_constant(
    variate: &Variate,
    law: &DiscreteLaw,
    mode: StabilityMode,
) -> Result<(Claim, f64)> {
    let claim = identify_claim(variate, law, mode).ok_or_else(|| {
        Error::Registry(format!(
            "no registered pairing for {variate} with {law} ({mode})"
        ))
    })?;
    let c = stability_constant(claim, law, variate.alpha())?;
    Ok((claim, c))
}

/// What a registry entry is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Positive,
    WrongMode,
    WrongLaw,
    PerturbedC,
}

impl Role {
    pub fn label(self) -> &'static str {
        match self {
            Role::Positive => "positive",
            Role::WrongMode => "wrong-mode",
            Role::WrongLaw => "wrong-law",
            Role::PerturbedC => "perturbed-c",
        }
    }
}

/// Periodic-hazard setting applied to every hazard-driven registry family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HazardVariant {
    /// ε as a fraction of its monotonicity bound, in [-1, 1].
    pub eps_fraction: f64,
    pub phase: f64,
}

impl HazardVariant {
    pub const CLASSICAL: HazardVariant = HazardVariant {
        eps_fraction: 0.0,
        phase: 0.0,
    };

    fn hazard(&self, alpha: f64, p: f64) -> Result<PeriodicHazard> {
        let eps = self.eps_fraction * PeriodicHazard::eps_bound(p);
        PeriodicHazard::new(alpha, p, eps, self.phase)
    }
}

impl Default for HazardVariant {
    fn default() -> Self {
        Self::CLASSICAL
    }
}

/// One registry entry: a problem plus the verdict it is expected to produce.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub claim: Claim,
    pub role: Role,
    pub problem: StabilityProblem,
}

impl Pairing {
    pub fn id(&self) -> String {
        match self.role {
            Role::Positive => self.claim.id().to_string(),
            role => format!("{}#{}", self.claim.id(), role.label()),
        }
    }
}

/// Canonical `(X, N)` for a claim under a hazard variant; c resolved by the registry.
pub fn canonical_problem(claim: Claim, variant: HazardVariant) -> Result<StabilityProblem> {
    use Claim::*;
    let h = |alpha, p| variant.hazard(alpha, p);
    let (family, law) = match claim {
        ExponentialSibuyaMax => (
            ContinuousFamily::exponential(1.0)?,
            DiscreteLaw::sibuya(0.5)?,
        ),
        ExponentialDegenerateMin => (
            ContinuousFamily::exponential(1.0)?,
            DiscreteLaw::degenerate(3)?,
        ),
        SemiWeibullSibuyaMax => (
            ContinuousFamily::semi_weibull(h(1.5, 0.4)?),
            DiscreteLaw::sibuya(0.4)?,
        ),
        SemiWeibullDegenerateMin => (
            ContinuousFamily::semi_weibull(h(1.5, 0.5)?),
            DiscreteLaw::degenerate(2)?,
        ),
        GspHarrisMin => (
            ContinuousFamily::generalized_semi_pareto(h(1.0, 1.0 / 3.0)?, 0.5)?,
            DiscreteLaw::harris(3.0, 2)?,
        ),
        SemiParetoGeometricMin | SemiParetoGeometricMax => (
            ContinuousFamily::semi_pareto(h(2.0, 0.3)?),
            DiscreteLaw::geometric(0.3, Support::I1)?,
        ),
        ExtLogLogisticHarrisMax => {
            // c is free here; a = c^{-α} with c = 1/2, α = 1
            (
                ContinuousFamily::extended_log_logistic(1.0, 2)?,
                DiscreteLaw::harris(2.0, 2)?,
            )
        }
        DiscreteGeometricSibuyaMax => (
            ContinuousFamily::exponential(2f64.ln())?,
            DiscreteLaw::sibuya(0.5)?,
        ),
        DiscreteGeometricDegenerateMin => (
            ContinuousFamily::exponential(2f64.ln())?,
            DiscreteLaw::degenerate(3)?,
        ),
        DiscreteSemiWeibullSibuyaMax => (
            ContinuousFamily::semi_weibull(h(0.5, 0.4)?),
            DiscreteLaw::sibuya(0.4)?,
        ),
        DiscreteSemiWeibullDegenerateMin => (
            ContinuousFamily::semi_weibull(h(0.5, 0.5)?),
            DiscreteLaw::degenerate(2)?,
        ),
        DiscreteGspHarrisMin => (
            ContinuousFamily::generalized_semi_pareto(h(0.5, 1.0 / 3.0)?, 0.5)?,
            DiscreteLaw::harris(3.0, 2)?,
        ),
        DiscreteSemiParetoGeometricMin | DiscreteSemiParetoGeometricMax => (
            ContinuousFamily::semi_pareto(h(0.5, 0.3)?),
            DiscreteLaw::geometric(0.3, Support::I1)?,
        ),
    };
    let variate = if claim.is_discrete() {
        Variate::Discrete(DiscretizedFamily::new(family)?)
    } else {
        Variate::Continuous(family)
    };
    let c = stability_constant(claim, &law, variate.alpha())?;
    StabilityProblem::new(variate, law, claim.mode(), c)
}

/// A law of a different kind that must not stabilize the pairing.
pub fn substitute_law(law: &DiscreteLaw) -> Result<DiscreteLaw> {
    match law {
        DiscreteLaw::Sibuya(s) => DiscreteLaw::geometric(s.v(), Support::I1),
        DiscreteLaw::Degenerate(d) => DiscreteLaw::geometric(1.0 / d.k() as f64, Support::I1),
        DiscreteLaw::Harris(h) => DiscreteLaw::sibuya(1.0 / h.a()),
        DiscreteLaw::Geometric(g) => {
            let other = match g.support() {
                Support::I1 => Support::I0,
                Support::I0 => Support::I1,
            };
            DiscreteLaw::geometric(g.q(), other)
        }
    }
}

/// Positive pairings followed by their negative controls, in canonical order.
///
/// Wrong-mode controls are skipped where the flipped mode is itself a claim
/// (semi-Pareto is stable for geometric N in both modes).
pub fn registry(variant: HazardVariant, with_controls: bool) -> Result<Vec<Pairing>> {
    let mut out = Vec::new();
    for claim in Claim::ALL {
        let problem = canonical_problem(claim, variant)?;
        out.push(Pairing {
            claim,
            role: Role::Positive,
            problem,
        });
        if !with_controls {
            continue;
        }
        let flipped = problem.mode.flipped();
        if identify_claim(&problem.variate, &problem.law, flipped).is_none() {
            out.push(Pairing {
                claim,
                role: Role::WrongMode,
                problem: StabilityProblem {
                    mode: flipped,
                    ..problem
                },
            });
        }
        out.push(Pairing {
            claim,
            role: Role::WrongLaw,
            problem: StabilityProblem {
                law: substitute_law(&problem.law)?,
                ..problem
            },
        });
        out.push(Pairing {
            claim,
            role: Role::PerturbedC,
            problem: StabilityProblem::new(
                problem.variate,
                problem.law,
                problem.mode,
                problem.c * C_PERTURBATION,
            )?,
        });
    }
    Ok(out)
}

/// Settings for [`registry_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub tolerance: f64,
    /// Grid for continuous pairings; discrete ones always use `discrete_grid`.
    pub continuous_grid: GridSpec,
    pub discrete_grid: GridSpec,
    pub variant: HazardVariant,
    pub with_controls: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tolerance: DEFAULT_TOLERANCE,
            continuous_grid: DEFAULT_LOG_GRID,
            discrete_grid: DEFAULT_INTEGER_GRID,
            variant: HazardVariant::CLASSICAL,
            with_controls: true,
        }
    }
}

/// Runs every registry entry; failures are reported, not raised.
pub fn registry_suite(cfg: &SuiteConfig) -> Result<Vec<StabilityReport>> {
    let entries = registry(cfg.variant, cfg.with_controls)?;
    entries
        .par_iter()
        .map(|entry| {
            let grid = if entry.problem.variate.is_discrete() {
                cfg.discrete_grid
            } else {
                cfg.continuous_grid
            };
            let mut report = verify_stability(&entry.problem, &grid, cfg.tolerance)?;
            report.pairing = entry.id();
            report.provenance = entry.claim.id().to_string();
            report.role = entry.role;
            Ok(report)
        })
        .collect()
}
