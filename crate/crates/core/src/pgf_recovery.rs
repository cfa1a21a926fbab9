//! Recovers the PGF a family and a constant c force on N, extracts its
//! power-series coefficients by a discrete Cauchy integral, and decides
//! whether they form a probability distribution.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::continuous_families::ContinuousFamily;
use crate::discrete_laws::DiscreteLaw;
use crate::error::{domain, param, Error, Result};
use crate::special::Prob;
use crate::stability::StabilityMode;

pub const TOL_NEG: f64 = 1e-8;
pub const TOL_SUM: f64 = 1e-6;
pub const TOL_RECON: f64 = 1e-7;
/// Largest acceptable `r^{-n_max}` when the radius is chosen automatically.
pub const MAX_AMPLIFICATION: f64 = 1e6;
const RECON_POINTS: usize = 200;

/// `F(c F⁻¹(s))`: the PGF max-stability would require.
pub fn implied_max_pgf(f: &ContinuousFamily, c: f64, s: f64) -> Result<f64> {
    check_args(c, s)?;
    let x = f.quantile(s)?;
    Ok(f.prob(c * x)?.value)
}

/// `R(R⁻¹(s) / c)`: the PGF min-stability would require.
pub fn implied_min_pgf(f: &ContinuousFamily, c: f64, s: f64) -> Result<f64> {
    check_args(c, s)?;
    let x = f.quantile_prob(Prob::from_complement(s))?;
    Ok(f.prob(x / c)?.complement)
}

fn check_args(c: f64, s: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return param(format!("stability constant c = {c} must lie in (0, 1)"));
    }
    if !(s > 0.0 && s < 1.0) {
        return domain(format!("PGF argument s = {s} outside (0, 1)"));
    }
    Ok(())
}

/// Continues logarithms along a path so fractional powers stay on one branch.
///
/// Each call to [`BranchTracker::ln`] owns a slot; a function evaluated at a
/// sequence of nearby points must issue its `ln` calls in the same order
/// every time. A fresh tracker gives principal branches.
#[derive(Debug, Default, Clone)]
pub struct BranchTracker {
    logs: Vec<Complex64>,
    slot: usize,
}

impl BranchTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Marks the start of a new evaluation point.
    pub fn step(&mut self) {
        self.slot = 0;
    }

    pub fn ln(&mut self, z: Complex64) -> Complex64 {
        let mut l = z.ln();
        if let Some(prev) = self.logs.get(self.slot) {
            let turns = ((prev.im - l.im) / (2.0 * PI)).round();
            l.im += 2.0 * PI * turns;
            self.logs[self.slot] = l;
        } else {
            self.logs.push(l);
        }
        self.slot += 1;
        l
    }

    /// `z^w` on the tracked branch; `0^w = 0` for `w > 0`.
    pub fn pow(&mut self, z: Complex64, w: f64) -> Complex64 {
        if z.norm() == 0.0 {
            if self.logs.len() <= self.slot {
                self.logs.push(Complex64::new(0.0, 0.0));
            }
            self.slot += 1;
            return if w > 0.0 {
                z
            } else {
                Complex64::new(f64::INFINITY, 0.0)
            };
        }
        (self.ln(z) * w).exp()
    }
}

/// A function analytic near `[0, 1)` evaluated with branch tracking.
pub trait AnalyticFn {
    fn eval(&self, z: Complex64, tracker: &mut BranchTracker) -> Complex64;

    /// Value on the real axis through principal branches.
    fn eval_real(&self, s: f64) -> f64 {
        self.eval(Complex64::new(s, 0.0), &mut BranchTracker::new())
            .re
    }
}

impl<F: Fn(Complex64, &mut BranchTracker) -> Complex64> AnalyticFn for F {
    fn eval(&self, z: Complex64, tracker: &mut BranchTracker) -> Complex64 {
        self(z, tracker)
    }
}

/// How the survival function depends on the hazard `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum HazardShape {
    /// R = e^{-h}
    Exponential,
    /// R = (1 + h)^{-β}
    Pareto { beta: f64 },
    /// F = (1 + y)^{-1/k}, y = x^{-α}
    LogLogistic { k: f64 },
}

/// The implied PGF of a family as an explicit function of complex `s`.
///
/// Scaling x by c multiplies the hazard by `c^α`, which is exact for a pure
/// power hazard and, for a periodic one, whenever `c^α` is an integer power
/// of `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpliedPgf {
    shape: HazardShape,
    mode: StabilityMode,
    /// Hazard factor `h(cx) / h(x)`.
    factor: f64,
}

impl ImpliedPgf {
    pub fn new(f: &ContinuousFamily, c: f64, mode: StabilityMode) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return param(format!("stability constant c = {c} must lie in (0, 1)"));
        }
        let shape = match *f {
            ContinuousFamily::Exponential { .. } | ContinuousFamily::SemiWeibull { .. } => {
                HazardShape::Exponential
            }
            ContinuousFamily::GeneralizedSemiPareto { beta, .. } => HazardShape::Pareto { beta },
            ContinuousFamily::SemiPareto { .. } => HazardShape::Pareto { beta: 1.0 },
            ContinuousFamily::ExtendedLogLogistic { k, .. } => {
                HazardShape::LogLogistic { k: k as f64 }
            }
        };
        let factor = c.powf(f.alpha());
        if let Some(h) = f.hazard().filter(|h| h.eps() != 0.0) {
            let periods = factor.ln() / h.p().ln();
            if (periods - periods.round()).abs() > 1e-9 || periods.round() < 1.0 {
                return param(format!(
                    "c^alpha = {factor} is not an integer power of p = {}; \
                     no closed-form continuation for a periodic hazard",
                    h.p()
                ));
            }
        }
        Ok(ImpliedPgf {
            shape,
            mode,
            factor,
        })
    }
}

impl AnalyticFn for ImpliedPgf {
    fn eval(&self, s: Complex64, t: &mut BranchTracker) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let kappa = self.factor;
        match (self.shape, self.mode) {
            // h = -ln(1 - s); Q = 1 - exp(-κh)
            (HazardShape::Exponential, StabilityMode::Max) => one - t.pow(one - s, kappa),
            // h = -ln s; Q = exp(-h/κ)
            (HazardShape::Exponential, StabilityMode::Min) => t.pow(s, 1.0 / kappa),
            (HazardShape::Pareto { beta }, StabilityMode::Max) => {
                let h = t.pow(one - s, -1.0 / beta) - one;
                one - t.pow(one + kappa * h, -beta)
            }
            (HazardShape::Pareto { beta }, StabilityMode::Min) => {
                let h = t.pow(s, -1.0 / beta) - one;
                t.pow(one + h / kappa, -beta)
            }
            // y(cx) = y(x) / κ
            (HazardShape::LogLogistic { k }, StabilityMode::Max) => {
                let y = t.pow(s, -k) - one;
                t.pow(one + y / kappa, -1.0 / k)
            }
            (HazardShape::LogLogistic { k }, StabilityMode::Min) => {
                let y = t.pow(one - s, -k) - one;
                one - t.pow(one + kappa * y, -1.0 / k)
            }
        }
    }
}

/// `s ↦ Q(s^t)` for a law of N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerComposed {
    pub law: DiscreteLaw,
    pub t: f64,
}

impl AnalyticFn for PowerComposed {
    fn eval(&self, s: Complex64, tracker: &mut BranchTracker) -> Complex64 {
        self.law.pgf_complex(tracker.pow(s, self.t))
    }
}

/// Default extraction radius: 1/2 unless that would amplify rounding in the
/// top coefficient beyond [`MAX_AMPLIFICATION`].
pub fn default_radius(n_max: usize) -> f64 {
    if n_max == 0 {
        return 0.5;
    }
    MAX_AMPLIFICATION.powf(-1.0 / n_max as f64).clamp(0.5, 0.95)
}

/// Trapezoidal Cauchy-integral estimates of the Taylor coefficients of `g`.
///
/// `g` is sampled at `M = samples` equispaced points of the circle `|s| = r`.
/// It is called in order along the upper half from `θ = 0` to `θ = π`, so
/// branch tracking continues from the positive real axis; the lower half
/// follows from `g(s̄) = conj g(s)`.
pub fn extract_coeffs(
    g: &dyn AnalyticFn,
    radius: f64,
    n_max: usize,
    samples: usize,
) -> Result<Vec<f64>> {
    if !(radius > 0.0 && radius < 1.0) {
        return param(format!("extraction radius {radius} must lie in (0, 1)"));
    }
    if samples < 2 * (n_max + 1) || !samples.is_multiple_of(2) {
        return param(format!(
            "need an even sample count >= {}, got {samples}",
            2 * (n_max + 1)
        ));
    }
    let scale = radius.powi(n_max as i32);
    if !(scale > 1e3 * f64::MIN_POSITIVE) {
        return Err(Error::Instability(format!(
            "r^n underflows at r = {radius}, n_max = {n_max}"
        )));
    }
    let half = samples / 2;
    let mut tracker = BranchTracker::new();
    let values: Vec<Complex64> = (0..=half)
        .map(|m| {
            tracker.step();
            let theta = 2.0 * PI * m as f64 / samples as f64;
            g.eval(Complex64::from_polar(radius, theta), &mut tracker)
        })
        .collect();
    let mut coeffs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = values[0].re;
        acc += if n % 2 == 0 {
            values[half].re
        } else {
            -values[half].re
        };
        let mut inner = 0.0;
        for (m, v) in values.iter().enumerate().take(half).skip(1) {
            let phase = -2.0 * PI * ((n * m) % samples) as f64 / samples as f64;
            inner += (v * Complex64::from_polar(1.0, phase)).re;
        }
        acc += 2.0 * inner;
        coeffs.push(acc / (samples as f64 * radius.powi(n as i32)));
    }
    Ok(coeffs)
}

/// `sup |Σ aₙ sⁿ - g(s)|` over `s ∈ [0, r]`.
pub fn reconstruction_error(g: &dyn AnalyticFn, coeffs: &[f64], radius: f64) -> f64 {
    (1..=RECON_POINTS)
        .map(|i| {
            let s = radius * i as f64 / RECON_POINTS as f64;
            let series = coeffs.iter().rev().fold(0.0, |acc, &a| acc * s + a);
            (series - g.eval_real(s)).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PgfTolerances {
    pub neg: f64,
    pub sum: f64,
    pub recon: f64,
}

impl Default for PgfTolerances {
    fn default() -> Self {
        PgfTolerances {
            neg: TOL_NEG,
            sum: TOL_SUM,
            recon: TOL_RECON,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum InvalidReason {
    /// The truncated series does not reproduce the function on `[0, r]`.
    Reconstruction {
        error: f64,
    },
    NegativeCoefficient {
        n: usize,
        value: f64,
    },
    /// Partial sum above 1, or total mass `g(1)` away from 1.
    Sum {
        partial: f64,
        total: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PgfVerdict {
    ValidPgf,
    Invalid(InvalidReason),
}

impl PgfVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PgfVerdict::ValidPgf)
    }
}

/// Decides whether extracted coefficients describe a law on the integers.
///
/// Checks run in order: reconstruction, sign, mass. `total_mass` is `g(1)`,
/// the Abel limit of the full series; a heavy tail keeps the truncated sum
/// well below 1, so only `partial <= 1 + tol` is asked of it.
pub fn validate_pgf(
    coeffs: &[f64],
    recon_error: f64,
    total_mass: f64,
    tols: &PgfTolerances,
) -> PgfVerdict {
    if !(recon_error < tols.recon) {
        return PgfVerdict::Invalid(InvalidReason::Reconstruction { error: recon_error });
    }
    if let Some((n, &value)) = coeffs.iter().enumerate().find(|(_, &a)| a < -tols.neg) {
        return PgfVerdict::Invalid(InvalidReason::NegativeCoefficient { n, value });
    }
    let partial: f64 = coeffs.iter().sum();
    if partial > 1.0 + tols.sum || (total_mass - 1.0).abs() > tols.sum {
        return PgfVerdict::Invalid(InvalidReason::Sum {
            partial,
            total: total_mass,
        });
    }
    PgfVerdict::ValidPgf
}

/// Extraction settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    pub n_max: usize,
    /// `None` picks [`default_radius`].
    pub radius: Option<f64>,
    /// `None` uses `8 * n_max` (at least 64).
    pub samples: Option<usize>,
    pub tolerances: PgfTolerances,
}

impl ExtractionConfig {
    pub fn new(n_max: usize) -> Self {
        ExtractionConfig {
            n_max,
            radius: None,
            samples: None,
            tolerances: PgfTolerances::default(),
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius.unwrap_or_else(|| default_radius(self.n_max))
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or((8 * self.n_max).max(64))
    }
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self::new(30)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgfEstimate {
    pub coeffs: Vec<f64>,
    pub radius: f64,
    pub samples: usize,
    pub recon_error: f64,
    pub total_mass: f64,
    pub verdict: PgfVerdict,
}

/// Extract, reconstruct and validate in one pass.
pub fn estimate(g: &dyn AnalyticFn, cfg: &ExtractionConfig) -> Result<PgfEstimate> {
    let radius = cfg.radius();
    let samples = cfg.samples();
    let coeffs = extract_coeffs(g, radius, cfg.n_max, samples)?;
    let recon_error = reconstruction_error(g, &coeffs, radius);
    let total_mass = g.eval_real(1.0);
    let verdict = validate_pgf(&coeffs, recon_error, total_mass, &cfg.tolerances);
    Ok(PgfEstimate {
        coeffs,
        radius,
        samples,
        recon_error,
        total_mass,
        verdict,
    })
}

/// Recovers the PGF that `(f, c, mode)` requires of N.
pub fn recover(
    f: &ContinuousFamily,
    c: f64,
    mode: StabilityMode,
    cfg: &ExtractionConfig,
) -> Result<PgfEstimate> {
    estimate(&ImpliedPgf::new(f, c, mode)?, cfg)
}

/// Whether `s ↦ Q(s^t)` is again a PGF.
pub fn power_pgf_check(law: &DiscreteLaw, t: f64, cfg: &ExtractionConfig) -> Result<PgfEstimate> {
    if !(t > 0.0 && t.is_finite()) {
        return param(format!("exponent t = {t} must be positive"));
    }
    estimate(&PowerComposed { law: *law, t }, cfg)
}
