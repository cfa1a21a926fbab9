//! Monte Carlo check of stability: simulate the extreme of N i.i.d. copies
//! of X and compare it with the law the stability equation predicts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuous_families::open_open_unit;
use crate::discrete_laws::DiscreteLaw;
use crate::error::{param, Result};
use crate::special::Prob;
use crate::stability::{StabilityMode, StabilityProblem};
use crate::variate::Variate;

pub const MIN_TRIALS: usize = 1_000;
pub const DEFAULT_SIGNIFICANCE: f64 = 0.01;
/// Seeds used by the shipped Monte Carlo checks.
pub const SHIPPED_SEEDS: [u64; 5] = [42, 1_234, 2_024, 77_777, 9_001];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: usize,
    pub seed: u64,
    pub significance: f64,
}

impl McConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        McConfig {
            trials,
            seed,
            significance: DEFAULT_SIGNIFICANCE,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials < MIN_TRIALS {
            return param(format!(
                "need at least {MIN_TRIALS} trials, got {}",
                self.trials
            ));
        }
        if !(self.significance > 0.0 && self.significance < 1.0) {
            return param(format!("significance {} outside (0, 1)", self.significance));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub variate: String,
    pub law: String,
    pub mode: StabilityMode,
    pub c: f64,
    pub trials: usize,
    pub seed: u64,
    pub significance: f64,
    pub ks_stat: f64,
    pub ks_critical: f64,
    pub pass: bool,
}

/// Generator for one trial, keyed by `(seed, trial)`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Asymptotic KS critical value `c(α)/√n`.
pub fn ks_critical(significance: f64, n: usize) -> f64 {
    const TABLE: [(f64, f64); 4] = [(0.10, 1.22), (0.05, 1.36), (0.01, 1.63), (0.001, 1.95)];
    let coef = TABLE
        .iter()
        .find(|(a, _)| *a == significance)
        .map_or_else(|| (-0.5 * (significance / 2.0).ln()).sqrt(), |(_, c)| *c);
    coef / (n as f64).sqrt()
}

/// `sup |ECDF - G|` for sorted continuous samples.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let g = cdf(x);
            ((i + 1) as f64 / n - g).abs().max((i as f64 / n - g).abs())
        })
        .fold(0.0, f64::max)
}

/// `sup |ECDF - G|` for sorted nonnegative integer samples stored as `f64`;
/// `cdf(j) = P(Y <= j)`.
///
/// Both functions are step functions on the integers, so the supremum is
/// attained just before or at an observed value.
pub fn ks_statistic_discrete(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut end = i;
        while end < sorted.len() && sorted[end] == v {
            end += 1;
        }
        let below = if v <= 0.0 { 0.0 } else { cdf(v - 1.0) };
        d = d.max((i as f64 / n - below).abs());
        d = d.max((end as f64 / n - cdf(v)).abs());
        i = end;
    }
    d
}

/// Two-sample KS distance between sorted samples; ties are stepped over
/// together so discrete data are handled exactly.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Two-sample critical value `c(α)·√((n + m)/(n·m))`.
pub fn ks_critical_two_sample(significance: f64, n: usize, m: usize) -> f64 {
    // ks_critical(α, k) = c(α)/√k, so pick k = n·m/(n + m)
    let eff = (n as f64 * m as f64) / (n + m) as f64;
    ks_critical(significance, 1) / eff.sqrt()
}

/// `V = U^{1/n}`, distributed as the largest of n uniforms.
fn max_of_uniforms<R: Rng + ?Sized>(n: u64, rng: &mut R) -> Prob {
    let ln_v = open_open_unit(rng).ln() / n as f64;
    Prob::from_ln_value(ln_v)
}

/// One random extreme, as a real for both continuous and discrete X.
///
/// The order-statistic shortcut makes each draw O(1) in N: the max of n
/// draws is `F⁻¹(V)` and the min is `R⁻¹(V)` with `V` the largest of n uniforms.
pub fn sample_extreme<R: Rng + ?Sized>(
    x: &Variate,
    law: &DiscreteLaw,
    mode: StabilityMode,
    rng: &mut R,
) -> Result<f64> {
    let n = law.sample(rng)?;
    if n == 0 {
        return Ok(match mode {
            StabilityMode::Max => f64::NEG_INFINITY,
            StabilityMode::Min => f64::INFINITY,
        });
    }
    let v = max_of_uniforms(n, rng);
    // cdf level of the extreme
    let level = match mode {
        StabilityMode::Max => v,
        StabilityMode::Min => v.flip(),
    };
    match x {
        Variate::Continuous(f) => f.quantile_prob(level),
        Variate::Discrete(d) => d.quantile_survival_real(level.flip()),
    }
}

/// Reference sampler: draws all n copies of X.
pub fn sample_extreme_naive<R: Rng + ?Sized>(
    x: &Variate,
    law: &DiscreteLaw,
    mode: StabilityMode,
    rng: &mut R,
) -> Result<f64> {
    let n = law.sample(rng)?;
    let mut best = match mode {
        StabilityMode::Max => f64::NEG_INFINITY,
        StabilityMode::Min => f64::INFINITY,
    };
    for _ in 0..n {
        let draw = match x {
            Variate::Continuous(f) => f.sample(rng)?,
            Variate::Discrete(d) => d.sample(rng)? as f64,
        };
        best = match mode {
            StabilityMode::Max => best.max(draw),
            StabilityMode::Min => best.min(draw),
        };
    }
    Ok(best)
}

/// `P(extreme <= y)` as predicted by the stability equation.
pub fn predicted_cdf(p: &StabilityProblem, y: f64) -> f64 {
    // discrete X: P(Y <= j) = P(Y < j + 1)
    let y = if p.variate.is_discrete() { y + 1.0 } else { y };
    let arg = match p.mode {
        StabilityMode::Max => p.c * y,
        StabilityMode::Min => y / p.c,
    };
    p.variate.prob_ext(arg).value
}

/// Draws `trials` extremes keyed by `(seed, trial index)`, sorted ascending.
pub fn simulate_extremes(p: &StabilityProblem, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let mut out = (0..trials as u64)
        .into_par_iter()
        .map(|t| sample_extreme(&p.variate, &p.law, p.mode, &mut trial_rng(seed, t)))
        .collect::<Result<Vec<f64>>>()?;
    out.sort_by(f64::total_cmp);
    Ok(out)
}

pub fn mc_stability_test(p: &StabilityProblem, cfg: &McConfig) -> Result<McReport> {
    cfg.validate()?;
    if !(p.c > 0.0 && p.c < 1.0) {
        return param(format!("stability constant c = {} must lie in (0, 1)", p.c));
    }
    let samples = simulate_extremes(p, cfg.trials, cfg.seed)?;
    let ks_stat = if p.variate.is_discrete() {
        ks_statistic_discrete(&samples, |y| predicted_cdf(p, y))
    } else {
        ks_statistic(&samples, |y| predicted_cdf(p, y))
    };
    let ks_critical = ks_critical(cfg.significance, cfg.trials);
    Ok(McReport {
        variate: p.variate.to_string(),
        law: p.law.to_string(),
        mode: p.mode,
        c: p.c,
        trials: cfg.trials,
        seed: cfg.seed,
        significance: cfg.significance,
        ks_stat,
        ks_critical,
        pass: ks_stat < ks_critical,
    })
}
