//! Continuous laws on (0, ∞) driven by a log-periodic hazard.
//!
//! Every "semi-" family is a monotone transform of a hazard ψ with
//! `ψ(x) = ψ(p^{1/α} x) / p`. Solutions have the form `x^α h(ln x)` with `h`
//! periodic of period `ln(1/p)/α`; [`PeriodicHazard`] uses the one-harmonic
//! choice `h(u) = exp(ε sin(2πu/T + φ))`.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Error, Result};
use crate::special::Prob;

/// ψ(x) = x^α · exp(ε · sin(2π ln x / T + φ)), T = ln(1/p) / α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicHazard {
    alpha: f64,
    p: f64,
    eps: f64,
    phase: f64,
}

impl PeriodicHazard {
    pub fn new(alpha: f64, p: f64, eps: f64, phase: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return param(format!("hazard exponent alpha = {alpha} must be positive"));
        }
        if !(p > 0.0 && p < 1.0) {
            return param(format!("hazard scale p = {p} must lie in (0, 1)"));
        }
        let bound = Self::eps_bound(p);
        if !eps.is_finite() || eps.abs() > bound * (1.0 + 1e-12) {
            return param(format!(
                "periodic amplitude |eps| = {} exceeds monotonicity bound ln(1/p)/(2π) = {bound}",
                eps.abs()
            ));
        }
        if !phase.is_finite() {
            return param("hazard phase must be finite");
        }
        Ok(PeriodicHazard {
            alpha,
            p,
            eps,
            phase: phase.rem_euclid(2.0 * PI),
        })
    }

    /// Pure power hazard `x^α` (ε = 0); `p` only fixes the scaling constant.
    pub fn power(alpha: f64, p: f64) -> Result<Self> {
        Self::new(alpha, p, 0.0, 0.0)
    }

    /// Largest |ε| keeping ψ nondecreasing.
    pub fn eps_bound(p: f64) -> f64 {
        (1.0 / p).ln() / (2.0 * PI)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Log-period T of the modulation.
    pub fn period(&self) -> f64 {
        (1.0 / self.p).ln() / self.alpha
    }

    /// Scale `p^{1/α}` under which ψ picks up exactly the factor `p`.
    pub fn natural_scale(&self) -> f64 {
        self.p.powf(1.0 / self.alpha)
    }

    fn modulation(&self, ln_x: f64) -> f64 {
        if self.eps == 0.0 {
            0.0
        } else {
            self.eps * (2.0 * PI * ln_x / self.period() + self.phase).sin()
        }
    }

    /// `ln ψ(e^u)`.
    pub fn ln_eval_log(&self, u: f64) -> f64 {
        self.alpha * u + self.modulation(u)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return domain(format!("hazard argument x = {x} must be positive"));
        }
        Ok(self.ln_eval_log(x.ln()).exp())
    }

    /// Solves `ψ(x) = h` for `x`, given `ln h`.
    pub fn inverse_ln(&self, ln_h: f64) -> Result<f64> {
        let u0 = ln_h / self.alpha;
        if self.eps == 0.0 {
            return Ok(u0.exp());
        }
        // e^{-|ε|} ≤ h ≤ e^{|ε|} pinches ψ between the scaled power hazards
        let half_width = (1.0 / self.p).ln() / self.alpha;
        let (mut lo, mut hi) = (u0 - half_width, u0 + half_width);
        let g = |u: f64| self.ln_eval_log(u) - ln_h;
        if g(lo) > 0.0 || g(hi) < 0.0 {
            return Err(Error::Convergence(format!(
                "no bracket for ln h = {ln_h} on [{lo}, {hi}]"
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }
}

/// A continuous distribution on (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ContinuousFamily {
    Exponential {
        rate: f64,
    },
    /// F = 1 - exp(-ψ)
    SemiWeibull {
        hazard: PeriodicHazard,
    },
    /// F = 1 - (1 + ψ)^{-β}
    GeneralizedSemiPareto {
        hazard: PeriodicHazard,
        beta: f64,
    },
    /// Generalized semi-Pareto with β = 1.
    SemiPareto {
        hazard: PeriodicHazard,
    },
    /// F = (1 + x^{-α})^{-1/k}
    ExtendedLogLogistic {
        alpha: f64,
        k: u32,
    },
}

impl ContinuousFamily {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return param(format!("exponential rate {rate} must be positive"));
        }
        Ok(ContinuousFamily::Exponential { rate })
    }

    pub fn semi_weibull(hazard: PeriodicHazard) -> Self {
        ContinuousFamily::SemiWeibull { hazard }
    }

    pub fn generalized_semi_pareto(hazard: PeriodicHazard, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return param(format!("shape beta = {beta} must be positive"));
        }
        Ok(ContinuousFamily::GeneralizedSemiPareto { hazard, beta })
    }

    pub fn semi_pareto(hazard: PeriodicHazard) -> Self {
        ContinuousFamily::SemiPareto { hazard }
    }

    pub fn extended_log_logistic(alpha: f64, k: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return param(format!(
                "log-logistic exponent alpha = {alpha} must be positive"
            ));
        }
        if k == 0 {
            return param("log-logistic power k must be a positive integer");
        }
        Ok(ContinuousFamily::ExtendedLogLogistic { alpha, k })
    }

    pub fn hazard(&self) -> Option<&PeriodicHazard> {
        match self {
            ContinuousFamily::SemiWeibull { hazard }
            | ContinuousFamily::GeneralizedSemiPareto { hazard, .. }
            | ContinuousFamily::SemiPareto { hazard } => Some(hazard),
            _ => None,
        }
    }

    /// Same family with a different hazard; non-hazard families are returned unchanged.
    pub fn with_hazard(&self, h: PeriodicHazard) -> Self {
        match *self {
            ContinuousFamily::SemiWeibull { .. } => ContinuousFamily::SemiWeibull { hazard: h },
            ContinuousFamily::GeneralizedSemiPareto { beta, .. } => {
                ContinuousFamily::GeneralizedSemiPareto { hazard: h, beta }
            }
            ContinuousFamily::SemiPareto { .. } => ContinuousFamily::SemiPareto { hazard: h },
            other => other,
        }
    }

    /// Exponent of the power part of the hazard (1 for the exponential).
    pub fn alpha(&self) -> f64 {
        match self {
            ContinuousFamily::Exponential { .. } => 1.0,
            ContinuousFamily::ExtendedLogLogistic { alpha, .. } => *alpha,
            _ => self.hazard().map(|h| h.alpha()).unwrap_or(1.0),
        }
    }

    fn beta(&self) -> f64 {
        match self {
            ContinuousFamily::GeneralizedSemiPareto { beta, .. } => *beta,
            _ => 1.0,
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.prob(x)?.value)
    }

    /// `1 - F(x)`, computed in its own closed form.
    pub fn survival(&self, x: f64) -> Result<f64> {
        Ok(self.prob(x)?.complement)
    }

    /// `(F(x), 1 - F(x))`; every family lives on `(0, ∞)`, so `F = 0` for `x <= 0`.
    pub fn prob(&self, x: f64) -> Result<Prob> {
        if x.is_nan() {
            return domain("argument x is NaN");
        }
        Ok(self.prob_unchecked(x))
    }

    /// Extension to `x >= 0` with `F(0) = 0` and `F(∞) = 1`.
    pub(crate) fn prob_unchecked(&self, x: f64) -> Prob {
        if x <= 0.0 {
            return Prob::split(0.0, 1.0);
        }
        if x == f64::INFINITY {
            return Prob::split(1.0, 0.0);
        }
        let ln_x = x.ln();
        match *self {
            ContinuousFamily::Exponential { rate } => Prob::from_ln_value(-rate * x).flip(),
            ContinuousFamily::SemiWeibull { hazard } => {
                Prob::from_ln_value(-hazard.ln_eval_log(ln_x).exp()).flip()
            }
            ContinuousFamily::GeneralizedSemiPareto { hazard, .. }
            | ContinuousFamily::SemiPareto { hazard } => {
                let psi = hazard.ln_eval_log(ln_x).exp();
                Prob::from_ln_value(-self.beta() * psi.ln_1p()).flip()
            }
            ContinuousFamily::ExtendedLogLogistic { alpha, k } => {
                Prob::from_ln_value(-(-alpha * ln_x).exp().ln_1p() / k as f64)
            }
        }
    }

    pub fn quantile(&self, s: f64) -> Result<f64> {
        self.quantile_prob(Prob::from_value(s))
    }

    /// Inverse cdf at a two-sided probability; tails use whichever side is small.
    pub fn quantile_prob(&self, s: Prob) -> Result<f64> {
        if !(s.value > 0.0 && s.complement > 0.0) {
            return domain(format!("quantile level {} outside (0, 1)", s.value));
        }
        match *self {
            ContinuousFamily::Exponential { rate } => Ok(-s.ln_complement() / rate),
            ContinuousFamily::SemiWeibull { hazard } => {
                // ψ = -ln R
                hazard.inverse_ln((-s.ln_complement()).ln())
            }
            ContinuousFamily::GeneralizedSemiPareto { hazard, .. }
            | ContinuousFamily::SemiPareto { hazard } => {
                // ψ = R^{-1/β} - 1
                let psi = (-s.ln_complement() / self.beta()).exp_m1();
                hazard.inverse_ln(psi.ln())
            }
            ContinuousFamily::ExtendedLogLogistic { alpha, k } => {
                // x^{-α} = F^{-k} - 1
                let y = (-(k as f64) * s.ln_value()).exp_m1();
                Ok((-y.ln() / alpha).exp())
            }
        }
    }

    /// Inverse-transform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        self.quantile(open_open_unit(rng))
    }
}

impl fmt::Display for ContinuousFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hz = |h: &PeriodicHazard| {
            format!(
                "alpha={}, p={}, eps={}, phase={}",
                h.alpha, h.p, h.eps, h.phase
            )
        };
        match self {
            ContinuousFamily::Exponential { rate } => write!(f, "Exponential(rate={rate})"),
            ContinuousFamily::SemiWeibull { hazard } => write!(f, "SemiWeibull({})", hz(hazard)),
            ContinuousFamily::GeneralizedSemiPareto { hazard, beta } => {
                write!(f, "GSP({}, beta={beta})", hz(hazard))
            }
            ContinuousFamily::SemiPareto { hazard } => write!(f, "SemiPareto({})", hz(hazard)),
            ContinuousFamily::ExtendedLogLogistic { alpha, k } => {
                write!(f, "ExtLogLogistic(alpha={alpha}, k={k})")
            }
        }
    }
}

/// Uniform draw on the open interval (0, 1).
pub(crate) fn open_open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.random::<u64>() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}
