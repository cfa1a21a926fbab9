//! Laws on {0, 1, 2, ...} with `P(X >= j) = m(j)`, where `m` is the survival
//! function of a continuous base whose survival is a Laplace transform.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::continuous_families::{open_open_unit, ContinuousFamily};
use crate::discrete_laws::INTEGER_CAP;
use crate::error::{param, Error, Result};
use crate::special::Prob;

/// Tail mass below which the nonnegativity sweep stops.
pub const SWEEP_TAIL: f64 = 1e-10;
const NEGATIVE_MASS_TOL: f64 = 1e-14;
const DENSE_SWEEP: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscretizedFamily {
    base: ContinuousFamily,
}

impl DiscretizedFamily {
    /// Accepts exponential, semi-Weibull and (generalized) semi-Pareto bases,
    /// the latter with `α < 1`.
    pub fn new(base: ContinuousFamily) -> Result<Self> {
        match base {
            ContinuousFamily::ExtendedLogLogistic { .. } => {
                return param("extended log-logistic has no discretized version");
            }
            ContinuousFamily::Exponential { .. } => {}
            _ => {
                let alpha = base.alpha();
                if alpha >= 1.0 {
                    return param(format!(
                        "discretized semi-families need alpha < 1, got {alpha}"
                    ));
                }
            }
        }
        let fam = DiscretizedFamily { base };
        if base.hazard().is_some_and(|h| h.eps() != 0.0) {
            fam.check_nonnegative()?;
        }
        Ok(fam)
    }

    /// Geometric on I0 with `P(X >= j) = θ^j`.
    pub fn geometric(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return param(format!(
                "geometric ratio theta = {theta} must lie in (0, 1)"
            ));
        }
        Self::new(ContinuousFamily::exponential(-theta.ln())?)
    }

    pub fn base(&self) -> &ContinuousFamily {
        &self.base
    }

    /// `(F(x), m(x))` for real `x >= 0`; integer `x` gives `P(X < x)` and `P(X >= x)`.
    pub fn prob_ext(&self, x: f64) -> Prob {
        self.base.prob_unchecked(x)
    }

    /// `P(X < j) = 1 - m(j)`.
    pub fn cdf(&self, j: u64) -> f64 {
        self.prob_ext(j as f64).value
    }

    /// `m(j) = P(X >= j)`.
    pub fn survival(&self, j: u64) -> f64 {
        self.prob_ext(j as f64).complement
    }

    /// `m(j) - m(j + 1)`.
    pub fn pmf(&self, j: u64) -> f64 {
        self.survival(j) - self.survival(j + 1)
    }

    /// Checked pmf; fails on a negative mass beyond rounding.
    pub fn pmf_checked(&self, j: u64) -> Result<f64> {
        let mass = self.pmf(j);
        if mass < -NEGATIVE_MASS_TOL {
            return Err(Error::Nonnegativity { index: j, mass });
        }
        Ok(mass.max(0.0))
    }

    /// Smallest `j` with `m(j) < tail`.
    pub fn tail_index(&self, tail: f64) -> u64 {
        let x = match self.base.quantile_prob(Prob::from_complement(tail)) {
            Ok(x) => x,
            Err(_) => return INTEGER_CAP,
        };
        let mut j = if x >= INTEGER_CAP as f64 {
            INTEGER_CAP
        } else {
            x.ceil() as u64
        };
        while j > 0 && self.survival(j - 1) < tail {
            j -= 1;
        }
        while j < INTEGER_CAP && self.survival(j) >= tail {
            j += 1;
        }
        j
    }

    /// Sweeps the pmf up to the `1 - 1e-10` quantile: densely over the first
    /// 10^5 indices, then on a geometric ladder.
    pub fn check_nonnegative(&self) -> Result<()> {
        let end = self.tail_index(SWEEP_TAIL);
        let dense_end = end.min(DENSE_SWEEP);
        for j in 0..=dense_end {
            self.pmf_checked(j)?;
        }
        let mut j = dense_end;
        while j < end {
            j = (j as f64 * 1.01).ceil() as u64;
            self.pmf_checked(j.min(end))?;
        }
        Ok(())
    }

    /// `min{j >= 0 : m(j + 1) <= w}` for a survival level `w`.
    pub fn quantile_survival(&self, w: Prob) -> Result<u64> {
        if w.value >= 1.0 {
            return Ok(0);
        }
        if w.value <= 0.0 {
            return Err(Error::Overflow("survival level 0".into()));
        }
        let x = self.base.quantile_prob(w.flip())?;
        if !(x < INTEGER_CAP as f64) {
            return Err(Error::Overflow(format!("discrete draw {x:e}")));
        }
        let mut j = (x.ceil() as u64).saturating_sub(1);
        // rounding at integer boundaries
        while j > 0 && self.survival(j) <= w.value {
            j -= 1;
        }
        while self.survival(j + 1) > w.value {
            j += 1;
        }
        Ok(j)
    }

    /// [`Self::quantile_survival`] as an `f64`, without the integer cap.
    ///
    /// Heavy-tailed families reach past 2^62 often enough to matter in large
    /// simulations; an `f64` still holds those integers exactly.
    pub fn quantile_survival_real(&self, w: Prob) -> Result<f64> {
        match self.quantile_survival(w) {
            Ok(j) => Ok(j as f64),
            Err(Error::Overflow(_)) if w.value > 0.0 => {
                let x = self.base.quantile_prob(w.flip())?;
                if x.is_finite() {
                    Ok((x.ceil() - 1.0).max(0.0))
                } else {
                    Err(Error::Overflow(format!("discrete draw {x:e}")))
                }
            }
            Err(e) => Err(e),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        self.quantile_survival(Prob::from_value(open_open_unit(rng)))
    }
}

impl fmt::Display for DiscretizedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Discrete[{}]", self.base)
    }
}
