//! Integer-valued sample-size laws: Sibuya, Harris, geometric and degenerate.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Error, Result};
use crate::special::{ln_binom_neg, ln_gamma, ln_gamma_ratio, Prob};

/// Largest index a sampler may return.
pub const INTEGER_CAP: u64 = 1 << 62;

// Below this index the Sibuya survival is an explicit product.
const SIBUYA_PRODUCT_LIMIT: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    /// {0, 1, 2, ...}
    I0,
    /// {1, 2, 3, ...}
    I1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SibuyaParams {
    v: f64,
}

impl SibuyaParams {
    pub fn new(v: f64) -> Result<Self> {
        if !(v > 0.0 && v < 1.0) {
            return param(format!("Sibuya exponent v = {v} must lie in (0, 1)"));
        }
        Ok(SibuyaParams { v })
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarrisParams {
    a: f64,
    k: u32,
}

impl HarrisParams {
    pub fn new(a: f64, k: u32) -> Result<Self> {
        if !(a > 1.0 && a.is_finite()) {
            return param(format!("Harris tilt a = {a} must exceed 1"));
        }
        if k == 0 {
            return param("Harris power k must be a positive integer");
        }
        Ok(HarrisParams { a, k })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricParams {
    q: f64,
    support: Support,
}

impl GeometricParams {
    pub fn new(q: f64, support: Support) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return param(format!(
                "geometric success probability q = {q} must lie in (0, 1)"
            ));
        }
        Ok(GeometricParams { q, support })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn support(&self) -> Support {
        self.support
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateParams {
    k: u64,
}

impl DegenerateParams {
    /// Any `k >= 1` is a valid law; stabilizing use additionally needs `k >= 2`.
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return param("degenerate value k must be a positive integer");
        }
        Ok(DegenerateParams { k })
    }

    pub fn k(&self) -> u64 {
        self.k
    }
}

/// The random sample size N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "lowercase")]
pub enum DiscreteLaw {
    Sibuya(SibuyaParams),
    Harris(HarrisParams),
    Geometric(GeometricParams),
    Degenerate(DegenerateParams),
}

impl DiscreteLaw {
    pub fn sibuya(v: f64) -> Result<Self> {
        SibuyaParams::new(v).map(DiscreteLaw::Sibuya)
    }

    pub fn harris(a: f64, k: u32) -> Result<Self> {
        HarrisParams::new(a, k).map(DiscreteLaw::Harris)
    }

    pub fn geometric(q: f64, support: Support) -> Result<Self> {
        GeometricParams::new(q, support).map(DiscreteLaw::Geometric)
    }

    pub fn degenerate(k: u64) -> Result<Self> {
        DegenerateParams::new(k).map(DiscreteLaw::Degenerate)
    }

    /// Smallest value carrying positive mass.
    pub fn min_support(&self) -> u64 {
        match self {
            DiscreteLaw::Geometric(g) if g.support == Support::I0 => 0,
            DiscreteLaw::Degenerate(d) => d.k,
            _ => 1,
        }
    }

    /// `Q(s) = E[s^N]` for `s` in `[0, 1]`.
    pub fn pgf(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return domain(format!("PGF argument s = {s} outside [0, 1]"));
        }
        Ok(self.pgf_prob(Prob::from_value(s)).value)
    }

    /// PGF on a two-sided probability; returns `Q(s)` and `1 - Q(s)`.
    pub fn pgf_prob(&self, s: Prob) -> Prob {
        match *self {
            DiscreteLaw::Sibuya(SibuyaParams { v }) => {
                // 1 - Q = (1 - s)^v
                Prob::from_ln_value(v * s.ln_complement()).flip()
            }
            DiscreteLaw::Harris(HarrisParams { a, k }) => {
                let ln_s = s.ln_value();
                let one_minus_sk = -(k as f64 * ln_s).exp_m1();
                let base = 1.0 + (a - 1.0) * one_minus_sk;
                Prob::from_ln_value(ln_s - base.ln() / k as f64)
            }
            DiscreteLaw::Geometric(GeometricParams { q, support }) => {
                let denom = q + (1.0 - q) * s.complement;
                match support {
                    Support::I1 => Prob::split(q * s.value / denom, s.complement / denom),
                    Support::I0 => Prob::split(q / denom, (1.0 - q) * s.value / denom),
                }
            }
            DiscreteLaw::Degenerate(DegenerateParams { k }) => {
                Prob::from_ln_value(k as f64 * s.ln_value())
            }
        }
    }

    /// Analytic continuation of the PGF to the open unit disc.
    pub fn pgf_complex(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            DiscreteLaw::Sibuya(SibuyaParams { v }) => one - cpow(one - z, v),
            DiscreteLaw::Harris(HarrisParams { a, k }) => {
                z * cpow(a - (a - 1.0) * z.powu(k), -1.0 / k as f64)
            }
            DiscreteLaw::Geometric(GeometricParams { q, support }) => {
                let denom = one - (1.0 - q) * z;
                match support {
                    Support::I1 => q * z / denom,
                    Support::I0 => q / denom,
                }
            }
            DiscreteLaw::Degenerate(DegenerateParams { k }) => z.powu(k as u32),
        }
    }

    /// `P(N = n)`; zero off the support.
    pub fn pmf(&self, n: u64) -> f64 {
        match *self {
            DiscreteLaw::Sibuya(p) => {
                if n == 0 {
                    0.0
                } else {
                    sibuya_survival(p.v, n - 1) * p.v / n as f64
                }
            }
            DiscreteLaw::Harris(HarrisParams { a, k }) => {
                let k64 = k as u64;
                if n == 0 || !(n - 1).is_multiple_of(k64) {
                    return 0.0;
                }
                let m = (n - 1) / k64;
                let r = 1.0 / k as f64;
                (-a.ln() * r + ln_binom_neg(m, r) + m as f64 * (-1.0 / a).ln_1p()).exp()
            }
            DiscreteLaw::Geometric(GeometricParams { q, support }) => {
                let offset = match support {
                    Support::I0 => 0,
                    Support::I1 => 1,
                };
                if n < offset {
                    0.0
                } else {
                    q * ((n - offset) as f64 * (-q).ln_1p()).exp()
                }
            }
            DiscreteLaw::Degenerate(DegenerateParams { k }) => {
                if n == k {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `P(N > n)`.
    pub fn survival(&self, n: u64) -> f64 {
        match *self {
            DiscreteLaw::Sibuya(p) => sibuya_survival(p.v, n),
            DiscreteLaw::Geometric(GeometricParams { q, support }) => {
                let steps = match support {
                    Support::I0 => n + 1,
                    Support::I1 => n,
                };
                (steps as f64 * (-q).ln_1p()).exp()
            }
            DiscreteLaw::Degenerate(DegenerateParams { k }) => {
                if n < k {
                    1.0
                } else {
                    0.0
                }
            }
            DiscreteLaw::Harris(_) => {
                let head: f64 = (0..=n).map(|j| self.pmf(j)).sum();
                (1.0 - head).max(0.0)
            }
        }
    }

    /// Exact draw of N.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        match *self {
            DiscreteLaw::Sibuya(p) => sample_sibuya(p.v, open_unit(rng)),
            DiscreteLaw::Harris(HarrisParams { a, k }) => {
                let m = sample_negative_binomial(1.0 / k as f64, 1.0 / a, rng)?;
                m.checked_mul(k as u64)
                    .and_then(|x| x.checked_add(1))
                    .filter(|&n| n <= INTEGER_CAP)
                    .ok_or_else(|| Error::Overflow(format!("Harris draw with m = {m}")))
            }
            DiscreteLaw::Geometric(GeometricParams { q, support }) => {
                let u = open_unit(rng);
                let failures = (u.ln() / (-q).ln_1p()).floor();
                if failures >= INTEGER_CAP as f64 {
                    return Err(Error::Overflow(format!("geometric draw {failures:e}")));
                }
                let failures = failures as u64;
                Ok(match support {
                    Support::I0 => failures,
                    Support::I1 => failures + 1,
                })
            }
            DiscreteLaw::Degenerate(DegenerateParams { k }) => Ok(k),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DiscreteLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscreteLaw::Sibuya(p) => write!(f, "Sibuya(v={})", p.v),
            DiscreteLaw::Harris(p) => write!(f, "Harris(a={}, k={})", p.a, p.k),
            DiscreteLaw::Geometric(p) => {
                let s = match p.support {
                    Support::I0 => "I0",
                    Support::I1 => "I1",
                };
                write!(f, "Geometric(q={}, {s})", p.q)
            }
            DiscreteLaw::Degenerate(p) => write!(f, "Degenerate(k={})", p.k),
        }
    }
}

/// Principal-branch `z^w` with `0^w = 0` for `w > 0`.
pub(crate) fn cpow(z: Complex64, w: f64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return if w > 0.0 {
            z
        } else {
            Complex64::new(f64::INFINITY, 0.0)
        };
    }
    (z.ln() * w).exp()
}

/// Uniform draw on (0, 1].
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// `ln P(N > n)` for Sibuya(v): `Γ(n+1-v) / (Γ(1-v) Γ(n+1))`.
pub fn sibuya_ln_survival(v: f64, n: u64) -> f64 {
    if n <= SIBUYA_PRODUCT_LIMIT {
        (1..=n).map(|j| (-v / j as f64).ln_1p()).sum()
    } else {
        ln_gamma_ratio(n as f64 + 1.0, -v) - ln_gamma(1.0 - v)
    }
}

fn sibuya_survival(v: f64, n: u64) -> f64 {
    sibuya_ln_survival(v, n).exp()
}

// Inverse transform on the survival function: N = min{n >= 1 : S(n) <= u}.
// Linear scan over the product region, then doubling and bisection on the
// log-gamma form.
fn sample_sibuya(v: f64, u: f64) -> Result<u64> {
    let ln_u = u.ln();
    let mut ln_s = 0.0;
    for n in 1..=SIBUYA_PRODUCT_LIMIT {
        ln_s += (-v / n as f64).ln_1p();
        if ln_s <= ln_u {
            return Ok(n);
        }
    }
    let above = |n: u64| sibuya_ln_survival(v, n) > ln_u;
    let mut lo = SIBUYA_PRODUCT_LIMIT;
    let mut hi = 2 * SIBUYA_PRODUCT_LIMIT;
    while above(hi) {
        if hi >= INTEGER_CAP {
            return Err(Error::Overflow(format!(
                "Sibuya(v={v}) draw with u = {u:e}"
            )));
        }
        lo = hi;
        hi = (hi * 2).min(INTEGER_CAP);
    }
    // invariant: S(lo) > u >= S(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if above(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

// Gamma-Poisson mixture: shape r, success probability p.
fn sample_negative_binomial<R: Rng + ?Sized>(r: f64, p: f64, rng: &mut R) -> Result<u64> {
    let gamma = Gamma::new(r, (1.0 - p) / p).map_err(|e| Error::Parameter(e.to_string()))?;
    let rate: f64 = gamma.sample(rng);
    if rate <= 0.0 {
        return Ok(0);
    }
    let poisson =
        Poisson::new(rate).map_err(|_| Error::Overflow(format!("Poisson rate {rate:e}")))?;
    let m: f64 = poisson.sample(rng);
    if m >= INTEGER_CAP as f64 {
        return Err(Error::Overflow(format!("negative binomial draw {m:e}")));
    }
    Ok(m as u64)
}
