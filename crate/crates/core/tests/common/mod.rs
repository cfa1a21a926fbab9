#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const AUDIT_DRAWS: usize = 100_000;
pub const AUDIT_SEED: u64 = 20_240_601;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Upper 1% point of χ² with `df` degrees of freedom (Wilson–Hilferty).
pub fn chi2_critical_1pct(df: usize) -> f64 {
    let z = 2.326_347_874;
    let k = df as f64;
    let h = 2.0 / (9.0 * k);
    k * (1.0 - h + z * h.sqrt()).powi(3)
}

pub struct ChiSquare {
    pub stat: f64,
    pub df: usize,
    pub critical: f64,
}

impl ChiSquare {
    pub fn pass(&self) -> bool {
        self.stat < self.critical
    }
}

/// χ² of integer draws against a law given by `tail(j) = P(X > j)`.
///
/// Cells cover the smallest prefix from `lo` carrying at least 0.999 of the
/// mass, each grown until it expects at least 5 draws, plus one tail cell.
/// Cell masses come from the cdf, so heavy tails cost O(cells · log).
pub fn chi_square(draws: &[u64], lo: u64, tail: impl Fn(u64) -> f64) -> ChiSquare {
    let n = draws.len() as f64;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &d in draws {
        *counts.entry(d).or_default() += 1;
    }
    let below: u64 = counts.range(..lo).map(|(_, c)| c).sum();
    assert_eq!(below, 0, "draws below the support");
    let cum = |j: u64| 1.0 - tail(j);
    let need = 5.0 / n;
    let mut cells: Vec<(f64, f64)> = Vec::new(); // (expected, observed)
    let mut a = lo;
    let mut before = 0.0;
    while before < 0.999 {
        // smallest b >= a with cum(b) - before >= need
        let mut step = 1u64;
        let mut hi = a;
        while cum(hi) - before < need {
            hi = a + step;
            step *= 2;
        }
        let mut lo_b = if hi == a { a } else { a + step / 4 };
        while lo_b < hi {
            let mid = lo_b + (hi - lo_b) / 2;
            if cum(mid) - before >= need {
                hi = mid;
            } else {
                lo_b = mid + 1;
            }
        }
        let b = hi;
        let c = cum(b);
        let obs: u64 = counts.range(a..=b).map(|(_, c)| c).sum();
        cells.push(((c - before) * n, obs as f64));
        before = c;
        a = b + 1;
    }
    let tail_obs: u64 = counts.range(a..).map(|(_, c)| c).sum();
    let e = (1.0 - before).max(0.0) * n;
    if e >= 5.0 {
        cells.push((e, tail_obs as f64));
    } else {
        let last = cells.last_mut().unwrap();
        last.0 += e;
        last.1 += tail_obs as f64;
    }
    let stat = cells.iter().map(|(e, o)| (o - e) * (o - e) / e).sum();
    let df = cells.len().saturating_sub(1).max(1);
    ChiSquare {
        stat,
        df,
        critical: chi2_critical_1pct(df),
    }
}

/// A draw from a sampler that reports values past 2^62 as an overflow;
/// those land in the χ² tail cell as `u64::MAX`.
pub fn capped(draw: maxmin::Result<u64>) -> u64 {
    match draw {
        Ok(n) => n,
        Err(maxmin::Error::Overflow(_)) => u64::MAX,
        Err(e) => panic!("{e}"),
    }
}

/// 3σ binomial half-width for a proportion `p` estimated from `n` draws.
pub fn band3(p: f64, n: usize) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}
