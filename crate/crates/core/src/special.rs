//! Special functions and a two-sided probability representation.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
// published coefficients, kept digit for digit
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

// Stirling correction lnΓ(z) - [(z - 1/2) ln z - z + ln(2π)/2].
fn stirling_tail(z: f64) -> f64 {
    let z2 = z * z;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z
}

/// `lnΓ(x + d) - lnΓ(x)` for `x > 0`, `x + d > 0`.
///
/// For large `x` the difference is formed from the Stirling series so that
/// the two huge log-gamma values never get subtracted.
pub fn ln_gamma_ratio(x: f64, d: f64) -> f64 {
    if x.min(x + d) < 16.0 {
        return ln_gamma(x + d) - ln_gamma(x);
    }
    let y = x + d;
    // (y - 1/2) ln y - (x - 1/2) ln x - d
    //   = (y - 1/2) ln(1 + d/x) + d ln x - d
    (y - 0.5) * (d / x).ln_1p() + d * x.ln() - d + stirling_tail(y) - stirling_tail(x)
}

/// `ln C(m + r - 1, m)` for real `r > 0` and integer `m >= 0`.
pub fn ln_binom_neg(m: u64, r: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let m = m as f64;
    // Γ(m + r) / (Γ(r) Γ(m + 1))
    ln_gamma_ratio(m + 1.0, r - 1.0) - ln_gamma(r)
}

/// A probability carried together with its complement.
///
/// Values near 1 lose their distance to 1 when stored as a single `f64`;
/// keeping both sides lets survival functions and PGFs work on whichever
/// side is small. The logarithm of the smaller side is kept as well, so a
/// tail like `e^{-4000}` survives even though it underflows as a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prob {
    pub value: f64,
    pub complement: f64,
    /// `ln(min(value, complement))`
    ln_small: f64,
}

impl Prob {
    pub fn from_value(value: f64) -> Self {
        Self::split(value, 1.0 - value)
    }

    pub fn from_complement(complement: f64) -> Self {
        Self::split(1.0 - complement, complement)
    }

    pub fn split(value: f64, complement: f64) -> Self {
        Prob {
            value,
            complement,
            ln_small: value.min(complement).ln(),
        }
    }

    pub fn flip(self) -> Self {
        Prob {
            value: self.complement,
            complement: self.value,
            ln_small: self.ln_small,
        }
    }

    /// `ln(value)`, accurate on both ends.
    pub fn ln_value(self) -> f64 {
        if self.value <= self.complement {
            self.ln_small
        } else {
            (-self.complement).ln_1p()
        }
    }

    /// `ln(complement)`, accurate on both ends.
    pub fn ln_complement(self) -> f64 {
        self.flip().ln_value()
    }

    /// Builds `exp(ln_value)` and its complement `-expm1(ln_value)`.
    pub fn from_ln_value(ln_value: f64) -> Self {
        let value = ln_value.exp();
        let complement = -ln_value.exp_m1();
        let ln_small = if value <= complement {
            ln_value
        } else {
            complement.ln()
        };
        Prob {
            value,
            complement,
            ln_small,
        }
    }

    pub fn is_valid(self) -> bool {
        (0.0..=1.0).contains(&self.value) && (0.0..=1.0).contains(&self.complement)
    }
}
