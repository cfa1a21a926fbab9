use std::fmt;

use serde::{Deserialize, Serialize};

use crate::continuous_families::ContinuousFamily;
use crate::discrete_families::DiscretizedFamily;
use crate::special::Prob;

/// The random variable X whose extremes are taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "law", rename_all = "lowercase")]
pub enum Variate {
    Continuous(ContinuousFamily),
    Discrete(DiscretizedFamily),
}

impl Variate {
    /// `(F(x), R(x))` extended to all real `x >= 0`.
    pub fn prob_ext(&self, x: f64) -> Prob {
        match self {
            Variate::Continuous(f) => f.prob_unchecked(x),
            Variate::Discrete(d) => d.prob_ext(x),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Variate::Discrete(_))
    }

    /// The continuous law underneath (the base for discretized families).
    pub fn continuous(&self) -> &ContinuousFamily {
        match self {
            Variate::Continuous(f) => f,
            Variate::Discrete(d) => d.base(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.continuous().alpha()
    }
}

impl From<ContinuousFamily> for Variate {
    fn from(f: ContinuousFamily) -> Self {
        Variate::Continuous(f)
    }
}

impl From<DiscretizedFamily> for Variate {
    fn from(d: DiscretizedFamily) -> Self {
        Variate::Discrete(d)
    }
}

impl fmt::Display for Variate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variate::Continuous(c) => c.fmt(f),
            Variate::Discrete(d) => d.fmt(f),
        }
    }
}
