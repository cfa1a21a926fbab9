//! Max- and min-stability of distributions under a random sample size N.
//!
//! X is N-max stable when `Q(F(x)) = F(cx)` and N-min stable when
//! `Q(R(cx)) = R(x)` for all x, with `Q` the PGF of N and `c ∈ (0, 1)`.
//! This crate provides the families involved (Sibuya, Harris, geometric and
//! degenerate N; exponential, semi-Weibull, semi-Pareto and extended
//! log-logistic X, plus discretized versions), and three independent ways
//! of checking a pairing:
//!
//! * [`stability`]: residuals of the functional equations on a grid,
//! * [`pgf_recovery`]: reconstructs the implied Q from F and c and tests
//!   whether it is a PGF,
//! * [`extremes_mc`]: simulates random extremes and compares them by KS.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod continuous_families;
pub mod discrete_families;
pub mod discrete_laws;
pub mod error;
pub mod extremes_mc;
pub mod pgf_recovery;
pub mod special;
pub mod stability;
pub mod variate;

pub use continuous_families::{ContinuousFamily, PeriodicHazard};
pub use discrete_families::DiscretizedFamily;
pub use discrete_laws::{DiscreteLaw, Support};
pub use error::{Error, Result};
pub use special::Prob;
pub use stability::{
    registry_suite, stability_constant, verify_stability, Claim, GridSpec, StabilityMode,
    StabilityProblem, StabilityReport,
};
pub use variate::Variate;
