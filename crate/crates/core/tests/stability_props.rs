use std::f64::consts::PI;

use maxmin::stability::{registry, HazardVariant, Role, DEFAULT_INTEGER_GRID, DEFAULT_LOG_GRID};
use maxmin::{
    verify_stability, ContinuousFamily, DiscreteLaw, GridSpec, PeriodicHazard, StabilityMode,
    StabilityProblem,
};
use proptest::prelude::*;

fn positives(variant: HazardVariant) -> Vec<StabilityProblem> {
    registry(variant, false)
        .unwrap()
        .into_iter()
        .filter(|p| p.role == Role::Positive)
        .map(|p| p.problem)
        .collect()
}

fn residual_field(p: &StabilityProblem) -> Vec<f64> {
    GridSpec::default_for(&p.variate)
        .points()
        .unwrap()
        .into_iter()
        .map(|x| p.residual_at(x))
        .collect()
}

#[test]
fn exponential_rate_does_not_matter() {
    let sib = DiscreteLaw::sibuya(0.5).unwrap();
    for rate in [0.01, 0.3, 7.0, 250.0] {
        let scaled = StabilityProblem::new(
            ContinuousFamily::exponential(rate).unwrap(),
            sib,
            StabilityMode::Max,
            0.5,
        )
        .unwrap();
        let unit = StabilityProblem::new(
            ContinuousFamily::exponential(1.0).unwrap(),
            sib,
            StabilityMode::Max,
            0.5,
        )
        .unwrap();
        for x in DEFAULT_LOG_GRID.points().unwrap() {
            let a = unit.residual_at(rate * x);
            let b = scaled.residual_at(x);
            assert!((a - b).abs() < 1e-14, "rate {rate}, x {x}: {a} vs {b}");
        }
    }
}

#[test]
fn residuals_do_not_depend_on_the_periodic_component() {
    let base = positives(HazardVariant::CLASSICAL);
    for frac in [-1.0, -0.5, 0.5, 1.0] {
        for phase in [0.0, 1.0, 2.0 * PI / 3.0, 5.5] {
            let other = positives(HazardVariant {
                eps_fraction: frac,
                phase,
            });
            assert_eq!(base.len(), other.len());
            for (a, b) in base.iter().zip(&other) {
                let (ra, rb) = (residual_field(a), residual_field(b));
                for (x, y) in ra.iter().zip(&rb) {
                    assert!(
                        (x - y).abs() < 1e-12,
                        "eps {frac}, phase {phase}: {x} vs {y}"
                    );
                }
            }
        }
    }
}

/// Swapping in any other law used by the registry (same mode, same c) breaks
/// the identity somewhere on the grid.
#[test]
fn only_the_prescribed_law_works() {
    let pos = positives(HazardVariant::CLASSICAL);
    let mut laws: Vec<DiscreteLaw> = Vec::new();
    for p in &pos {
        if !laws.contains(&p.law) {
            laws.push(p.law);
        }
    }
    for p in &pos {
        for law in laws.iter().filter(|l| **l != p.law) {
            let q = StabilityProblem { law: *law, ..*p };
            let grid = GridSpec::default_for(&q.variate);
            let sup = verify_stability(&q, &grid, 1e-10).unwrap().sup_residual;
            assert!(sup > 1e-3, "{} with {law}: sup {sup}", q.variate);
        }
    }
}

#[test]
fn refining_the_grid_never_lowers_the_sup() {
    let mut all = registry(
        HazardVariant {
            eps_fraction: 0.7,
            phase: 1.3,
        },
        true,
    )
    .unwrap();
    all.truncate(40);
    for entry in all {
        let p = entry.problem;
        let (coarse, fine) = if p.variate.is_discrete() {
            (DEFAULT_INTEGER_GRID, GridSpec::Integer { max_j: 400 })
        } else {
            // 399 log points on the same interval contain the 200 default ones
            (
                DEFAULT_LOG_GRID,
                GridSpec::Log {
                    lo: 1e-3,
                    hi: 1e3,
                    points: 399,
                },
            )
        };
        let a = verify_stability(&p, &coarse, 1e-10).unwrap().sup_residual;
        let b = verify_stability(&p, &fine, 1e-10).unwrap().sup_residual;
        assert!(b >= a, "{}: {b} < {a}", entry.id());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_sibuya_for_any_v(v in 0.01f64..0.99, rate in 0.05f64..20.0) {
        let p = StabilityProblem::auto(
            ContinuousFamily::exponential(rate).unwrap(),
            DiscreteLaw::sibuya(v).unwrap(),
            StabilityMode::Max,
        ).unwrap();
        prop_assert!((p.c - v).abs() < 1e-15);
        let r = verify_stability(&p, &DEFAULT_LOG_GRID, 1e-10).unwrap();
        prop_assert!(r.pass, "sup {}", r.sup_residual);
    }

    #[test]
    fn semi_weibull_degenerate_for_any_hazard(
        alpha in 0.3f64..3.0, k in 2u64..9, frac in -1.0f64..=1.0, phase in 0.0f64..(2.0 * PI)
    ) {
        // c^α = 1/k means p = 1/k
        let p = 1.0 / k as f64;
        let h = PeriodicHazard::new(alpha, p, frac * PeriodicHazard::eps_bound(p), phase).unwrap();
        let prob = StabilityProblem::auto(
            ContinuousFamily::semi_weibull(h),
            DiscreteLaw::degenerate(k).unwrap(),
            StabilityMode::Min,
        ).unwrap();
        let r = verify_stability(&prob, &DEFAULT_LOG_GRID, 1e-10).unwrap();
        prop_assert!(r.pass, "sup {}", r.sup_residual);
    }

    #[test]
    fn gsp_harris_for_any_shape(alpha in 0.3f64..3.0, a in 1.1f64..8.0, k in 1u32..5, frac in -1.0f64..=1.0) {
        // p = 1/a, β = 1/k
        let p = 1.0 / a;
        let h = PeriodicHazard::new(alpha, p, frac * PeriodicHazard::eps_bound(p), 0.4).unwrap();
        let f = ContinuousFamily::generalized_semi_pareto(h, 1.0 / k as f64).unwrap();
        let prob = StabilityProblem::auto(f, DiscreteLaw::harris(a, k).unwrap(), StabilityMode::Min).unwrap();
        let r = verify_stability(&prob, &DEFAULT_LOG_GRID, 1e-10).unwrap();
        prop_assert!(r.pass, "sup {}", r.sup_residual);
    }

    /// Any c in (0, 1) works for the extended log-logistic with a = c^{-α}.
    #[test]
    fn ext_log_logistic_any_c(alpha in 0.3f64..3.0, k in 1u32..5, c in 0.05f64..0.95) {
        let f = ContinuousFamily::extended_log_logistic(alpha, k).unwrap();
        let law = DiscreteLaw::harris(c.powf(-alpha), k).unwrap();
        let prob = StabilityProblem::new(f, law, StabilityMode::Max, c).unwrap();
        let r = verify_stability(&prob, &DEFAULT_LOG_GRID, 1e-10).unwrap();
        prop_assert!(r.pass, "sup {}", r.sup_residual);
    }
}
