mod common;

use std::f64::consts::PI;

use common::{rng, AUDIT_DRAWS, AUDIT_SEED};
use maxmin::extremes_mc::{ks_critical, ks_statistic};
use maxmin::{ContinuousFamily, PeriodicHazard};
use proptest::prelude::*;

fn audited_families() -> Vec<ContinuousFamily> {
    let h = |a, p, frac: f64, phase| {
        PeriodicHazard::new(a, p, frac * PeriodicHazard::eps_bound(p), phase).unwrap()
    };
    vec![
        ContinuousFamily::exponential(2.0).unwrap(),
        ContinuousFamily::semi_weibull(h(1.5, 0.4, 0.0, 0.0)),
        ContinuousFamily::semi_weibull(h(0.7, 0.3, 1.0, 1.0)),
        ContinuousFamily::generalized_semi_pareto(h(1.0, 1.0 / 3.0, 0.5, 2.0), 0.5).unwrap(),
        ContinuousFamily::semi_pareto(h(2.0, 0.3, -0.8, 4.0)),
        ContinuousFamily::extended_log_logistic(1.0, 2).unwrap(),
        ContinuousFamily::extended_log_logistic(2.5, 1).unwrap(),
    ]
}

#[test]
fn samplers_pass_ks() {
    let crit = ks_critical(0.01, AUDIT_DRAWS);
    for (i, f) in audited_families().iter().enumerate() {
        let mut r = rng(AUDIT_SEED + 100 + i as u64);
        let mut xs: Vec<f64> = (0..AUDIT_DRAWS)
            .map(|_| f.sample(&mut r).unwrap())
            .collect();
        xs.sort_by(f64::total_cmp);
        let d = ks_statistic(&xs, |x| f.cdf(x).unwrap());
        assert!(d < crit, "{f}: KS {d} vs {crit}");
    }
}

#[test]
fn classical_semi_weibull_with_unit_power_is_standard_exponential() {
    let f = ContinuousFamily::semi_weibull(PeriodicHazard::power(1.0, 0.37).unwrap());
    let mut r = rng(5);
    let mut xs: Vec<f64> = (0..AUDIT_DRAWS)
        .map(|_| f.sample(&mut r).unwrap())
        .collect();
    xs.sort_by(f64::total_cmp);
    let d = ks_statistic(&xs, |x| 1.0 - (-x).exp());
    assert!(d < ks_critical(0.01, xs.len()));
}

#[test]
fn exponential_sample_mean() {
    let f = ContinuousFamily::exponential(2.0).unwrap();
    let mut r = rng(11);
    let mean = (0..AUDIT_DRAWS)
        .map(|_| f.sample(&mut r).unwrap())
        .sum::<f64>()
        / AUDIT_DRAWS as f64;
    assert!((mean - 0.5).abs() < 0.01, "{mean}");
}

#[test]
fn periodic_hazard_rejects_amplitude_past_bound() {
    let p = 0.2;
    let b = PeriodicHazard::eps_bound(p);
    assert!(PeriodicHazard::new(1.0, p, b, 0.0).is_ok());
    assert!(PeriodicHazard::new(1.0, p, -b, 0.0).is_ok());
    assert!(PeriodicHazard::new(1.0, p, b * 1.01, 0.0).is_err());
    assert!(PeriodicHazard::new(0.0, p, 0.0, 0.0).is_err());
    assert!(PeriodicHazard::new(1.0, 1.0, 0.0, 0.0).is_err());
}

fn any_hazard() -> impl Strategy<Value = PeriodicHazard> {
    (
        0.2f64..4.0,
        0.02f64..0.98,
        -1.0f64..=1.0,
        0.0f64..(2.0 * PI),
    )
        .prop_map(|(a, p, frac, phase)| {
            PeriodicHazard::new(a, p, frac * PeriodicHazard::eps_bound(p), phase).unwrap()
        })
}

fn any_family() -> impl Strategy<Value = ContinuousFamily> {
    prop_oneof![
        (0.1f64..10.0).prop_map(|r| ContinuousFamily::exponential(r).unwrap()),
        any_hazard().prop_map(ContinuousFamily::semi_weibull),
        (any_hazard(), 0.1f64..4.0)
            .prop_map(|(h, b)| ContinuousFamily::generalized_semi_pareto(h, b).unwrap()),
        any_hazard().prop_map(ContinuousFamily::semi_pareto),
        (0.2f64..4.0, 1u32..6)
            .prop_map(|(a, k)| ContinuousFamily::extended_log_logistic(a, k).unwrap()),
    ]
}

fn log_grid(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// ψ(x) = ψ(p^{1/α} x)/p on a 100-point log grid.
    #[test]
    fn hazard_functional_equation(h in any_hazard()) {
        let s = h.natural_scale();
        for x in log_grid(100, 1e-3, 1e3) {
            let lhs = h.eval(x).unwrap();
            let rhs = h.eval(s * x).unwrap() / h.p();
            prop_assert!(((lhs - rhs) / lhs).abs() < 1e-12, "x = {x}: {lhs} vs {rhs}");
        }
    }

    /// Sorted arguments give a nondecreasing cdf, with no tolerance.
    #[test]
    fn cdf_is_monotone(f in any_family()) {
        let mut last = 0.0;
        for x in log_grid(2000, 1e-6, 1e6) {
            let v = f.cdf(x).unwrap();
            prop_assert!(v >= last, "cdf fell at x = {x}");
            prop_assert!((0.0..=1.0).contains(&v));
            last = v;
        }
    }

    #[test]
    fn cdf_and_survival_are_complements(f in any_family(), x in 1e-4f64..1e4) {
        let p = f.prob(x).unwrap();
        prop_assert!((p.value + p.complement - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quantile_inverts_cdf(f in any_family(), u in 1e-9f64..(1.0 - 1e-9)) {
        let x = f.quantile(u).unwrap();
        let back = f.cdf(x).unwrap();
        prop_assert!((back - u).abs() < 1e-12 * (1.0 + 1.0 / (1.0 - u)).min(1e3), "{u} -> {x} -> {back}");
    }

    #[test]
    fn semi_pareto_is_gsp_with_unit_shape(h in any_hazard(), x in 1e-3f64..1e3) {
        let sp = ContinuousFamily::semi_pareto(h);
        let g = ContinuousFamily::generalized_semi_pareto(h, 1.0).unwrap();
        prop_assert!((sp.cdf(x).unwrap() - g.cdf(x).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn classical_forms(alpha in 0.2f64..4.0, p in 0.05f64..0.95, k in 1u32..6, x in 1e-3f64..1e3) {
        let h = PeriodicHazard::power(alpha, p).unwrap();
        let w = ContinuousFamily::semi_weibull(h).cdf(x).unwrap();
        prop_assert!((w - (1.0 - (-x.powf(alpha)).exp())).abs() < 1e-14);
        let g = ContinuousFamily::generalized_semi_pareto(h, 1.0 / k as f64).unwrap().cdf(x).unwrap();
        let pareto = 1.0 - (1.0 + x.powf(alpha)).powf(-1.0 / k as f64);
        prop_assert!((g - pareto).abs() < 1e-14);
        let ll = ContinuousFamily::extended_log_logistic(alpha, k).unwrap().cdf(x).unwrap();
        prop_assert!((ll - (1.0 + x.powf(-alpha)).powf(-1.0 / k as f64)).abs() < 1e-14);
    }
}

#[test]
fn limits_at_zero_and_infinity() {
    for f in audited_families() {
        assert_eq!(f.cdf(0.0).unwrap(), 0.0);
        assert_eq!(f.cdf(f64::INFINITY).unwrap(), 1.0);
        assert!(f.cdf(1e-12).unwrap() < 1e-6);
        assert!(f.survival(1e12).unwrap() < 1e-6);
    }
}
