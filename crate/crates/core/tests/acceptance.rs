//! Acceptance checks, one line per criterion. Runs as a plain binary so the
//! lines always show in `cargo test` output.

mod common;

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{band3, capped, chi_square, rng, AUDIT_DRAWS, AUDIT_SEED};
use maxmin::extremes_mc::{ks_critical, ks_statistic, mc_stability_test, McConfig, SHIPPED_SEEDS};
use maxmin::pgf_recovery::{power_pgf_check, recover, ExtractionConfig};
use maxmin::stability::{registry, HazardVariant, Role, SuiteConfig};
use maxmin::{
    registry_suite, ContinuousFamily, DiscreteLaw, DiscretizedFamily, PeriodicHazard,
    StabilityMode, StabilityProblem, StabilityReport, Support,
};

const POSITIVE_TOL: f64 = 1e-10;
const CONTROL_FLOOR: f64 = 1e-4;
const SUITE_BUDGET: Duration = Duration::from_secs(5);
const ROUND_TRIP_TOL: f64 = 1e-8;
const ROUND_TRIP_N: usize = 50;
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(2);
const MC_TRIALS: usize = 100_000;
const MC_BUDGET: Duration = Duration::from_secs(60);
const WRONG_C_FACTOR: f64 = 1.1;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn split(reports: &[StabilityReport]) -> (Vec<&StabilityReport>, Vec<&StabilityReport>) {
    reports.iter().partition(|r| r.role == Role::Positive)
}

fn positives_ok(reports: &[StabilityReport]) -> (usize, f64, bool) {
    let (pos, _) = split(reports);
    let worst = pos.iter().map(|r| r.sup_residual).fold(0.0, f64::max);
    (pos.len(), worst, pos.len() >= 10 && worst < POSITIVE_TOL)
}

fn controls_ok(reports: &[StabilityReport]) -> (usize, f64, usize) {
    let (_, ctl) = split(reports);
    let weakest = ctl
        .iter()
        .map(|r| r.sup_residual)
        .fold(f64::INFINITY, f64::min);
    let false_passes = ctl
        .iter()
        .filter(|r| r.pass || r.sup_residual <= CONTROL_FLOOR)
        .count();
    (ctl.len(), weakest, false_passes)
}

fn criterion_1() -> Verdict {
    let t = Instant::now();
    let reports = registry_suite(&SuiteConfig::default()).unwrap();
    let elapsed = t.elapsed();
    let (n, worst, ok) = positives_ok(&reports);
    verdict(
        ok && elapsed < SUITE_BUDGET,
        format!("{n} positive pairings, worst sup residual {worst:.2e} < {POSITIVE_TOL:e}, {elapsed:.2?} < 5 s"),
    )
}

fn criterion_2() -> Verdict {
    let reports = registry_suite(&SuiteConfig::default()).unwrap();
    let (n, weakest, false_passes) = controls_ok(&reports);
    verdict(
        n > 0 && false_passes == 0,
        format!("{n} controls, weakest sup residual {weakest:.2e} > {CONTROL_FLOOR:e}, {false_passes} false passes"),
    )
}

fn criterion_3() -> Verdict {
    let mut worst_pos: f64 = 0.0;
    let mut weakest_ctl = f64::INFINITY;
    let mut failures = 0;
    let mut runs = 0;
    for frac in [0.0, 0.5, 1.0] {
        for phase in [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0] {
            let cfg = SuiteConfig {
                variant: HazardVariant {
                    eps_fraction: frac,
                    phase,
                },
                ..SuiteConfig::default()
            };
            let reports = registry_suite(&cfg).unwrap();
            let (_, worst, ok) = positives_ok(&reports);
            let (_, weakest, fp) = controls_ok(&reports);
            worst_pos = worst_pos.max(worst);
            weakest_ctl = weakest_ctl.min(weakest);
            failures += usize::from(!ok) + fp;
            runs += 1;
        }
    }
    verdict(
        failures == 0,
        format!("{runs} (eps, phase) settings; worst positive {worst_pos:.2e}, weakest control {weakest_ctl:.2e}"),
    )
}

fn round_trip(
    f: &ContinuousFamily,
    c: f64,
    mode: StabilityMode,
    law: &DiscreteLaw,
) -> (f64, Duration, bool) {
    let t = Instant::now();
    let est = recover(f, c, mode, &ExtractionConfig::new(ROUND_TRIP_N)).unwrap();
    let elapsed = t.elapsed();
    let err = est
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| (a - law.pmf(n as u64)).abs())
        .fold(0.0, f64::max);
    (err, elapsed, est.verdict.is_valid())
}

fn criterion_4() -> Verdict {
    let exp = ContinuousFamily::exponential(1.0).unwrap();
    let (e1, t1, v1) = round_trip(
        &exp,
        0.5,
        StabilityMode::Max,
        &DiscreteLaw::sibuya(0.5).unwrap(),
    );
    let gsp = ContinuousFamily::generalized_semi_pareto(
        PeriodicHazard::power(1.0, 1.0 / 3.0).unwrap(),
        0.5,
    )
    .unwrap();
    let (e2, t2, v2) = round_trip(
        &gsp,
        1.0 / 3.0,
        StabilityMode::Min,
        &DiscreteLaw::harris(3.0, 2).unwrap(),
    );
    let ok = v1
        && v2
        && e1 < ROUND_TRIP_TOL
        && e2 < ROUND_TRIP_TOL
        && t1 < ROUND_TRIP_BUDGET
        && t2 < ROUND_TRIP_BUDGET;
    verdict(
        ok,
        format!(
            "n <= {ROUND_TRIP_N}: Sibuya(0.5) max err {e1:.2e} in {t1:.2?}, Harris(3,2) max err {e2:.2e} in {t2:.2?}"
        ),
    )
}

fn criterion_5() -> Verdict {
    let cfg = ExtractionConfig::default();
    let bases = [
        DiscreteLaw::geometric(0.5, Support::I1).unwrap(),
        DiscreteLaw::sibuya(0.5).unwrap(),
    ];
    let mut correct = 0;
    let mut total = 0;
    for law in bases {
        for t in [1.0, 2.0, 3.0, 4.0, 0.5, 1.5, 2.5] {
            let valid = power_pgf_check(&law, t, &cfg).unwrap().verdict.is_valid();
            correct += usize::from(valid == (t.fract() == 0.0));
            total += 1;
        }
    }
    verdict(
        correct == 14 && total == 14,
        format!("{correct}/{total} correct verdicts"),
    )
}

fn criterion_6() -> Verdict {
    let h = PeriodicHazard::power(1.0, 1.0 / 3.0).unwrap();
    let run = |inv_beta: f64| {
        let f = ContinuousFamily::generalized_semi_pareto(h, 1.0 / inv_beta).unwrap();
        recover(
            &f,
            1.0 / 3.0,
            StabilityMode::Min,
            &ExtractionConfig::default(),
        )
        .unwrap()
    };
    let (frac, whole) = (run(1.5), run(2.0));
    verdict(
        !frac.verdict.is_valid() && whole.verdict.is_valid(),
        format!(
            "1/beta = 1.5 -> {} (recon {:.2e}); 1/beta = 2 -> {} (recon {:.2e})",
            if frac.verdict.is_valid() {
                "valid"
            } else {
                "invalid"
            },
            frac.recon_error,
            if whole.verdict.is_valid() {
                "valid"
            } else {
                "invalid"
            },
            whole.recon_error
        ),
    )
}

fn criterion_7() -> Verdict {
    let t = Instant::now();
    let positives: Vec<StabilityProblem> = registry(HazardVariant::CLASSICAL, false)
        .unwrap()
        .into_iter()
        .filter(|p| p.role == Role::Positive)
        .map(|p| p.problem)
        .collect();
    let mut pos_fail = Vec::new();
    let mut ctl_pass = Vec::new();
    let mut max_pos_ratio: f64 = 0.0;
    let mut min_ctl_ratio = f64::INFINITY;
    for p in &positives {
        let wrong = StabilityProblem {
            c: p.c * WRONG_C_FACTOR,
            ..*p
        };
        for &seed in SHIPPED_SEEDS.iter() {
            let cfg = McConfig::new(MC_TRIALS, seed);
            let r = mc_stability_test(p, &cfg).unwrap();
            max_pos_ratio = max_pos_ratio.max(r.ks_stat / r.ks_critical);
            if !r.pass {
                pos_fail.push(format!("{} {} seed {seed}", p.variate, p.law));
            }
            let w = mc_stability_test(&wrong, &cfg).unwrap();
            min_ctl_ratio = min_ctl_ratio.min(w.ks_stat / w.ks_critical);
            if w.pass {
                ctl_pass.push(format!("{} {} seed {seed}", p.variate, p.law));
            }
        }
    }
    let elapsed = t.elapsed();
    verdict(
        pos_fail.is_empty() && ctl_pass.is_empty() && elapsed < MC_BUDGET,
        format!(
            "{} pairings x {} seeds at {MC_TRIALS} trials: max KS/critical {max_pos_ratio:.2} on positives, \
             min {min_ctl_ratio:.2} on wrong-c; failures {pos_fail:?}, control passes {ctl_pass:?}; {elapsed:.2?} < 60 s",
            positives.len(),
            SHIPPED_SEEDS.len()
        ),
    )
}

fn criterion_8() -> Verdict {
    let mut failed = Vec::new();
    let mut audits = 0;
    let laws = [
        DiscreteLaw::sibuya(0.5).unwrap(),
        DiscreteLaw::harris(3.0, 2).unwrap(),
        DiscreteLaw::geometric(0.3, Support::I1).unwrap(),
        DiscreteLaw::geometric(0.6, Support::I0).unwrap(),
        DiscreteLaw::degenerate(3).unwrap(),
    ];
    for (i, law) in laws.iter().enumerate() {
        let mut r = rng(AUDIT_SEED + i as u64);
        let d: Vec<u64> = (0..AUDIT_DRAWS)
            .map(|_| law.sample(&mut r).unwrap())
            .collect();
        let t = chi_square(&d, law.min_support(), |n| law.survival(n));
        audits += 1;
        if !t.pass() {
            failed.push(format!("{law} chi2 {:.1}/{:.1}", t.stat, t.critical));
        }
    }
    let h = |alpha, p, frac: f64| {
        PeriodicHazard::new(alpha, p, frac * PeriodicHazard::eps_bound(p), 1.0).unwrap()
    };
    let families = [
        ContinuousFamily::exponential(2.0).unwrap(),
        ContinuousFamily::semi_weibull(h(1.5, 0.4, 1.0)),
        ContinuousFamily::generalized_semi_pareto(h(1.0, 1.0 / 3.0, 0.5), 0.5).unwrap(),
        ContinuousFamily::semi_pareto(h(2.0, 0.3, 0.0)),
        ContinuousFamily::extended_log_logistic(1.0, 2).unwrap(),
    ];
    let crit = ks_critical(0.01, AUDIT_DRAWS);
    for (i, f) in families.iter().enumerate() {
        let mut r = rng(AUDIT_SEED + 100 + i as u64);
        let mut xs: Vec<f64> = (0..AUDIT_DRAWS)
            .map(|_| f.sample(&mut r).unwrap())
            .collect();
        xs.sort_by(f64::total_cmp);
        let d = ks_statistic(&xs, |x| f.cdf(x).unwrap());
        audits += 1;
        if d >= crit {
            failed.push(format!("{f} KS {d:.4}/{crit:.4}"));
        }
    }
    let discrete = [
        DiscretizedFamily::geometric(0.5).unwrap(),
        DiscretizedFamily::new(ContinuousFamily::semi_weibull(h(0.5, 0.4, 0.0))).unwrap(),
        DiscretizedFamily::new(
            ContinuousFamily::generalized_semi_pareto(h(0.5, 1.0 / 3.0, 0.0), 0.5).unwrap(),
        )
        .unwrap(),
    ];
    for (i, d) in discrete.iter().enumerate() {
        let mut r = rng(AUDIT_SEED + 200 + i as u64);
        let xs: Vec<u64> = (0..AUDIT_DRAWS).map(|_| capped(d.sample(&mut r))).collect();
        let t = chi_square(&xs, 0, |j| d.survival(j + 1));
        audits += 1;
        if !t.pass() {
            failed.push(format!("{d} chi2 {:.1}/{:.1}", t.stat, t.critical));
        }
    }
    let sib = DiscreteLaw::sibuya(0.5).unwrap();
    let mut r = rng(AUDIT_SEED + 300);
    let d: Vec<u64> = (0..AUDIT_DRAWS)
        .map(|_| sib.sample(&mut r).unwrap())
        .collect();
    let mut bands = Vec::new();
    for n in [10u64, 100, 1000] {
        let expect = sib.survival(n);
        let got = d.iter().filter(|&&x| x > n).count() as f64 / d.len() as f64;
        let z = (got - expect) / (band3(expect, d.len()) / 3.0);
        bands.push(format!("n={n}: z={z:+.2}"));
        audits += 1;
        if z.abs() > 3.0 {
            failed.push(format!("Sibuya tail at {n}: {got} vs {expect}"));
        }
    }
    verdict(
        failed.is_empty(),
        format!(
            "{audits} audits at 1%, Sibuya(0.5) tail {}; failures {failed:?}",
            bands.join(", ")
        ),
    )
}

fn criterion_9() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_maxmin"))
            .args(["suite", "--format", "json", "--seed", "42"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout;
    verdict(
        same && a.status.success() && !a.stdout.is_empty(),
        format!("two runs, {} bytes each, identical: {same}", a.stdout.len()),
    )
}

type Check = fn() -> Verdict;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("functional-equation suite", criterion_1),
        ("negative controls", criterion_2),
        ("hazard generality", criterion_3),
        ("PGF round trips", criterion_4),
        ("power-composition gate", criterion_5),
        ("GSP only-if", criterion_6),
        ("Monte Carlo", criterion_7),
        ("sampler audits", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        all &= v.pass;
        println!(
            "criterion {}: {} [{name}] {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
