//! C ABI over `maxmin`.
//!
//! Laws and families live behind opaque heap handles that the caller frees.
//! Every fallible call returns a [`MaxminStatus`]; on failure the message is
//! kept per thread and read with [`maxmin_last_error_message`]. Results go
//! through out-pointers, which are left untouched when the call fails.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use maxmin::extremes_mc::{mc_stability_test, McConfig};
use maxmin::stability::{auto_constant, SuiteConfig};
use maxmin::{
    registry_suite, verify_stability, ContinuousFamily, DiscreteLaw, DiscretizedFamily, Error,
    GridSpec, PeriodicHazard, Prob, StabilityMode, StabilityProblem, Support, Variate,
};

/// Result code of every fallible call. Zero means success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxminStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Parameter = 3,
    Overflow = 4,
    Convergence = 5,
    Nonnegativity = 6,
    Registry = 7,
    Instability = 8,
    Panic = 99,
}

/// Which extreme is being stabilised.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxminMode {
    Max = 0,
    Min = 1,
}

/// Support of a geometric law.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxminSupport {
    /// {0, 1, 2, ...}
    I0 = 0,
    /// {1, 2, 3, ...}
    I1 = 1,
}

/// Opaque law of the random sample size N.
pub struct MaxminLaw(DiscreteLaw);

/// Opaque distribution of X, continuous or discretized.
pub struct MaxminFamily(Variate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MaxminStatus {
    match e {
        Error::Domain(_) => MaxminStatus::Domain,
        Error::Parameter(_) => MaxminStatus::Parameter,
        Error::Overflow(_) => MaxminStatus::Overflow,
        Error::Convergence(_) => MaxminStatus::Convergence,
        Error::Nonnegativity { .. } => MaxminStatus::Nonnegativity,
        Error::Registry(_) => MaxminStatus::Registry,
        Error::Instability(_) => MaxminStatus::Instability,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, converting errors and panics to a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MaxminStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MaxminStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            MaxminStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            MaxminStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    // SAFETY: caller passes either null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or(Fail::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    // SAFETY: non-null and, per the API contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn put_law(out: *mut *mut MaxminLaw, law: DiscreteLaw) -> Result<(), Fail> {
    unsafe { write(out, Box::into_raw(Box::new(MaxminLaw(law)))) }
}

unsafe fn put_family(out: *mut *mut MaxminFamily, v: Variate) -> Result<(), Fail> {
    unsafe { write(out, Box::into_raw(Box::new(MaxminFamily(v)))) }
}

fn mode(m: MaxminMode) -> StabilityMode {
    match m {
        MaxminMode::Max => StabilityMode::Max,
        MaxminMode::Min => StabilityMode::Min,
    }
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn maxmin_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn maxmin_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---- laws ----

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_law_sibuya(v: f64, out: *mut *mut MaxminLaw) -> MaxminStatus {
    guard(|| unsafe { put_law(out, DiscreteLaw::sibuya(v)?) })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_law_harris(
    a: f64,
    k: u32,
    out: *mut *mut MaxminLaw,
) -> MaxminStatus {
    guard(|| unsafe { put_law(out, DiscreteLaw::harris(a, k)?) })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_law_geometric(
    q: f64,
    support: MaxminSupport,
    out: *mut *mut MaxminLaw,
) -> MaxminStatus {
    let s = match support {
        MaxminSupport::I0 => Support::I0,
        MaxminSupport::I1 => Support::I1,
    };
    guard(|| unsafe { put_law(out, DiscreteLaw::geometric(q, s)?) })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_law_degenerate(k: u64, out: *mut *mut MaxminLaw) -> MaxminStatus {
    guard(|| unsafe { put_law(out, DiscreteLaw::degenerate(k)?) })
}

/// # Safety
/// `law` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn maxmin_law_free(law: *mut MaxminLaw) {
    if !law.is_null() {
        drop(unsafe { Box::from_raw(law) });
    }
}

/// PGF `Q(s)` for `s ∈ [0, 1]`.
///
/// # Safety
/// `law` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_law_pgf(
    law: *const MaxminLaw,
    s: f64,
    out: *mut f64,
) -> MaxminStatus {
    guard(|| unsafe { write(out, deref(law, "law")?.0.pgf(s)?) })
}

/// `P(N = n)`.
///
/// # Safety
/// `law` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_law_pmf(
    law: *const MaxminLaw,
    n: u64,
    out: *mut f64,
) -> MaxminStatus {
    guard(|| unsafe { write(out, deref(law, "law")?.0.pmf(n)) })
}

/// `P(N > n)`.
///
/// # Safety
/// `law` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_law_survival(
    law: *const MaxminLaw,
    n: u64,
    out: *mut f64,
) -> MaxminStatus {
    guard(|| unsafe { write(out, deref(law, "law")?.0.survival(n)) })
}

// ---- families ----

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_exponential(
    rate: f64,
    out: *mut *mut MaxminFamily,
) -> MaxminStatus {
    guard(|| unsafe { put_family(out, ContinuousFamily::exponential(rate)?.into()) })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_semi_weibull(
    alpha: f64,
    p: f64,
    eps: f64,
    phase: f64,
    out: *mut *mut MaxminFamily,
) -> MaxminStatus {
    guard(|| unsafe {
        let h = PeriodicHazard::new(alpha, p, eps, phase)?;
        put_family(out, ContinuousFamily::semi_weibull(h).into())
    })
}

/// Generalized semi-Pareto with shape `beta`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_gsp(
    alpha: f64,
    p: f64,
    eps: f64,
    phase: f64,
    beta: f64,
    out: *mut *mut MaxminFamily,
) -> MaxminStatus {
    guard(|| unsafe {
        let h = PeriodicHazard::new(alpha, p, eps, phase)?;
        put_family(
            out,
            ContinuousFamily::generalized_semi_pareto(h, beta)?.into(),
        )
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_semi_pareto(
    alpha: f64,
    p: f64,
    eps: f64,
    phase: f64,
    out: *mut *mut MaxminFamily,
) -> MaxminStatus {
    guard(|| unsafe {
        let h = PeriodicHazard::new(alpha, p, eps, phase)?;
        put_family(out, ContinuousFamily::semi_pareto(h).into())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_ext_log_logistic(
    alpha: f64,
    k: u32,
    out: *mut *mut MaxminFamily,
) -> MaxminStatus {
    guard(|| unsafe {
        put_family(
            out,
            ContinuousFamily::extended_log_logistic(alpha, k)?.into(),
        )
    })
}

/// Discretized copy of a continuous family on {0, 1, 2, ...}.
///
/// # Safety
/// `family` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_discretize(
    family: *const MaxminFamily,
    out: *mut *mut MaxminFamily,
) -> MaxminStatus {
    guard(|| unsafe {
        let f = deref(family, "family")?;
        if f.0.is_discrete() {
            return Err(Error::Parameter("family is already discrete".into()).into());
        }
        let d = DiscretizedFamily::new(*f.0.continuous())?;
        put_family(out, Variate::Discrete(d))
    })
}

/// # Safety
/// `family` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_free(family: *mut MaxminFamily) {
    if !family.is_null() {
        drop(unsafe { Box::from_raw(family) });
    }
}

/// 1 when the family is discretized, 0 otherwise (including null).
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_is_discrete(family: *const MaxminFamily) -> i32 {
    unsafe { family.as_ref() }.is_some_and(|f| f.0.is_discrete()) as i32
}

/// `P(X ≤ x)`. Discrete families use their continuous extension between
/// integers.
///
/// # Safety
/// `family` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_cdf(
    family: *const MaxminFamily,
    x: f64,
    out: *mut f64,
) -> MaxminStatus {
    guard(|| unsafe {
        let f = deref(family, "family")?;
        if x.is_nan() {
            return Err(Error::Domain("x is NaN".into()).into());
        }
        write(out, f.0.prob_ext(x).value)
    })
}

/// Quantile at level `u ∈ (0, 1)`. Discrete families return the smallest
/// integer j with `F(j) ≥ u`, as a double.
///
/// # Safety
/// `family` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_family_quantile(
    family: *const MaxminFamily,
    u: f64,
    out: *mut f64,
) -> MaxminStatus {
    guard(|| unsafe {
        let f = deref(family, "family")?;
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("level u = {u} must lie in (0, 1)")).into());
        }
        let q = match &f.0 {
            Variate::Continuous(c) => c.quantile(u)?,
            Variate::Discrete(d) => d.quantile_survival(Prob::from_value(u).flip())? as f64,
        };
        write(out, q)
    })
}

// ---- checks ----

/// Stability constant implied by a known pairing.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_auto_constant(
    family: *const MaxminFamily,
    law: *const MaxminLaw,
    m: MaxminMode,
    out: *mut f64,
) -> MaxminStatus {
    guard(|| unsafe {
        let (_, c) = auto_constant(&deref(family, "family")?.0, &deref(law, "law")?.0, mode(m))?;
        write(out, c)
    })
}

unsafe fn problem(
    family: *const MaxminFamily,
    law: *const MaxminLaw,
    m: MaxminMode,
    c: f64,
) -> Result<StabilityProblem, Fail> {
    let f = unsafe { deref(family, "family")? };
    let l = unsafe { deref(law, "law")? };
    let c = if c > 0.0 {
        c
    } else {
        auto_constant(&f.0, &l.0, mode(m))?.1
    };
    Ok(StabilityProblem::new(f.0, l.0, mode(m), c)?)
}

/// Sup-residual of the stability equation on the default grid. Pass
/// `c <= 0` to use the registry constant. `out_pass` receives 1 or 0.
///
/// # Safety
/// Handles must be live and out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_verify(
    family: *const MaxminFamily,
    law: *const MaxminLaw,
    m: MaxminMode,
    c: f64,
    tol: f64,
    out_sup_residual: *mut f64,
    out_pass: *mut i32,
) -> MaxminStatus {
    guard(|| unsafe {
        let p = problem(family, law, m, c)?;
        let r = verify_stability(&p, &GridSpec::default_for(&p.variate), tol)?;
        write(out_sup_residual, r.sup_residual)?;
        write(out_pass, r.pass as i32)
    })
}

/// Monte Carlo KS test of simulated extremes at 1% significance. Pass
/// `c <= 0` to use the registry constant.
///
/// # Safety
/// Handles must be live and out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_mc_test(
    family: *const MaxminFamily,
    law: *const MaxminLaw,
    m: MaxminMode,
    c: f64,
    trials: u64,
    seed: u64,
    out_ks: *mut f64,
    out_pass: *mut i32,
) -> MaxminStatus {
    guard(|| unsafe {
        let p = problem(family, law, m, c)?;
        let cfg = McConfig::new(trials as usize, seed);
        let r = mc_stability_test(&p, &cfg)?;
        write(out_ks, r.ks_stat)?;
        write(out_pass, r.pass as i32)
    })
}

/// Runs the full registry suite and returns its reports as a JSON array.
/// Free the string with [`maxmin_string_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn maxmin_suite_json(
    with_controls: i32,
    out: *mut *mut c_char,
) -> MaxminStatus {
    guard(|| unsafe {
        let cfg = SuiteConfig {
            with_controls: with_controls != 0,
            ..SuiteConfig::default()
        };
        let reports = registry_suite(&cfg)?;
        let json = serde_json::to_string(&reports).map_err(|e| Error::Parameter(e.to_string()))?;
        let c = CString::new(json).map_err(|e| Error::Parameter(e.to_string()))?;
        write(out, c.into_raw())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn maxmin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
