//! C ABI over `omega_class`.
//!
//! Functions are parsed or built into an opaque `OmegaFunction` handle and
//! released with `omega_function_free`. Every call returns an `OmegaStatus`;
//! on failure `omega_last_error` describes the most recent error on the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use omega_class::coeffbounds::{CoefficientProfile, Functional};
use omega_class::disc::{radius_of_property, Property, ScanConfig};
use omega_class::funcrep::AnalyticFunction;
use omega_class::omega::{is_member_omega, is_member_u, Decision, Verdict};
use omega_class::search::{maximize_functional, SearchConfig};
use omega_class::Error;

/// Opaque handle to an analytic function.
pub struct OmegaFunction(AnalyticFunction);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed input: unknown id, bad literal, unsupported parameters.
    Usage = 3,
    /// The computation failed (pole, evaluation error, ...).
    Computation = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaDecision {
    Member = 0,
    NonMember = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaClass {
    Omega = 0,
    U = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaProperty {
    Starlike = 0,
    Convex = 1,
    CloseToConvex = 2,
    OmegaBound = 3,
    UBound = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaVerdict {
    pub decision: OmegaDecision,
    pub has_witness: bool,
    pub witness_re: f64,
    pub witness_im: f64,
    pub sup_found: f64,
    pub margin: f64,
    pub threshold: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaBoundReport {
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    /// The bound is met with equality (to 1e-12) by a known extremal function.
    pub attained: bool,
    /// The function was not certified to lie in the class.
    pub uncertified: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: Error) -> OmegaStatus {
    set_error(e.to_string());
    if e.is_usage() {
        OmegaStatus::Usage
    } else {
        OmegaStatus::Computation
    }
}

fn guard(body: impl FnOnce() -> OmegaStatus) -> OmegaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            OmegaStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, OmegaStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(OmegaStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        OmegaStatus::InvalidUtf8
    })
}

unsafe fn handle<'a>(f: *const OmegaFunction) -> Result<&'a AnalyticFunction, OmegaStatus> {
    f.as_ref().map(|h| &h.0).ok_or_else(|| {
        set_error("null function handle");
        OmegaStatus::NullPointer
    })
}

fn null_out() -> OmegaStatus {
    set_error("null output pointer");
    OmegaStatus::NullPointer
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! lib {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

fn scan() -> Result<ScanConfig, OmegaStatus> {
    ScanConfig::from_env().map_err(fail)
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn omega_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a catalog id (`ftilde:5`, `f1`, ...) or a series literal
/// (`0, 1, 0.25`). The handle must be released with `omega_function_free`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omega_function_parse(
    spec: *const c_char,
    out: *mut *mut OmegaFunction,
) -> OmegaStatus {
    guard(|| {
        let spec = attempt!(text(spec));
        if out.is_null() {
            return null_out();
        }
        let f: AnalyticFunction = lib!(spec.parse());
        *out = Box::into_raw(Box::new(OmegaFunction(f)));
        OmegaStatus::Ok
    })
}

/// `z + z^n / (2(n-1))`, `n >= 2`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omega_function_extremal(n: usize, out: *mut *mut OmegaFunction) -> OmegaStatus {
    guard(|| {
        if out.is_null() {
            return null_out();
        }
        let f = lib!(AnalyticFunction::make_extremal(n));
        *out = Box::into_raw(Box::new(OmegaFunction(f)));
        OmegaStatus::Ok
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn omega_function_free(f: *mut OmegaFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Taylor coefficient `a_j` of `f`.
///
/// # Safety
/// `f` must be a live handle; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn omega_function_coefficient(
    f: *const OmegaFunction,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> OmegaStatus {
    guard(|| {
        let f = attempt!(handle(f));
        if re.is_null() || im.is_null() {
            return null_out();
        }
        let s = lib!(f.series(j.max(omega_class::series::DEFAULT_ORDER)));
        let c = s.coeff(j);
        *re = c.re;
        *im = c.im;
        OmegaStatus::Ok
    })
}

fn verdict(v: Verdict) -> OmegaVerdict {
    let w = v.witness.unwrap_or_default();
    OmegaVerdict {
        decision: match v.decision {
            Decision::Member => OmegaDecision::Member,
            Decision::NonMember => OmegaDecision::NonMember,
            Decision::Inconclusive => OmegaDecision::Inconclusive,
        },
        has_witness: v.witness.is_some(),
        witness_re: w.re,
        witness_im: w.im,
        sup_found: v.sup_found,
        margin: v.margin,
        threshold: v.threshold,
    }
}

/// Membership verdict for Ω or 𝒰.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omega_is_member(
    f: *const OmegaFunction,
    class: OmegaClass,
    tol: f64,
    out: *mut OmegaVerdict,
) -> OmegaStatus {
    guard(|| {
        let f = attempt!(handle(f));
        if out.is_null() {
            return null_out();
        }
        let scan = attempt!(scan());
        let v = match class {
            OmegaClass::Omega => lib!(is_member_omega(f, tol, &scan)),
            OmegaClass::U => lib!(is_member_u(f, tol, &scan)),
        };
        *out = verdict(v);
        OmegaStatus::Ok
    })
}

/// Largest radius on which the property holds, bisected to `tol`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omega_radius(
    f: *const OmegaFunction,
    property: OmegaProperty,
    tol: f64,
    out: *mut f64,
) -> OmegaStatus {
    guard(|| {
        let f = attempt!(handle(f));
        if out.is_null() {
            return null_out();
        }
        let property = match property {
            OmegaProperty::Starlike => Property::Starlike,
            OmegaProperty::Convex => Property::Convex,
            OmegaProperty::CloseToConvex => Property::CloseToConvex,
            OmegaProperty::OmegaBound => Property::OmegaBound,
            OmegaProperty::UBound => Property::UBound,
        };
        let scan = attempt!(scan());
        *out = lib!(radius_of_property(f, property, tol, &scan)).radius;
        OmegaStatus::Ok
    })
}

/// Bound report for a functional id: `aN`, `fs:re,im`, `fsk:k,re,im`,
/// `b2`..`b4`, `t2:n`, `t31`, `t32`.
///
/// # Safety
/// `f` must be a live handle, `functional` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omega_bound(
    f: *const OmegaFunction,
    functional: *const c_char,
    out: *mut OmegaBoundReport,
) -> OmegaStatus {
    guard(|| {
        let f = attempt!(handle(f));
        let id = attempt!(text(functional));
        if out.is_null() {
            return null_out();
        }
        let functional: Functional = lib!(id.parse());
        let scan = attempt!(scan());
        let profile = lib!(CoefficientProfile::new(f, functional.required_order(), &scan));
        let r = lib!(profile.report(&functional));
        *out = OmegaBoundReport {
            value: r.value,
            bound: r.bound,
            slack: r.slack,
            attained: r.attained_by.is_some(),
            uncertified: r.uncertified,
        };
        OmegaStatus::Ok
    })
}

/// Hill-climbs a functional over generated members; writes the best value
/// found and the bound. `restarts` or `steps` of 0 select the defaults.
///
/// # Safety
/// `target` must be a NUL-terminated string; `best` and `bound` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn omega_search(
    target: *const c_char,
    seed: u64,
    restarts: usize,
    steps: usize,
    best: *mut f64,
    bound: *mut f64,
) -> OmegaStatus {
    guard(|| {
        let id = attempt!(text(target));
        if best.is_null() || bound.is_null() {
            return null_out();
        }
        let mut config = SearchConfig::new(lib!(id.parse()));
        config.seed = seed;
        if restarts > 0 {
            config.restarts = restarts;
        }
        if steps > 0 {
            config.steps_per_restart = steps;
        }
        let r = lib!(maximize_functional(&config));
        *best = r.best_value;
        *bound = r.bound;
        OmegaStatus::Ok
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn omega_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
