//! C ABI over the diracdet engine.
//!
//! Results come back through out-parameters; every function returns a
//! [`DdStatus`]. Handles are opaque and must be released with the matching
//! `_free` function. Strings returned by the library are released with
//! [`dd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use diracdet::cli::{render_records, report_json, run_suite, Format, SuiteOptions};
use diracdet::expansion::{
    compute_m2_exact, compute_s_log_report, compute_table1, CoefficientTable, DivergenceReport,
};
use diracdet::integrals::n_integral;
use diracdet::{Error, Q};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    UnsupportedParity = 4,
    Overflow = 5,
    Verification = 6,
    Internal = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).ok();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DdStatus {
    match e {
        Error::Domain(_) | Error::IndexOutOfRange(_) | Error::Parse(_) => DdStatus::Domain,
        Error::UnsupportedParity(_) => DdStatus::UnsupportedParity,
        Error::Verification(_) | Error::TableMismatch(_) => DdStatus::Verification,
        _ => DdStatus::Internal,
    }
}

fn fail(e: Error) -> DdStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn guarded(f: impl FnOnce() -> DdStatus) -> DdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            DdStatus::Internal
        }
    }
}

fn split(x: &Q) -> Option<(i64, i64)> {
    Some(((*x.numer()).try_into().ok()?, (*x.denom()).try_into().ok()?))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the most recent failure on this thread, or null. Release
/// with [`dd_string_free`].
#[no_mangle]
pub extern "C" fn dd_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn dd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact N_{n,k} as a reduced fraction.
///
/// # Safety
/// `num` and `den` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dd_n_integral(n: u32, k: u32, num: *mut i64, den: *mut i64) -> DdStatus {
    if num.is_null() || den.is_null() {
        return DdStatus::NullPointer;
    }
    guarded(|| match n_integral(n, k) {
        Ok(v) => match split(&v.value) {
            Some((a, b)) => {
                *num = a;
                *den = b;
                DdStatus::Ok
            }
            None => DdStatus::Overflow,
        },
        Err(e) => fail(e),
    })
}

/// Computed quartic coefficient table.
pub struct DdTable {
    inner: CoefficientTable,
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dd_table_compute(out: *mut *mut DdTable) -> DdStatus {
    if out.is_null() {
        return DdStatus::NullPointer;
    }
    guarded(|| match compute_table1() {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(DdTable { inner }));
            DdStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// # Safety
/// `t` must be null or a handle from [`dd_table_compute`], freed once.
#[no_mangle]
pub unsafe extern "C" fn dd_table_free(t: *mut DdTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live table handle.
#[no_mangle]
pub unsafe extern "C" fn dd_table_len(t: *const DdTable) -> usize {
    t.as_ref().map(|t| t.inner.entries.len()).unwrap_or(0)
}

/// Vertex types of entry `i`, written as 0 or 5 into `s[0..4]`.
///
/// # Safety
/// `t` must be a live table handle and `s` valid for four writes.
#[no_mangle]
pub unsafe extern "C" fn dd_table_signature(t: *const DdTable, i: usize, s: *mut u8) -> DdStatus {
    let Some(t) = t.as_ref() else { return DdStatus::NullPointer };
    if s.is_null() {
        return DdStatus::NullPointer;
    }
    let Some(e) = t.inner.entries.get(i) else { return DdStatus::InvalidArgument };
    for (j, v) in e.signature.as_slice().iter().enumerate() {
        *s.add(j) = *v;
    }
    DdStatus::Ok
}

/// Coefficient `which` (0 = A, 1 = B, 2 = C, 3 = D) of entry `i` as
/// re_num/re_den + i·im_num/im_den.
///
/// # Safety
/// `t` must be a live table handle; all out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dd_table_coefficient(
    t: *const DdTable,
    i: usize,
    which: u32,
    re_num: *mut i64,
    re_den: *mut i64,
    im_num: *mut i64,
    im_den: *mut i64,
) -> DdStatus {
    let Some(t) = t.as_ref() else { return DdStatus::NullPointer };
    if re_num.is_null() || re_den.is_null() || im_num.is_null() || im_den.is_null() {
        return DdStatus::NullPointer;
    }
    let Some(e) = t.inner.entries.get(i) else { return DdStatus::InvalidArgument };
    let Some(c) = e.computed.as_array().get(which as usize).copied() else {
        return DdStatus::InvalidArgument;
    };
    match (split(&c.re), split(&c.im)) {
        (Some((a, b)), Some((x, y))) => {
            *re_num = a;
            *re_den = b;
            *im_num = x;
            *im_den = y;
            DdStatus::Ok
        }
        _ => DdStatus::Overflow,
    }
}

/// Whether entry `i` agrees with the shipped reference table.
///
/// # Safety
/// `t` must be a live table handle and `matches` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dd_table_matches(t: *const DdTable, i: usize, matches: *mut bool) -> DdStatus {
    let Some(t) = t.as_ref() else { return DdStatus::NullPointer };
    if matches.is_null() {
        return DdStatus::NullPointer;
    }
    match t.inner.entries.get(i) {
        Some(e) => {
            *matches = e.matches;
            DdStatus::Ok
        }
        None => DdStatus::InvalidArgument,
    }
}

/// Logarithmic divergence report.
pub struct DdReport {
    inner: DivergenceReport,
}

/// `eta_order` is the highest η power kept in the I series (even, ≥ 2).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dd_report_compute(eta_order: u32, out: *mut *mut DdReport) -> DdStatus {
    if out.is_null() {
        return DdStatus::NullPointer;
    }
    if eta_order < 2 || eta_order % 2 == 1 {
        set_error(format!("eta order {eta_order} must be even and at least 2"));
        return DdStatus::InvalidArgument;
    }
    guarded(|| {
        let r =
            compute_table1().and_then(|t| compute_s_log_report(&t, &compute_m2_exact(eta_order as usize)?));
        match r {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(DdReport { inner }));
                DdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must be null or a handle from [`dd_report_compute`], freed once.
#[no_mangle]
pub unsafe extern "C" fn dd_report_free(r: *mut DdReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Mass-term constant in units of m²/(24π²).
///
/// # Safety
/// `r` must be a live report handle; `num`, `den` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dd_report_mass_term(r: *const DdReport, num: *mut i64, den: *mut i64) -> DdStatus {
    let Some(r) = r.as_ref() else { return DdStatus::NullPointer };
    if num.is_null() || den.is_null() {
        return DdStatus::NullPointer;
    }
    let c = r.inner.mass_term.in_units_of_24pi2;
    if !c.im.numer().eq(&0) {
        return DdStatus::Internal;
    }
    match split(&c.re) {
        Some((a, b)) => {
            *num = a;
            *den = b;
            DdStatus::Ok
        }
        None => DdStatus::Overflow,
    }
}

/// Whether the C = 0 projection equals the Yang-Mills density.
///
/// # Safety
/// `r` must be a live report handle and `equal` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dd_report_yang_mills(r: *const DdReport, equal: *mut bool) -> DdStatus {
    let Some(r) = r.as_ref() else { return DdStatus::NullPointer };
    if equal.is_null() {
        return DdStatus::NullPointer;
    }
    *equal = r.inner.yang_mills.equal;
    DdStatus::Ok
}

/// JSON form of the report. Release with [`dd_string_free`].
///
/// # Safety
/// `r` must be a live report handle and `json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dd_report_to_json(r: *const DdReport, json: *mut *mut c_char) -> DdStatus {
    let Some(r) = r.as_ref() else { return DdStatus::NullPointer };
    if json.is_null() {
        return DdStatus::NullPointer;
    }
    guarded(|| {
        *json = into_c_string(report_json(&r.inner).to_string());
        DdStatus::Ok
    })
}

/// Runs the verification suite. `json` may be null; otherwise it receives
/// the records, released with [`dd_string_free`].
///
/// # Safety
/// `passed` must be valid for writes; `json` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dd_verify(oracle_order: u32, passed: *mut bool, json: *mut *mut c_char) -> DdStatus {
    if passed.is_null() {
        return DdStatus::NullPointer;
    }
    if !(4..=200).contains(&oracle_order) {
        set_error(format!("oracle order {oracle_order} outside 4..=200"));
        return DdStatus::InvalidArgument;
    }
    guarded(|| {
        let opts = SuiteOptions { oracle_order: oracle_order as usize, ..SuiteOptions::default() };
        let records = run_suite(&opts);
        *passed = records.iter().all(|r| r.passed());
        if !json.is_null() {
            *json = into_c_string(render_records(&records, Format::Json));
        }
        DdStatus::Ok
    })
}
