//! C interface to `courant`. Specs live behind an opaque handle; every call
//! returns a [`CourantStatus`] and leaves a message for
//! [`courant_last_error`] when it is not `Ok` or `CheckFailed`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use courant::cli::syntax::{basis_names, parse_form};
use courant::cohomology::betti;
use courant::kerforms::KerForm;
use courant::linfty::{build_classical, build_twisted, verify_linfty, LInftyOptions};
use courant::structure::{check_axioms, load_spec, spec_to_json, CheckOptions, CheckReport, Suite};
use courant::twist::{c_twist, make_standard, so3, twist_bracket};
use courant::{AlgebroidSpec, Error};

/// Opaque structure handle.
pub struct CourantSpec {
    inner: AlgebroidSpec,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CourantStatus {
    Ok = 0,
    /// The computation ran and an axiom or equation failed.
    CheckFailed = 1,
    ParseError = 2,
    InvariantError = 3,
    Inapplicable = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    BufferTooSmall = 7,
    OtherError = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> CourantStatus {
    match e {
        Error::Parse { .. } => CourantStatus::ParseError,
        Error::Invariant { .. } | Error::NotInKernel(_) | Error::Degree(_) => CourantStatus::InvariantError,
        Error::Inapplicable { .. } | Error::MissingTwist => CourantStatus::Inapplicable,
        _ => CourantStatus::OtherError,
    }
}

type Outcome = Result<CourantStatus, CourantStatus>;

fn fail(e: Error) -> CourantStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn guard(body: impl FnOnce() -> Outcome) -> CourantStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(s)) | Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            CourantStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, CourantStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(CourantStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        CourantStatus::InvalidUtf8
    })
}

unsafe fn spec<'a>(p: *const CourantSpec) -> Result<&'a AlgebroidSpec, CourantStatus> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| {
        set_error("null spec handle");
        CourantStatus::NullPointer
    })
}

unsafe fn put_spec(out: *mut *mut CourantSpec, s: courant::Result<AlgebroidSpec>) -> Outcome {
    if out.is_null() {
        set_error("null output pointer");
        return Err(CourantStatus::NullPointer);
    }
    let s = s.map_err(fail)?;
    *out = Box::into_raw(Box::new(CourantSpec { inner: s }));
    Ok(CourantStatus::Ok)
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Outcome {
    if out.is_null() {
        set_error("null output pointer");
        return Err(CourantStatus::NullPointer);
    }
    let c = CString::new(s).map_err(|_| CourantStatus::OtherError)?;
    *out = c.into_raw();
    Ok(CourantStatus::Ok)
}

unsafe fn put_report(out: *mut *mut c_char, report: &CheckReport) -> Outcome {
    let json = serde_json::to_string(&report.to_value()).map_err(|_| CourantStatus::OtherError)?;
    put_string(out, json)?;
    Ok(if report.passed() {
        CourantStatus::Ok
    } else {
        CourantStatus::CheckFailed
    })
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn courant_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Load a structure document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn courant_spec_from_json(json: *const c_char, out: *mut *mut CourantSpec) -> CourantStatus {
    guard(|| {
        let src = text(json)?;
        put_spec(out, load_spec(src))
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn courant_make_standard(n: usize, out: *mut *mut CourantSpec) -> CourantStatus {
    guard(|| put_spec(out, make_standard(n)))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn courant_make_so3(out: *mut *mut CourantSpec) -> CourantStatus {
    guard(|| put_spec(out, Ok(so3())))
}

/// The standard algebroid over `n` variables twisted by a base three-form such
/// as `x1*dx2^dx3^dx4`.
///
/// # Safety
/// `c` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn courant_make_ctwist(n: usize, c: *const c_char, out: *mut *mut CourantSpec) -> CourantStatus {
    guard(|| {
        let src = text(c)?;
        let names: Vec<String> = (1..=n).map(|i| format!("dx{i}")).collect();
        let form = parse_form(src, &names, n).map_err(fail)?;
        put_spec(out, c_twist(n, &form))
    })
}

/// Twist `base` by a three-form written in its basis names.
///
/// # Safety
/// `base` must be a live handle, `b` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn courant_make_twist(
    base: *const CourantSpec,
    b: *const c_char,
    out: *mut *mut CourantSpec,
) -> CourantStatus {
    guard(|| {
        let spec0 = spec(base)?;
        let src = text(b)?;
        let twisted = parse_form(src, &basis_names(spec0), spec0.nvars())
            .and_then(|f| KerForm::certify(spec0, 3, f))
            .and_then(|b| twist_bracket(spec0, &b));
        put_spec(out, twisted)
    })
}

/// # Safety
/// `spec` must be null or a handle returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn courant_spec_free(spec: *mut CourantSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Rank of the bundle, or 0 for a null handle.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn courant_spec_rank(spec: *const CourantSpec) -> usize {
    spec.as_ref().map_or(0, |s| s.inner.rank())
}

/// The structure document. Free the string with [`courant_string_free`].
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn courant_spec_to_json(handle: *const CourantSpec, out: *mut *mut c_char) -> CourantStatus {
    guard(|| {
        let s = spec(handle)?;
        put_string(out, spec_to_json(s))
    })
}

/// Run an axiom suite; the JSON report goes to `report`. Returns `CheckFailed`
/// when an axiom fails.
///
/// # Safety
/// `handle` must be a live handle, `suite` a NUL-terminated string and `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn courant_verify(
    handle: *const CourantSpec,
    suite: *const c_char,
    seed: u64,
    report: *mut *mut c_char,
) -> CourantStatus {
    guard(|| {
        let s = spec(handle)?;
        let suite: Suite = text(suite)?.parse().map_err(fail)?;
        let opts = CheckOptions {
            seed,
            ..CheckOptions::default()
        };
        let r = check_axioms(s, suite, &opts).map_err(fail)?;
        put_report(report, &r)
    })
}

/// The two-term L∞ equations, twisted packaging when a twist is present.
///
/// # Safety
/// `handle` must be a live handle and `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn courant_verify_linfty(
    handle: *const CourantSpec,
    seed: u64,
    report: *mut *mut c_char,
) -> CourantStatus {
    guard(|| {
        let s = spec(handle)?;
        let data = if s.twist().is_some() {
            build_twisted(s)
        } else {
            build_classical(s)
        }
        .map_err(fail)?;
        let opts = LInftyOptions {
            seed,
            ..LInftyOptions::default()
        };
        put_report(report, &verify_linfty(&data, &opts))
    })
}

/// Betti numbers in degrees `0..=max_degree` of a point structure, written to
/// `out`; `written` receives the count.
///
/// # Safety
/// `handle` must be a live handle, `out` must hold `capacity` values and `written` be valid.
#[no_mangle]
pub unsafe extern "C" fn courant_betti(
    handle: *const CourantSpec,
    max_degree: usize,
    out: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> CourantStatus {
    guard(|| {
        let s = spec(handle)?;
        if out.is_null() || written.is_null() {
            set_error("null output pointer");
            return Err(CourantStatus::NullPointer);
        }
        let b = betti(s, max_degree).map_err(fail)?;
        *written = b.len();
        if b.len() > capacity {
            set_error(format!("{} values do not fit in {capacity}", b.len()));
            return Err(CourantStatus::BufferTooSmall);
        }
        ptr::copy_nonoverlapping(b.as_ptr(), out, b.len());
        Ok(CourantStatus::Ok)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn courant_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
