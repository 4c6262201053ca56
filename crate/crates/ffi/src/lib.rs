//! C ABI over the isogroup library.
//!
//! Specs and quotients are opaque handles. Every fallible call returns an
//! [`IsoStatus`]; the message of the most recent failure on the calling
//! thread is available from [`iso_last_error`]. Reports come back as JSON
//! strings owned by the caller and released with [`iso_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use isogroup::catalog;
use isogroup::dual::enumerate_dual;
use isogroup::group::{GroupSpec, GroupSpecFile};
use isogroup::quotient::QuotientGroup;
use isogroup::splitting::split_quotient;
use isogroup::verify::verify_spec;
use isogroup::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidSpec = 4,
    BadModulus = 5,
    NotCoprime = 6,
    CapExceeded = 7,
    ConvergenceFailure = 8,
    Incompatible = 9,
    OutOfRange = 10,
    Internal = 11,
}

/// Opaque group specification.
pub struct IsoSpec {
    inner: GroupSpec,
}

/// Opaque finite quotient `G_N`.
pub struct IsoQuotient {
    inner: QuotientGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: IsoStatus, msg: impl Into<String>) -> IsoStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> IsoStatus {
    match e {
        Error::BadModulus { .. } => IsoStatus::BadModulus,
        Error::NotCoprime { .. } => IsoStatus::NotCoprime,
        Error::CapExceeded { .. } => IsoStatus::CapExceeded,
        Error::ConvergenceFailure(_) => IsoStatus::ConvergenceFailure,
        Error::Incompatible(_) | Error::ShapeMismatch(_) => IsoStatus::Incompatible,
        Error::Parse(_) => IsoStatus::Parse,
        Error::InternalInconsistency(_) | Error::IntegralityViolation(_) => IsoStatus::Internal,
        _ => IsoStatus::InvalidSpec,
    }
}

fn from_error(e: Error) -> IsoStatus {
    let s = status_of(&e);
    fail(s, e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, IsoStatus> {
    if s.is_null() {
        return Err(fail(IsoStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(IsoStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_json<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> IsoStatus {
    if out.is_null() {
        return fail(IsoStatus::NullPointer, "null output pointer");
    }
    match serde_json::to_string(value) {
        Ok(s) => {
            *out = CString::new(s).expect("JSON has no interior NUL").into_raw();
            IsoStatus::Ok
        }
        Err(e) => fail(IsoStatus::Internal, e.to_string()),
    }
}

unsafe fn spec_ref<'a>(spec: *const IsoSpec) -> Result<&'a GroupSpec, IsoStatus> {
    spec.as_ref().map(|s| &s.inner).ok_or_else(|| fail(IsoStatus::NullPointer, "null spec handle"))
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn iso_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Looks up a catalog group by name (with or without the `catalog:` prefix).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_spec_from_catalog(name: *const c_char, out: *mut *mut IsoSpec) -> IsoStatus {
    let name = match read_str(name) {
        Ok(s) => s,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail(IsoStatus::NullPointer, "null output pointer");
    }
    match catalog::get(name.strip_prefix("catalog:").unwrap_or(name)) {
        Some(e) => {
            *out = Box::into_raw(Box::new(IsoSpec { inner: e.spec }));
            IsoStatus::Ok
        }
        None => fail(IsoStatus::InvalidSpec, format!("unknown catalog entry {name}")),
    }
}

/// Parses a group spec from its JSON form and validates it.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_spec_from_json(json: *const c_char, out: *mut *mut IsoSpec) -> IsoStatus {
    let text = match read_str(json) {
        Ok(s) => s,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail(IsoStatus::NullPointer, "null output pointer");
    }
    let file: GroupSpecFile = match serde_json::from_str(text) {
        Ok(f) => f,
        Err(e) => return fail(IsoStatus::Parse, e.to_string()),
    };
    let spec = match file.to_spec() {
        Ok(s) => s,
        Err(e) => return from_error(e),
    };
    if let Some(v) = spec.validate().first() {
        return fail(IsoStatus::InvalidSpec, format!("{}: {}", v.axiom, v.detail));
    }
    *out = Box::into_raw(Box::new(IsoSpec { inner: spec }));
    IsoStatus::Ok
}

/// # Safety
/// `spec` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn iso_spec_free(spec: *mut IsoSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Writes m₀ of the group.
///
/// # Safety
/// `spec` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_spec_m0(spec: *const IsoSpec, out: *mut u64) -> IsoStatus {
    let spec = match spec_ref(spec) {
        Ok(s) => s,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail(IsoStatus::NullPointer, "null output pointer");
    }
    match spec.find_m0() {
        Ok(r) => {
            *out = r.m0;
            IsoStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Serializes the spec as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_spec_to_json(spec: *const IsoSpec, out: *mut *mut c_char) -> IsoStatus {
    match spec_ref(spec) {
        Ok(s) => write_json(&GroupSpecFile::from(s), out),
        Err(s) => s,
    }
}

/// Materializes `G_N`.
///
/// # Safety
/// `spec` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_quotient_build(spec: *const IsoSpec, n: u64, out: *mut *mut IsoQuotient) -> IsoStatus {
    let spec = match spec_ref(spec) {
        Ok(s) => s,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail(IsoStatus::NullPointer, "null output pointer");
    }
    match QuotientGroup::build(spec, n) {
        Ok(q) => {
            *out = Box::into_raw(Box::new(IsoQuotient { inner: q }));
            IsoStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// # Safety
/// `q` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn iso_quotient_free(q: *mut IsoQuotient) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Order of the quotient, or 0 for a null handle.
///
/// # Safety
/// `q` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn iso_quotient_order(q: *const IsoQuotient) -> usize {
    q.as_ref().map_or(0, |q| q.inner.order())
}

/// Index of the identity element.
///
/// # Safety
/// `q` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_quotient_identity(q: *const IsoQuotient, out: *mut usize) -> IsoStatus {
    let Some(q) = q.as_ref() else { return fail(IsoStatus::NullPointer, "null quotient handle") };
    if out.is_null() {
        return fail(IsoStatus::NullPointer, "null output pointer");
    }
    *out = q.inner.identity();
    IsoStatus::Ok
}

/// Product of two element indices.
///
/// # Safety
/// `q` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_quotient_mul(q: *const IsoQuotient, a: usize, b: usize, out: *mut usize) -> IsoStatus {
    let Some(q) = q.as_ref() else { return fail(IsoStatus::NullPointer, "null quotient handle") };
    if out.is_null() {
        return fail(IsoStatus::NullPointer, "null output pointer");
    }
    let n = q.inner.order();
    if a >= n || b >= n {
        return fail(IsoStatus::OutOfRange, format!("element index out of range 0..{n}"));
    }
    *out = q.inner.mul(a, b);
    IsoStatus::Ok
}

/// Inverse of an element index.
///
/// # Safety
/// `q` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_quotient_inverse(q: *const IsoQuotient, a: usize, out: *mut usize) -> IsoStatus {
    let Some(q) = q.as_ref() else { return fail(IsoStatus::NullPointer, "null quotient handle") };
    if out.is_null() {
        return fail(IsoStatus::NullPointer, "null output pointer");
    }
    if a >= q.inner.order() {
        return fail(IsoStatus::OutOfRange, format!("element index out of range 0..{}", q.inner.order()));
    }
    *out = q.inner.group.inv(a);
    IsoStatus::Ok
}

/// Normal form `{n, f, p}` of an element, as JSON.
///
/// # Safety
/// `q` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_quotient_element_json(q: *const IsoQuotient, a: usize, out: *mut *mut c_char) -> IsoStatus {
    let Some(q) = q.as_ref() else { return fail(IsoStatus::NullPointer, "null quotient handle") };
    match q.inner.elements.get(a) {
        Some(nf) => write_json(nf, out),
        None => fail(IsoStatus::OutOfRange, format!("element index out of range 0..{}", q.inner.order())),
    }
}

/// Wave-label atlas of `G_N` as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_dual_atlas_json(spec: *const IsoSpec, n: u64, seed: u64, out: *mut *mut c_char) -> IsoStatus {
    let spec = match spec_ref(spec) {
        Ok(s) => s,
        Err(s) => return s,
    };
    match enumerate_dual(spec, n, seed) {
        Ok(a) => write_json(&a.report, out),
        Err(e) => from_error(e),
    }
}

/// Splitting certificate for `N = m·n` as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_split_json(spec: *const IsoSpec, m: u64, n: u64, out: *mut *mut c_char) -> IsoStatus {
    let spec = match spec_ref(spec) {
        Ok(s) => s,
        Err(s) => return s,
    };
    match split_quotient(spec, m, n) {
        Ok(c) => write_json(&c, out),
        Err(e) => from_error(e),
    }
}

/// Invariant-suite report as JSON. Failing checks are data, not errors.
///
/// # Safety
/// `spec` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn iso_verify_json(spec: *const IsoSpec, seed: u64, out: *mut *mut c_char) -> IsoStatus {
    match spec_ref(spec) {
        Ok(s) => write_json(&verify_spec(s, seed), out),
        Err(s) => s,
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn iso_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
