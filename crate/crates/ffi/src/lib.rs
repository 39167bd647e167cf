//! C interface. Objects cross the boundary as opaque handles; every call
//! returns a `ShStatus` and leaves a message for `sh_last_error` on failure.
//! Strings returned to the caller are freed with `sh_string_free`.
//!
//! Pointer arguments must be null or valid for the documented extent;
//! handles must come from this library and be freed once.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sharbly::cert::{check, CertificateFile};
use sharbly::cosharbly::is_flipon;
use sharbly::cycle::{build_zG, verify_boundary_zero_with_budget, CycleChain};
use sharbly::sharbly::{canonicalize_int, OrbitDictionary};
use sharbly::{Budget, Error, IVec};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShStatus {
    Ok = 0,
    /// The computation ran and the answer is negative (e.g. a certificate
    /// failed its check).
    Invalid = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    UnsupportedRank = 4,
    NullPointer = 5,
    Internal = 6,
}

/// A sharbly cycle with per-term provenance.
pub struct ShCycle {
    inner: CycleChain,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ShStatus {
    match e {
        Error::BudgetExceeded(_) => ShStatus::BudgetExceeded,
        Error::UnsupportedRank(_) => ShStatus::UnsupportedRank,
        Error::Parse(_) | Error::Json(_) | Error::InvalidInput(_) | Error::ZeroVector | Error::Dimension(_) => {
            ShStatus::InvalidInput
        }
        _ => ShStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<ShStatus, ShStatus>) -> ShStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            if s == ShStatus::Ok {
                set_error("");
            }
            s
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            ShStatus::Internal
        }
    }
}

fn fail(e: Error) -> ShStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null() -> ShStatus {
    set_error("null pointer argument");
    ShStatus::NullPointer
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ShStatus> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not UTF-8");
        ShStatus::InvalidInput
    })
}

fn give_string(s: String) -> *mut c_char {
    CString::new(s).map_or(std::ptr::null_mut(), CString::into_raw)
}

unsafe fn read_vectors(data: *const i64, count: usize, n: usize) -> Result<Vec<IVec>, ShStatus> {
    if data.is_null() {
        return Err(null());
    }
    if n == 0 || count == 0 {
        set_error("empty vector list");
        return Err(ShStatus::InvalidInput);
    }
    let flat = std::slice::from_raw_parts(data, count * n);
    Ok(flat.chunks(n).map(<[i64]>::to_vec).collect())
}

/// Message of the last failed call on this thread. Owned by the library;
/// valid until the next call.
#[no_mangle]
pub extern "C" fn sh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn sh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the cycle for rank `n` (2, 3 or 4).
#[no_mangle]
pub unsafe extern "C" fn sh_cycle_build(n: u32, out: *mut *mut ShCycle) -> ShStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let z = build_zG(n as usize).map_err(fail)?;
        *out = Box::into_raw(Box::new(ShCycle { inner: z }));
        Ok(ShStatus::Ok)
    })
}

/// Parses a cycle from the JSON written by `cycle build`.
#[no_mangle]
pub unsafe extern "C" fn sh_cycle_from_json(json: *const c_char, out: *mut *mut ShCycle) -> ShStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let z: CycleChain = serde_json::from_str(read_str(json)?).map_err(|e| fail(e.into()))?;
        *out = Box::into_raw(Box::new(ShCycle { inner: z }));
        Ok(ShStatus::Ok)
    })
}

#[no_mangle]
pub unsafe extern "C" fn sh_cycle_to_json(c: *const ShCycle, out: *mut *mut c_char) -> ShStatus {
    guard(|| {
        if c.is_null() || out.is_null() {
            return Err(null());
        }
        let s = serde_json::to_string(&(*c).inner).map_err(|e| fail(e.into()))?;
        *out = give_string(s);
        Ok(ShStatus::Ok)
    })
}

/// Number of weighted terms; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn sh_cycle_len(c: *const ShCycle) -> usize {
    c.as_ref().map_or(0, |c| c.inner.len())
}

#[no_mangle]
pub unsafe extern "C" fn sh_cycle_free(c: *mut ShCycle) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Boundary certificate for `c`. `budget_nodes = 0` means no limit.
/// `valid` receives the verdict; `cert_json`, if not null, receives the
/// certificate file. Returns `SH_STATUS_INVALID` when the boundary does not
/// vanish.
#[no_mangle]
pub unsafe extern "C" fn sh_cycle_verify(
    c: *const ShCycle,
    budget_nodes: u64,
    valid: *mut bool,
    cert_json: *mut *mut c_char,
) -> ShStatus {
    guard(|| {
        if c.is_null() || valid.is_null() {
            return Err(null());
        }
        let budget = if budget_nodes == 0 { Budget::unlimited() } else { Budget::new(budget_nodes) };
        let cert = verify_boundary_zero_with_budget(&(*c).inner, &mut OrbitDictionary::with_budget(budget))
            .map_err(fail)?;
        *valid = cert.valid;
        if !cert_json.is_null() {
            let f = CertificateFile::boundary(&cert).and_then(|f| f.to_json()).map_err(fail)?;
            *cert_json = give_string(f);
        }
        if cert.valid {
            Ok(ShStatus::Ok)
        } else {
            set_error("boundary does not vanish");
            Ok(ShStatus::Invalid)
        }
    })
}

/// Checks a certificate file offline.
#[no_mangle]
pub unsafe extern "C" fn sh_cert_check(json: *const c_char, valid: *mut bool) -> ShStatus {
    guard(|| {
        if valid.is_null() {
            return Err(null());
        }
        let f = CertificateFile::from_json(read_str(json)?).map_err(fail)?;
        let r = check(&f);
        *valid = r.valid();
        if r.valid() {
            Ok(ShStatus::Ok)
        } else {
            set_error(&r.problems.join("; "));
            Ok(ShStatus::Invalid)
        }
    })
}

/// Flipon test for `count` vectors of length `n`, stored row after row.
#[no_mangle]
pub unsafe extern "C" fn sh_is_flipon(data: *const i64, count: usize, n: usize, out: *mut bool) -> ShStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let vs = read_vectors(data, count, n)?;
        *out = is_flipon(&vs).map_err(fail)?;
        Ok(ShStatus::Ok)
    })
}

/// Canonical form of a basic sharbly. Writes the canonical vectors to
/// `out_data` (room for `count * n` entries) and the sign to `out_sign`;
/// the sign is 0 when the basic vanishes.
#[no_mangle]
pub unsafe extern "C" fn sh_canonicalize(
    data: *const i64,
    count: usize,
    n: usize,
    out_data: *mut i64,
    out_sign: *mut i32,
) -> ShStatus {
    guard(|| {
        if out_data.is_null() || out_sign.is_null() {
            return Err(null());
        }
        let vs = read_vectors(data, count, n)?;
        match canonicalize_int(&vs).map_err(fail)? {
            None => *out_sign = 0,
            Some((s, b)) => {
                let dst = std::slice::from_raw_parts_mut(out_data, count * n);
                for (d, x) in dst.iter_mut().zip(b.vectors.iter().flatten()) {
                    *d = *x;
                }
                *out_sign = s;
            }
        }
        Ok(ShStatus::Ok)
    })
}
