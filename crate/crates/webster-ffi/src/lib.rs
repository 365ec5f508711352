//! C ABI over the webster crate. All objects are opaque handles owned by the
//! caller and released with the matching `_free` function. Every fallible
//! call returns a `WebsterStatus`; the message for the last failure on the
//! calling thread is available from `webster_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use webster::algebra::{enumerate_basis, Algebra, AlgebraElement};
use webster::bimodule::BimodCtx;
use webster::field::FieldParams;
use webster::parse::{parse_element, ParsedElement};
use webster::rep::calibrate_psi2;
use webster::suites::{run, RunConfig};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WebsterStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    InvalidUtf8 = 4,
    Mismatch = 5,
    ChecksFailed = 6,
    Panic = 7,
}

/// An algebra W(n,1) over F_p together with its bimodule context.
pub struct WebsterAlgebra {
    alg: Arc<Algebra>,
    ctx: BimodCtx,
}

/// An element of a `WebsterAlgebra`.
pub struct WebsterElement {
    alg: Arc<Algebra>,
    value: AlgebraElement,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn guard(f: impl FnOnce() -> Result<(), (WebsterStatus, String)>) -> WebsterStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WebsterStatus::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            WebsterStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (WebsterStatus, String)> {
    if p.is_null() {
        return Err((WebsterStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (WebsterStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, (WebsterStatus, String)> {
    p.as_ref().ok_or((WebsterStatus::NullPointer, "null handle".into()))
}

fn null_out() -> (WebsterStatus, String) {
    (WebsterStatus::NullPointer, "null output pointer".into())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn webster_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn webster_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create the algebra for `n` red strands over F_p.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn webster_algebra_new(n: usize, p: u64, out: *mut *mut WebsterAlgebra) -> WebsterStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_out());
        }
        if !(1..=webster::poly::MAX_N).contains(&n) {
            return Err((WebsterStatus::InvalidArgument, format!("n must be between 1 and {}", webster::poly::MAX_N)));
        }
        let field = FieldParams::new(p).map_err(|e| (WebsterStatus::InvalidArgument, e.to_string()))?;
        let conv = calibrate_psi2(n, field).convention;
        let alg = Arc::new(Algebra::new(n, field, conv));
        let ctx = BimodCtx::new(alg.clone());
        *out = Box::into_raw(Box::new(WebsterAlgebra { alg, ctx }));
        Ok(())
    })
}

/// # Safety
/// `h` must be NULL or a handle from `webster_algebra_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn webster_algebra_free(h: *mut WebsterAlgebra) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of normal-form basis elements of internal degree `degree`.
///
/// # Safety
/// `h` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn webster_basis_dim(h: *const WebsterAlgebra, degree: i64, out: *mut usize) -> WebsterStatus {
    guard(|| {
        let h = handle(h)?;
        if out.is_null() {
            return Err(null_out());
        }
        *out = enumerate_basis(h.alg.n(), degree).len();
        Ok(())
    })
}

/// Parse an algebra element such as `psi2*psi2*e1` and reduce it to normal form.
///
/// # Safety
/// `h` and `out` must be valid pointers, `text` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn webster_element_parse(
    h: *const WebsterAlgebra,
    text: *const c_char,
    out: *mut *mut WebsterElement,
) -> WebsterStatus {
    guard(|| {
        let h = handle(h)?;
        let text = str_arg(text)?;
        if out.is_null() {
            return Err(null_out());
        }
        match parse_element(text, &h.ctx) {
            Ok(ParsedElement::Algebra(value)) => {
                *out = Box::into_raw(Box::new(WebsterElement { alg: h.alg.clone(), value }));
                Ok(())
            }
            Ok(ParsedElement::Bimodule(..)) => {
                Err((WebsterStatus::InvalidArgument, "bimodule elements are not supported here".into()))
            }
            Err(e) => Err((WebsterStatus::ParseError, e.to_string())),
        }
    })
}

/// # Safety
/// `e` must be NULL or an element handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn webster_element_free(e: *mut WebsterElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

unsafe fn binary(
    a: *const WebsterElement,
    b: *const WebsterElement,
    out: *mut *mut WebsterElement,
    op: impl FnOnce(&Algebra, &AlgebraElement, &AlgebraElement) -> AlgebraElement,
) -> WebsterStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        if out.is_null() {
            return Err(null_out());
        }
        if !Arc::ptr_eq(&a.alg, &b.alg) {
            return Err((WebsterStatus::Mismatch, "elements belong to different algebras".into()));
        }
        let value = op(&a.alg, &a.value, &b.value);
        *out = Box::into_raw(Box::new(WebsterElement { alg: a.alg.clone(), value }));
        Ok(())
    })
}

/// `*out = a * b`.
///
/// # Safety
/// All pointers must be valid; `a` and `b` must come from the same algebra handle.
#[no_mangle]
pub unsafe extern "C" fn webster_element_mul(
    a: *const WebsterElement,
    b: *const WebsterElement,
    out: *mut *mut WebsterElement,
) -> WebsterStatus {
    binary(a, b, out, |alg, x, y| alg.mul(x, y))
}

/// `*out = a + b`.
///
/// # Safety
/// All pointers must be valid; `a` and `b` must come from the same algebra handle.
#[no_mangle]
pub unsafe extern "C" fn webster_element_add(
    a: *const WebsterElement,
    b: *const WebsterElement,
    out: *mut *mut WebsterElement,
) -> WebsterStatus {
    binary(a, b, out, |_, x, y| x.add(y))
}

/// `*out = d(a)`, the p-differential.
///
/// # Safety
/// `a` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn webster_element_differential(
    a: *const WebsterElement,
    out: *mut *mut WebsterElement,
) -> WebsterStatus {
    guard(|| {
        let a = handle(a)?;
        if out.is_null() {
            return Err(null_out());
        }
        let value = a.alg.differential(&a.value);
        *out = Box::into_raw(Box::new(WebsterElement { alg: a.alg.clone(), value }));
        Ok(())
    })
}

/// Whether two elements are equal.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn webster_element_equal(
    a: *const WebsterElement,
    b: *const WebsterElement,
    out: *mut bool,
) -> WebsterStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        if out.is_null() {
            return Err(null_out());
        }
        *out = Arc::ptr_eq(&a.alg, &b.alg) && a.value == b.value;
        Ok(())
    })
}

/// Canonical text of an element; free with `webster_string_free`.
///
/// # Safety
/// `a` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn webster_element_to_string(a: *const WebsterElement, out: *mut *mut c_char) -> WebsterStatus {
    guard(|| {
        let a = handle(a)?;
        if out.is_null() {
            return Err(null_out());
        }
        *out = owned_string(a.value.format());
        Ok(())
    })
}

/// Run verification suites and return the JSON report in `*report_json`
/// (free with `webster_string_free`). `checks` is a comma-separated list or
/// NULL for all suites. Returns `WEBSTER_STATUS_CHECKS_FAILED` when the
/// report was produced but some check failed.
///
/// # Safety
/// `report_json` must be valid; `checks` NULL or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn webster_run_checks(
    n: usize,
    p: u64,
    window: u32,
    seed: u64,
    checks: *const c_char,
    corpus_size: usize,
    report_json: *mut *mut c_char,
) -> WebsterStatus {
    let mut failed = false;
    let status = guard(|| {
        if report_json.is_null() {
            return Err(null_out());
        }
        let checks = if checks.is_null() {
            vec![]
        } else {
            str_arg(checks)?.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
        };
        let config = RunConfig { n, p, window, seed, checks, corpus_size };
        let report = run(&config, false).map_err(|e| (WebsterStatus::InvalidArgument, e.to_string()))?;
        failed = !report.pass;
        let text = serde_json::to_string_pretty(&report).map_err(|e| (WebsterStatus::Panic, e.to_string()))?;
        *report_json = owned_string(text);
        Ok(())
    });
    if status == WebsterStatus::Ok && failed {
        set_error("some checks failed");
        return WebsterStatus::ChecksFailed;
    }
    status
}
