use std::ffi::{CStr, CString};
use std::ptr;
use webster_ffi::*;

fn text(e: *const WebsterElement) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { webster_element_to_string(e, &mut s) }, WebsterStatus::Ok);
    let r = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { webster_string_free(s) };
    r
}

fn parse(h: *const WebsterAlgebra, t: &str) -> *mut WebsterElement {
    let c = CString::new(t).unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { webster_element_parse(h, c.as_ptr(), &mut e) }, WebsterStatus::Ok);
    e
}

#[test]
fn algebra_round_trip() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { webster_algebra_new(2, 3, &mut h) }, WebsterStatus::Ok);
    let mut dim = 0usize;
    assert_eq!(unsafe { webster_basis_dim(h, 0, &mut dim) }, WebsterStatus::Ok);
    assert_eq!(dim, 3);

    let a = parse(h, "psi2*e1");
    let b = parse(h, "psi2");
    let ab = {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { webster_element_mul(b, a, &mut out) }, WebsterStatus::Ok);
        out
    };
    let direct = parse(h, "psi2*psi2*e1");
    let mut eq = false;
    assert_eq!(unsafe { webster_element_equal(ab, direct, &mut eq) }, WebsterStatus::Ok);
    assert!(eq);
    assert_eq!(text(ab), text(direct));

    let x = parse(h, "x1*e0");
    let mut dx = ptr::null_mut();
    assert_eq!(unsafe { webster_element_differential(x, &mut dx) }, WebsterStatus::Ok);
    let want = parse(h, "x1^2*e0");
    assert_eq!(text(dx), text(want));

    for e in [a, b, ab, direct, x, dx, want] {
        unsafe { webster_element_free(e) };
    }
    unsafe { webster_algebra_free(h) };
}

#[test]
fn error_codes() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { webster_algebra_new(2, 4, &mut h) }, WebsterStatus::InvalidArgument);
    assert!(h.is_null());
    assert!(!webster_last_error().is_null());
    assert_eq!(unsafe { webster_algebra_new(2, 3, ptr::null_mut()) }, WebsterStatus::NullPointer);

    assert_eq!(unsafe { webster_algebra_new(2, 3, &mut h) }, WebsterStatus::Ok);
    let bad = CString::new("x1^(-1)").unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { webster_element_parse(h, bad.as_ptr(), &mut e) }, WebsterStatus::ParseError);
    let msg = unsafe { CStr::from_ptr(webster_last_error()) }.to_str().unwrap();
    assert!(msg.contains("position"), "{msg}");

    let mut other = ptr::null_mut();
    assert_eq!(unsafe { webster_algebra_new(2, 3, &mut other) }, WebsterStatus::Ok);
    let a = parse(h, "e1");
    let b = parse(other, "e1");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { webster_element_mul(a, b, &mut out) }, WebsterStatus::Mismatch);
    assert_eq!(unsafe { webster_element_mul(ptr::null(), b, &mut out) }, WebsterStatus::NullPointer);
    unsafe {
        webster_element_free(a);
        webster_element_free(b);
        webster_algebra_free(h);
        webster_algebra_free(other);
        webster_algebra_free(ptr::null_mut());
    }
}

#[test]
fn run_checks_reports_json() {
    let checks = CString::new("relations,differential").unwrap();
    let mut json = ptr::null_mut();
    let st = unsafe { webster_run_checks(2, 3, 4, 1, checks.as_ptr(), 50, &mut json) };
    assert_eq!(st, WebsterStatus::Ok);
    let s = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    unsafe { webster_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);

    let bad = CString::new("nope").unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { webster_run_checks(2, 3, 4, 1, bad.as_ptr(), 50, &mut json) }, WebsterStatus::InvalidArgument);
}

#[test]
fn header_is_current_and_compiles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/webster.h")).unwrap();
    for name in [
        "webster_algebra_new",
        "webster_element_parse",
        "webster_element_mul",
        "webster_run_checks",
        "WEBSTER_STATUS_CHECKS_FAILED",
        "typedef struct WebsterAlgebra WebsterAlgebra",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let src = std::env::temp_dir().join(format!("webster_header_{}.c", std::process::id()));
    std::fs::write(&src, "#include \"webster.h\"\nint main(void) { WebsterAlgebra *h = 0; return webster_algebra_new(2, 3, &h); }\n").unwrap();
    match std::process::Command::new("cc").arg("-fsyntax-only").arg("-I").arg(dir.join("include")).arg(&src).status() {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler; skipped"),
    }
    let _ = std::fs::remove_file(src);
}
