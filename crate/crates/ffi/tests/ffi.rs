use cliffsolve_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn parse(text: &str) -> *mut CsMultivector {
    let t = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cs_multivector_parse(1, 3, t.as_ptr(), &mut out) }, CsStatus::Ok);
    out
}

fn render(mv: *const CsMultivector) -> String {
    unsafe {
        let s = cs_multivector_to_string(mv);
        let owned = CStr::from_ptr(s).to_str().unwrap().to_owned();
        cs_string_free(s);
        owned
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cs_last_error()).to_str().unwrap().to_owned() }
}

#[test]
fn products_and_involutions_through_handles() {
    let a = parse("e^1");
    let b = parse("e^2");
    let mut ab = ptr::null_mut();
    let mut ba = ptr::null_mut();
    let mut sum = ptr::null_mut();
    let mut sq = ptr::null_mut();
    let mut w = ptr::null_mut();
    let mut rev = ptr::null_mut();
    unsafe {
        assert_eq!(cs_multivector_product(a, b, &mut ab), CsStatus::Ok);
        assert_eq!(cs_multivector_product(b, a, &mut ba), CsStatus::Ok);
        assert_eq!(cs_multivector_add(ab, ba, &mut sum), CsStatus::Ok);
        assert_eq!(cs_multivector_product(b, b, &mut sq), CsStatus::Ok);
        assert_eq!(cs_multivector_wedge(a, b, &mut w), CsStatus::Ok);
        assert_eq!(cs_multivector_reverse(w, &mut rev), CsStatus::Ok);
        assert_eq!(cs_multivector_len(ab), 16);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(cs_multivector_get(ab, 0b11, &mut re, &mut im), CsStatus::Ok);
        assert_eq!((re, im), (1.0, 0.0));
        assert_eq!(cs_multivector_get(sq, 0, &mut re, &mut im), CsStatus::Ok);
        assert_eq!((re, im), (-1.0, 0.0));
        assert_eq!(cs_multivector_get(rev, 0b11, &mut re, &mut im), CsStatus::Ok);
        assert_eq!(re, -1.0);
    }
    assert_eq!(render(sum), "0*e");
    assert_eq!(render(w), "1*e^12");
    for h in [a, b, ab, ba, sum, sq, w, rev] {
        unsafe { cs_multivector_free(h) };
    }
}

#[test]
fn set_get_conjugate_and_hermitian() {
    let mut m = ptr::null_mut();
    let mut c = ptr::null_mut();
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(cs_multivector_new(1, 3, &mut m), CsStatus::Ok);
        assert_eq!(cs_multivector_set(m, 0b10, 0.5, 2.0), CsStatus::Ok);
        assert_eq!(cs_multivector_set(m, 16, 1.0, 0.0), CsStatus::InvalidArgument);
        assert_eq!(cs_multivector_conjugate(m, &mut c), CsStatus::Ok);
        assert_eq!(cs_multivector_hermitian(m, &mut h), CsStatus::Ok);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(cs_multivector_get(c, 0b10, &mut re, &mut im), CsStatus::Ok);
        assert_eq!((re, im), (0.5, -2.0));
        assert_eq!(cs_multivector_get(h, 0b10, &mut re, &mut im), CsStatus::Ok);
        assert_eq!((re, im), (-0.5, 2.0));
        for p in [m, c, h] {
            cs_multivector_free(p);
        }
    }
}

#[test]
fn idempotent_check_matches_projector() {
    let t = parse("0.5*e + 0.5*e^1");
    let not = parse("e^1");
    let (mut sq, mut herm, mut ok) = (1.0, 1.0, false);
    unsafe {
        assert_eq!(cs_idempotent_check(t, &mut sq, &mut herm, &mut ok), CsStatus::Ok);
        assert!(ok && sq < 1e-15 && herm < 1e-15);
        assert_eq!(cs_idempotent_check(not, &mut sq, &mut herm, &mut ok), CsStatus::Ok);
        assert!(!ok && sq > 0.5);
        cs_multivector_free(t);
        cs_multivector_free(not);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("e^9").unwrap();
    let junk = CString::new("2**e").unwrap();
    unsafe {
        assert_eq!(cs_multivector_parse(1, 3, bad.as_ptr(), &mut out), CsStatus::Parse);
        assert!(!last_error().is_empty());
        assert_eq!(cs_multivector_parse(1, 3, junk.as_ptr(), &mut out), CsStatus::Parse);
        assert_eq!(cs_multivector_parse(1, 3, ptr::null(), &mut out), CsStatus::NullPointer);
        assert_eq!(cs_multivector_new(0, 0, &mut out), CsStatus::InvalidArgument);
        assert!(out.is_null());
        assert_eq!(cs_multivector_product(ptr::null(), ptr::null(), &mut out), CsStatus::NullPointer);
        assert!(cs_multivector_to_string(ptr::null()).is_null());
        cs_multivector_free(ptr::null_mut());
        cs_string_free(ptr::null_mut());
    }
    let a = parse("e^1");
    let mut b = ptr::null_mut();
    let e = CString::new("e^1").unwrap();
    unsafe {
        assert_eq!(cs_multivector_parse(3, 0, e.as_ptr(), &mut b), CsStatus::Ok);
        assert_eq!(cs_multivector_product(a, b, &mut out), CsStatus::SignatureMismatch);
        assert_eq!(cs_multivector_add(a, b, &mut out), CsStatus::SignatureMismatch);
        assert_eq!(cs_multivector_hermitian(b, &mut out), CsStatus::NotLorentzian);
        cs_multivector_free(a);
        cs_multivector_free(b);
    }
}

fn run(command: &str, config: Option<&str>, out: &std::path::Path) -> (CsStatus, i32, serde_json::Value) {
    let cmd = CString::new(command).unwrap();
    let cfg = config.map(|c| CString::new(c).unwrap());
    let dir = CString::new(out.to_str().unwrap()).unwrap();
    let mut json = ptr::null_mut();
    let mut code = -1;
    let status = unsafe {
        cs_run(
            cmd.as_ptr(),
            cfg.as_ref().map_or(ptr::null(), |c| c.as_ptr()),
            dir.as_ptr(),
            true,
            7,
            &mut json,
            &mut code,
        )
    };
    if status != CsStatus::Ok {
        return (status, code, serde_json::Value::Null);
    }
    let text = unsafe { CStr::from_ptr(json).to_str().unwrap().to_owned() };
    unsafe { cs_string_free(json) };
    (status, code, serde_json::from_str(&text).unwrap())
}

#[test]
fn run_reports_json_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (status, code, report) = run("idempotents", None, dir.path());
    assert_eq!((status, code), (CsStatus::Ok, 0));
    assert!(report.is_object());
    assert!(dir.path().join("report.json").exists());

    let (status, code, report) = run("validate", Some("[model]\nkind = \"dirac\"\n"), dir.path());
    assert_eq!((status, code), (CsStatus::Ok, 0));
    assert_eq!(report["status"], "pass");

    let (status, code, report) = run("validate", Some("[model]\nkind = \"nope\"\n"), dir.path());
    assert_eq!((status, code), (CsStatus::Ok, 1));
    assert!(report.get("error").is_some());

    let (status, _, _) = run("frobnicate", None, dir.path());
    assert_eq!(status, CsStatus::InvalidArgument);
}

#[test]
fn header_declares_the_exported_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cliffsolve.h")).unwrap();
    for name in [
        "typedef struct CsMultivector CsMultivector",
        "CS_STATUS_OK = 0",
        "CS_STATUS_NOT_LORENTZIAN",
        "cs_multivector_parse",
        "cs_multivector_product",
        "cs_multivector_hermitian",
        "cs_idempotent_check",
        "cs_run",
        "cs_last_error",
        "cs_string_free",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
