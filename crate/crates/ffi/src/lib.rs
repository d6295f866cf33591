//! C ABI over `cliffsolve`: opaque multivector handles, the idempotent
//! check, and the CLI commands (`cs_run`) returning JSON reports.
//!
//! Every function returns a [`CsStatus`]; on failure the message is
//! available from [`cs_last_error`] on the same thread. Strings handed out
//! by the library must be released with [`cs_string_free`].

use cliffsolve::cli::{self, Command};
use cliffsolve::config::RunConfig;
use cliffsolve::report::to_json;
use cliffsolve::spinor_ideals::is_hermitian_idempotent;
use cliffsolve::{Blade, Error, Multivector, Signature, C64};
use clap::ValueEnum;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    SignatureMismatch = 4,
    NotLorentzian = 5,
    Config = 6,
    Failed = 7,
    Panic = 8,
}

/// Opaque multivector handle.
pub struct CsMultivector(Multivector);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> CsStatus {
    match e {
        Error::Parse(_) => CsStatus::Parse,
        Error::SignatureMismatch { .. } => CsStatus::SignatureMismatch,
        Error::NotLorentzian(_) => CsStatus::NotLorentzian,
        Error::InvalidSignature { .. } | Error::OutOfRange { .. } | Error::Dimension(_) => CsStatus::InvalidArgument,
        Error::Config(_) => CsStatus::Config,
        _ => CsStatus::Failed,
    }
}

fn fail(e: Error) -> CsStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn guard(f: impl FnOnce() -> CsStatus) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            CsStatus::Panic
        }
    }
}

fn null(what: &str) -> CsStatus {
    set_error(format!("{what} is null"));
    CsStatus::NullPointer
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, CsStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        CsStatus::InvalidArgument
    })
}

unsafe fn put(out: *mut *mut CsMultivector, value: Multivector) -> CsStatus {
    *out = Box::into_raw(Box::new(CsMultivector(value)));
    CsStatus::Ok
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the last failure on this thread; empty if none. Valid until
/// the next call on this thread.
#[no_mangle]
pub extern "C" fn cs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Zero multivector of `C ⊗ Cl(r,s)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_new(r: usize, s: usize, out: *mut *mut CsMultivector) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        match Signature::new(r, s) {
            Ok(sig) => put(out, Multivector::zero(sig)),
            Err(e) => fail(e),
        }
    })
}

/// Parses text such as `"0.5*e + 0.5*e^1 - 2i*e^23"`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_parse(
    r: usize,
    s: usize,
    text_in: *const c_char,
    out: *mut *mut CsMultivector,
) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let t = match text(text_in, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Signature::new(r, s).and_then(|sig| Multivector::parse(sig, t)) {
            Ok(u) => put(out, u),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `mv` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_free(mv: *mut CsMultivector) {
    if !mv.is_null() {
        drop(Box::from_raw(mv));
    }
}

/// Number of blade coefficients `2^n`, or 0 for a null handle.
///
/// # Safety
/// `mv` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_len(mv: *const CsMultivector) -> usize {
    mv.as_ref().map_or(0, |m| m.0.coeffs().len())
}

/// Coefficient of the blade with bitmask `mask` (bit `a−1` set for `e^a`).
///
/// # Safety
/// `mv` must be a live handle; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_get(mv: *const CsMultivector, mask: usize, re: *mut f64, im: *mut f64) -> CsStatus {
    guard(|| {
        let Some(m) = mv.as_ref() else { return null("mv") };
        if re.is_null() || im.is_null() {
            return null("re/im");
        }
        if mask >= m.0.coeffs().len() {
            set_error(format!("blade mask {mask} out of range"));
            return CsStatus::InvalidArgument;
        }
        let c = m.0.coeff(Blade::from_mask(mask));
        *re = c.re;
        *im = c.im;
        CsStatus::Ok
    })
}

/// # Safety
/// `mv` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_set(mv: *mut CsMultivector, mask: usize, re: f64, im: f64) -> CsStatus {
    guard(|| {
        let Some(m) = mv.as_mut() else { return null("mv") };
        if mask >= m.0.coeffs().len() {
            set_error(format!("blade mask {mask} out of range"));
            return CsStatus::InvalidArgument;
        }
        m.0.set_coeff(Blade::from_mask(mask), C64::new(re, im));
        CsStatus::Ok
    })
}

unsafe fn binary(
    a: *const CsMultivector,
    b: *const CsMultivector,
    out: *mut *mut CsMultivector,
    op: fn(&Multivector, &Multivector) -> cliffsolve::Result<Multivector>,
) -> CsStatus {
    guard(|| {
        let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else { return null("operand") };
        if out.is_null() {
            return null("out");
        }
        match op(&a.0, &b.0) {
            Ok(u) => put(out, u),
            Err(e) => fail(e),
        }
    })
}

unsafe fn unary(
    a: *const CsMultivector,
    out: *mut *mut CsMultivector,
    op: fn(&Multivector) -> cliffsolve::Result<Multivector>,
) -> CsStatus {
    guard(|| {
        let Some(a) = a.as_ref() else { return null("operand") };
        if out.is_null() {
            return null("out");
        }
        match op(&a.0) {
            Ok(u) => put(out, u),
            Err(e) => fail(e),
        }
    })
}

/// Geometric product `a b` into a new handle.
///
/// # Safety
/// `a`, `b` live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_product(
    a: *const CsMultivector,
    b: *const CsMultivector,
    out: *mut *mut CsMultivector,
) -> CsStatus {
    binary(a, b, out, Multivector::product)
}

/// Wedge product `a ∧ b`.
///
/// # Safety
/// As for [`cs_multivector_product`].
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_wedge(
    a: *const CsMultivector,
    b: *const CsMultivector,
    out: *mut *mut CsMultivector,
) -> CsStatus {
    binary(a, b, out, Multivector::wedge)
}

/// # Safety
/// As for [`cs_multivector_product`].
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_add(
    a: *const CsMultivector,
    b: *const CsMultivector,
    out: *mut *mut CsMultivector,
) -> CsStatus {
    binary(a, b, out, |x, y| {
        if x.signature() != y.signature() {
            return Err(Error::SignatureMismatch {
                left: x.signature(),
                right: y.signature(),
            });
        }
        Ok(x + y)
    })
}

/// # Safety
/// `a` a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_reverse(a: *const CsMultivector, out: *mut *mut CsMultivector) -> CsStatus {
    unary(a, out, |x| Ok(x.reverse()))
}

/// Complex conjugation of the coefficients.
///
/// # Safety
/// `a` a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_conjugate(a: *const CsMultivector, out: *mut *mut CsMultivector) -> CsStatus {
    unary(a, out, |x| Ok(x.conj()))
}

/// `U† = e¹ Ū~ e¹`; signature `(1, n−1)` only.
///
/// # Safety
/// `a` a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_hermitian(a: *const CsMultivector, out: *mut *mut CsMultivector) -> CsStatus {
    unary(a, out, Multivector::hermitian_conjugate)
}

/// Text form; free with [`cs_string_free`]. Null for a null handle.
///
/// # Safety
/// `mv` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_multivector_to_string(mv: *const CsMultivector) -> *mut c_char {
    match mv.as_ref() {
        Some(m) => out_string(m.0.to_string()),
        None => {
            set_error("mv is null");
            ptr::null_mut()
        }
    }
}

/// Residuals `‖t² − t‖∞`, `‖t† − t‖∞` and whether both are within 1e−13.
///
/// # Safety
/// `t` a live handle; output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn cs_idempotent_check(
    t: *const CsMultivector,
    square_residual: *mut f64,
    hermitian_residual: *mut f64,
    is_idempotent: *mut bool,
) -> CsStatus {
    guard(|| {
        let Some(t) = t.as_ref() else { return null("t") };
        if square_residual.is_null() || hermitian_residual.is_null() || is_idempotent.is_null() {
            return null("output");
        }
        match is_hermitian_idempotent(&t.0) {
            Ok(c) => {
                *square_residual = c.square_residual;
                *hermitian_residual = c.hermitian_residual;
                *is_idempotent = c.is_hermitian_idempotent;
                CsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs a CLI command (`"validate"`, `"idempotents"`, `"solve"`,
/// `"theorem"`, `"dispersion"`, `"energy"`) with a TOML configuration
/// (null for defaults). Artifacts go to `out_dir` (null: `cliffsolve-out`).
/// `seed` overrides the configured seed when `use_seed` is true.
///
/// `*report_json` receives the JSON report (free with [`cs_string_free`])
/// and `*exit_code` the CLI exit status (0 pass, 1 config error, 2 check
/// failure). The return value is `Ok` whenever a report was produced.
///
/// # Safety
/// String arguments must be null or NUL-terminated; output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn cs_run(
    command: *const c_char,
    config_toml: *const c_char,
    out_dir: *const c_char,
    use_seed: bool,
    seed: u64,
    report_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> CsStatus {
    guard(|| {
        if report_json.is_null() || exit_code.is_null() {
            return null("output");
        }
        let name = match text(command, "command") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Ok(cmd) = Command::from_str(name, true) else {
            set_error(format!("unknown command {name:?}"));
            return CsStatus::InvalidArgument;
        };
        let cfg = if config_toml.is_null() {
            Ok(RunConfig::default())
        } else {
            match text(config_toml, "config") {
                Ok(t) => RunConfig::from_toml(t),
                Err(s) => return s,
            }
        };
        let out = if out_dir.is_null() {
            "cliffsolve-out"
        } else {
            match text(out_dir, "out_dir") {
                Ok(t) => t,
                Err(s) => return s,
            }
        };
        let out = Path::new(out);
        let outcome = match cfg {
            Ok(cfg) => cli::run(cmd, &cfg, out, use_seed.then_some(seed)),
            Err(e) => cli::Outcome {
                code: 1,
                report: cli::error_report(Some(cmd), &e),
            },
        };
        if let Err(e) = cli::write_report(out, &outcome.report) {
            return fail(e);
        }
        *report_json = out_string(to_json(&outcome.report));
        *exit_code = outcome.code;
        CsStatus::Ok
    })
}
