//! C interface to `sobolev_charlier`.
//!
//! Polynomials are opaque `SckPoly` handles owned by the caller and released
//! with `sck_poly_free`. Rationals cross the boundary as NUL-terminated strings
//! (`"p/q"`, integers or decimals). Every fallible call returns an
//! `SckStatus`; the message for the last failure on the calling thread is
//! available from `sck_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sobolev_charlier::charlier::CharlierBasis;
use sobolev_charlier::ratcore::{format_rational, parse_rational};
use sobolev_charlier::sobolev::{q_poly_kernel, Params};
use sobolev_charlier::suite::{self, SuiteConfig};
use sobolev_charlier::zeros::{self, rational_f64, DEFAULT_TOL};
use sobolev_charlier::{Error, Poly, Rational};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SckStatus {
    Ok = 0,
    /// A verified identity did not hold.
    IdentityFailure = 1,
    InvalidArgument = 2,
    NullPointer = 3,
    ParseError = 4,
    DivisionByZero = 5,
    ConvergenceFailure = 6,
    /// The output buffer was too short; the required length was still written.
    BufferTooSmall = 7,
    Internal = 99,
}

/// Opaque polynomial with exact rational coefficients.
pub struct SckPoly {
    poly: Poly,
    norm_sq: Option<Rational>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(e: &Error) -> SckStatus {
    match e {
        Error::Parse(_) => SckStatus::ParseError,
        Error::DivisionByZero { .. } | Error::ZeroDenominator | Error::PoleAtEvaluation(_) => SckStatus::DivisionByZero,
        Error::ConvergenceFailure { .. } => SckStatus::ConvergenceFailure,
        Error::IdentityMismatch(_) | Error::NonZeroRemainder => SckStatus::IdentityFailure,
        _ => SckStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> SckStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), SckStatus>) -> SckStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SckStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            SckStatus::Internal
        }
    }
}

unsafe fn arg_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, SckStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        return Err(SckStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{name} is not valid UTF-8"));
        SckStatus::ParseError
    })
}

unsafe fn arg_rational(p: *const c_char, name: &str) -> Result<Rational, SckStatus> {
    parse_rational(arg_str(p, name)?).map_err(fail)
}

unsafe fn poly_ref<'a>(p: *const SckPoly) -> Result<&'a SckPoly, SckStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("poly handle is null");
        SckStatus::NullPointer
    })
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, SckStatus> {
    p.as_mut().ok_or_else(|| {
        set_error(format!("{name} is null"));
        SckStatus::NullPointer
    })
}

fn emit(poly: Poly, norm_sq: Option<Rational>, out: &mut *mut SckPoly) {
    *out = Box::into_raw(Box::new(SckPoly { poly, norm_sq }));
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn sck_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds `Q_n^λ` for parameters given as rational strings.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sck_sobolev_poly_new(
    n: usize,
    a: *const c_char,
    c: *const c_char,
    lambda: *const c_char,
    out: *mut *mut SckPoly,
) -> SckStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let params = Params::new(n, arg_rational(a, "a")?, arg_rational(c, "c")?, arg_rational(lambda, "lambda")?);
        let sp = q_poly_kernel(&params).map_err(fail)?;
        emit(sp.poly, Some(sp.norm_sq), out);
        Ok(())
    })
}

/// Builds the monic Charlier polynomial `C_n`.
///
/// # Safety
/// As for `sck_sobolev_poly_new`.
#[no_mangle]
pub unsafe extern "C" fn sck_charlier_poly_new(n: usize, a: *const c_char, out: *mut *mut SckPoly) -> SckStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let b = CharlierBasis::new(&arg_rational(a, "a")?, n).map_err(fail)?;
        emit(b.poly(n).clone(), Some(b.norm(n).clone()), out);
        Ok(())
    })
}

/// Builds the large-mass limit polynomial `G_n`.
///
/// # Safety
/// As for `sck_sobolev_poly_new`.
#[no_mangle]
pub unsafe extern "C" fn sck_limit_poly_new(
    n: usize,
    a: *const c_char,
    c: *const c_char,
    out: *mut *mut SckPoly,
) -> SckStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let g = zeros::limit_poly(n, &arg_rational(a, "a")?, &arg_rational(c, "c")?).map_err(fail)?;
        emit(g, None, out);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `p` must come from one of the constructors and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sck_poly_free(p: *mut SckPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Degree of the polynomial, or -1 for null or the zero polynomial.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sck_poly_degree(p: *const SckPoly) -> i64 {
    p.as_ref().and_then(|h| h.poly.degree()).map_or(-1, |d| d as i64)
}

/// Copies `text` plus a NUL into `buf`. `len_out` receives the length without NUL.
unsafe fn write_buf(text: &str, buf: *mut c_char, cap: usize, len_out: *mut usize) -> Result<(), SckStatus> {
    if let Some(l) = len_out.as_mut() {
        *l = text.len();
    }
    if buf.is_null() || cap < text.len() + 1 {
        if !buf.is_null() && cap > 0 {
            *buf = 0;
        }
        set_error(format!("buffer needs {} bytes", text.len() + 1));
        return Err(SckStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

/// Coefficient of `x^k` as `"p/q"`, written into `buf` of capacity `cap`.
/// Pass a null `buf` to query the length through `len_out`.
///
/// # Safety
/// `buf` must hold `cap` bytes; `len_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn sck_poly_coeff_string(
    p: *const SckPoly,
    k: usize,
    buf: *mut c_char,
    cap: usize,
    len_out: *mut usize,
) -> SckStatus {
    guard(|| {
        let h = poly_ref(p)?;
        let coeff = h.poly.coeffs().get(k).map(format_rational).unwrap_or_else(|| "0/1".into());
        write_buf(&coeff, buf, cap, len_out)
    })
}

/// JSON object `{"degree", "coeffs", "norm_sq"}` as a newly allocated string.
/// Release with `sck_string_free`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sck_poly_to_json(p: *const SckPoly, out: *mut *mut c_char) -> SckStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let h = poly_ref(p)?;
        let v = serde_json::json!({
            "degree": h.poly.degree().map_or(-1, |d| d as i64),
            "coeffs": h.poly.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
            "norm_sq": h.norm_sq.as_ref().map(format_rational),
        });
        *out = into_c_string(v.to_string());
        Ok(())
    })
}

/// Evaluates exactly at the rational `x` and rounds the result to `f64`.
///
/// # Safety
/// `p` must be a live handle, `x` a C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sck_poly_eval_f64(p: *const SckPoly, x: *const c_char, out: *mut f64) -> SckStatus {
    guard(|| {
        let h = poly_ref(p)?;
        let x = arg_rational(x, "x")?;
        *out_ptr(out, "out")? = rational_f64(&h.poly.eval(&x));
        Ok(())
    })
}

/// Roots as interleaved `(re, im)` pairs in `buf` (capacity `cap` doubles),
/// sorted by real part. `count_out` receives the number of roots; a short
/// buffer returns `BufferTooSmall` with the count still set.
///
/// # Safety
/// `buf` must hold `cap` doubles; `count_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sck_poly_roots(
    p: *const SckPoly,
    buf: *mut f64,
    cap: usize,
    count_out: *mut usize,
) -> SckStatus {
    guard(|| {
        let h = poly_ref(p)?;
        let count = out_ptr(count_out, "count_out")?;
        let rs = zeros::roots(&h.poly, DEFAULT_TOL).map_err(fail)?;
        *count = rs.len();
        if buf.is_null() || cap < 2 * rs.len() {
            set_error(format!("buffer needs {} doubles", 2 * rs.len()));
            return Err(SckStatus::BufferTooSmall);
        }
        for (i, z) in rs.roots.iter().enumerate() {
            *buf.add(2 * i) = z.re;
            *buf.add(2 * i + 1) = z.im;
        }
        Ok(())
    })
}

/// The critical mass `λ₀` of `Q_n` as a double.
///
/// # Safety
/// `a`, `c` must be C strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sck_lambda0(n: usize, a: *const c_char, c: *const c_char, out: *mut f64) -> SckStatus {
    guard(|| {
        let l0 = zeros::lambda0(n, &arg_rational(a, "a")?, &arg_rational(c, "c")?).map_err(fail)?;
        *out_ptr(out, "out")? = rational_f64(&l0);
        Ok(())
    })
}

/// Runs identity suites (`"all"` or a comma list) and optionally returns the
/// JSON report through `report_out` (free with `sck_string_free`). Returns
/// `IdentityFailure` if any check failed.
///
/// # Safety
/// `suites` must be a C string; `report_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn sck_verify_suite(
    suites: *const c_char,
    n_max: usize,
    trials: usize,
    seed: u64,
    report_out: *mut *mut c_char,
) -> SckStatus {
    guard(|| {
        if let Some(r) = report_out.as_mut() {
            *r = ptr::null_mut();
        }
        let list = suite::parse_suites(arg_str(suites, "suites")?).map_err(fail)?;
        let report = suite::run(&SuiteConfig::new(list, n_max, trials, seed)).map_err(fail)?;
        if let Some(r) = report_out.as_mut() {
            *r = into_c_string(serde_json::to_string(&report).map_err(|e| {
                set_error(e.to_string());
                SckStatus::Internal
            })?);
        }
        if report.passed {
            Ok(())
        } else {
            set_error(format!("{} identity checks failed", report.failures.len()));
            Err(SckStatus::IdentityFailure)
        }
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
