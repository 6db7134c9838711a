//! C interface to `z2kcodes`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` style
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`Z2kStatus`]; on failure `z2k_last_error()` describes the
//! problem. Strings handed out by the library are released with
//! `z2k_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use z2kcodes::asymptotics;
use z2kcodes::codes::{self, LinearCode};
use z2kcodes::extremal::{self, ExtremalProfile};
use z2kcodes::{Error, FracSeries};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Z2kStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidLength = 3,
    OutOfRange = 4,
    Domain = 5,
    TooLarge = 6,
    SearchExhausted = 7,
    Parse = 8,
    Panic = 9,
}

/// A truncated power series in `t^{1/D}` with rational coefficients.
pub struct Z2kSeries(FracSeries);

/// Forced coefficients of an extremal theta series for one `(n, k)`.
pub struct Z2kProfile(ExtremalProfile);

/// A free code over `Z/2kZ`.
pub struct Z2kCode(LinearCode);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> Z2kStatus {
    match e {
        Error::InvalidLength(_) => Z2kStatus::InvalidLength,
        Error::OutOfTruncation { .. } | Error::IndexOutOfRange { .. } | Error::RangeError { .. } => {
            Z2kStatus::OutOfRange
        }
        Error::DomainError(_) | Error::NoBracket { .. } | Error::ZeroConstantTerm | Error::NegativeExponent { .. } => {
            Z2kStatus::Domain
        }
        Error::TooLarge(_) => Z2kStatus::TooLarge,
        Error::SearchExhausted { .. } => Z2kStatus::SearchExhausted,
        Error::Parse(_) => Z2kStatus::Parse,
        _ => Z2kStatus::InvalidArgument,
    }
}

/// Run `f`, turning errors and panics into a status and a stored message.
fn guard<F>(f: F) -> Z2kStatus
where
    F: FnOnce() -> Result<(), (Z2kStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Z2kStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            Z2kStatus::Panic
        }
    }
}

fn lib<T>(r: z2kcodes::Result<T>) -> Result<T, (Z2kStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (Z2kStatus, String) {
    (Z2kStatus::NullPointer, format!("{what} is null"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (Z2kStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (Z2kStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

fn give_string(s: String, out: &mut *mut c_char) -> Result<(), (Z2kStatus, String)> {
    let c = CString::new(s).map_err(|_| (Z2kStatus::InvalidArgument, "string holds a NUL byte".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn z2k_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn z2k_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `E4` truncated at `t^terms`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_e4_new(terms: usize, out: *mut *mut Z2kSeries) -> Z2kStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let s = lib(z2kcodes::modforms::eisenstein_e4(terms))?;
        *out = Box::into_raw(Box::new(Z2kSeries(s)));
        Ok(())
    })
}

/// `theta_1 = f_0^8` for `k`, truncated at `t^terms`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_theta1_new(k: u32, terms: usize, out: *mut *mut Z2kSeries) -> Z2kStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let s = lib(z2kcodes::modforms::theta1(k, terms))?;
        *out = Box::into_raw(Box::new(Z2kSeries(s)));
        Ok(())
    })
}

/// # Safety
/// `series` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn z2k_series_free(series: *mut Z2kSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Grid denominator `D` and number of stored grid points.
///
/// # Safety
/// `series` must be a live handle; `denom` and `len` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_series_shape(series: *const Z2kSeries, denom: *mut u32, len: *mut usize) -> Z2kStatus {
    guard(|| {
        let s = in_ref(series, "series")?;
        *out_ref(denom, "denom")? = s.0.grid_denom();
        *out_ref(len, "len")? = s.0.grid_len();
        Ok(())
    })
}

/// Coefficient at grid index `index` (exponent `index / D`) as a decimal
/// string `p` or `p/q`.
///
/// # Safety
/// `series` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_series_coeff(series: *const Z2kSeries, index: usize, out: *mut *mut c_char) -> Z2kStatus {
    guard(|| {
        let s = in_ref(series, "series")?;
        let out = out_ref(out, "out")?;
        if index >= s.0.grid_len() {
            return Err((Z2kStatus::OutOfRange, format!("index {index} beyond {} grid points", s.0.grid_len())));
        }
        give_string(s.0.coeff(index).to_string(), out)
    })
}

/// The series in the line-oriented golden format.
///
/// # Safety
/// `series` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_series_to_text(series: *const Z2kSeries, out: *mut *mut c_char) -> Z2kStatus {
    guard(|| {
        let s = in_ref(series, "series")?;
        give_string(s.0.to_golden(), out_ref(out, "out")?)
    })
}

/// Forced coefficients for length `n` over `Z/2kZ`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_profile_new(n: u64, k: u32, out: *mut *mut Z2kProfile) -> Z2kStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let p = lib(extremal::profile(n, k))?;
        *out = Box::into_raw(Box::new(Z2kProfile(p)));
        Ok(())
    })
}

/// # Safety
/// `profile` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn z2k_profile_free(profile: *mut Z2kProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// `mu`, `nu` and the threshold `24 mu - 240 nu + 744`.
///
/// # Safety
/// `profile` must be a live handle; the outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_profile_dims(
    profile: *const Z2kProfile,
    mu: *mut u64,
    nu: *mut u64,
    threshold: *mut i64,
) -> Z2kStatus {
    guard(|| {
        let p = &in_ref(profile, "profile")?.0;
        *out_ref(mu, "mu")? = p.mu;
        *out_ref(nu, "nu")? = p.nu;
        *out_ref(threshold, "threshold")? = p.threshold;
        Ok(())
    })
}

/// `beta1` (`which = 1`) or `beta2` (`which = 2`) as a decimal string.
///
/// # Safety
/// `profile` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_profile_beta(profile: *const Z2kProfile, which: u32, out: *mut *mut c_char) -> Z2kStatus {
    guard(|| {
        let p = &in_ref(profile, "profile")?.0;
        let v = match which {
            1 => &p.beta1,
            2 => &p.beta2,
            _ => return Err((Z2kStatus::InvalidArgument, format!("beta index {which}, want 1 or 2"))),
        };
        give_string(v.to_string(), out_ref(out, "out")?)
    })
}

/// `b_{2s}` as a decimal string, for `s <= mu + 2`.
///
/// # Safety
/// `profile` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_profile_b(profile: *const Z2kProfile, s: usize, out: *mut *mut c_char) -> Z2kStatus {
    guard(|| {
        let p = &in_ref(profile, "profile")?.0;
        let v = p.b.get(s).ok_or((Z2kStatus::OutOfRange, format!("s = {s} beyond mu + 2 = {}", p.mu + 2)))?;
        give_string(v.to_string(), out_ref(out, "out")?)
    })
}

/// Least `n` in `[from, to]` with `beta2 < 0`; `*found` is 0 when there is none.
///
/// # Safety
/// `found` and `n` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_crossover(k: u32, from: u64, to: u64, found: *mut u8, n: *mut u64) -> Z2kStatus {
    guard(|| {
        let found = out_ref(found, "found")?;
        let n = out_ref(n, "n")?;
        let rep = lib(extremal::crossover_scan(k, from, to))?;
        *found = u8::from(rep.first_negative.is_some());
        *n = rep.first_negative.unwrap_or(0);
        Ok(())
    })
}

/// Whether `beta1 > 0` and the positivity certificate holds at `(n, k)`.
///
/// # Safety
/// `pass` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_certificate(n: u64, k: u32, pass: *mut u8) -> Z2kStatus {
    guard(|| {
        let pass = out_ref(pass, "pass")?;
        let report = lib(extremal::positivity_certificate(n, k))?;
        let beta1 = lib(extremal::beta_stars(n, k))?.0;
        *pass = u8::from(report.pass && beta1 > 0.into());
        Ok(())
    })
}

/// Saddle point of `F` (`theta_k = 0`) or of `F theta_1^3` for
/// `theta_k = k`, and the resulting ratio limit, as doubles.
///
/// # Safety
/// All outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_saddle(
    digits: u32,
    theta_k: u32,
    y0: *mut f64,
    c1: *mut f64,
    c2: *mut f64,
    limit: *mut f64,
) -> Z2kStatus {
    guard(|| {
        let (y0, c1, c2, limit) = (out_ref(y0, "y0")?, out_ref(c1, "c1")?, out_ref(c2, "c2")?, out_ref(limit, "limit")?);
        let sd = lib(if theta_k == 0 {
            asymptotics::find_saddle(digits)
        } else {
            asymptotics::find_theta_saddle(theta_k, digits)
        })?;
        let lim = lib(asymptotics::predicted_ratio_limit(&sd))?;
        *y0 = sd.y0_f64();
        *c1 = sd.c1_f64();
        *c2 = sd.c2_f64();
        *limit = lim.limit;
        Ok(())
    })
}

/// A length-8 Type II code over `Z/2kZ` for `k <= 6`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_code_search(k: u32, seed: u64, out: *mut *mut Z2kCode) -> Z2kStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let found = lib(codes::search_c8(k, seed))?;
        *out = Box::into_raw(Box::new(Z2kCode(found.code)));
        Ok(())
    })
}

/// Parse a code file (`zcode k n r` then `r` rows).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_code_parse(text: *const c_char, out: *mut *mut Z2kCode) -> Z2kStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|_| (Z2kStatus::Parse, "text is not UTF-8".to_string()))?;
        let code = lib(text.parse::<LinearCode>())?;
        *out = Box::into_raw(Box::new(Z2kCode(code)));
        Ok(())
    })
}

/// # Safety
/// `code` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn z2k_code_free(code: *mut Z2kCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Code file text for `code`.
///
/// # Safety
/// `code` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_code_to_text(code: *const Z2kCode, out: *mut *mut c_char) -> Z2kStatus {
    guard(|| {
        let c = in_ref(code, "code")?;
        give_string(c.0.to_text(), out_ref(out, "out")?)
    })
}

/// Type II check by enumeration. `*d_e` is 0 for the zero code.
///
/// # Safety
/// `code` must be a live handle; the outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_code_verify(code: *const Z2kCode, type2: *mut u8, d_e: *mut u64) -> Z2kStatus {
    guard(|| {
        let c = in_ref(code, "code")?;
        let type2 = out_ref(type2, "type2")?;
        let d_e = out_ref(d_e, "d_e")?;
        let report = lib(codes::verify_type2(&c.0))?;
        *type2 = u8::from(report.type2);
        *d_e = report.d_e.unwrap_or(0);
        Ok(())
    })
}

/// Theta series of `A_{2k}(C)` by substitution into the weight enumerator,
/// truncated at `t^terms`.
///
/// # Safety
/// `code` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn z2k_code_theta(code: *const Z2kCode, terms: usize, out: *mut *mut Z2kSeries) -> Z2kStatus {
    guard(|| {
        let c = in_ref(code, "code")?;
        let out = out_ref(out, "out")?;
        let table = lib(codes::swe(&c.0))?;
        let s = lib(codes::theta_substitution(&table, terms))?;
        *out = Box::into_raw(Box::new(Z2kSeries(s)));
        Ok(())
    })
}
