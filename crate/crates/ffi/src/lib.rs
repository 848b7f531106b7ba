//! C ABI over `harmconv-core`.
//!
//! Mappings are opaque `HcMap` handles built from map-spec strings and
//! released with [`hc_map_free`]. Every fallible call returns an
//! [`HcStatus`]; on failure, [`hc_last_error`] describes the problem on the
//! calling thread. Strings returned through `char **` are owned by the
//! caller and released with [`hc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use harmconv::mapspec::MapExpr;
use harmconv::rootcheck::roots_in_disk_count;
use harmconv::verify::{verify_half_plane, verify_mobius, verify_strip, GridParams};
use harmconv::{harmonic_convolve, ComplexPolynomial, Error, HarmonicMap};
use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    MapSpec = 3,
    DenominatorVanishes = 4,
    NormalizationMismatch = 5,
    Inconclusive = 6,
    Numerical = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Opaque harmonic mapping `h + conj(g)` stored as truncated series.
pub struct HcMap {
    inner: HarmonicMap,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let s = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> HcStatus {
    match e {
        Error::InvalidParameter(_) => HcStatus::InvalidParameter,
        Error::MapSpec(_) => HcStatus::MapSpec,
        Error::DenominatorVanishes { .. } => HcStatus::DenominatorVanishes,
        Error::NormalizationMismatch { .. } => HcStatus::NormalizationMismatch,
        Error::InconclusiveBoundary { .. } => HcStatus::Inconclusive,
        Error::NearZeroConstantTerm { .. }
        | Error::NoConvergence { .. }
        | Error::DegenerateCurve { .. } => HcStatus::Numerical,
    }
}

fn fail(status: HcStatus, msg: &str) -> HcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), HcStatus>) -> HcStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(HcStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: harmconv::Result<T>) -> Result<T, HcStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

fn null(what: &str) -> HcStatus {
    fail(HcStatus::NullPointer, &format!("{what} is null"))
}

unsafe fn map_ref<'a>(m: *const HcMap) -> Result<&'a HarmonicMap, HcStatus> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null("map"))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), HcStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

fn into_handle(inner: HarmonicMap) -> *mut HcMap {
    Box::into_raw(Box::new(HcMap { inner }))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a mapping from a map-spec string such as `"conv(f0, fa(a=0.5))"`
/// truncated at `order`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_map_from_spec(
    spec: *const c_char,
    order: usize,
    out: *mut *mut HcMap,
) -> HcStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if order == 0 {
            return Err(fail(HcStatus::InvalidParameter, "order must be positive"));
        }
        let text = CStr::from_ptr(spec)
            .to_str()
            .map_err(|_| fail(HcStatus::MapSpec, "spec is not UTF-8"))?;
        let expr: MapExpr = lift(text.parse())?;
        let f = lift(expr.build(order))?;
        write(out, into_handle(f))
    })
}

/// Harmonic (Hadamard) convolution of two mappings as a new handle.
///
/// # Safety
/// `f` and `other` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_map_convolve(
    f: *const HcMap,
    other: *const HcMap,
    out: *mut *mut HcMap,
) -> HcStatus {
    guard(|| {
        let conv = harmonic_convolve(map_ref(f)?, map_ref(other)?);
        write(out, into_handle(conv))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_map_free(f: *mut HcMap) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Truncation order of the mapping, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_map_order(f: *const HcMap) -> usize {
    f.as_ref().map_or(0, |m| m.inner.order())
}

/// `f(z) = h(z) + conj(g(z))`.
///
/// # Safety
/// `f` must be a live handle; `out_re` and `out_im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hc_map_eval(
    f: *const HcMap,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HcStatus {
    guard(|| {
        let w = map_ref(f)?.evaluate(Complex64::new(re, im));
        write(out_re, w.re)?;
        write(out_im, w.im)
    })
}

/// Dilatation `g'/h'` at `z` from the quotient series of the mapping.
///
/// # Safety
/// `f` must be a live handle; `out_re` and `out_im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hc_map_dilatation(
    f: *const HcMap,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HcStatus {
    guard(|| {
        let w = lift(map_ref(f)?.series_dilatation(Complex64::new(re, im)))?;
        write(out_re, w.re)?;
        write(out_im, w.im)
    })
}

/// Jacobian `|h'|² - |g'|²` at `z`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_map_jacobian(
    f: *const HcMap,
    re: f64,
    im: f64,
    out: *mut f64,
) -> HcStatus {
    guard(|| write(out, map_ref(f)?.jacobian(Complex64::new(re, im))))
}

/// Copies the coefficients of `h` and `g` as interleaved `(re, im)` pairs,
/// index 0 first. Each buffer must hold `2 * (order + 1)` doubles; `len` is
/// that capacity in doubles. Either buffer may be null to skip it.
///
/// # Safety
/// Non-null buffers must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn hc_map_coeffs(
    f: *const HcMap,
    h_out: *mut f64,
    g_out: *mut f64,
    len: usize,
) -> HcStatus {
    guard(|| {
        let m = map_ref(f)?;
        let need = 2 * (m.order() + 1);
        if len < need {
            return Err(fail(
                HcStatus::BufferTooSmall,
                &format!("buffers need {need} doubles, got {len}"),
            ));
        }
        for (buf, series) in [(h_out, &m.h), (g_out, &m.g)] {
            if buf.is_null() {
                continue;
            }
            let dst = std::slice::from_raw_parts_mut(buf, need);
            for (k, c) in series.coeffs().iter().enumerate() {
                dst[2 * k] = c.re;
                dst[2 * k + 1] = c.im;
            }
        }
        Ok(())
    })
}

/// Number of zeros in `|z| < 1` of the polynomial with `n` coefficients
/// given as interleaved `(re, im)` pairs, constant term first.
///
/// # Safety
/// `coeffs` must be valid for `2 * n` reads and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_roots_in_disk(
    coeffs: *const f64,
    n: usize,
    out: *mut usize,
) -> HcStatus {
    guard(|| {
        if coeffs.is_null() {
            return Err(null("coeffs"));
        }
        let raw = std::slice::from_raw_parts(coeffs, 2 * n);
        let p = ComplexPolynomial::new(
            raw.chunks_exact(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        );
        write(out, lift(roots_in_disk_count(&p))?)
    })
}

fn emit_report(
    r: harmconv::Result<harmconv::report::Report>,
    out: *mut *mut c_char,
    verdict: *mut i32,
) -> Result<(), HcStatus> {
    let report = lift(r)?;
    if !verdict.is_null() {
        unsafe { verdict.write(report.exit_code()) };
    }
    let json = into_c_string(report.to_json());
    unsafe { write(out, json) }
}

/// Runs the Möbius-case verification on the default grid. Writes the JSON
/// report to `*out_json` and the CLI exit code (0 or 1) to `*exit_code` when
/// that pointer is non-null.
///
/// # Safety
/// `out_json` must be a valid pointer; `exit_code` valid or null.
#[no_mangle]
pub unsafe extern "C" fn hc_verify_mobius(
    a: f64,
    theta: f64,
    gamma: f64,
    out_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> HcStatus {
    guard(|| {
        emit_report(
            verify_mobius(a, theta, gamma, &GridParams::default()),
            out_json,
            exit_code,
        )
    })
}

/// Verification for the half-plane mapping of direction `gamma1` with
/// dilatation `e^{iθ}z^n`, convolved with `f^a_γ`.
///
/// # Safety
/// As [`hc_verify_mobius`].
#[no_mangle]
pub unsafe extern "C" fn hc_verify_half_plane(
    n: u32,
    theta: f64,
    gamma1: f64,
    gamma: f64,
    a: f64,
    out_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> HcStatus {
    guard(|| {
        emit_report(
            verify_half_plane(n, theta, gamma1, gamma, a, &GridParams::default()),
            out_json,
            exit_code,
        )
    })
}

/// Verification for the strip mapping onto `Ω_β` with dilatation
/// `e^{iθ}z^n`, convolved with `f^a_γ`.
///
/// # Safety
/// As [`hc_verify_mobius`].
#[no_mangle]
pub unsafe extern "C" fn hc_verify_strip(
    n: u32,
    theta: f64,
    beta: f64,
    gamma: f64,
    a: f64,
    out_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> HcStatus {
    guard(|| {
        emit_report(
            verify_strip(n, theta, beta, gamma, a, &GridParams::default()),
            out_json,
            exit_code,
        )
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
