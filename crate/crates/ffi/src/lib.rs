//! C interface. Polynomials and certificates are opaque handles owned by the caller
//! and released with the matching `_free` function. Every fallible call returns a
//! [`UposStatus`]; the message of the last failure on the calling thread is
//! available from [`upos_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use upos::certio::{deserialize, serialize, verify, CertificateEnvelope, Kind, NegativePoint, Payload, Verdict};
use upos::interval::{certify_halfline, certify_interval};
use upos::karlin::KarlinDomain;
use upos::pertsos::build_pert_cert;
use upos::upoly::parse_poly;
use upos::usos::certify_positive_r;
use upos::{Error, RatPoly};

/// Result codes; values are stable.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UposStatus {
    Ok = 0,
    /// The polynomial is negative somewhere on the domain; a witness was produced.
    NotPositive = 2,
    /// Verification rejected the certificate.
    Rejected = 3,
    ParseError = 10,
    /// A null pointer, invalid UTF-8, or an empty interval was passed.
    InvalidArgument = 11,
    Unsupported = 12,
    NotSquareFree = 13,
    PrecisionExhausted = 14,
    Internal = 20,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UposDomain {
    Real = 0,
    HalfLine = 1,
    Interval = 2,
}

/// Opaque polynomial with rational coefficients.
pub struct UposPoly(RatPoly);

/// Opaque certificate envelope (any kind, including witnesses).
pub struct UposCertificate(CertificateEnvelope);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: UposStatus, msg: &str) -> UposStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> UposStatus {
    let s = match e {
        Error::Parse { .. } | Error::InvalidRational(_) | Error::CertParse { .. } => UposStatus::ParseError,
        Error::NotPositive(_) => UposStatus::NotPositive,
        Error::NotSquareFree => UposStatus::NotSquareFree,
        Error::PrecisionExhausted { .. } | Error::PrecisionInsufficient(_) => UposStatus::PrecisionExhausted,
        Error::Unsupported(_) => UposStatus::Unsupported,
        Error::EmptyInterval | Error::Precondition(_) | Error::NonPositiveLeadingCoefficient => UposStatus::InvalidArgument,
        _ => UposStatus::Internal,
    };
    fail(s, &e.to_string())
}

fn guard(f: impl FnOnce() -> UposStatus + UnwindSafe) -> UposStatus {
    set_error("");
    catch_unwind(f).unwrap_or_else(|_| fail(UposStatus::Internal, "panic inside upos"))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, UposStatus> {
    if p.is_null() {
        return Err(fail(UposStatus::InvalidArgument, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(UposStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, v: T) {
    *out = Box::into_raw(Box::new(v));
}

/// Parses an expression such as `x^4 - 2/3*x + 1` or an ascending coefficient list.
///
/// # Safety
/// `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn upos_poly_parse(text_ptr: *const c_char, out: *mut *mut UposPoly) -> UposStatus {
    guard(|| {
        if out.is_null() {
            return fail(UposStatus::InvalidArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let s = match text(text_ptr) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match parse_poly(s) {
            Ok(p) => {
                put(out, UposPoly(p));
                UposStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Degree of the polynomial, or -1 for the zero polynomial or a null handle.
///
/// # Safety
/// `p` must be null or a live handle from [`upos_poly_parse`].
#[no_mangle]
pub unsafe extern "C" fn upos_poly_degree(p: *const UposPoly) -> isize {
    match p.as_ref().and_then(|p| p.0.degree()) {
        Some(d) => d as isize,
        None => -1,
    }
}

/// # Safety
/// `p` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn upos_poly_free(p: *mut UposPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Weighted SOS certificate on the domain. `a` and `b` are rational strings, read
/// only for [`UposDomain::Interval`]. On `NotPositive` the handle holds a witness.
///
/// # Safety
/// `p` must be a live handle, `out` a valid pointer, and `a`, `b` NUL-terminated
/// strings when the domain is an interval.
#[no_mangle]
pub unsafe extern "C" fn upos_certify(p: *const UposPoly, domain: UposDomain, a: *const c_char, b: *const c_char, out: *mut *mut UposCertificate) -> UposStatus {
    guard(|| {
        if out.is_null() {
            return fail(UposStatus::InvalidArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let Some(poly) = p.as_ref().map(|p| &p.0) else {
            return fail(UposStatus::InvalidArgument, "null polynomial");
        };
        let (dom, res) = match domain {
            UposDomain::Real => (KarlinDomain::Real, certify_positive_r(poly).map(Payload::WsosR)),
            UposDomain::HalfLine => (KarlinDomain::HalfLine, certify_halfline(poly).map(Payload::WsosInterval)),
            UposDomain::Interval => {
                let ends = text(a).and_then(|a| Ok((a, text(b)?)));
                let (lo, hi) = match ends {
                    Ok((a, b)) => match (upos::arith::parse_rational(a), upos::arith::parse_rational(b)) {
                        (Ok(lo), Ok(hi)) => (lo, hi),
                        (Err(e), _) | (_, Err(e)) => return status_of(&e),
                    },
                    Err(st) => return st,
                };
                let r = certify_interval(poly, &lo, &hi).map(Payload::WsosInterval);
                (KarlinDomain::Interval { a: lo, b: hi }, r)
            }
        };
        finish(poly, dom, res, out)
    })
}

/// Perturbed two-square certificate on ℝ; requires even degree.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn upos_certify_pert(p: *const UposPoly, out: *mut *mut UposCertificate) -> UposStatus {
    guard(|| {
        if out.is_null() {
            return fail(UposStatus::InvalidArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let Some(poly) = p.as_ref().map(|p| &p.0) else {
            return fail(UposStatus::InvalidArgument, "null polynomial");
        };
        if poly.deg0() % 2 == 1 {
            return fail(UposStatus::Unsupported, "perturbed certificates require even degree");
        }
        finish(poly, KarlinDomain::Real, build_pert_cert(poly, false).map(Payload::PertSos), out)
    })
}

unsafe fn finish(poly: &RatPoly, dom: KarlinDomain, res: upos::Result<Payload>, out: *mut *mut UposCertificate) -> UposStatus {
    match res {
        Ok(payload) => {
            put(out, UposCertificate(CertificateEnvelope::new(poly, payload)));
            UposStatus::Ok
        }
        Err(Error::NotPositive(w)) => {
            let st = status_of(&Error::NotPositive(w.clone()));
            put(out, UposCertificate(CertificateEnvelope::new(poly, Payload::Witness(NegativePoint { domain: dom, witness: w }))));
            st
        }
        Err(e) => status_of(&e),
    }
}

/// `Ok` when the certificate is exactly valid for `p`, `Rejected` otherwise.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn upos_verify(p: *const UposPoly, c: *const UposCertificate) -> UposStatus {
    guard(|| {
        let (Some(poly), Some(cert)) = (p.as_ref(), c.as_ref()) else {
            return fail(UposStatus::InvalidArgument, "null handle");
        };
        match verify(&poly.0, &cert.0) {
            Verdict::Accept => UposStatus::Ok,
            Verdict::Reject(r) => fail(UposStatus::Rejected, &r.to_string()),
        }
    })
}

/// Canonical JSON; release with [`upos_string_free`]. Null on a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn upos_certificate_to_json(c: *const UposCertificate) -> *mut c_char {
    match c.as_ref() {
        Some(c) => CString::new(serialize(&c.0)).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn upos_certificate_from_json(json: *const c_char, out: *mut *mut UposCertificate) -> UposStatus {
    guard(|| {
        if out.is_null() {
            return fail(UposStatus::InvalidArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let s = match text(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match deserialize(s.as_bytes()) {
            Ok(env) => {
                put(out, UposCertificate(env));
                UposStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static string such as `"wsos-R"`; null on a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn upos_certificate_kind(c: *const UposCertificate) -> *const c_char {
    let Some(c) = c.as_ref() else {
        return ptr::null();
    };
    let s = match c.0.kind() {
        Kind::WsosR => c"wsos-R",
        Kind::WsosInterval => c"wsos-interval",
        Kind::PertSos => c"pert-sos",
        Kind::Karlin => c"karlin",
        Kind::Witness => c"witness",
    };
    s.as_ptr()
}

/// # Safety
/// `c` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn upos_certificate_free(c: *mut UposCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn upos_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread; empty after a success. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn upos_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn upos_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => c"",
    };
    V.as_ptr()
}
