//! C ABI for irredcert.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Strings returned as `char *` are owned by the caller and released with
//! [`ic_string_free`]. Every fallible call returns an [`IcStatus`]; on any
//! status other than `IC_STATUS_OK` a description is available from
//! [`ic_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use irredcert::certio;
use irredcert::parser::parse_poly;
use irredcert::{certify, verify, CertificateDocument, CertifyConfig, PolyZ, Verdict};

/// Result codes shared by all fallible functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcStatus {
    Ok = 0,
    /// `ic_certify` found a proper factor.
    Reducible = 1,
    /// `ic_certify` ran out of budget.
    Inconclusive = 2,
    /// `ic_verify` rejected the certificate.
    Rejected = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    ParseError = 6,
    /// Input outside the domain of the operation (zero or constant polynomial).
    DomainError = 7,
    /// An internal panic was caught at the boundary.
    Internal = 8,
}

/// Opaque polynomial handle.
pub struct IcPoly {
    inner: PolyZ,
}

/// Opaque certificate document handle.
pub struct IcCertificate {
    inner: CertificateDocument,
}

/// Search parameters for [`ic_certify`]. Obtain defaults from
/// [`ic_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IcConfig {
    pub seed: u64,
    pub max_iterations: u64,
    pub smooth_bound: u64,
    pub max_graeffe: u32,
    pub use_transforms: bool,
    pub strict_primality: bool,
    pub thread_count: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let mut bytes = msg.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::default());
}

fn fail(status: IcStatus, msg: impl Into<String>) -> IcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> IcStatus) -> IcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(IcStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, IcStatus> {
    if s.is_null() {
        return Err(fail(IcStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(IcStatus::InvalidUtf8, "string argument is not valid UTF-8"))
}

fn to_c_string(s: String) -> *mut c_char {
    let mut bytes = s.into_bytes();
    bytes.retain(|&b| b != 0);
    CString::new(bytes).expect("nul bytes removed").into_raw()
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn ic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a polynomial expression (`"x^4+1"`) or coefficient list
/// (`"[1,0,0,0,1]"`).
///
/// # Safety
/// `text` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ic_poly_parse(text: *const c_char, out: *mut *mut IcPoly) -> IcStatus {
    guard(|| {
        if out.is_null() {
            return fail(IcStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_poly(text.trim()) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(IcPoly { inner: p }));
                IcStatus::Ok
            }
            Err(e) => fail(IcStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `p` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ic_poly_free(p: *mut IcPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Degree of the polynomial, or -1 for the zero polynomial or a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ic_poly_degree(p: *const IcPoly) -> i64 {
    match p.as_ref().and_then(|p| p.inner.degree()) {
        Some(d) => d as i64,
        None => -1,
    }
}

/// Human-readable form of the polynomial, or null for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ic_poly_to_string(p: *const IcPoly) -> *mut c_char {
    match p.as_ref() {
        Some(p) => to_c_string(p.inner.to_string()),
        None => ptr::null_mut(),
    }
}

/// Default search parameters.
#[no_mangle]
pub extern "C" fn ic_config_default() -> IcConfig {
    let d = CertifyConfig::default();
    IcConfig {
        seed: d.seed,
        max_iterations: d.max_iterations as u64,
        smooth_bound: d.smooth_bound,
        max_graeffe: d.max_graeffe,
        use_transforms: d.use_transforms,
        strict_primality: d.strict_primality,
        thread_count: d.thread_count as u32,
    }
}

/// Search for a certificate.
///
/// Returns `IC_STATUS_OK` and stores a certificate in `*out_cert`, or
/// `IC_STATUS_REDUCIBLE` and stores a proper factor in `*out_factor` (when
/// `out_factor` is non-null), or `IC_STATUS_INCONCLUSIVE`. A null `config`
/// selects the defaults.
///
/// # Safety
/// `poly` must be a live handle; `config` null or valid; `out_cert` writable;
/// `out_factor` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ic_certify(
    poly: *const IcPoly,
    config: *const IcConfig,
    out_cert: *mut *mut IcCertificate,
    out_factor: *mut *mut IcPoly,
) -> IcStatus {
    guard(|| {
        if out_cert.is_null() {
            return fail(IcStatus::NullPointer, "null output pointer");
        }
        *out_cert = ptr::null_mut();
        if !out_factor.is_null() {
            *out_factor = ptr::null_mut();
        }
        let Some(poly) = poly.as_ref() else {
            return fail(IcStatus::NullPointer, "null polynomial");
        };
        let c = config
            .as_ref()
            .copied()
            .unwrap_or_else(|| ic_config_default());
        if c.smooth_bound < 2 || c.thread_count == 0 {
            return fail(
                IcStatus::DomainError,
                "smooth_bound must be >= 2 and thread_count >= 1",
            );
        }
        let cfg = CertifyConfig {
            seed: c.seed,
            max_iterations: usize::try_from(c.max_iterations).unwrap_or(usize::MAX),
            smooth_bound: c.smooth_bound,
            max_graeffe: c.max_graeffe,
            use_transforms: c.use_transforms,
            strict_primality: c.strict_primality,
            thread_count: c.thread_count as usize,
            ..CertifyConfig::default()
        };
        match certify(&poly.inner, &cfg) {
            Err(e) => fail(IcStatus::DomainError, e.to_string()),
            Ok(Verdict::Certified { doc }) => {
                *out_cert = Box::into_raw(Box::new(IcCertificate { inner: doc }));
                IcStatus::Ok
            }
            Ok(Verdict::Reducible { witness }) => {
                let msg = format!("reducible: factor {witness}");
                if !out_factor.is_null() {
                    *out_factor = Box::into_raw(Box::new(IcPoly { inner: witness }));
                }
                fail(IcStatus::Reducible, msg)
            }
            Ok(Verdict::Inconclusive { iterations_used }) => fail(
                IcStatus::Inconclusive,
                format!("inconclusive after {iterations_used} iterations"),
            ),
        }
    })
}

/// Parse a certificate document from its JSON text.
///
/// # Safety
/// `text` must be null or NUL-terminated; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ic_certificate_parse(
    text: *const c_char,
    out: *mut *mut IcCertificate,
) -> IcStatus {
    guard(|| {
        if out.is_null() {
            return fail(IcStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match certio::parse(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(IcCertificate { inner: doc }));
                IcStatus::Ok
            }
            Err(e) => fail(IcStatus::ParseError, e.to_string()),
        }
    })
}

/// Canonical JSON text of the certificate, or null for a null handle.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ic_certificate_serialize(cert: *const IcCertificate) -> *mut c_char {
    match cert.as_ref() {
        Some(c) => to_c_string(certio::serialize(&c.inner)),
        None => ptr::null_mut(),
    }
}

/// Kind of the outermost certificate (`"linear"`, `"degree_analysis"`,
/// `"lpfw"` or `"transform"`) as a static string, or null for a null handle.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ic_certificate_kind(cert: *const IcCertificate) -> *const c_char {
    let Some(c) = cert.as_ref() else {
        return ptr::null();
    };
    let s: &'static [u8] = match c.inner.certificate.kind() {
        "linear" => b"linear\0",
        "degree_analysis" => b"degree_analysis\0",
        "lpfw" => b"lpfw\0",
        _ => b"transform\0",
    };
    s.as_ptr().cast()
}

/// # Safety
/// `cert` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ic_certificate_free(cert: *mut IcCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Check `cert` against `poly`. Returns `IC_STATUS_OK` on acceptance and
/// `IC_STATUS_REJECTED` otherwise; the error text starts with the name of the
/// failed check.
///
/// # Safety
/// `poly` and `cert` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn ic_verify(
    poly: *const IcPoly,
    cert: *const IcCertificate,
    strict: bool,
) -> IcStatus {
    guard(|| {
        let (Some(p), Some(c)) = (poly.as_ref(), cert.as_ref()) else {
            return fail(IcStatus::NullPointer, "null handle");
        };
        match verify(&p.inner, &c.inner, strict) {
            Ok(()) => IcStatus::Ok,
            Err(e) => fail(IcStatus::Rejected, format!("{}: {e}", e.check())),
        }
    })
}
