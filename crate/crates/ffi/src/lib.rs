//! C interface to `boundquiver`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every fallible call returns a [`BqStatus`];
//! on failure the message is available from [`bq_last_error`] on the same
//! thread until the next call. Strings returned through `char **` must be
//! released with [`bq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use boundquiver::homalg::{euler_char, ext_dims, gram_matrix_simples};
use boundquiver::ktheory::KClass;
use boundquiver::quiver::{parse_quiver_spec, Algebra, BoundQuiver};
use boundquiver::report::{to_json, to_value};
use boundquiver::repr::{parse_representation, Representation};
use boundquiver::search::check::{certificate_from_json, check_certificate, find_certificates};
use boundquiver::search::{certify_jh_violation, certify_nonextendable, JhOptions};
use boundquiver::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    /// The computation ran but the claim did not verify.
    NotVerified = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// A bound quiver together with its algebra basis.
pub struct BqQuiver {
    alg: Arc<Algebra>,
}

/// A representation of a particular [`BqQuiver`].
pub struct BqRep {
    alg: Arc<Algebra>,
    rep: Representation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: BqStatus, msg: impl Into<String>) -> BqStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> BqStatus {
    match e {
        Error::Syntax { .. }
        | Error::NoVertices
        | Error::Duplicate { .. }
        | Error::UnknownVertex { .. }
        | Error::UnknownArrow { .. }
        | Error::CyclicQuiver { .. }
        | Error::InvalidRelation { .. } => BqStatus::ParseError,
        Error::NotExceptional(_) | Error::NotExceptionalPair(_) => BqStatus::NotVerified,
        Error::InvariantViolation(_) => BqStatus::Internal,
        _ => BqStatus::InvalidInput,
    }
}

fn from_error(e: Error) -> BqStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning panics into [`BqStatus::Internal`] and clearing the error on success.
fn guard(f: impl FnOnce() -> BqStatus) -> BqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(BqStatus::Ok) => {
            set_error("");
            BqStatus::Ok
        }
        Ok(s) => s,
        Err(_) => fail(BqStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, BqStatus> {
    if p.is_null() {
        return Err(fail(BqStatus::NullPointer, "null string argument"));
    }
    // SAFETY: caller passes a NUL-terminated string valid for this call.
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(BqStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> BqStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: `out` was checked non-null by the caller.
            *out = c.into_raw();
            BqStatus::Ok
        }
        Err(_) => fail(BqStatus::Internal, "output contains NUL"),
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn bq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bq_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in this crate.
        drop(CString::from_raw(s));
    }
}

/// Parses a quiver spec document.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bq_quiver_parse(spec: *const c_char, out: *mut *mut BqQuiver) -> BqStatus {
    guard(|| {
        if out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(spec) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_quiver_spec(text) {
            Ok(bq) => {
                *out = Box::into_raw(Box::new(BqQuiver {
                    alg: Arc::new(Algebra::new(bq)),
                }));
                BqStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// The built-in Bondal quiver.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bq_quiver_bondal(out: *mut *mut BqQuiver) -> BqStatus {
    guard(|| {
        if out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        *out = Box::into_raw(Box::new(BqQuiver {
            alg: Arc::new(Algebra::new(BoundQuiver::bondal())),
        }));
        BqStatus::Ok
    })
}

/// # Safety
/// `q` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bq_quiver_free(q: *mut BqQuiver) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

unsafe fn quiver_ref<'a>(q: *const BqQuiver) -> Result<&'a BqQuiver, BqStatus> {
    q.as_ref()
        .ok_or_else(|| fail(BqStatus::NullPointer, "null quiver handle"))
}

unsafe fn rep_ref<'a>(r: *const BqRep) -> Result<&'a BqRep, BqStatus> {
    r.as_ref()
        .ok_or_else(|| fail(BqStatus::NullPointer, "null representation handle"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bq_quiver_vertex_count(q: *const BqQuiver, out: *mut usize) -> BqStatus {
    guard(|| {
        let q = tri!(quiver_ref(q));
        if out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        *out = q.alg.vertex_count();
        BqStatus::Ok
    })
}

/// Dimension of the quotient algebra.
///
/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bq_algebra_dimension(q: *const BqQuiver, out: *mut usize) -> BqStatus {
    guard(|| {
        let q = tri!(quiver_ref(q));
        if out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        *out = q.alg.dimension();
        BqStatus::Ok
    })
}

/// Writes the Gram matrix of the Euler form, row-major, into `out[0..n*n]`.
///
/// # Safety
/// `q` must be a live handle; `out` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn bq_gram_matrix(q: *const BqQuiver, out: *mut i64, len: usize) -> BqStatus {
    guard(|| {
        let q = tri!(quiver_ref(q));
        let g = gram_matrix_simples(&q.alg).gram;
        let n = g.rank();
        if len < n * n {
            return fail(BqStatus::BufferTooSmall, format!("need {} entries", n * n));
        }
        if out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        for (i, row) in g.matrix().iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let Ok(v) = i64::try_from(x) else {
                    return fail(BqStatus::InvalidInput, "Gram entry does not fit in 64 bits");
                };
                *out.add(i * n + j) = v;
            }
        }
        BqStatus::Ok
    })
}

/// Parses a representation file against `q`. The `quiver` header line is required but its path is ignored.
///
/// # Safety
/// `q` must be a live handle, `text` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bq_rep_parse(
    q: *const BqQuiver,
    text: *const c_char,
    out: *mut *mut BqRep,
) -> BqStatus {
    guard(|| {
        let q = tri!(quiver_ref(q));
        if out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        let text = tri!(read_str(text));
        let rep = match parse_representation(text).and_then(|f| f.build(&q.alg)) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        *out = Box::into_raw(Box::new(BqRep {
            alg: Arc::clone(&q.alg),
            rep,
        }));
        BqStatus::Ok
    })
}

/// # Safety
/// `r` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bq_rep_free(r: *mut BqRep) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Writes the dimension vector into `out[0..n]`.
///
/// # Safety
/// `r` must be a live handle; `out` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn bq_rep_dimension_vector(
    r: *const BqRep,
    out: *mut usize,
    len: usize,
) -> BqStatus {
    guard(|| {
        let r = tri!(rep_ref(r));
        let dims = r.rep.dims();
        if len < dims.len() {
            return fail(
                BqStatus::BufferTooSmall,
                format!("need {} entries", dims.len()),
            );
        }
        if out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        ptr::copy_nonoverlapping(dims.as_ptr(), out, dims.len());
        BqStatus::Ok
    })
}

unsafe fn pair<'a>(m: *const BqRep, n: *const BqRep) -> Result<(&'a BqRep, &'a BqRep), BqStatus> {
    let (m, n) = (rep_ref(m)?, rep_ref(n)?);
    if !Arc::ptr_eq(&m.alg, &n.alg) && m.alg.bound_quiver() != n.alg.bound_quiver() {
        return Err(fail(
            BqStatus::InvalidInput,
            "representations are over different quivers",
        ));
    }
    Ok((m, n))
}

/// `dim Ext^k(M, N)`.
///
/// # Safety
/// `m`, `n` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bq_ext_dim(
    m: *const BqRep,
    n: *const BqRep,
    k: usize,
    out: *mut usize,
) -> BqStatus {
    guard(|| {
        let (m, n) = tri!(pair(m, n));
        if out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        *out = ext_dims(&m.alg, &m.rep, &n.rep, k)[k];
        BqStatus::Ok
    })
}

/// `Σ (-1)^k dim Ext^k(M, N)`.
///
/// # Safety
/// `m`, `n` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bq_euler_char(
    m: *const BqRep,
    n: *const BqRep,
    out: *mut i64,
) -> BqStatus {
    guard(|| {
        let (m, n) = tri!(pair(m, n));
        if out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        match i64::try_from(euler_char(&m.alg, &m.rep, &n.rep)) {
            Ok(v) => {
                *out = v;
                BqStatus::Ok
            }
            Err(_) => fail(BqStatus::InvalidInput, "value does not fit in 64 bits"),
        }
    })
}

/// Nonextendability report for the class `class[0..len]` as JSON.
/// Returns `Ok` when both sides are proved, `NotVerified` otherwise; the JSON is written in both cases.
///
/// # Safety
/// `q` must be a live handle, `class` readable for `len` values, `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn bq_certify_nonext(
    q: *const BqQuiver,
    class: *const i64,
    len: usize,
    bound: u64,
    modulus_cap: u64,
    json_out: *mut *mut c_char,
) -> BqStatus {
    guard(|| {
        let q = tri!(quiver_ref(q));
        if class.is_null() || json_out.is_null() {
            return fail(BqStatus::NullPointer, "null pointer argument");
        }
        if bound < 1 || modulus_cap < 2 {
            return fail(
                BqStatus::InvalidInput,
                "need bound >= 1 and modulus_cap >= 2",
            );
        }
        let v = KClass::from_i64(std::slice::from_raw_parts(class, len));
        let g = gram_matrix_simples(&q.alg).gram;
        let report = match certify_nonextendable(&v, &g, bound, modulus_cap) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        let st = write_string(json_out, to_json(&to_value(&report)));
        if st != BqStatus::Ok {
            return st;
        }
        if report.is_certified() {
            BqStatus::Ok
        } else {
            fail(
                BqStatus::NotVerified,
                "class is not certified nonextendable",
            )
        }
    })
}

/// Jordan–Hölder report with built-in candidates as JSON; `Ok` when a violation is witnessed.
///
/// # Safety
/// `q` must be a live handle; `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn bq_certify_jh(
    q: *const BqQuiver,
    bound: u64,
    modulus_cap: u64,
    json_out: *mut *mut c_char,
) -> BqStatus {
    guard(|| {
        let q = tri!(quiver_ref(q));
        if json_out.is_null() {
            return fail(BqStatus::NullPointer, "null output pointer");
        }
        if bound < 1 || modulus_cap < 2 {
            return fail(
                BqStatus::InvalidInput,
                "need bound >= 1 and modulus_cap >= 2",
            );
        }
        let opts = JhOptions {
            bound,
            modulus_cap,
            ..JhOptions::default()
        };
        let report = match certify_jh_violation(&q.alg, &[], &opts) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        let st = write_string(json_out, to_json(&to_value(&report)));
        if st != BqStatus::Ok {
            return st;
        }
        if report.is_violation() {
            BqStatus::Ok
        } else {
            fail(BqStatus::NotVerified, "no violation witnessed")
        }
    })
}

/// Replays every certificate found in a JSON document against the Gram matrix of `q`.
///
/// # Safety
/// `q` must be a live handle; `json` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn bq_verify_certificates(
    q: *const BqQuiver,
    json: *const c_char,
) -> BqStatus {
    guard(|| {
        let q = tri!(quiver_ref(q));
        let text = tri!(read_str(json));
        let doc: serde_json::Value = match serde_json::from_str(text) {
            Ok(d) => d,
            Err(e) => return fail(BqStatus::ParseError, e.to_string()),
        };
        let g = gram_matrix_simples(&q.alg).gram;
        let certs = find_certificates(&doc);
        if certs.is_empty() {
            return fail(BqStatus::NotVerified, "no certificates found");
        }
        for c in certs {
            if let Err(reason) =
                certificate_from_json(c).and_then(|cert| check_certificate(&cert, g.matrix()))
            {
                return fail(BqStatus::NotVerified, reason);
            }
        }
        BqStatus::Ok
    })
}
