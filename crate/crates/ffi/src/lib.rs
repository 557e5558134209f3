//! C ABI over `operad-gb`.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! call returns an [`OgbStatus`]; on failure the message is available from
//! [`ogb_last_error`] on the same thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use operad_gb::poisder::tau_identity;
use operad_gb::{
    builtin, complete, library, library_identity, verify_identity, CompletionOptions, EngineError, Encoding,
    GroebnerBasis, IdentityExpr, Presentation,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OgbStatus {
    Ok = 0,
    /// The identity does not hold, or its τ-image is nonzero.
    Fails = 1,
    /// Bad input: unknown name, parse error, arity mismatch.
    UserError = 2,
    /// A requested arity exceeds the cap.
    ResourceCap = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A parsed presentation.
pub struct OgbPresentation {
    inner: Presentation,
}

/// A completed basis together with its presentation and encoding.
pub struct OgbBasis {
    presentation: Presentation,
    encoding: Encoding,
    basis: GroebnerBasis,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Error(OgbStatus, String);

impl From<EngineError> for Error {
    fn from(e: EngineError) -> Self {
        let status = match e {
            EngineError::ArityCap { .. } => OgbStatus::ResourceCap,
            _ => OgbStatus::UserError,
        };
        Error(status, e.to_string())
    }
}

fn user(e: impl ToString) -> Error {
    Error(OgbStatus::UserError, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<OgbStatus, Error>) -> OgbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Error(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            OgbStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(Error(OgbStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error(OgbStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Error> {
    p.as_ref()
        .ok_or_else(|| Error(OgbStatus::NullPointer, format!("{what} is null")))
}

fn out_arg<T>(p: *mut T, what: &str) -> Result<(), Error> {
    if p.is_null() {
        return Err(Error(OgbStatus::NullPointer, format!("{what} is null")));
    }
    Ok(())
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library.
#[no_mangle]
pub extern "C" fn ogb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Loads a built-in presentation (`novikov`, `gd`, `com-gd`, `tp`, `lie`,
/// `com`, `as`).
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogb_presentation_builtin(name: *const c_char, out: *mut *mut OgbPresentation) -> OgbStatus {
    guard(|| {
        out_arg(out, "out")?;
        let p = builtin(str_arg(name, "name")?).map_err(user)?;
        *out = Box::into_raw(Box::new(OgbPresentation { inner: p }));
        Ok(OgbStatus::Ok)
    })
}

/// Parses a presentation in the `.opd` format.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogb_presentation_parse(text: *const c_char, out: *mut *mut OgbPresentation) -> OgbStatus {
    guard(|| {
        out_arg(out, "out")?;
        let p = operad_gb::presentation::parse(str_arg(text, "text")?).map_err(user)?;
        *out = Box::into_raw(Box::new(OgbPresentation { inner: p }));
        Ok(OgbStatus::Ok)
    })
}

/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ogb_presentation_free(p: *mut OgbPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Completes a presentation through `max_arity` (at most 7).
///
/// # Safety
/// `p` must be a live presentation and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogb_complete(
    p: *const OgbPresentation,
    max_arity: usize,
    workers: usize,
    out: *mut *mut OgbBasis,
) -> OgbStatus {
    guard(|| {
        out_arg(out, "out")?;
        let p = &ref_arg(p, "presentation")?.inner;
        let encoding = p.encoding(None).map_err(user)?;
        let relations = p.relations(&encoding).map_err(user)?;
        let basis = complete(
            encoding.alphabet(),
            &relations,
            CompletionOptions {
                max_arity,
                workers: workers.max(1),
            },
        )?;
        *out = Box::into_raw(Box::new(OgbBasis {
            presentation: p.clone(),
            encoding,
            basis,
        }));
        Ok(OgbStatus::Ok)
    })
}

/// # Safety
/// `b` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ogb_basis_free(b: *mut OgbBasis) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// `b` must be a live basis and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogb_basis_rule_count(b: *const OgbBasis, out: *mut usize) -> OgbStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = ref_arg(b, "basis")?.basis.rules().len();
        Ok(OgbStatus::Ok)
    })
}

/// Writes `dim P(n)` for `n = 1..` into `dims`, at most `len` entries and
/// at most the certified arity; `written` receives the count.
///
/// # Safety
/// `dims` must hold `len` entries; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ogb_basis_dims(
    b: *const OgbBasis,
    dims: *mut usize,
    len: usize,
    written: *mut usize,
) -> OgbStatus {
    guard(|| {
        out_arg(written, "written")?;
        let b = &ref_arg(b, "basis")?.basis;
        let n = len.min(b.certified_arity());
        if n > 0 {
            out_arg(dims, "dims")?;
        }
        for i in 0..n {
            *dims.add(i) = b.dims(i + 1)?;
        }
        *written = n;
        Ok(OgbStatus::Ok)
    })
}

/// The basis artifact as JSON; release with [`ogb_string_free`].
///
/// # Safety
/// `b` must be a live basis and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogb_basis_json(b: *const OgbBasis, out: *mut *mut c_char) -> OgbStatus {
    guard(|| {
        out_arg(out, "out")?;
        let b = ref_arg(b, "basis")?;
        let text = serde_json::to_string(&b.basis.to_artifact()).map_err(user)?;
        *out = CString::new(text).map_err(user)?.into_raw();
        Ok(OgbStatus::Ok)
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ogb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn lookup(p: &Presentation, name: &str) -> Result<IdentityExpr, Error> {
    match p.identity(name) {
        Some(id) => Ok(id.clone()),
        None => library_identity(name).map_err(user),
    }
}

/// Checks an identity of the presentation or the library against the
/// basis. Returns `Ok` if it holds and `Fails` otherwise; the certificate
/// is replayed before answering.
///
/// # Safety
/// `b` must be a live basis and `identity` a valid C string.
#[no_mangle]
pub unsafe extern "C" fn ogb_verify(b: *const OgbBasis, identity: *const c_char) -> OgbStatus {
    guard(|| {
        let b = ref_arg(b, "basis")?;
        let id = lookup(&b.presentation, str_arg(identity, "identity")?)?;
        let v = verify_identity(&b.basis, &b.encoding, &id)?;
        v.replay(&b.basis)?;
        Ok(if v.holds() { OgbStatus::Ok } else { OgbStatus::Fails })
    })
}

/// Sets `zero` to 1 if the library identity vanishes under τ, else 0.
///
/// # Safety
/// `identity` must be a valid C string and `zero` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogb_tau_is_zero(identity: *const c_char, zero: *mut c_int) -> OgbStatus {
    guard(|| {
        out_arg(zero, "zero")?;
        let id = library_identity(str_arg(identity, "identity")?).map_err(user)?;
        let (_, report) = tau_identity(&id, &library().ops).map_err(user)?;
        *zero = report.zero as c_int;
        Ok(OgbStatus::Ok)
    })
}
