//! C ABI over the checker.
//!
//! A session is an opaque handle. Every call returns an [`AlgStatus`];
//! details of the last failure are kept on the session and read with
//! [`alg_session_last_error`]. Strings returned through out-parameters are
//! owned by the caller and released with [`alg_string_free`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use algcic::session::{LoadError, Session};
use algcic::surface::pretty;
use algcic::typing::{CofixElim, Flags};

/// Allow products into Set over any domain.
pub const ALG_FLAG_IMPREDICATIVE_SET: u32 = 1;
/// Dependent elimination for co-inductive families.
pub const ALG_FLAG_COFIX_DEP_ELIM: u32 = 2;
/// Refuse properly indexed families in Prop over an index in Type.
pub const ALG_FLAG_NO_SINGLETON_PROPER_INDEX: u32 = 4;
/// Turn off η in conversion.
pub const ALG_FLAG_NO_ETA: u32 = 8;

const ALL_FLAGS: u32 =
    ALG_FLAG_IMPREDICATIVE_SET | ALG_FLAG_COFIX_DEP_ELIM | ALG_FLAG_NO_SINGLETON_PROPER_INDEX | ALG_FLAG_NO_ETA;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Scope = 5,
    Type = 6,
    NotFound = 7,
    FuelExhausted = 8,
    Panic = 9,
}

/// Opaque checking session.
pub struct AlgSession {
    inner: Session,
    last_error: Option<CString>,
    last_kind: Option<CString>,
}

impl AlgSession {
    fn fail(&mut self, status: AlgStatus, kind: &str, message: String) -> AlgStatus {
        self.last_kind = CString::new(kind).ok();
        self.last_error = Some(to_cstring(message));
        status
    }

    fn load_failed(&mut self, e: LoadError) -> AlgStatus {
        let status = match e {
            LoadError::Io { .. } => AlgStatus::Io,
            LoadError::Parse { .. } => AlgStatus::Parse,
            LoadError::Scope { .. } => AlgStatus::Scope,
            LoadError::Type { .. } => AlgStatus::Type,
        };
        self.fail(status, e.kind_name(), e.to_string())
    }
}

fn to_cstring(s: String) -> CString {
    CString::new(s).unwrap_or_else(|e| {
        let mut bytes = e.into_vec();
        bytes.retain(|b| *b != 0);
        CString::new(bytes).expect("nul bytes removed")
    })
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, AlgStatus> {
    if p.is_null() {
        return Err(AlgStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| AlgStatus::InvalidUtf8)
}

fn guarded(f: impl FnOnce() -> AlgStatus) -> AlgStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(AlgStatus::Panic)
}

/// Creates a session. `flags` is a bitwise or of `ALG_FLAG_*`; flags set
/// here cannot be changed by `#flag` pragmas. `fuel` bounds reduction per
/// definition, 0 for the default. Returns NULL on unknown flag bits.
#[no_mangle]
pub extern "C" fn alg_session_new(flags: u32, fuel: u64) -> *mut AlgSession {
    if flags & !ALL_FLAGS != 0 {
        return ptr::null_mut();
    }
    let mut f = Flags::default();
    let mut locked = Vec::new();
    if flags & ALG_FLAG_IMPREDICATIVE_SET != 0 {
        f.impredicative_set = true;
        locked.push("impredicative-set");
    }
    if flags & ALG_FLAG_COFIX_DEP_ELIM != 0 {
        f.cofix_elim = CofixElim::Dependent;
        locked.push("cofix-dep-elim");
    }
    if flags & ALG_FLAG_NO_SINGLETON_PROPER_INDEX != 0 {
        f.singleton_proper_index = false;
        locked.push("singleton-proper-index");
    }
    if flags & ALG_FLAG_NO_ETA != 0 {
        f.eta = false;
        locked.push("eta");
    }
    if fuel != 0 {
        f.fuel = fuel;
    }
    let session = AlgSession { inner: Session::with_locked(f, locked), last_error: None, last_kind: None };
    Box::into_raw(Box::new(session))
}

/// Releases a session. NULL is ignored.
///
/// # Safety
/// `session` must come from [`alg_session_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn alg_session_free(session: *mut AlgSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Loads and checks a source file, adding its definitions to the session.
///
/// # Safety
/// `session` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn alg_session_load_file(session: *mut AlgSession, path: *const c_char) -> AlgStatus {
    let Some(s) = session.as_mut() else { return AlgStatus::NullArgument };
    guarded(|| {
        let path = match read_str(path) {
            Ok(p) => p,
            Err(status) => return s.fail(status, "InvalidArgument", "bad path argument".into()),
        };
        match s.inner.load_file(Path::new(path), &mut Vec::new()) {
            Ok(()) => AlgStatus::Ok,
            Err(e) => s.load_failed(e),
        }
    })
}

/// Checks source text. `name` labels it in error messages; `#require`
/// paths resolve against the working directory.
///
/// # Safety
/// `session` must be a live handle; `source` and `name` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn alg_session_load_source(
    session: *mut AlgSession,
    source: *const c_char,
    name: *const c_char,
) -> AlgStatus {
    let Some(s) = session.as_mut() else { return AlgStatus::NullArgument };
    guarded(|| {
        let (src, name) = match (read_str(source), read_str(name)) {
            (Ok(src), Ok(name)) => (src, name),
            (Err(status), _) | (_, Err(status)) => {
                return s.fail(status, "InvalidArgument", "bad source or name argument".into())
            }
        };
        match s.inner.load_str(src, name, None, &mut Vec::new()) {
            Ok(()) => AlgStatus::Ok,
            Err(e) => s.load_failed(e),
        }
    })
}

unsafe fn lookup(
    session: *mut AlgSession,
    name: *const c_char,
    out: *mut *mut c_char,
    f: impl FnOnce(&mut AlgSession, &str) -> Result<String, AlgStatus>,
) -> AlgStatus {
    let Some(s) = session.as_mut() else { return AlgStatus::NullArgument };
    if out.is_null() {
        return s.fail(AlgStatus::NullArgument, "InvalidArgument", "null output pointer".into());
    }
    *out = ptr::null_mut();
    guarded(|| {
        let name = match read_str(name) {
            Ok(n) => n,
            Err(status) => return s.fail(status, "InvalidArgument", "bad name argument".into()),
        };
        match f(s, name) {
            Ok(text) => {
                *out = to_cstring(text).into_raw();
                AlgStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Writes the type of definition `name` to `*out`.
///
/// # Safety
/// `session` must be a live handle, `name` NUL-terminated and `out` valid
/// for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn alg_session_type_of(
    session: *mut AlgSession,
    name: *const c_char,
    out: *mut *mut c_char,
) -> AlgStatus {
    lookup(session, name, out, |s, name| match s.inner.env().get(name) {
        Some(def) => Ok(pretty(&def.ty)),
        None => Err(s.fail(AlgStatus::NotFound, "NotFound", format!("no definition `{name}`"))),
    })
}

/// Writes the normal form of definition `name` to `*out`.
///
/// # Safety
/// As for [`alg_session_type_of`].
#[no_mangle]
pub unsafe extern "C" fn alg_session_eval(
    session: *mut AlgSession,
    name: *const c_char,
    out: *mut *mut c_char,
) -> AlgStatus {
    lookup(session, name, out, |s, name| match s.inner.eval(name) {
        Some(Ok(nf)) => Ok(pretty(&nf)),
        Some(Err(e)) => Err(s.fail(AlgStatus::FuelExhausted, "FuelExhausted", e.to_string())),
        None => Err(s.fail(AlgStatus::NotFound, "NotFound", format!("no definition `{name}`"))),
    })
}

/// Number of definitions in the session, 0 for NULL.
///
/// # Safety
/// `session` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alg_session_len(session: *const AlgSession) -> usize {
    session.as_ref().map_or(0, |s| s.inner.env().len())
}

/// Message of the last failure, or NULL. Valid until the next call on the
/// session.
///
/// # Safety
/// `session` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alg_session_last_error(session: *const AlgSession) -> *const c_char {
    session.as_ref().and_then(|s| s.last_error.as_ref()).map_or(ptr::null(), |m| m.as_ptr())
}

/// Error kind of the last failure, such as `GuardViolation`, or NULL.
///
/// # Safety
/// `session` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alg_session_last_error_kind(session: *const AlgSession) -> *const c_char {
    session.as_ref().and_then(|s| s.last_kind.as_ref()).map_or(ptr::null(), |m| m.as_ptr())
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn alg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn alg_status_name(status: AlgStatus) -> *const c_char {
    let name: &'static CStr = match status {
        AlgStatus::Ok => c"Ok",
        AlgStatus::NullArgument => c"NullArgument",
        AlgStatus::InvalidUtf8 => c"InvalidUtf8",
        AlgStatus::Io => c"Io",
        AlgStatus::Parse => c"Parse",
        AlgStatus::Scope => c"Scope",
        AlgStatus::Type => c"Type",
        AlgStatus::NotFound => c"NotFound",
        AlgStatus::FuelExhausted => c"FuelExhausted",
        AlgStatus::Panic => c"Panic",
    };
    name.as_ptr()
}
