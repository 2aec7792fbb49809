//! C ABI over the `ihomog` operations.
//!
//! Instances are opaque handles. Every call returns an [`IhomogStatus`]; reports come back as
//! NUL-terminated JSON strings owned by the caller and released with [`ihomog_string_free`].
//! On failure the message is available from [`ihomog_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ihomog::app::{self, Outcome, RealizeOptions, Status};
use ihomog::{Error, InstanceFile};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IhomogStatus {
    /// All conditions hold; the report is written.
    Ok = 0,
    /// A condition fails; the report (with witness) is still written.
    ConditionsFailed = 1,
    /// The JSON, a rational, a dimension or a parameter is invalid.
    InvalidInput = 2,
    NullPointer = 3,
    /// The built algebra has a center, so the model is not realized.
    Unsupported = 4,
    /// A panic was caught at the boundary.
    Internal = 5,
}

/// Opaque parsed instance.
pub struct IhomogInstance {
    inner: InstanceFile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NUL removed").into_raw()
}

/// Runs `f` behind the panic barrier and turns library errors into status codes.
fn guard(f: impl FnOnce() -> Result<IhomogStatus, Error>) -> IhomogStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => {
            set_error(e.to_string());
            IhomogStatus::InvalidInput
        }
        Err(_) => {
            set_error("internal error");
            IhomogStatus::Internal
        }
    }
}

fn status_of(out: &Outcome) -> IhomogStatus {
    match out.status {
        Status::Pass => IhomogStatus::Ok,
        Status::ConditionFailed => {
            if let Some(e) = out.report.get("error").and_then(|v| v.as_str()) {
                set_error(e);
            }
            IhomogStatus::ConditionsFailed
        }
        Status::InputError => IhomogStatus::InvalidInput,
    }
}

unsafe fn instance<'a>(p: *const IhomogInstance) -> Option<&'a InstanceFile> {
    p.as_ref().map(|i| &i.inner)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Error> {
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::Instance("input is not valid UTF-8".into()))
}

fn null() -> IhomogStatus {
    set_error("null pointer argument");
    IhomogStatus::NullPointer
}

/// Parses and validates an instance from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ihomog_instance_from_json(json: *const c_char, out: *mut *mut IhomogInstance) -> IhomogStatus {
    if json.is_null() || out.is_null() {
        return null();
    }
    *out = ptr::null_mut();
    guard(|| {
        let inner = InstanceFile::from_json_str(read_str(json)?)?;
        *out = Box::into_raw(Box::new(IhomogInstance { inner }));
        Ok(IhomogStatus::Ok)
    })
}

/// Loads a bundled corpus instance by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ihomog_instance_from_corpus(name: *const c_char, out: *mut *mut IhomogInstance) -> IhomogStatus {
    if name.is_null() || out.is_null() {
        return null();
    }
    *out = ptr::null_mut();
    guard(|| {
        let inner = ihomog::corpus::load(read_str(name)?)?;
        *out = Box::into_raw(Box::new(IhomogInstance { inner }));
        Ok(IhomogStatus::Ok)
    })
}

/// Serializes the instance back to JSON.
///
/// # Safety
/// `inst` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ihomog_instance_to_json(inst: *const IhomogInstance, out: *mut *mut c_char) -> IhomogStatus {
    let (Some(i), false) = (instance(inst), out.is_null()) else {
        return null();
    };
    guard(|| {
        *out = to_c(i.to_json_pretty());
        Ok(IhomogStatus::Ok)
    })
}

/// # Safety
/// `inst` must come from this library (or be null) and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ihomog_instance_free(inst: *mut IhomogInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Runs the certificate; `use_generators` adds the group-level checks.
///
/// # Safety
/// `inst` must come from this library and `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ihomog_check(
    inst: *const IhomogInstance,
    use_generators: bool,
    out_json: *mut *mut c_char,
) -> IhomogStatus {
    let (Some(i), false) = (instance(inst), out_json.is_null()) else {
        return null();
    };
    *out_json = ptr::null_mut();
    guard(|| {
        let out = app::cmd_check(i, use_generators)?;
        *out_json = to_c(out.json());
        Ok(status_of(&out))
    })
}

/// Builds the Lie algebra; a failed Jacobi identity or a membership failure gives
/// `ConditionsFailed` with the report still written.
///
/// # Safety
/// `inst` must come from this library and `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ihomog_build(inst: *const IhomogInstance, out_json: *mut *mut c_char) -> IhomogStatus {
    let (Some(i), false) = (instance(inst), out_json.is_null()) else {
        return null();
    };
    *out_json = ptr::null_mut();
    guard(|| {
        let out = app::cmd_build(i)?;
        *out_json = to_c(out.json());
        Ok(status_of(&out))
    })
}

/// Removes torsion. Writes the note to `out_note` and, on success, a new handle to
/// `out_reduced` (left null when the torsion is not invariant).
///
/// # Safety
/// `inst` must come from this library; both out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ihomog_reduce_torsion(
    inst: *const IhomogInstance,
    out_note: *mut *mut c_char,
    out_reduced: *mut *mut IhomogInstance,
) -> IhomogStatus {
    let (Some(i), false, false) = (instance(inst), out_note.is_null(), out_reduced.is_null()) else {
        return null();
    };
    *out_note = ptr::null_mut();
    *out_reduced = ptr::null_mut();
    guard(|| {
        let (out, reduced) = app::cmd_reduce(i)?;
        *out_note = to_c(out.json());
        if let Some(inner) = reduced {
            *out_reduced = Box::into_raw(Box::new(IhomogInstance { inner }));
        }
        Ok(status_of(&out))
    })
}

/// Numerical realization. Non-positive `fd_step` or `tolerance` selects the default.
///
/// # Safety
/// `inst` must come from this library and `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ihomog_realize(
    inst: *const IhomogInstance,
    fd_step: f64,
    tolerance: f64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> IhomogStatus {
    let (Some(i), false) = (instance(inst), out_json.is_null()) else {
        return null();
    };
    *out_json = ptr::null_mut();
    guard(|| {
        let d = RealizeOptions::default();
        let opts = RealizeOptions {
            fd_step: if fd_step > 0.0 { fd_step } else { d.fd_step },
            tolerance: if tolerance > 0.0 { tolerance } else { d.tolerance },
            seed,
        };
        let out = app::cmd_realize(i, opts)?;
        *out_json = to_c(out.json());
        if out.report.get("supported").and_then(|v| v.as_bool()) == Some(false) {
            if let Some(r) = out.report.get("reason").and_then(|v| v.as_str()) {
                set_error(r);
            }
            return Ok(IhomogStatus::Unsupported);
        }
        Ok(status_of(&out))
    })
}

/// # Safety
/// `s` must be a string returned by this library (or null).
#[no_mangle]
pub unsafe extern "C" fn ihomog_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn ihomog_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
