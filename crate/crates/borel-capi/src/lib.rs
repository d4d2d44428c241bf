//! C ABI for the `borel` crate.
//!
//! Handles are opaque pointers; structured data crosses the boundary as
//! JSON strings allocated here and released with `borel_string_free`.
//! Every fallible call returns a `BorelStatus`; the message for the most
//! recent failure on the current thread is available through
//! `borel_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use borel::derivation::derivation_report;
use borel::extension::{
    build_extension, canonical_report, canonicalize_with_options, classify_codim_one,
    ExtensionSpec, FieldTag,
};
use borel::nilradical::build_nilradical;
use borel::roots::Family;
use borel::{NilpotentAlgebra, RootSystem};

/// Result code for every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum BorelStatus {
    Ok = 0,
    /// Null pointer, malformed UTF-8, or an unknown family/field tag.
    InvalidArgument = 1,
    /// Structurally well-formed input that fails a mathematical check.
    ValidationFailed = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: BorelStatus, msg: &str) -> BorelStatus {
    set_error(msg);
    status
}

/// Message for the most recent failure on this thread, or null if none.
/// The returned string is owned by the caller; release it with
/// `borel_string_free`.
#[no_mangle]
pub extern "C" fn borel_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is accepted.
#[no_mangle]
pub extern "C" fn borel_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe { drop(CString::from_raw(s)) };
    }
}

/// Opaque handle: a root system together with its Borel nilradical.
pub struct BorelSystem {
    rs: RootSystem,
    alg: NilpotentAlgebra,
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, BorelStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(BorelStatus::InvalidArgument);
    }
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        BorelStatus::InvalidArgument
    })
}

fn emit(out: *mut *mut c_char, json: serde_json::Value) -> BorelStatus {
    if out.is_null() {
        return fail(BorelStatus::InvalidArgument, "null output pointer");
    }
    let c = CString::new(json.to_string()).unwrap();
    unsafe { *out = c.into_raw() };
    BorelStatus::Ok
}

/// Builds the root system and nilradical for `family` (e.g. "A", "G2")
/// at `rank`. On success writes a handle to `out`; release it with
/// `borel_system_free`.
///
/// # Safety
/// `family` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn borel_system_new(
    family: *const c_char,
    rank: usize,
    out: *mut *mut BorelSystem,
) -> BorelStatus {
    let family = match unsafe { read_str(family) } {
        Ok(s) => s,
        Err(st) => return st,
    };
    if out.is_null() {
        return fail(BorelStatus::InvalidArgument, "null output pointer");
    }
    let fam = match Family::parse(family, Some(rank)) {
        Ok(f) => f,
        Err(e) => return fail(BorelStatus::InvalidArgument, &e.to_string()),
    };
    let rs = RootSystem::build(fam);
    let alg = build_nilradical(&rs);
    unsafe { *out = Box::into_raw(Box::new(BorelSystem { rs, alg })) };
    BorelStatus::Ok
}

/// Releases a handle from `borel_system_new`. Null is accepted.
///
/// # Safety
/// `h` must be null or a pointer previously returned by
/// `borel_system_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn borel_system_free(h: *mut BorelSystem) {
    if !h.is_null() {
        unsafe { drop(Box::from_raw(h)) };
    }
}

unsafe fn deref<'a>(h: *const BorelSystem) -> Result<&'a BorelSystem, BorelStatus> {
    if h.is_null() {
        set_error("null handle");
        return Err(BorelStatus::InvalidArgument);
    }
    Ok(unsafe { &*h })
}

/// Root-system data (Cartan matrix, positive roots, highest root, s) as
/// JSON.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn borel_system_roots_json(
    h: *const BorelSystem,
    out: *mut *mut c_char,
) -> BorelStatus {
    let sys = match unsafe { deref(h) } {
        Ok(s) => s,
        Err(st) => return st,
    };
    emit(out, sys.rs.to_json())
}

/// Nilradical bracket table and series data as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn borel_system_nilradical_json(
    h: *const BorelSystem,
    out: *mut *mut c_char,
) -> BorelStatus {
    let sys = match unsafe { deref(h) } {
        Ok(s) => s,
        Err(st) => return st,
    };
    emit(out, sys.alg.to_json())
}

/// Derivation-algebra report as JSON; `dim_bound` caps the solver.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn borel_system_derivations_json(
    h: *const BorelSystem,
    dim_bound: usize,
    out: *mut *mut c_char,
) -> BorelStatus {
    let sys = match unsafe { deref(h) } {
        Ok(s) => s,
        Err(st) => return st,
    };
    match derivation_report(&sys.rs, &sys.alg, dim_bound) {
        Ok(v) => emit(out, v),
        Err(e) => fail(BorelStatus::ValidationFailed, &e.to_string()),
    }
}

/// Canonical one-extension families over `field` ("complex" or "real"),
/// as a JSON array.
///
/// # Safety
/// `h` must be a live handle, `field` a valid NUL-terminated string, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn borel_system_classify_json(
    h: *const BorelSystem,
    field: *const c_char,
    out: *mut *mut c_char,
) -> BorelStatus {
    let sys = match unsafe { deref(h) } {
        Ok(s) => s,
        Err(st) => return st,
    };
    let field = match unsafe { read_str(field) } {
        Ok(s) => s,
        Err(st) => return st,
    };
    let field = match FieldTag::parse(field) {
        Ok(f) => f,
        Err(e) => return fail(BorelStatus::InvalidArgument, &e.to_string()),
    };
    match classify_codim_one(&sys.rs, field) {
        Ok(v) => emit(out, serde_json::Value::Array(v)),
        Err(e) => fail(BorelStatus::ValidationFailed, &e.to_string()),
    }
}

fn parse_spec(text: &str) -> Result<ExtensionSpec, (BorelStatus, String)> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| (BorelStatus::InvalidArgument, e.to_string()))?;
    ExtensionSpec::from_json(&v).map_err(|e| (BorelStatus::ValidationFailed, e.to_string()))
}

/// Builds the solvable extension described by `spec_json` and writes a
/// JSON report with its dimension and certificates.
///
/// # Safety
/// `spec_json` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn borel_extend_json(
    spec_json: *const c_char,
    out: *mut *mut c_char,
) -> BorelStatus {
    let text = match unsafe { read_str(spec_json) } {
        Ok(s) => s,
        Err(st) => return st,
    };
    let spec = match parse_spec(text) {
        Ok(s) => s,
        Err((st, msg)) => return fail(st, &msg),
    };
    match build_extension(&spec) {
        Ok(alg) => emit(
            out,
            serde_json::json!({
                "dim": alg.table.dim,
                "certificates": {
                    "jacobi": alg.certificates.jacobi,
                    "commutation": alg.certificates.commutation,
                    "nilradical": alg.certificates.nilradical,
                    "solvable": alg.certificates.solvable,
                },
            }),
        ),
        Err(e) => fail(BorelStatus::ValidationFailed, &e.to_string()),
    }
}

/// Reduces the extension described by `spec_json` to canonical form and
/// writes the canonical report as JSON. With `diagram_autos` nonzero the
/// result is additionally minimized over diagram automorphisms.
///
/// # Safety
/// `spec_json` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn borel_canonicalize_json(
    spec_json: *const c_char,
    diagram_autos: i32,
    out: *mut *mut c_char,
) -> BorelStatus {
    let text = match unsafe { read_str(spec_json) } {
        Ok(s) => s,
        Err(st) => return st,
    };
    let spec = match parse_spec(text) {
        Ok(s) => s,
        Err((st, msg)) => return fail(st, &msg),
    };
    let canonical = match canonicalize_with_options(&spec, diagram_autos != 0) {
        Ok(c) => c,
        Err(e) => return fail(BorelStatus::ValidationFailed, &e.to_string()),
    };
    match canonical_report(&canonical) {
        Ok(v) => emit(out, v),
        Err(e) => fail(BorelStatus::ValidationFailed, &e.to_string()),
    }
}
