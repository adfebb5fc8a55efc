//! C ABI over the `fpsrev` kernel.
//!
//! Every fallible call returns an [`FpsStatus`]; on failure the message is
//! available from [`fps_last_error`] on the same thread. Series live behind the
//! opaque [`FpsSeries`] handle and are released with [`fps_series_free`].
//! Strings handed out by the library are released with [`fps_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fpsrev::format::{emit_series, emit_series_json, parse_series};
use fpsrev::inversion::{invert, Method};
use fpsrev::{Error, MultiIndex, SeriesContext, TruncatedSeriesMap};

/// Result codes. Values 1 to 5 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpsStatus {
    Ok = 0,
    InvalidArgument = 1,
    FormatError = 2,
    PreconditionViolated = 3,
    VerificationFailed = 4,
    ResourceCap = 5,
    NullPointer = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpsMethod {
    Neumann = 0,
    Recurrence = 1,
    Fixpoint = 2,
}

impl From<FpsMethod> for Method {
    fn from(m: FpsMethod) -> Self {
        match m {
            FpsMethod::Neumann => Method::Neumann,
            FpsMethod::Recurrence => Method::Recurrence,
            FpsMethod::Fixpoint => Method::Fixpoint,
        }
    }
}

/// Opaque truncated series map.
pub struct FpsSeries(TruncatedSeriesMap);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nuls replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FpsStatus {
    match e.exit_code() {
        2 => FpsStatus::FormatError,
        3 => FpsStatus::PreconditionViolated,
        4 => FpsStatus::VerificationFailed,
        5 => FpsStatus::ResourceCap,
        _ => FpsStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), FpsStatus>) -> FpsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FpsStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            FpsStatus::Panic
        }
    }
}

fn kernel<T>(r: fpsrev::Result<T>) -> Result<T, FpsStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn series_ref<'a>(
    p: *const FpsSeries,
    name: &str,
) -> Result<&'a TruncatedSeriesMap, FpsStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        return Err(FpsStatus::NullPointer);
    }
    Ok(&(*p).0)
}

unsafe fn store<T>(out: *mut *mut T, value: *mut T) -> Result<(), FpsStatus> {
    if out.is_null() {
        set_error("output pointer is null".into());
        return Err(FpsStatus::NullPointer);
    }
    *out = value;
    Ok(())
}

unsafe fn store_series(out: *mut *mut FpsSeries, map: TruncatedSeriesMap) -> Result<(), FpsStatus> {
    if out.is_null() {
        set_error("output pointer is null".into());
        return Err(FpsStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(FpsSeries(map)));
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, s: String) -> Result<(), FpsStatus> {
    let c = CString::new(s).map_err(|_| {
        set_error("string contains a nul byte".into());
        FpsStatus::InvalidArgument
    })?;
    store(out, c.into_raw())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn fps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a series handle. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fps_series_free(s: *mut FpsSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Parses the text series format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fps_series_parse(
    text: *const c_char,
    out: *mut *mut FpsSeries,
) -> FpsStatus {
    guard(|| {
        if text.is_null() {
            set_error("text is null".into());
            return Err(FpsStatus::NullPointer);
        }
        let text = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("text is not valid UTF-8".into());
            FpsStatus::FormatError
        })?;
        store_series(out, kernel(parse_series(text))?)
    })
}

/// The identity map in `nvars` variables truncated at `degree`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fps_series_identity(
    nvars: usize,
    degree: u32,
    out: *mut *mut FpsSeries,
) -> FpsStatus {
    guard(|| {
        let ctx = kernel(SeriesContext::new(nvars, degree))?;
        store_series(out, TruncatedSeriesMap::identity(ctx))
    })
}

/// Emits canonical text, or JSON when `json` is nonzero.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fps_series_emit(
    s: *const FpsSeries,
    json: i32,
    out: *mut *mut c_char,
) -> FpsStatus {
    guard(|| {
        let map = series_ref(s, "series")?;
        let text = if json != 0 {
            emit_series_json(map)
        } else {
            emit_series(map)
        };
        store_string(out, text)
    })
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fps_series_nvars(s: *const FpsSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.nvars())
}

/// Truncation degree, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fps_series_degree_cap(s: *const FpsSeries) -> u32 {
    s.as_ref().map_or(0, |s| s.0.degree_cap())
}

/// Coefficient of `x^exponent` in 1-based component `comp`, as `"p/q"` or an
/// integer string.
///
/// # Safety
/// `s` must be a live handle, `exponent` must point to `len` values, `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn fps_series_coeff(
    s: *const FpsSeries,
    comp: usize,
    exponent: *const u32,
    len: usize,
    out: *mut *mut c_char,
) -> FpsStatus {
    guard(|| {
        let map = series_ref(s, "series")?;
        if exponent.is_null() && len > 0 {
            set_error("exponent is null".into());
            return Err(FpsStatus::NullPointer);
        }
        if comp == 0 || comp > map.nvars() || len != map.nvars() {
            set_error(format!(
                "component {comp} with {len} exponents does not fit {} variables",
                map.nvars()
            ));
            return Err(FpsStatus::InvalidArgument);
        }
        let exps = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(exponent, len)
        };
        let c = map.coeff(comp - 1, &MultiIndex::from_slice(exps));
        store_string(out, c.to_string())
    })
}

/// Nonzero when both handles hold identical maps in the same context.
///
/// # Safety
/// Both must be null or live handles.
#[no_mangle]
pub unsafe extern "C" fn fps_series_equal(a: *const FpsSeries, b: *const FpsSeries) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => i32::from(a.0 == b.0),
        _ => 0,
    }
}

/// `outer ∘ inner`.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fps_compose(
    outer: *const FpsSeries,
    inner: *const FpsSeries,
    out: *mut *mut FpsSeries,
) -> FpsStatus {
    guard(|| {
        let outer = series_ref(outer, "outer")?;
        let inner = series_ref(inner, "inner")?;
        store_series(out, kernel(outer.compose(inner))?)
    })
}

/// `times`-fold self-composition.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fps_iterate(
    s: *const FpsSeries,
    times: usize,
    out: *mut *mut FpsSeries,
) -> FpsStatus {
    guard(|| {
        let map = series_ref(s, "series")?;
        store_series(out, map.iterate(times))
    })
}

/// Formal inverse of a map with identity linear part.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fps_invert(
    s: *const FpsSeries,
    method: FpsMethod,
    out: *mut *mut FpsSeries,
) -> FpsStatus {
    guard(|| {
        let map = series_ref(s, "series")?;
        store_series(out, kernel(invert(map, method.into()))?)
    })
}
