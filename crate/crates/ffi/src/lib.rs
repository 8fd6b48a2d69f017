//! C interface to `fa-cycles`.
//!
//! Chains and measures are opaque handles owned by the caller and released
//! with `fac_chain_free` / `fac_measure_free`. Strings returned through out
//! parameters are heap allocated and released with `fac_string_free`.
//! Every function returns a `FacStatus`; on failure the message is available
//! from `fac_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fa_cycles::chain_file::{self, ChainFile};
use fa_cycles::cycles;
use fa_cycles::rational;
use fa_cycles::{Measure, SetExpr};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidChain = 3,
    InvalidMeasure = 4,
    InvalidSet = 5,
    KernelError = 6,
    MeasureError = 7,
    CycleError = 8,
    UnknownBundle = 9,
    Panic = 10,
}

/// A loaded chain file.
pub struct FacChain(ChainFile);

/// A finite combination of atoms and one-sided germs.
pub struct FacMeasure(Measure);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(FacStatus, String);

type Res<T> = Result<T, Fail>;

fn fail(status: FacStatus, e: impl ToString) -> Fail {
    Fail(status, e.to_string())
}

fn guard(body: impl FnOnce() -> Res<()>) -> FacStatus {
    let (status, message) = match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => (FacStatus::Ok, None),
        Ok(Err(Fail(s, m))) => (s, Some(m)),
        Err(_) => (FacStatus::Panic, Some("internal panic".to_string())),
    };
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() =
            message.map(|m| CString::new(m.replace('\0', " ")).unwrap_or_default());
    });
    status
}

unsafe fn text<'a>(p: *const c_char) -> Res<&'a str> {
    if p.is_null() {
        return Err(fail(FacStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(FacStatus::InvalidUtf8, e))
}

unsafe fn handle<'a, T>(p: *const T) -> Res<&'a T> {
    p.as_ref()
        .ok_or_else(|| fail(FacStatus::NullPointer, "null handle"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Res<()> {
    if out.is_null() {
        return Err(fail(FacStatus::NullPointer, "null out parameter"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Res<()> {
    if out.is_null() {
        return Err(fail(FacStatus::NullPointer, "null out parameter"));
    }
    *out = CString::new(s)
        .map_err(|e| fail(FacStatus::InvalidUtf8, e))?
        .into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Free with `fac_string_free`.
#[no_mangle]
pub extern "C" fn fac_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .clone()
            .map_or(ptr::null_mut(), CString::into_raw)
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a chain file from TOML text.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_chain_from_toml(
    toml: *const c_char,
    out: *mut *mut FacChain,
) -> FacStatus {
    guard(|| {
        let file = ChainFile::parse(text(toml)?).map_err(|e| fail(FacStatus::InvalidChain, e))?;
        put(out, FacChain(file))
    })
}

/// Loads one of the chains shipped with the library.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_chain_bundled(
    name: *const c_char,
    out: *mut *mut FacChain,
) -> FacStatus {
    guard(|| {
        let name = text(name)?;
        let source = chain_file::bundled(name).ok_or_else(|| {
            fail(
                FacStatus::UnknownBundle,
                format!("no bundled chain `{name}`"),
            )
        })?;
        let file = ChainFile::parse(source).map_err(|e| fail(FacStatus::InvalidChain, e))?;
        put(out, FacChain(file))
    })
}

/// # Safety
/// `chain` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fac_chain_free(chain: *mut FacChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Writes `A^n mu` to `out`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_chain_apply(
    chain: *const FacChain,
    mu: *const FacMeasure,
    n: usize,
    out: *mut *mut FacMeasure,
) -> FacStatus {
    guard(|| {
        let k = &handle(chain)?.0.kernel;
        let image = k
            .apply_n(&handle(mu)?.0, n)
            .map_err(|e| fail(FacStatus::KernelError, e))?;
        put(out, FacMeasure(image))
    })
}

/// All cycles of period at most `max_period`, as a JSON array.
///
/// # Safety
/// `chain` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_chain_cycles_json(
    chain: *const FacChain,
    max_period: usize,
    out: *mut *mut c_char,
) -> FacStatus {
    guard(|| {
        let found = cycles::enumerate_cycles(&handle(chain)?.0.kernel, max_period)
            .map_err(|e| fail(FacStatus::CycleError, e))?;
        put_string(
            out,
            serde_json::to_string(&found).map_err(|e| fail(FacStatus::CycleError, e))?,
        )
    })
}

/// Parses a measure written like `1/2*delta(1) + 1/2*germ(0+)`.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_measure_parse(
    src: *const c_char,
    out: *mut *mut FacMeasure,
) -> FacStatus {
    guard(|| {
        let mu: Measure = text(src)?
            .parse()
            .map_err(|e| fail(FacStatus::InvalidMeasure, e))?;
        put(out, FacMeasure(mu))
    })
}

/// Parses a measure from its JSON wire form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_measure_from_json(
    json: *const c_char,
    out: *mut *mut FacMeasure,
) -> FacStatus {
    guard(|| {
        let mu: Measure =
            serde_json::from_str(text(json)?).map_err(|e| fail(FacStatus::InvalidMeasure, e))?;
        put(out, FacMeasure(mu))
    })
}

/// # Safety
/// `mu` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_measure_to_json(
    mu: *const FacMeasure,
    out: *mut *mut c_char,
) -> FacStatus {
    guard(|| {
        let json = serde_json::to_string(&handle(mu)?.0)
            .map_err(|e| fail(FacStatus::InvalidMeasure, e))?;
        put_string(out, json)
    })
}

/// # Safety
/// `mu` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_measure_to_string(
    mu: *const FacMeasure,
    out: *mut *mut c_char,
) -> FacStatus {
    guard(|| put_string(out, handle(mu)?.0.to_string()))
}

/// # Safety
/// `mu` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fac_measure_free(mu: *mut FacMeasure) {
    if !mu.is_null() {
        drop(Box::from_raw(mu));
    }
}

/// Mass of `set` (e.g. `"(0,1) U {2}"`) as exact `p/q` text.
///
/// # Safety
/// `mu` must be live; `set` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fac_measure_evaluate(
    mu: *const FacMeasure,
    set: *const c_char,
    out: *mut *mut c_char,
) -> FacStatus {
    guard(|| {
        let set: SetExpr = text(set)?
            .parse()
            .map_err(|e| fail(FacStatus::InvalidSet, e))?;
        put_string(out, rational::to_text(&handle(mu)?.0.evaluate(&set)))
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_measure_meet(
    a: *const FacMeasure,
    b: *const FacMeasure,
    out: *mut *mut FacMeasure,
) -> FacStatus {
    guard(|| {
        let m = handle(a)?
            .0
            .meet(&handle(b)?.0)
            .map_err(|e| fail(FacStatus::MeasureError, e))?;
        put(out, FacMeasure(m))
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_measure_join(
    a: *const FacMeasure,
    b: *const FacMeasure,
    out: *mut *mut FacMeasure,
) -> FacStatus {
    guard(|| {
        let m = handle(a)?
            .0
            .join(&handle(b)?.0)
            .map_err(|e| fail(FacStatus::MeasureError, e))?;
        put(out, FacMeasure(m))
    })
}

/// Splits `mu` into its countably additive and purely finitely additive parts.
///
/// # Safety
/// `mu` must be live; both out parameters must be writable.
#[no_mangle]
pub unsafe extern "C" fn fac_measure_split(
    mu: *const FacMeasure,
    out_ca: *mut *mut FacMeasure,
    out_pfa: *mut *mut FacMeasure,
) -> FacStatus {
    guard(|| {
        if out_ca.is_null() || out_pfa.is_null() {
            return Err(fail(FacStatus::NullPointer, "null out parameter"));
        }
        let (ca, pfa) = handle(mu)?.0.yosida_hewitt_split();
        put(out_ca, FacMeasure(ca))?;
        put(out_pfa, FacMeasure(pfa))
    })
}
