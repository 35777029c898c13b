//! C ABI over `gatesplit`.
//!
//! Every fallible call returns a [`GsStatus`] and writes its result through an
//! out-pointer. On failure the message is kept per thread and can be read with
//! [`gs_last_error_message`]. Handles are opaque and must be released with the
//! matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gatesplit::gate_io::{fixture, gate_from_json};
use gatesplit::linalg::ComplexMatrix;
use gatesplit::spectral::{dmax_to_epsilon, epsilon_to_dmax, gate_fidelity_min};
use gatesplit::{approx_separate, Error, ProductAnsatz, PsoConfig, SeparationResult, UnitaryGate};

/// Status codes. The numeric values match the CLI exit codes where both exist.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Data = 3,
    Numerical = 4,
    Panic = 5,
}

/// A unitary gate with its subsystem partition.
pub struct GsGate(UnitaryGate);

/// The outcome of a separation search.
pub struct GsSeparation(SeparationResult);

/// Minimum gate fidelity between two gates.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GsFidelity {
    pub f_min: f64,
    pub d_max: f64,
    /// Whether the chord formula applies, i.e. the spectrum fits in a half-plane.
    pub formula_valid: bool,
    pub epsilon_achieved: f64,
}

/// Swarm settings for [`gs_separate`]. Pass NULL to use the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GsPsoOptions {
    pub swarm_size: usize,
    pub iterations: usize,
    pub restarts: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GsStatus {
    match e {
        e if e.is_numerical() => GsStatus::Numerical,
        Error::InvalidConfig(_) | Error::OutOfRange { .. } => GsStatus::InvalidArgument,
        _ => GsStatus::Data,
    }
}

/// Runs `f`, records any error or panic, and clears the last error on success.
fn guard(f: impl FnOnce() -> Result<(), (GsStatus, String)>) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GsStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (GsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (GsStatus, String) {
    (GsStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (GsStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (GsStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn read_slice<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], (GsStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn gate_ref<'a>(p: *const GsGate, what: &str) -> Result<&'a UnitaryGate, (GsStatus, String)> {
    p.as_ref().map(|g| &g.0).ok_or_else(|| null(what))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Built-in gate by name: `cnot`, `swap`, `cz` or `identity4`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_gate_fixture(name: *const c_char, out: *mut *mut GsGate) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = fixture(read_str(name, "name")?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GsGate(g)));
        Ok(())
    })
}

/// Parses a gate document `{"dims": [...], "matrix": [[{"re":..,"im":..}, ...], ...]}`.
/// Slightly non-unitary input is projected onto the nearest unitary.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_gate_from_json(json: *const c_char, out: *mut *mut GsGate) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let loaded = gate_from_json(read_str(json, "json")?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GsGate(loaded.gate)));
        Ok(())
    })
}

/// Builds a gate from row-major real and imaginary parts (`dim * dim` each)
/// and a partition whose product is `dim`. The matrix must be unitary to 1e-8.
///
/// # Safety
/// `dims` must point to `n_dims` values, `re` and `im` to `len` values each.
#[no_mangle]
pub unsafe extern "C" fn gs_gate_from_parts(
    dims: *const usize,
    n_dims: usize,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut GsGate,
) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let dims = read_slice(dims, n_dims, "dims")?;
        let re = read_slice(re, len, "re")?;
        let im = read_slice(im, len, "im")?;
        let dim = (len as f64).sqrt().round() as usize;
        if dim * dim != len || len == 0 {
            return Err((GsStatus::InvalidArgument, format!("{len} entries do not form a square matrix")));
        }
        let pairs: Vec<(f64, f64)> = re.iter().copied().zip(im.iter().copied()).collect();
        let m = ComplexMatrix::from_pairs(dim, &pairs).map_err(lib_err)?;
        let g = UnitaryGate::new(m, dims.to_vec()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GsGate(g)));
        Ok(())
    })
}

/// # Safety
/// `gate` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn gs_gate_free(gate: *mut GsGate) {
    if !gate.is_null() {
        drop(Box::from_raw(gate));
    }
}

/// Total Hilbert-space dimension, or 0 for NULL.
///
/// # Safety
/// `gate` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_gate_dim(gate: *const GsGate) -> usize {
    gate.as_ref().map_or(0, |g| g.0.dim())
}

/// Serializes a gate to JSON. Free the string with [`gs_string_free`].
///
/// # Safety
/// `gate` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_gate_to_json(gate: *const GsGate, out: *mut *mut c_char) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = gate_ref(gate, "gate")?;
        *out = to_c_string(gatesplit::gate_io::gate_to_json(g));
        Ok(())
    })
}

/// Minimum fidelity of `b` as an approximation of `a` over all pure inputs.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_gate_fidelity(a: *const GsGate, b: *const GsGate, out: *mut GsFidelity) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = gate_fidelity_min(gate_ref(a, "a")?, gate_ref(b, "b")?).map_err(lib_err)?;
        *out = GsFidelity {
            f_min: r.f_min,
            d_max: r.d_max,
            formula_valid: r.formula_valid,
            epsilon_achieved: r.epsilon_achieved,
        };
        Ok(())
    })
}

/// Largest spectral chord compatible with infidelity `epsilon` in `[0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_epsilon_to_dmax(epsilon: f64, out: *mut f64) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = epsilon_to_dmax(epsilon).map_err(lib_err)?;
        Ok(())
    })
}

/// Infidelity implied by a spectral chord `d_max` in `[0, 2]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_dmax_to_epsilon(d_max: f64, out: *mut f64) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = dmax_to_epsilon(d_max).map_err(lib_err)?;
        Ok(())
    })
}

/// Searches for local unitaries on the subsystems `dims` whose tensor product
/// best approximates `target`. `options` may be NULL for the default swarm.
///
/// # Safety
/// `target` must be a live handle, `dims` must point to `n_dims` values,
/// `options` must be NULL or valid, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_separate(
    target: *const GsGate,
    dims: *const usize,
    n_dims: usize,
    seed: u64,
    options: *const GsPsoOptions,
    out: *mut *mut GsSeparation,
) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let dims = read_slice(dims, n_dims, "dims")?.to_vec();
        let gate = gate_ref(target, "target")?.clone().with_partition(dims.clone()).map_err(lib_err)?;
        let ansatz = ProductAnsatz::new(&dims).map_err(lib_err)?;
        let mut cfg = PsoConfig::default().with_seed(seed);
        if let Some(o) = options.as_ref() {
            cfg.swarm_size = o.swarm_size;
            cfg.iterations = o.iterations;
            cfg.restarts = o.restarts;
        }
        let r = approx_separate(&gate, "target", &ansatz, &cfg).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GsSeparation(r)));
        Ok(())
    })
}

/// # Safety
/// `sep` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_separation_f_min(sep: *const GsSeparation) -> f64 {
    sep.as_ref().map_or(f64::NAN, |s| s.0.f_min)
}

/// # Safety
/// `sep` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_separation_d_max(sep: *const GsSeparation) -> f64 {
    sep.as_ref().map_or(f64::NAN, |s| s.0.d_max)
}

/// The optimized product gate as a new handle.
///
/// # Safety
/// `sep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_separation_product(sep: *const GsSeparation, out: *mut *mut GsGate) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = sep.as_ref().ok_or_else(|| null("sep"))?;
        *out = Box::into_raw(Box::new(GsGate(s.0.product.clone())));
        Ok(())
    })
}

/// Full result as JSON. Free the string with [`gs_string_free`].
///
/// # Safety
/// `sep` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gs_separation_to_json(sep: *const GsSeparation, out: *mut *mut c_char) -> GsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = sep.as_ref().ok_or_else(|| null("sep"))?;
        let text = serde_json::to_string_pretty(&s.0).map_err(|e| lib_err(e.into()))?;
        *out = to_c_string(text);
        Ok(())
    })
}

/// # Safety
/// `sep` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn gs_separation_free(sep: *mut GsSeparation) {
    if !sep.is_null() {
        drop(Box::from_raw(sep));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn gs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
