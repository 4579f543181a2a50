//! C ABI over `disco-core`.
//!
//! Objects cross the boundary as opaque handles created by `disco_*_new` /
//! `disco_*_build` and released with the matching `*_free`. Every fallible
//! call returns a [`DiscoStatus`]; results are written through out-pointers
//! only on success. The most recent error message for the calling thread is
//! available from [`disco_last_error`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use disco_core::discrepancy::{compute, s_ersatz, MeasureKind};
use disco_core::metafunction::{build_metafunction, MetaFunction};
use disco_core::sampling::{generate, SamplerKind};
use disco_core::sensitivity::{discrepancy_importance, jansen_total_order, savage_scores};
use disco_core::{Error, Matrix};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscoStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Shape = 3,
    Capacity = 4,
    Usage = 5,
    Undefined = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscoMeasure {
    StarL2 = 0,
    L2 = 1,
    Modified = 2,
    Centered = 3,
    Symmetric = 4,
    Wraparound = 5,
    Ersatz = 6,
}

impl From<DiscoMeasure> for MeasureKind {
    fn from(m: DiscoMeasure) -> Self {
        match m {
            DiscoMeasure::StarL2 => MeasureKind::StarL2,
            DiscoMeasure::L2 => MeasureKind::L2,
            DiscoMeasure::Modified => MeasureKind::Modified,
            DiscoMeasure::Centered => MeasureKind::Centered,
            DiscoMeasure::Symmetric => MeasureKind::Symmetric,
            DiscoMeasure::Wraparound => MeasureKind::WrapAround,
            DiscoMeasure::Ersatz => MeasureKind::SErsatz,
        }
    }
}

/// Row-major matrix of doubles.
pub struct DiscoMatrix(Matrix);

/// Randomized test function.
pub struct DiscoMetaFunction(MetaFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DiscoStatus {
    match e {
        Error::Domain(_) => DiscoStatus::Domain,
        Error::Shape { .. } => DiscoStatus::Shape,
        Error::Capacity { .. } => DiscoStatus::Capacity,
        Error::Usage(_) => DiscoStatus::Usage,
        Error::Undefined(_) => DiscoStatus::Undefined,
        Error::Io(_) => DiscoStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> DiscoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DiscoStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            DiscoStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            DiscoStatus::Panic
        }
    }
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a>(p: *mut f64, len: usize, what: &'static str) -> Result<&'a mut [f64], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

fn out<T>(p: *mut T, what: &'static str) -> Result<*mut T, Fail> {
    if p.is_null() {
        Err(Fail::Null(what))
    } else {
        Ok(p)
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn disco_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Copies `rows * cols` row-major values into a new matrix.
///
/// # Safety
/// `data` must point to `rows * cols` readable doubles; `out_matrix` must be writable.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_new(
    data: *const f64,
    rows: usize,
    cols: usize,
    out_matrix: *mut *mut DiscoMatrix,
) -> DiscoStatus {
    guard(|| {
        let dst = out(out_matrix, "out_matrix")?;
        let len = rows.checked_mul(cols).ok_or(Error::Domain("rows * cols overflows".into()))?;
        let values = slice(data, len, "data")?.to_vec();
        let m = Matrix::new(rows, cols, values)?;
        *dst = Box::into_raw(Box::new(DiscoMatrix(m)));
        Ok(())
    })
}

/// Draws `n` points in `[0, 1)^d`: random when `sobol == 0`, otherwise
/// Sobol' (Owen-scrambled when `scramble != 0`).
///
/// # Safety
/// `out_matrix` must be writable.
#[no_mangle]
pub unsafe extern "C" fn disco_sample(
    sobol: i32,
    scramble: i32,
    seed: u64,
    n: usize,
    d: usize,
    out_matrix: *mut *mut DiscoMatrix,
) -> DiscoStatus {
    guard(|| {
        let dst = out(out_matrix, "out_matrix")?;
        let kind = if sobol != 0 {
            SamplerKind::sobol(seed, scramble != 0)
        } else {
            SamplerKind::random(seed)
        };
        *dst = Box::into_raw(Box::new(DiscoMatrix(generate(kind, n, d)?.into_inner())));
        Ok(())
    })
}

/// # Safety
/// `m` must be a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_rows(m: *const DiscoMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_cols(m: *const DiscoMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Copies the row-major contents into `dst`, which holds `len` doubles.
///
/// # Safety
/// `m` must be a live handle and `dst` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_copy(m: *const DiscoMatrix, dst: *mut f64, len: usize) -> DiscoStatus {
    guard(|| {
        let m = handle(m, "matrix")?;
        let src = m.0.as_slice();
        if len != src.len() {
            return Err(Error::Shape { expected: src.len(), actual: len }.into());
        }
        slice_mut(dst, len, "dst")?.copy_from_slice(src);
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn disco_matrix_free(m: *mut DiscoMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Squared discrepancy of the point set (S-ersatz for two columns).
///
/// # Safety
/// `m` must be a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn disco_discrepancy(
    m: *const DiscoMatrix,
    measure: DiscoMeasure,
    out_value: *mut f64,
) -> DiscoStatus {
    guard(|| {
        let dst = out(out_value, "out_value")?;
        *dst = compute(measure.into(), &handle(m, "matrix")?.0)?.value;
        Ok(())
    })
}

/// S-ersatz of the scatter `(x_i, y_i)`.
///
/// # Safety
/// `x` and `y` must each hold `n` doubles; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn disco_s_ersatz(x: *const f64, y: *const f64, n: usize, out_value: *mut f64) -> DiscoStatus {
    guard(|| {
        let dst = out(out_value, "out_value")?;
        *dst = s_ersatz(slice(x, n, "x")?, slice(y, n, "y")?)?;
        Ok(())
    })
}

/// Per-input importance scores (larger = more influential) from unit-cube
/// inputs and their outputs. `scores` receives `cols` values.
///
/// # Safety
/// `inputs` must be a live handle, `y` must hold `rows` doubles and `scores`
/// must hold `cols` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn disco_importance(
    inputs: *const DiscoMatrix,
    y: *const f64,
    measure: DiscoMeasure,
    scores: *mut f64,
) -> DiscoStatus {
    guard(|| {
        let m = &handle(inputs, "inputs")?.0;
        let y = slice(y, m.rows(), "y")?;
        let imp = discrepancy_importance(measure.into(), m, y)?;
        slice_mut(scores, m.cols(), "scores")?.copy_from_slice(&imp.scores);
        Ok(())
    })
}

/// Jansen total-order indices from outputs laid out as `A, A_B1, .., A_Bd`
/// (`n_base * (d + 1)` values). `t` receives `d` values.
///
/// # Safety
/// `y` must hold `n_base * (d + 1)` doubles and `t` must hold `d`.
#[no_mangle]
pub unsafe extern "C" fn disco_jansen(y: *const f64, n_base: usize, d: usize, t: *mut f64) -> DiscoStatus {
    guard(|| {
        let len = d
            .checked_add(1)
            .and_then(|k| k.checked_mul(n_base))
            .ok_or(Error::Domain("n_base * (d + 1) overflows".into()))?;
        let res = jansen_total_order(slice(y, len, "y")?, n_base, d)?;
        slice_mut(t, d, "t")?.copy_from_slice(&res.t);
        Ok(())
    })
}

/// Savage scores of `values`; the largest value ranks first when
/// `larger_is_first != 0`.
///
/// # Safety
/// `values` and `scores` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn disco_savage_scores(
    values: *const f64,
    n: usize,
    larger_is_first: i32,
    scores: *mut f64,
) -> DiscoStatus {
    guard(|| {
        let s = savage_scores(slice(values, n, "values")?, larger_is_first != 0);
        slice_mut(scores, n, "scores")?.copy_from_slice(&s);
        Ok(())
    })
}

/// # Safety
/// `out_fn` must be writable.
#[no_mangle]
pub unsafe extern "C" fn disco_metafunction_build(
    d: usize,
    seed: u64,
    out_fn: *mut *mut DiscoMetaFunction,
) -> DiscoStatus {
    guard(|| {
        let dst = out(out_fn, "out_fn")?;
        *dst = Box::into_raw(Box::new(DiscoMetaFunction(build_metafunction(d, seed)?)));
        Ok(())
    })
}

/// Parses a function previously exported with [`disco_metafunction_to_json`].
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_fn` must be writable.
#[no_mangle]
pub unsafe extern "C" fn disco_metafunction_from_json(
    json: *const c_char,
    out_fn: *mut *mut DiscoMetaFunction,
) -> DiscoStatus {
    guard(|| {
        let dst = out(out_fn, "out_fn")?;
        if json.is_null() {
            return Err(Fail::Null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Error::Domain(format!("json is not UTF-8: {e}")))?;
        *dst = Box::into_raw(Box::new(DiscoMetaFunction(MetaFunction::from_json(text)?)));
        Ok(())
    })
}

/// Evaluates every row of `inputs`; `y` receives one value per row.
///
/// # Safety
/// Both handles must be live; `y` must hold `rows` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn disco_metafunction_eval(
    f: *const DiscoMetaFunction,
    inputs: *const DiscoMatrix,
    y: *mut f64,
) -> DiscoStatus {
    guard(|| {
        let f = &handle(f, "function")?.0;
        let m = &handle(inputs, "inputs")?.0;
        let values = f.evaluate_matrix(m)?;
        slice_mut(y, m.rows(), "y")?.copy_from_slice(&values);
        Ok(())
    })
}

/// JSON description of the function; release with [`disco_string_free`].
///
/// # Safety
/// `f` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn disco_metafunction_to_json(
    f: *const DiscoMetaFunction,
    out_json: *mut *mut c_char,
) -> DiscoStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        let text = handle(f, "function")?.0.to_json();
        *dst = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `f` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn disco_metafunction_free(f: *mut DiscoMetaFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn disco_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
