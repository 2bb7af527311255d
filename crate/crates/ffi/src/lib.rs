//! C ABI over the `diaq` library.
//!
//! Matrices and simulation results are opaque handles created and freed by
//! this library. Every function returns a [`DiaqStatus`]; on failure the
//! message is available from [`diaq_last_error_message`] on the same
//! thread. Panics never cross the boundary.
//!
//! Complex arrays are interleaved `(re, im)` doubles, row-major for
//! matrices, the same layout as a C `double _Complex` or NumPy
//! `complex128` array.
//!
//! Handles are tracked: passing a freed or foreign pointer returns
//! `DIAQ_STATUS_INVALID_HANDLE` instead of touching memory.

mod handles;

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use diaq::sim::{run, RunOptions, RunResult};
use diaq::{Backend, Complex, DenseMatrix, DiaqMatrix};

use handles::Registry;

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiaqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidHandle = 2,
    InvalidArgument = 3,
    Shape = 4,
    Parse = 5,
    Unsupported = 6,
    Resource = 7,
    Numeric = 8,
    Panic = 9,
}

/// Opaque sparse matrix.
pub struct DiaqMatrixHandle {
    inner: DiaqMatrix<f64>,
}

/// Opaque simulation result.
pub struct DiaqRunHandle {
    inner: RunResult<f64>,
}

static MATRICES: Registry = Registry::new();
static RUNS: Registry = Registry::new();

struct LastError {
    message: CString,
    line: usize,
    col: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<LastError> = RefCell::new(LastError { message: CString::default(), line: 0, col: 0 });
}

struct Failure {
    status: DiaqStatus,
    message: String,
    location: Option<(usize, usize)>,
}

impl Failure {
    fn new(status: DiaqStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into(), location: None }
    }
}

impl From<diaq::Error> for Failure {
    fn from(err: diaq::Error) -> Self {
        use diaq::Error as E;
        let (status, location) = match &err {
            E::Parse { line, col, .. } => (DiaqStatus::Parse, Some((*line, *col))),
            E::InvalidGate { .. } => (DiaqStatus::Parse, None),
            E::UnsupportedFeature { line, col, .. } => (DiaqStatus::Unsupported, Some((*line, *col))),
            E::UnsupportedGate(_) => (DiaqStatus::Unsupported, None),
            E::Resource(_) | E::SpanOverflow { .. } => (DiaqStatus::Resource, None),
            E::Shape(_) | E::NotMultiplyable { .. } | E::DiagonalRange { .. } => (DiaqStatus::Shape, None),
            E::Normalization(_) => (DiaqStatus::Numeric, None),
            E::Io(_) => (DiaqStatus::InvalidArgument, None),
        };
        Failure { status, message: err.to_string(), location }
    }
}

type FfiResult<T = ()> = Result<T, Failure>;

fn set_last_error(message: &str, location: Option<(usize, usize)>) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    let (line, col) = location.unwrap_or((0, 0));
    LAST_ERROR.with(|e| *e.borrow_mut() = LastError { message, line, col });
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> FfiResult) -> DiaqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("", None);
            DiaqStatus::Ok
        }
        Ok(Err(fail)) => {
            set_last_error(&fail.message, fail.location);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal panic: {msg}"), None);
            DiaqStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> FfiResult {
    if p.is_null() {
        Err(Failure::new(DiaqStatus::NullPointer, format!("`{what}` is null")))
    } else {
        Ok(())
    }
}

fn matrix<'a>(h: *const DiaqMatrixHandle) -> FfiResult<&'a DiaqMatrix<f64>> {
    non_null(h, "matrix")?;
    if !MATRICES.contains(h as usize) {
        return Err(Failure::new(DiaqStatus::InvalidHandle, "not a live matrix handle"));
    }
    // SAFETY: registered pointers come from Box::into_raw and are removed
    // from the registry before being freed.
    Ok(unsafe { &(*h).inner })
}

fn run_result<'a>(h: *const DiaqRunHandle) -> FfiResult<&'a RunResult<f64>> {
    non_null(h, "run")?;
    if !RUNS.contains(h as usize) {
        return Err(Failure::new(DiaqStatus::InvalidHandle, "not a live run handle"));
    }
    // SAFETY: as in `matrix`.
    Ok(unsafe { &(*h).inner })
}

fn new_matrix(m: DiaqMatrix<f64>, out: *mut *mut DiaqMatrixHandle) {
    let p = Box::into_raw(Box::new(DiaqMatrixHandle { inner: m }));
    MATRICES.insert(p as usize);
    // SAFETY: callers check `out` for null first.
    unsafe { *out = p };
}

fn read_complex<'a>(data: *const f64, count: usize, what: &str) -> FfiResult<&'a [f64]> {
    non_null(data, what)?;
    let len = count.checked_mul(2).ok_or_else(|| Failure::new(DiaqStatus::InvalidArgument, "length overflow"))?;
    // SAFETY: the caller promises `2 * count` readable doubles.
    Ok(unsafe { std::slice::from_raw_parts(data, len) })
}

fn write_complex(values: &[Complex<f64>], out: *mut f64, out_len: usize, what: &str) -> FfiResult {
    non_null(out, what)?;
    if out_len != 2 * values.len() {
        return Err(Failure::new(
            DiaqStatus::Shape,
            format!("`{what}` holds {out_len} doubles, need {}", 2 * values.len()),
        ));
    }
    // SAFETY: the caller promises `out_len` writable doubles.
    let out = unsafe { std::slice::from_raw_parts_mut(out, out_len) };
    for (pair, v) in out.chunks_exact_mut(2).zip(values) {
        pair[0] = v.re;
        pair[1] = v.im;
    }
    Ok(())
}

fn to_complex(flat: &[f64]) -> FfiResult<Vec<Complex<f64>>> {
    if flat.iter().any(|v| !v.is_finite()) {
        return Err(Failure::new(DiaqStatus::InvalidArgument, "input contains NaN or infinity"));
    }
    Ok(flat.chunks_exact(2).map(|p| Complex::new(p[0], p[1])).collect())
}

fn c_str<'a>(s: *const c_char, what: &str) -> FfiResult<&'a str> {
    non_null(s, what)?;
    // SAFETY: the caller promises a NUL-terminated string.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Failure::new(DiaqStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

fn out_string(s: String, out: *mut *mut c_char) -> FfiResult {
    non_null(out, "out")?;
    let c = CString::new(s).map_err(|_| Failure::new(DiaqStatus::Numeric, "string contains NUL"))?;
    // SAFETY: checked non-null above.
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn store<T>(out: *mut T, value: T) -> FfiResult {
    non_null(out, "out")?;
    // SAFETY: checked non-null above.
    unsafe { *out = value };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn diaq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Error message of the most recent call on this thread; empty if that
/// call succeeded. Valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn diaq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().message.as_ptr())
}

/// Source position of the last parse or unsupported-feature error on this
/// thread; both are 0 when the error has no position.
#[no_mangle]
pub extern "C" fn diaq_last_error_location(line: *mut usize, col: *mut usize) -> DiaqStatus {
    let (l, c) = LAST_ERROR.with(|e| (e.borrow().line, e.borrow().col));
    if line.is_null() || col.is_null() {
        return DiaqStatus::NullPointer;
    }
    // SAFETY: checked non-null.
    unsafe {
        *line = l;
        *col = c;
    }
    DiaqStatus::Ok
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn diaq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a matrix from `n * n` interleaved complex values, row-major.
/// Entries with `|re| + |im| <= eps` are dropped; pass 0 for a lossless
/// conversion.
///
/// # Safety
/// `data` must point to `2 * n * n` doubles.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_from_dense(
    n: usize,
    data: *const f64,
    eps: f64,
    out: *mut *mut DiaqMatrixHandle,
) -> DiaqStatus {
    guard(|| {
        non_null(out, "out")?;
        let count = n.checked_mul(n).ok_or_else(|| Failure::new(DiaqStatus::InvalidArgument, "n too large"))?;
        if !(eps >= 0.0) {
            return Err(Failure::new(DiaqStatus::InvalidArgument, "eps must be a non-negative number"));
        }
        let values = to_complex(read_complex(data, count, "data")?)?;
        let dense = DenseMatrix::from_row_major(n, values)?;
        new_matrix(DiaqMatrix::from_dense(&dense, eps), out);
        Ok(())
    })
}

/// Writes the matrix as `n * n` interleaved complex values, row-major.
///
/// # Safety
/// `out` must point to `out_len` writable doubles; `out_len` must equal
/// `2 * n * n`.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_to_dense(m: *const DiaqMatrixHandle, out: *mut f64, out_len: usize) -> DiaqStatus {
    guard(|| {
        let m = matrix(m)?;
        write_complex(m.to_dense().as_slice(), out, out_len, "out")
    })
}

/// Dimension `n` of the `n x n` matrix.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_dim(m: *const DiaqMatrixHandle, out: *mut usize) -> DiaqStatus {
    guard(|| store(out, matrix(m)?.n_dim()))
}

/// Number of stored diagonals.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_diag_count(m: *const DiaqMatrixHandle, out: *mut usize) -> DiaqStatus {
    guard(|| store(out, matrix(m)?.diag_count()))
}

/// Number of entries with `|re| + |im| > eps`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_nnz(m: *const DiaqMatrixHandle, eps: f64, out: *mut usize) -> DiaqStatus {
    guard(|| store(out, matrix(m)?.nnz(eps)))
}

/// `out = a * b`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_matmul(
    a: *const DiaqMatrixHandle,
    b: *const DiaqMatrixHandle,
    out: *mut *mut DiaqMatrixHandle,
) -> DiaqStatus {
    guard(|| {
        non_null(out, "out")?;
        let product = matrix(a)?.matmul(matrix(b)?)?;
        new_matrix(product, out);
        Ok(())
    })
}

/// `out = transpose(a)`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_transpose(a: *const DiaqMatrixHandle, out: *mut *mut DiaqMatrixHandle) -> DiaqStatus {
    guard(|| {
        non_null(out, "out")?;
        let t = matrix(a)?.transpose();
        new_matrix(t, out);
        Ok(())
    })
}

/// `y = a * x` for interleaved complex vectors of length `n`.
///
/// # Safety
/// `x` must point to `2 * n` readable doubles and `y` to `2 * n` writable
/// ones.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_spmv(a: *const DiaqMatrixHandle, x: *const f64, n: usize, y: *mut f64) -> DiaqStatus {
    guard(|| {
        let a = matrix(a)?;
        let x = to_complex(read_complex(x, n, "x")?)?;
        let result = a.spmv(&x)?;
        write_complex(&result, y, 2 * n, "y")
    })
}

/// JSON form `{"n": N, "diags": {"<d>": [[re, im], ...]}}`. Free the result
/// with `diaq_string_free`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_to_json(m: *const DiaqMatrixHandle, out: *mut *mut c_char) -> DiaqStatus {
    guard(|| {
        let json = serde_json::to_string(matrix(m)?).map_err(|e| Failure::new(DiaqStatus::Numeric, e.to_string()))?;
        out_string(json, out)
    })
}

/// Frees a matrix. Null is ignored; a handle that is not live returns
/// `DIAQ_STATUS_INVALID_HANDLE`.
///
/// # Safety
/// `m` must be null or a pointer returned by this library.
#[no_mangle]
pub unsafe extern "C" fn diaq_matrix_free(m: *mut DiaqMatrixHandle) -> DiaqStatus {
    guard(|| {
        if m.is_null() {
            return Ok(());
        }
        if !MATRICES.remove(m as usize) {
            return Err(Failure::new(DiaqStatus::InvalidHandle, "not a live matrix handle"));
        }
        drop(Box::from_raw(m));
        Ok(())
    })
}

/// Parses and simulates an OpenQASM 2.0 program.
///
/// `backend` is `"dense"` or `"diaq"`. With `emit_state` non-zero the final
/// state is kept and can be read with `diaq_run_state`. Parse errors report
/// their position through `diaq_last_error_location`.
///
/// # Safety
/// `qasm` and `backend` must be NUL-terminated; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn diaq_simulate(
    qasm: *const c_char,
    backend: *const c_char,
    shots: u64,
    seed: u64,
    fusion: bool,
    emit_state: bool,
    out: *mut *mut DiaqRunHandle,
) -> DiaqStatus {
    guard(|| {
        non_null(out, "out")?;
        let source = c_str(qasm, "qasm")?;
        let backend: Backend = c_str(backend, "backend")?
            .parse()
            .map_err(|e: String| Failure::new(DiaqStatus::InvalidArgument, e))?;
        let circuit = diaq::qasm::load(source)?;
        let opts = RunOptions { backend, shots, seed, fusion, emit_state, ..RunOptions::default() };
        let result = run::<f64>(&circuit, &opts)?;
        let p = Box::into_raw(Box::new(DiaqRunHandle { inner: result }));
        RUNS.insert(p as usize);
        *out = p;
        Ok(())
    })
}

/// Number of qubits of the simulated circuit.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn diaq_run_n_qubits(r: *const DiaqRunHandle, out: *mut usize) -> DiaqStatus {
    guard(|| store(out, run_result(r)?.n_qubits))
}

/// Counts as a JSON object from bitstring (qubit 0 first) to count. Free the
/// result with `diaq_string_free`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn diaq_run_counts_json(r: *const DiaqRunHandle, out: *mut *mut c_char) -> DiaqStatus {
    guard(|| {
        let json = serde_json::to_string(&run_result(r)?.counts).map_err(|e| Failure::new(DiaqStatus::Numeric, e.to_string()))?;
        out_string(json, out)
    })
}

/// Copies the final state as `2^n` interleaved complex values. Fails with
/// `DIAQ_STATUS_INVALID_ARGUMENT` if the run did not keep its state.
///
/// # Safety
/// `out` must point to `out_len` writable doubles, `out_len == 2 * 2^n`.
#[no_mangle]
pub unsafe extern "C" fn diaq_run_state(r: *const DiaqRunHandle, out: *mut f64, out_len: usize) -> DiaqStatus {
    guard(|| {
        let state = run_result(r)?
            .state
            .as_ref()
            .ok_or_else(|| Failure::new(DiaqStatus::InvalidArgument, "run was made without emit_state"))?;
        write_complex(state, out, out_len, "out")
    })
}

/// Frees a run result. Null is ignored.
///
/// # Safety
/// `r` must be null or a pointer returned by this library.
#[no_mangle]
pub unsafe extern "C" fn diaq_run_free(r: *mut DiaqRunHandle) -> DiaqStatus {
    guard(|| {
        if r.is_null() {
            return Ok(());
        }
        if !RUNS.remove(r as usize) {
            return Err(Failure::new(DiaqStatus::InvalidHandle, "not a live run handle"));
        }
        drop(Box::from_raw(r));
        Ok(())
    })
}

