//! C ABI over `qwalk`.
//!
//! Objects are opaque handles created by `qw_*_new`/`qw_*_parse`/`qw_*_run`
//! and released with the matching `qw_*_free`. Every fallible call returns a
//! [`QwStatus`]; on failure [`qw_last_error`] holds a message for the calling
//! thread. Strings handed out by the library are freed with [`qw_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qwalk::search::{self, MarkedSet, SearchConfig, SearchResult};
use qwalk::walk::{self, WalkGraph};
use qwalk::{Circuit, Error, StateVector};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Capacity = 3,
    Validation = 4,
    Unsupported = 5,
    Parse = 6,
    Numerical = 7,
    Io = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

impl From<&Error> for QwStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Capacity(_) => QwStatus::Capacity,
            Error::Argument(_) => QwStatus::InvalidArgument,
            Error::Validation(_) => QwStatus::Validation,
            Error::UnsupportedGate(_) => QwStatus::Unsupported,
            Error::Parse { .. } => QwStatus::Parse,
            Error::NotMixing(_) | Error::Divergent(_) => QwStatus::Numerical,
            Error::Io(_) => QwStatus::Io,
        }
    }
}

/// Opaque circuit handle.
pub struct QwCircuit(Circuit);

/// Opaque statevector handle.
pub struct QwStateVector(StateVector);

/// Opaque walk-search result handle.
pub struct QwSearchResult(SearchResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(QwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(QwStatus::from(&e), e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn null(what: &str) -> Failure {
    Failure(QwStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Outcome) -> QwStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QwStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QwStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QwStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(QwStatus::Panic, "string contains nul".into()))
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize, out_len: *mut usize) -> Outcome {
    if !out_len.is_null() {
        *out_len = src.len();
    }
    if buf.is_null() {
        return Ok(());
    }
    if len < src.len() {
        return Err(Failure(
            QwStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next `qw_*` call on the same thread.
#[no_mangle]
pub extern "C" fn qw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` is NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `|0…0⟩` on `n_qubits` qubits.
///
/// # Safety
/// `out` is a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qw_state_new(n_qubits: usize, out: *mut *mut QwStateVector) -> QwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        store(out, QwStateVector(StateVector::new_zero(n_qubits)?));
        Ok(())
    })
}

/// # Safety
/// `state` is NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qw_state_free(state: *mut QwStateVector) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of qubits, or 0 for NULL.
///
/// # Safety
/// `state` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qw_state_num_qubits(state: *const QwStateVector) -> usize {
    state.as_ref().map_or(0, |s| s.0.n_qubits())
}

/// Runs `circuit` on `state` in place.
///
/// # Safety
/// Both pointers are live handles; `state` is not aliased.
#[no_mangle]
pub unsafe extern "C" fn qw_state_apply(state: *mut QwStateVector, circuit: *const QwCircuit) -> QwStatus {
    guard(|| {
        let state = state.as_mut().ok_or_else(|| null("state"))?;
        let circuit = handle(circuit, "circuit")?;
        circuit.0.run(&mut state.0)?;
        Ok(())
    })
}

/// Writes the `2^n` basis-state probabilities into `buf`. `out_len`, when not
/// NULL, receives the required length; pass `buf = NULL` to query it.
///
/// # Safety
/// `buf` is NULL or points to `len` writable doubles; `out_len` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn qw_state_probabilities(
    state: *const QwStateVector,
    buf: *mut f64,
    len: usize,
    out_len: *mut usize,
) -> QwStatus {
    guard(|| {
        let state = handle(state, "state")?;
        copy_out(&state.0.probabilities(), buf, len, out_len)
    })
}

/// Parses the circuit text format.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn qw_circuit_parse(text: *const c_char, out: *mut *mut QwCircuit) -> QwStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        store(out, QwCircuit(text.parse::<Circuit>()?));
        Ok(())
    })
}

/// One coined-walk step (Grover coin then shift) on `family:size`.
///
/// # Safety
/// `family` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn qw_walk_step(family: *const c_char, size: usize, out: *mut *mut QwCircuit) -> QwStatus {
    guard(|| {
        let family = read_str(family, "family")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let graph = WalkGraph::from_family(family, size)?;
        store(out, QwCircuit(walk::walk_step(&graph)?));
        Ok(())
    })
}

/// # Safety
/// `circuit` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qw_circuit_free(circuit: *mut QwCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// # Safety
/// `circuit` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qw_circuit_num_qubits(circuit: *const QwCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.n_qubits())
}

/// Serializes to the circuit text format. Free the result with [`qw_string_free`].
///
/// # Safety
/// `circuit` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn qw_circuit_to_text(circuit: *const QwCircuit, out: *mut *mut c_char) -> QwStatus {
    guard(|| {
        let circuit = handle(circuit, "circuit")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = to_c_string(circuit.0.to_string())?;
        Ok(())
    })
}

/// Walk search on `family:size` with comma-separated MSB-first `marked`
/// labels. `theta_qubits = 0` selects the default width; `shots = 0` skips
/// sampling beyond a single shot.
///
/// # Safety
/// `family` and `marked` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn qw_search_run(
    family: *const c_char,
    size: usize,
    marked: *const c_char,
    theta_qubits: usize,
    iterations: usize,
    shots: u64,
    seed: u64,
    out: *mut *mut QwSearchResult,
) -> QwStatus {
    guard(|| {
        let family = read_str(family, "family")?;
        let marked = read_str(marked, "marked")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let graph = WalkGraph::from_family(family, size)?;
        let mut config = SearchConfig::new(graph, MarkedSet::parse(marked, graph.node_qubits())?, iterations);
        if theta_qubits > 0 {
            config.theta_qubits = theta_qubits;
        }
        config.shots = shots.max(1);
        config.seed = seed;
        store(out, QwSearchResult(search::mnrs_search(&config)?));
        Ok(())
    })
}

/// # Safety
/// `result` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qw_search_free(result: *mut QwSearchResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Marked probability per iteration (`iterations + 1` values, index 0 is the
/// initial state). Same buffer protocol as [`qw_state_probabilities`].
///
/// # Safety
/// `result` is a live handle; `buf` is NULL or holds `len` doubles; `out_len` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn qw_search_trace(
    result: *const QwSearchResult,
    buf: *mut f64,
    len: usize,
    out_len: *mut usize,
) -> QwStatus {
    guard(|| {
        let r = handle(result, "result")?;
        copy_out(&r.0.trace, buf, len, out_len)
    })
}

/// Argmax iteration of the trace and its probability.
///
/// # Safety
/// `result` is a live handle; both outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn qw_search_hitting_time(
    result: *const QwSearchResult,
    iteration: *mut usize,
    probability: *mut f64,
) -> QwStatus {
    guard(|| {
        let r = handle(result, "result")?;
        if iteration.is_null() || probability.is_null() {
            return Err(null("output"));
        }
        *iteration = r.0.hitting_time;
        *probability = r.0.peak_probability;
        Ok(())
    })
}

/// Full result as JSON. Free the result with [`qw_string_free`].
///
/// # Safety
/// `result` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn qw_search_to_json(result: *const QwSearchResult, out: *mut *mut c_char) -> QwStatus {
    guard(|| {
        let r = handle(result, "result")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = to_c_string(r.0.to_json())?;
        Ok(())
    })
}
