//! C interface to `tempgraph`.
//!
//! Graphs and reports are opaque handles owned by the caller and released
//! with the matching `_free` function. Every fallible call returns a
//! [`TgStatus`]; on failure [`tg_last_error_message`] describes the error
//! for the calling thread. Strings handed out by the library are released
//! with [`tg_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;
use tempgraph::metrics::{evaluate, EvalReport, Mode};
use tempgraph::synthgen::{self, GenConfig};
use tempgraph::{native, Error, IntervalGraph};

/// Result of a library call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Inconsistent = 4,
    Config = 5,
    Io = 6,
    UnknownMetric = 7,
    Panic = 8,
    Other = 9,
}

/// Weight table used for scoring.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TgMode {
    Strict = 0,
    Relaxed = 1,
}

/// Opaque interval graph.
pub struct TgGraph(IntervalGraph);

/// Opaque evaluation report.
pub struct TgReport(EvalReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: TgStatus, msg: impl Into<String>) -> TgStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> TgStatus {
    if e.is_parse() {
        TgStatus::Parse
    } else if e.is_inconsistency() {
        TgStatus::Inconsistent
    } else {
        match e {
            Error::Config(_) | Error::DegenerateReference | Error::DegenerateCandidate => TgStatus::Config,
            Error::Io(_) => TgStatus::Io,
            _ => TgStatus::Other,
        }
    }
}

fn from_error(e: Error) -> TgStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning panics into [`TgStatus::Panic`].
fn guard(f: impl FnOnce() -> TgStatus) -> TgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(TgStatus::Panic, "panic inside tempgraph"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, TgStatus> {
    if s.is_null() {
        return Err(fail(TgStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(TgStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> TgStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            TgStatus::Ok
        }
        Err(_) => fail(TgStatus::Other, "output contains a NUL byte"),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(TgStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Parses a graph in the native text format.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_parse(source: *const c_char, out: *mut *mut TgGraph) -> TgStatus {
    guard(|| {
        non_null!(out);
        let s = match text(source) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match native::parse(s) {
            Ok(g) => {
                put(out, TgGraph(g));
                TgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `graph` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_free(graph: *mut TgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Writes the saturated copy of `graph` to `out`.
///
/// # Safety
/// Pointers must be valid; `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_saturate(graph: *const TgGraph, out: *mut *mut TgGraph) -> TgStatus {
    guard(|| {
        non_null!(graph, out);
        match (*graph).0.saturate() {
            Ok(g) => {
                put(out, TgGraph(g));
                TgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Whether saturation succeeds.
///
/// # Safety
/// Pointers must be valid; `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_is_consistent(graph: *const TgGraph, out: *mut bool) -> TgStatus {
    guard(|| {
        non_null!(graph, out);
        *out = (*graph).0.is_consistent();
        TgStatus::Ok
    })
}

/// Number of entities, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_node_count(graph: *const TgGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.node_count())
}

/// Number of stored (non-universal) edges, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_edge_count(graph: *const TgGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Native text form of `graph`. Free the result with [`tg_string_free`].
///
/// # Safety
/// Pointers must be valid; `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_serialize(graph: *const TgGraph, out: *mut *mut c_char) -> TgStatus {
    guard(|| {
        non_null!(graph, out);
        put_string(out, native::serialize(&(*graph).0))
    })
}

/// Random windowed interval graph.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tg_generate(
    events: usize,
    range: i64,
    indet: i64,
    seed: u64,
    out: *mut *mut TgGraph,
) -> TgStatus {
    guard(|| {
        non_null!(out);
        match synthgen::generate(&GenConfig { events, range, indet, seed }) {
            Ok(g) => {
                put(out, TgGraph(g));
                TgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Scores `candidate` against `reference`.
///
/// # Safety
/// Pointers must be valid; graph arguments must be live handles.
#[no_mangle]
pub unsafe extern "C" fn tg_evaluate(
    reference: *const TgGraph,
    candidate: *const TgGraph,
    mode: TgMode,
    out: *mut *mut TgReport,
) -> TgStatus {
    guard(|| {
        non_null!(reference, candidate, out);
        let mode = match mode {
            TgMode::Strict => Mode::Strict,
            TgMode::Relaxed => Mode::Relaxed,
        };
        match evaluate(&(*reference).0, &(*candidate).0, mode) {
            Ok(r) => {
                put(out, TgReport(r));
                TgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Reads one numeric field of a report by name, e.g. `"TR"` or `"splits"`.
///
/// # Safety
/// Pointers must be valid; `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_report_get(report: *const TgReport, metric: *const c_char, out: *mut f64) -> TgStatus {
    guard(|| {
        non_null!(report, out);
        let name = match text(metric) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match (*report).0.metrics().into_iter().find(|(n, _)| *n == name) {
            Some((_, v)) => {
                *out = v;
                TgStatus::Ok
            }
            None => fail(TgStatus::UnknownMetric, format!("no metric named {name:?}")),
        }
    })
}

/// JSON form of a report. Free the result with [`tg_string_free`].
///
/// # Safety
/// Pointers must be valid; `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_report_to_json(report: *const TgReport, out: *mut *mut c_char) -> TgStatus {
    guard(|| {
        non_null!(report, out);
        put_string(out, (*report).0.to_json())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tg_report_free(report: *mut TgReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn tg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
