//! C ABI over the cyclecut library.
//!
//! Instances and pipelines are opaque handles created by `*_new`/`*_from_*`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`CyclecutStatus`]; on failure the message is available from
//! [`cyclecut_last_error`] on the same thread. Strings returned through
//! `char **` outputs are owned by the caller and released with
//! [`cyclecut_string_free`]. Rationals cross the boundary as `"p/q"` text.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cyclecut::chain::{region_contains, StateDistribution};
use cyclecut::embedding::FrameOptions;
use cyclecut::instance::{gen_figure1, load_instance, lp_value, Figure1Costs, Instance};
use cyclecut::rational;
use cyclecut::sampler::{usage_stats, Pipeline, PipelineOptions};
use cyclecut::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclecutStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input was rejected (parse error, invalid LP point, bad option).
    InvalidInput = 3,
    /// The input is valid but a checked property fails, e.g. the hierarchy
    /// contains a degree cut.
    Violation = 4,
    /// A caller-provided buffer has the wrong length.
    BufferSize = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Opaque validated LP point.
pub struct CyclecutInstance {
    inner: Instance,
}

/// Opaque sampling pipeline: hierarchy, frames and per-cut distributions
/// of one instance.
pub struct CyclecutPipeline {
    inner: Pipeline,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CyclecutStatus, msg: impl Into<String>) -> CyclecutStatus {
    set_error(msg.into());
    status
}

fn from_error(e: &Error) -> CyclecutStatus {
    let status = if e.is_input_error() {
        CyclecutStatus::InvalidInput
    } else {
        CyclecutStatus::Violation
    };
    fail(status, format!("{}: {e}", e.kind()))
}

/// Runs `f`, converting panics into [`CyclecutStatus::Panic`].
fn guard(f: impl FnOnce() -> CyclecutStatus) -> CyclecutStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(CyclecutStatus::Panic, format!("panic: {msg}"))
        }
    }
}

/// Borrows a C string as `&str`.
///
/// # Safety
/// `s` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CyclecutStatus> {
    if s.is_null() {
        return Err(fail(CyclecutStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CyclecutStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

/// Hands `text` to the caller through `out`.
///
/// # Safety
/// `out` must be valid for writes.
unsafe fn write_string(out: *mut *mut c_char, text: String) -> CyclecutStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            CyclecutStatus::Ok
        }
        Err(_) => fail(CyclecutStatus::Panic, "output contains a NUL byte"),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(CyclecutStatus::NullPointer, concat!("null pointer: ", stringify!($p)));
        })+
    };
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cyclecut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Schema version of JSON reports, as a static string.
#[no_mangle]
pub extern "C" fn cyclecut_schema_version() -> *const c_char {
    static VERSION: &CStr = c"1.0.0";
    debug_assert_eq!(VERSION.to_str().ok(), Some(cyclecut::REPORT_SCHEMA_VERSION));
    VERSION.as_ptr()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string obtained from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates an instance document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_instance_from_json(
    json: *const c_char,
    out: *mut *mut CyclecutInstance,
) -> CyclecutStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match load_instance(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CyclecutInstance { inner }));
                CyclecutStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// The integrality-gap family with `k` internal vertices per path and unit
/// costs.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_instance_figure1(
    k: usize,
    out: *mut *mut CyclecutInstance,
) -> CyclecutStatus {
    guard(|| {
        non_null!(out);
        match gen_figure1(k, Figure1Costs::Unit) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CyclecutInstance { inner }));
                CyclecutStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `inst` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_instance_free(inst: *mut CyclecutInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_instance_vertex_count(inst: *const CyclecutInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.n())
}

/// LP value `sum c_e x_e` as `"p/q"`.
///
/// # Safety
/// `inst` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_instance_lp_value(
    inst: *const CyclecutInstance,
    out: *mut *mut c_char,
) -> CyclecutStatus {
    guard(|| {
        non_null!(inst, out);
        write_string(out, rational::format(&lp_value(&(*inst).inner)))
    })
}

/// Serializes an instance back to its JSON document.
///
/// # Safety
/// `inst` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_instance_to_json(
    inst: *const CyclecutInstance,
    out: *mut *mut c_char,
) -> CyclecutStatus {
    guard(|| {
        non_null!(inst, out);
        write_string(out, (*inst).inner.to_json())
    })
}

/// Builds the sampling pipeline. `root` below 0 selects the instance's own
/// root; `p_root` may be null for the default `1/3,1/3,1/3,0`.
///
/// # Safety
/// `inst` must be a live handle, `p_root` null or a NUL-terminated string,
/// and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_pipeline_new(
    inst: *const CyclecutInstance,
    root: i64,
    p_root: *const c_char,
    reflect: bool,
    out: *mut *mut CyclecutPipeline,
) -> CyclecutStatus {
    guard(|| {
        non_null!(inst, out);
        let mut opts = PipelineOptions {
            root: usize::try_from(root).ok(),
            frames: FrameOptions { reflect },
            ..Default::default()
        };
        if !p_root.is_null() {
            let text = match read_str(p_root) {
                Ok(t) => t,
                Err(s) => return s,
            };
            match StateDistribution::parse(text) {
                Ok(p) => opts.p_root = p,
                Err(e) => return from_error(&e),
            }
        }
        match Pipeline::new(&(*inst).inner, &opts) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CyclecutPipeline { inner }));
                CyclecutStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Releases a pipeline. Null is ignored.
///
/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_pipeline_free(p: *mut CyclecutPipeline) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of support multigraph edges (length of multiplicity buffers), or
/// 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_pipeline_edge_count(p: *const CyclecutPipeline) -> usize {
    p.as_ref().map_or(0, |p| p.inner.graph().edge_count())
}

/// Endpoints of multigraph edge `edge`.
///
/// # Safety
/// `p` must be a live handle; `u` and `v` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_pipeline_edge(
    p: *const CyclecutPipeline,
    edge: usize,
    u: *mut usize,
    v: *mut usize,
) -> CyclecutStatus {
    guard(|| {
        non_null!(p, u, v);
        let g = (*p).inner.graph();
        if edge >= g.edge_count() {
            return fail(
                CyclecutStatus::InvalidInput,
                format!("edge {edge} out of range"),
            );
        }
        let e = g.edge(edge);
        *u = e.u;
        *v = e.v;
        CyclecutStatus::Ok
    })
}

/// Exact expected tour cost as `"p/q"`.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_pipeline_expected_cost(
    p: *const CyclecutPipeline,
    out: *mut *mut c_char,
) -> CyclecutStatus {
    guard(|| {
        non_null!(p, out);
        write_string(out, rational::format(&(*p).inner.expected_cost()))
    })
}

/// Samples one tour with `seed`, writing each edge's multiplicity (0, 1 or
/// 2) into `multiplicities`, which must hold exactly
/// [`cyclecut_pipeline_edge_count`] entries.
///
/// # Safety
/// `p` must be a live handle and `multiplicities` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_pipeline_sample(
    p: *const CyclecutPipeline,
    seed: u64,
    multiplicities: *mut u8,
    len: usize,
) -> CyclecutStatus {
    guard(|| {
        non_null!(p, multiplicities);
        let pipeline = &(*p).inner;
        let m = pipeline.graph().edge_count();
        if len != m {
            return fail(
                CyclecutStatus::BufferSize,
                format!("buffer holds {len} entries, need {m}"),
            );
        }
        match pipeline.sample_tour(seed) {
            Ok(t) => {
                std::slice::from_raw_parts_mut(multiplicities, len)
                    .copy_from_slice(t.multiplicities.as_slice());
                CyclecutStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Monte Carlo usage report over `samples` draws, as JSON.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_pipeline_usage_report(
    p: *const CyclecutPipeline,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> CyclecutStatus {
    guard(|| {
        non_null!(p, out);
        match usage_stats(&(*p).inner, samples, seed, None) {
            Ok(report) => match serde_json::to_string(&report) {
                Ok(text) => write_string(out, text),
                Err(e) => fail(CyclecutStatus::Panic, e.to_string()),
            },
            Err(e) => from_error(&e),
        }
    })
}

/// Tests whether a distribution such as `"1/3,1/3,1/3,0"` lies in the
/// feasible region.
///
/// # Safety
/// `dist` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cyclecut_region_contains(
    dist: *const c_char,
    out: *mut bool,
) -> CyclecutStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(dist) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match StateDistribution::parse(text) {
            Ok(p) => {
                *out = region_contains(&p);
                CyclecutStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}
