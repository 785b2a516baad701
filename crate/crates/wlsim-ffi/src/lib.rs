//! C ABI over the wlsim library.
//!
//! Conventions: graphs are opaque handles created and freed here; every
//! fallible call returns a [`WlsimStatus`] and writes results through out
//! pointers; string messages for the most recent failure on the calling
//! thread come from [`wlsim_last_error`]. Distinguish-style calls use the
//! dedicated `Distinguished` status, mirroring the CLI's exit code 1.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use wlsim::generate::{barabasi_albert, erdos_renyi};
use wlsim::harness::{min_precision_bits, perfect_simulation, MinBitsOutcome, ModelOptions};
use wlsim::io::load_graph;
use wlsim::korder::{nwl_distinguish, DEFAULT_TUPLE_BUDGET};
use wlsim::wl::{default_max_rounds, default_pair_rounds, wl_distinguish, wl_run, DistinguishOutcome};
use wlsim::{Error, Graph, PrecisionContext};

/// Status codes; 0 is success and `Distinguished` is an affirmative
/// answer, not an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlsimStatus {
    Ok = 0,
    Distinguished = 1,
    InvalidInput = 2,
    RuntimeError = 3,
    NotFound = 4,
}

/// An immutable graph behind an opaque pointer.
pub struct WlsimGraph {
    inner: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let sanitized = message.replace('\0', "?");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).expect("NUL bytes stripped"));
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

fn status_of(err: &Error) -> WlsimStatus {
    match err.exit_code() {
        2 => WlsimStatus::InvalidInput,
        _ => WlsimStatus::RuntimeError,
    }
}

/// Runs `body` with panic isolation and the error-message protocol.
fn guarded(body: impl FnOnce() -> Result<WlsimStatus, Error>) -> WlsimStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in wlsim".to_string());
            set_error(message);
            WlsimStatus::RuntimeError
        }
    }
}

fn invalid(message: &str) -> WlsimStatus {
    set_error(message.to_string());
    WlsimStatus::InvalidInput
}

unsafe fn graph_ref<'a>(g: *const WlsimGraph) -> Option<&'a Graph> {
    g.as_ref().map(|h| &h.inner)
}

unsafe fn hand_out(out: *mut *mut WlsimGraph, graph: Graph) {
    *out = Box::into_raw(Box::new(WlsimGraph { inner: graph }));
}

/// Message for the most recent failure on this thread, or null after a
/// success. The pointer is valid until the next wlsim call on the thread.
#[no_mangle]
pub extern "C" fn wlsim_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wlsim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Loads a graph file (`n=<count>` header, one `u v` edge per line).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlsim_graph_load(
    path: *const c_char,
    out: *mut *mut WlsimGraph,
) -> WlsimStatus {
    if path.is_null() || out.is_null() {
        return invalid("null pointer argument");
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        return invalid("path is not valid UTF-8");
    };
    guarded(|| {
        let g = load_graph(Path::new(path), None)?;
        hand_out(out, g);
        Ok(WlsimStatus::Ok)
    })
}

/// Samples G(nodes, prob) with the documented generator.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlsim_graph_erdos_renyi(
    nodes: u64,
    prob: f64,
    seed: u64,
    out: *mut *mut WlsimGraph,
) -> WlsimStatus {
    if out.is_null() {
        return invalid("null pointer argument");
    }
    guarded(|| {
        let g = erdos_renyi(nodes as usize, prob, seed)?;
        hand_out(out, g);
        Ok(WlsimStatus::Ok)
    })
}

/// Samples a preferential-attachment graph (`attach` edges per node).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlsim_graph_barabasi_albert(
    nodes: u64,
    attach: u64,
    seed: u64,
    out: *mut *mut WlsimGraph,
) -> WlsimStatus {
    if out.is_null() {
        return invalid("null pointer argument");
    }
    guarded(|| {
        let g = barabasi_albert(nodes as usize, attach as usize, seed)?;
        hand_out(out, g);
        Ok(WlsimStatus::Ok)
    })
}

/// Frees a graph handle; a null pointer is a no-op.
///
/// # Safety
/// `g` must have come from a wlsim constructor and not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn wlsim_graph_free(g: *mut WlsimGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn wlsim_graph_nodes(g: *const WlsimGraph) -> u64 {
    graph_ref(g).map_or(0, |g| g.node_count() as u64)
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn wlsim_graph_edges(g: *const WlsimGraph) -> u64 {
    graph_ref(g).map_or(0, |g| g.edge_count() as u64)
}

/// Refines to convergence; writes the stable round and class count.
///
/// # Safety
/// `g` must be a live handle; out pointers may be null to skip a field.
#[no_mangle]
pub unsafe extern "C" fn wlsim_wl_run(
    g: *const WlsimGraph,
    stable_round: *mut u64,
    classes: *mut u64,
) -> WlsimStatus {
    let Some(g) = graph_ref(g) else {
        return invalid("null graph handle");
    };
    guarded(|| {
        let trace = wl_run(g, default_max_rounds(g))?;
        let round = trace.stable_round().expect("default budget always converges");
        if !stable_round.is_null() {
            *stable_round = round as u64;
        }
        if !classes.is_null() {
            *classes = trace.class_counts[round] as u64;
        }
        Ok(WlsimStatus::Ok)
    })
}

/// Compares two graphs under refinement. Returns `Distinguished` (writing
/// the round) or `Ok` for indistinguishable.
///
/// # Safety
/// `a` and `b` must be live handles; `round` may be null.
#[no_mangle]
pub unsafe extern "C" fn wlsim_wl_distinguish(
    a: *const WlsimGraph,
    b: *const WlsimGraph,
    round: *mut u64,
) -> WlsimStatus {
    let (Some(a), Some(b)) = (graph_ref(a), graph_ref(b)) else {
        return invalid("null graph handle");
    };
    guarded(|| match wl_distinguish(a, b, default_pair_rounds(a, b))? {
        DistinguishOutcome::Distinguished { round: r } => {
            if !round.is_null() {
                *round = r as u64;
            }
            Ok(WlsimStatus::Distinguished)
        }
        DistinguishOutcome::Undistinguished { .. } => Ok(WlsimStatus::Ok),
    })
}

/// Compares two graphs under the k-order test.
///
/// # Safety
/// `a` and `b` must be live handles; `round` may be null.
#[no_mangle]
pub unsafe extern "C" fn wlsim_nwl_distinguish(
    a: *const WlsimGraph,
    b: *const WlsimGraph,
    k: u64,
    round: *mut u64,
) -> WlsimStatus {
    let (Some(a), Some(b)) = (graph_ref(a), graph_ref(b)) else {
        return invalid("null graph handle");
    };
    guarded(|| match nwl_distinguish(a, b, k as usize, DEFAULT_TUPLE_BUDGET)? {
        DistinguishOutcome::Distinguished { round: r } => {
            if !round.is_null() {
                *round = r as u64;
            }
            Ok(WlsimStatus::Distinguished)
        }
        DistinguishOutcome::Undistinguished { .. } => Ok(WlsimStatus::Ok),
    })
}

/// Whether the network at `bits` of precision tracks refinement on `g`
/// (sigmoid activation, simplified weights, constant-one features).
///
/// # Safety
/// `g` must be a live handle and `perfect` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlsim_perfect_simulation(
    g: *const WlsimGraph,
    gamma: f64,
    bits: u32,
    perfect: *mut bool,
) -> WlsimStatus {
    let Some(g) = graph_ref(g) else {
        return invalid("null graph handle");
    };
    if perfect.is_null() {
        return invalid("null out pointer");
    }
    guarded(|| {
        let ctx = PrecisionContext::new(bits)?;
        let report = perfect_simulation("", g, gamma, &ctx, &ModelOptions::default())?;
        *perfect = report.perfect;
        Ok(WlsimStatus::Ok)
    })
}

/// Minimum sufficient precision on the search lattice; `NotFound` when
/// nothing up to `p_max` simulates perfectly.
///
/// # Safety
/// `g` must be a live handle and `bits` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlsim_min_precision_bits(
    g: *const WlsimGraph,
    gamma: f64,
    p_max: u32,
    bits: *mut u32,
) -> WlsimStatus {
    let Some(g) = graph_ref(g) else {
        return invalid("null graph handle");
    };
    if bits.is_null() {
        return invalid("null out pointer");
    }
    guarded(|| {
        let search = min_precision_bits(g, gamma, p_max, &ModelOptions::default())?;
        match search.outcome {
            MinBitsOutcome::Found { bits: b, .. } => {
                *bits = b;
                Ok(WlsimStatus::Ok)
            }
            MinBitsOutcome::NotFound { .. } => Ok(WlsimStatus::NotFound),
        }
    })
}
