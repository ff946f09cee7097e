//! C ABI for the `qtedit` library.
//!
//! Graphs and skeleton forests are handed out as opaque heap handles that the
//! caller releases with the matching `*_free` function. Every fallible call
//! returns a [`QteStatus`]; on failure a description is available from
//! [`qte_last_error_message`] on the same thread. Panics never cross the
//! boundary; they are reported as [`QteStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qtedit::{
    count_edits, count_triangles, initial_skeleton, load_edge_list, lower_bound,
    qtm::initial_forest, recognize, run_qtm, Error, ForbiddenKind, Graph, InitKind, Recognition,
    SkeletonForest,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QteStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Infeasible = 5,
    Panic = 6,
}

/// Opaque undirected graph.
pub struct QteGraph(Graph);

/// Opaque rooted skeleton forest.
pub struct QteForest(SkeletonForest);

/// Kind of forbidden subgraph in a recognition result.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QteForbidden {
    None = 0,
    P4 = 1,
    C4 = 2,
}

/// Outcome of [`qte_recognize`]. When `forbidden` is not `NONE`, `nodes`
/// holds the certificate in path (or cycle) order.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QteRecognition {
    pub is_quasi_threshold: bool,
    pub forbidden: QteForbidden,
    pub nodes: [usize; 4],
}

/// Starting skeleton for [`qte_qtm`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QteInit {
    Heuristic = 0,
    Trivial = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QteStatus {
    match e {
        Error::Parse { .. } => QteStatus::Parse,
        Error::Io(_) => QteStatus::Io,
        Error::Infeasible(_) | Error::TooLarge { .. } => QteStatus::Infeasible,
        _ => QteStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (QteStatus, String)>>(f: F) -> QteStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QteStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            QteStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (QteStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QteStatus, String) {
    (QteStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to a live value of type `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (QteStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), (QteStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qte_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a graph on `n` nodes from `m` edges given as parallel endpoint
/// arrays. Self-loops and duplicates are ignored.
///
/// # Safety
/// `us` and `vs` must point to `m` readable elements each (they may be null
/// when `m == 0`); `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qte_graph_from_edges(
    n: usize,
    us: *const usize,
    vs: *const usize,
    m: usize,
    out: *mut *mut QteGraph,
) -> QteStatus {
    guard(|| {
        if m > 0 && (us.is_null() || vs.is_null()) {
            return Err(null("edge array"));
        }
        let (us, vs) = if m == 0 {
            (&[][..], &[][..])
        } else {
            (
                std::slice::from_raw_parts(us, m),
                std::slice::from_raw_parts(vs, m),
            )
        };
        if let Some((&u, &v)) = us.iter().zip(vs).find(|&(&u, &v)| u >= n || v >= n) {
            return Err((
                QteStatus::InvalidArgument,
                format!("edge ({u}, {v}) out of range for {n} nodes"),
            ));
        }
        let g = Graph::from_edges(n, us.iter().copied().zip(vs.iter().copied()));
        store(out, Box::into_raw(Box::new(QteGraph(g))), "out")
    })
}

/// Loads a whitespace-separated edge list file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qte_graph_load(path: *const c_char, out: *mut *mut QteGraph) -> QteStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| (QteStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
        let file = File::open(path).map_err(|e| lib_err(e.into()))?;
        let g = load_edge_list(BufReader::new(file)).map_err(lib_err)?;
        store(out, Box::into_raw(Box::new(QteGraph(g))), "out")
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn qte_graph_free(g: *mut QteGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn qte_graph_node_count(g: *const QteGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.node_count())
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn qte_graph_edge_count(g: *const QteGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Certifying recognition. When the graph is quasi-threshold and `forest` is
/// not null, a new skeleton handle is stored there; otherwise `*forest` is
/// set to null (if given).
///
/// # Safety
/// `g` must be a live graph handle; `out` must be valid for a write; `forest`
/// must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qte_recognize(
    g: *const QteGraph,
    out: *mut QteRecognition,
    forest: *mut *mut QteForest,
) -> QteStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let (result, skeleton) = match recognize(&g.0) {
            Recognition::QuasiThreshold(f) => (
                QteRecognition {
                    is_quasi_threshold: true,
                    forbidden: QteForbidden::None,
                    nodes: [0; 4],
                },
                Some(f),
            ),
            Recognition::Forbidden(c) => (
                QteRecognition {
                    is_quasi_threshold: false,
                    forbidden: match c.kind {
                        ForbiddenKind::P4 => QteForbidden::P4,
                        ForbiddenKind::C4 => QteForbidden::C4,
                    },
                    nodes: c.nodes,
                },
                None,
            ),
        };
        store(out, result, "out")?;
        if !forest.is_null() {
            let handle =
                skeleton.map_or(ptr::null_mut(), |f| Box::into_raw(Box::new(QteForest(f))));
            forest.write(handle);
        }
        Ok(())
    })
}

/// Triangle-guided initial skeleton.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qte_initial_skeleton(
    g: *const QteGraph,
    out: *mut *mut QteForest,
) -> QteStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let f = initial_skeleton(&g.0, &count_triangles(&g.0));
        store(out, Box::into_raw(Box::new(QteForest(f))), "out")
    })
}

/// Runs the Quasi-Threshold Mover. `max_rounds == 0` runs until a round
/// changes nothing. The final edit count goes to `edits`; the final skeleton
/// goes to `forest` unless it is null.
///
/// # Safety
/// `g` must be a live graph handle; `edits` must be valid for a write;
/// `forest` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qte_qtm(
    g: *const QteGraph,
    init: QteInit,
    max_rounds: usize,
    seed: u64,
    edits: *mut usize,
    forest: *mut *mut QteForest,
) -> QteStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        let kind = match init {
            QteInit::Heuristic => InitKind::Heuristic,
            QteInit::Trivial => InitKind::Trivial,
        };
        let start = initial_forest(&g.0, kind);
        let rounds = (max_rounds > 0).then_some(max_rounds);
        let run = run_qtm(&g.0, &start, rounds, seed).map_err(lib_err)?;
        store(edits, run.edits, "edits")?;
        if !forest.is_null() {
            forest.write(Box::into_raw(Box::new(QteForest(run.forest))));
        }
        Ok(())
    })
}

/// Number of edits turning the graph into the closure of the forest.
///
/// # Safety
/// `g` and `f` must be live handles; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qte_count_edits(
    g: *const QteGraph,
    f: *const QteForest,
    out: *mut usize,
) -> QteStatus {
    guard(|| {
        let (g, f) = (deref(g, "graph")?, deref(f, "forest")?);
        let k = count_edits(&g.0, &f.0).map_err(lib_err)?;
        store(out, k, "out")
    })
}

/// Disjoint-witness lower bound on the edit distance.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qte_lower_bound(
    g: *const QteGraph,
    seed: u64,
    out: *mut usize,
) -> QteStatus {
    guard(|| {
        let g = deref(g, "graph")?;
        store(out, lower_bound(&g.0, seed).bound, "out")
    })
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live forest handle.
#[no_mangle]
pub unsafe extern "C" fn qte_forest_node_count(f: *const QteForest) -> usize {
    f.as_ref().map_or(0, |f| f.0.node_count())
}

/// Parent of `node`, or -1 for a root.
///
/// # Safety
/// `f` must be a live forest handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qte_forest_parent(
    f: *const QteForest,
    node: usize,
    out: *mut isize,
) -> QteStatus {
    guard(|| {
        let f = deref(f, "forest")?;
        if node >= f.0.node_count() {
            return Err((
                QteStatus::InvalidArgument,
                format!("node {node} out of range for {} nodes", f.0.node_count()),
            ));
        }
        store(out, f.0.parent(node).map_or(-1, |p| p as isize), "out")
    })
}

/// Releases a forest. Null is ignored.
///
/// # Safety
/// `f` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn qte_forest_free(f: *mut QteForest) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}
