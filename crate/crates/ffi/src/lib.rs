//! C ABI over the graph repair library.
//!
//! Objects are opaque handles owned by the caller and released with the matching `*_free`.
//! Every fallible call returns an `i32` status; on failure the message is available from
//! [`gr_last_error`] until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use grafrepair::condition::Constraint;
use grafrepair::error::Error;
use grafrepair::graph::{Graph, TypeGraph};
use grafrepair::io::{self, Document, Kind};
use grafrepair::repair::{construct_repairing_set, repair_one, RepairOptions};

pub const GR_OK: i32 = 0;
pub const GR_ERR_NULL: i32 = -1;
pub const GR_ERR_UTF8: i32 = -2;
pub const GR_ERR_PARSE: i32 = -3;
pub const GR_ERR_INVALID: i32 = -4;
pub const GR_ERR_LIMIT: i32 = -5;
pub const GR_ERR_CYCLIC: i32 = -6;
pub const GR_ERR_PANIC: i32 = -7;

const SEARCH_DEPTH: usize = 4;

/// A typed graph together with its type graph.
pub struct GrGraph {
    tg: TypeGraph,
    graph: Graph,
}

/// A constraint in alternating normal form.
pub struct GrConstraint {
    constraint: Constraint,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) => GR_ERR_PARSE,
        Error::IterationLimit(_) => GR_ERR_LIMIT,
        Error::Cyclic(_) => GR_ERR_CYCLIC,
        _ => GR_ERR_INVALID,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (i32, String)>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GR_OK,
        Ok(Err((code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            GR_ERR_PANIC
        }
    }
}

fn lib(e: Error) -> (i32, String) {
    (code_of(&e), e.to_string())
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, (i32, String)> {
    if s.is_null() {
        return Err((GR_ERR_NULL, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (GR_ERR_UTF8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn type_graph(s: *const c_char) -> Result<Option<TypeGraph>, (i32, String)> {
    if s.is_null() {
        return Ok(None);
    }
    let (tg, _) = io::parse_document(text(s, "type graph")?, Kind::TypeGraph, None).map_err(lib)?;
    Ok(Some(tg))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), (i32, String)> {
    if p.is_null() {
        Err((GR_ERR_NULL, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Message of the last failing call on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn gr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a graph document. `type_graph_json` may be null when the document embeds one.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gr_graph_from_json(json: *const c_char, type_graph_json: *const c_char, out: *mut *mut GrGraph) -> i32 {
    guard(|| {
        non_null(out, "out")?;
        let tg = type_graph(type_graph_json)?;
        let (tg, doc) = io::parse_document(text(json, "json")?, Kind::Graph, tg.as_ref()).map_err(lib)?;
        let Document::Graph(graph) = doc else { unreachable!("graph kind yields a graph") };
        *out = Box::into_raw(Box::new(GrGraph { tg, graph }));
        Ok(())
    })
}

/// Canonical JSON of a graph. Release the string with [`gr_string_free`].
///
/// # Safety
/// `graph` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gr_graph_to_json(graph: *const GrGraph, out: *mut *mut c_char) -> i32 {
    guard(|| {
        non_null(graph, "graph")?;
        non_null(out, "out")?;
        let g = &*graph;
        let s = io::save_document(&Document::Graph(g.graph.clone()), &g.tg);
        *out = CString::new(s).map_err(|e| (GR_ERR_INVALID, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Number of nodes and edges.
///
/// # Safety
/// `graph` must come from this library; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gr_graph_size(graph: *const GrGraph, nodes: *mut usize, edges: *mut usize) -> i32 {
    guard(|| {
        non_null(graph, "graph")?;
        non_null(nodes, "nodes")?;
        non_null(edges, "edges")?;
        *nodes = (*graph).graph.node_count();
        *edges = (*graph).graph.edge_count();
        Ok(())
    })
}

/// # Safety
/// `graph` must be null or come from this library, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gr_graph_free(graph: *mut GrGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Parse a constraint document. `type_graph_json` may be null when the document embeds one.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gr_constraint_from_json(
    json: *const c_char,
    type_graph_json: *const c_char,
    out: *mut *mut GrConstraint,
) -> i32 {
    guard(|| {
        non_null(out, "out")?;
        let tg = type_graph(type_graph_json)?;
        let (_, doc) = io::parse_document(text(json, "json")?, Kind::Constraint, tg.as_ref()).map_err(lib)?;
        let Document::Constraint(constraint) = doc else { unreachable!("constraint kind yields a constraint") };
        *out = Box::into_raw(Box::new(GrConstraint { constraint }));
        Ok(())
    })
}

/// Nesting level of a constraint.
///
/// # Safety
/// `constraint` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gr_constraint_nlvl(constraint: *const GrConstraint, out: *mut usize) -> i32 {
    guard(|| {
        non_null(constraint, "constraint")?;
        non_null(out, "out")?;
        *out = (*constraint).constraint.nlvl();
        Ok(())
    })
}

/// # Safety
/// `constraint` must be null or come from this library, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gr_constraint_free(constraint: *mut GrConstraint) {
    if !constraint.is_null() {
        drop(Box::from_raw(constraint));
    }
}

/// Writes 1 to `out` when the graph satisfies the constraint and 0 otherwise.
///
/// # Safety
/// Handles must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gr_check(graph: *const GrGraph, constraint: *const GrConstraint, out: *mut i32) -> i32 {
    guard(|| {
        non_null(graph, "graph")?;
        non_null(constraint, "constraint")?;
        non_null(out, "out")?;
        *out = i32::from((*constraint).constraint.satisfied_by(&(*graph).graph));
        Ok(())
    })
}

/// Largest satisfied layer.
///
/// # Safety
/// Handles must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gr_kmax(graph: *const GrGraph, constraint: *const GrConstraint, out: *mut i32) -> i32 {
    guard(|| {
        non_null(graph, "graph")?;
        non_null(constraint, "constraint")?;
        non_null(out, "out")?;
        *out = (*constraint).constraint.kmax(&(*graph).graph);
        Ok(())
    })
}

/// Repair a graph for one constraint. `rules_json` is a rule-set document, or null to use the
/// constructed repairing set. The repaired graph is a new handle.
///
/// # Safety
/// Handles must come from this library; `rules_json` must be null or NUL-terminated;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gr_repair(
    graph: *const GrGraph,
    constraint: *const GrConstraint,
    rules_json: *const c_char,
    seed: u64,
    out: *mut *mut GrGraph,
) -> i32 {
    guard(|| {
        non_null(graph, "graph")?;
        non_null(constraint, "constraint")?;
        non_null(out, "out")?;
        let g = &*graph;
        let c = &(*constraint).constraint;
        let set = if rules_json.is_null() {
            construct_repairing_set(c).map_err(lib)?
        } else {
            let (_, doc) = io::parse_document(text(rules_json, "rules")?, Kind::RuleSet, Some(&g.tg)).map_err(lib)?;
            let Document::RuleSet(rs) = doc else { unreachable!("rule-set kind yields a rule set") };
            io::repairing_sets(&rs, std::slice::from_ref(c), SEARCH_DEPTH).map_err(lib)?.remove(0)
        };
        let (h, _) = repair_one(&g.graph, c, &set, RepairOptions { seed, max_iterations: None }).map_err(lib)?;
        *out = Box::into_raw(Box::new(GrGraph { tg: g.tg.clone(), graph: h }));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
