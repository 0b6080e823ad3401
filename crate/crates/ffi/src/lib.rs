//! C interface to the fatgraph library.
//!
//! Algebras and graphs cross the boundary as opaque handles built from the
//! same JSON documents the command line reads. Every call returns an
//! [`FgStatus`]; on failure a message is kept per thread and can be read with
//! [`fg_last_error`]. Strings handed out by the library are owned by the
//! caller and released with [`fg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fatgraph::ainf::{fixtures, AInfinityAlgebra};
use fatgraph::complex::homology_dims;
use fatgraph::graph::Graph;
use fatgraph::io::{algebra_from_json, chain_to_doc, CanonicalDoc, GraphDoc, TensorDoc};
use fatgraph::verify::{self, Suite, VerifyOptions};
use fatgraph::Error;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgStatus {
    Ok = 0,
    /// a pointer argument was null
    NullArgument = 1,
    /// a string argument was not UTF-8
    Utf8 = 2,
    /// malformed JSON or a document that does not describe a valid object
    Input = 3,
    /// the data is well formed but the computation is not defined for it
    Math = 4,
    /// an identity suite ran and failed
    IdentityFailed = 5,
    /// a bug inside the library
    Panic = 6,
}

/// An algebra together with its cyclic structure.
pub struct FgAlgebra(AInfinityAlgebra);

/// A ribbon graph, possibly with legs.
pub struct FgGraph(Graph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FgStatus {
    match e {
        Error::Input(_)
        | Error::Json(_)
        | Error::InvalidGraph(_)
        | Error::InvalidPermutation(_) => FgStatus::Input,
        _ => FgStatus::Math,
    }
}

struct Fail(FgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FgStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            FgStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(FgStatus::NullArgument, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(FgStatus::Utf8, format!("{what}: {e}")))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(FgStatus::Panic, e.to_string()))?;
    put(out, c.into_raw(), "out")
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Fail> {
    serde_json::to_string(value).map_err(|e| Fail(FgStatus::Panic, e.to_string()))
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn fg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an algebra document. The algebra is not validated; see
/// [`fg_algebra_validate`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_algebra_from_json(
    json: *const c_char,
    out: *mut *mut FgAlgebra,
) -> FgStatus {
    guard(|| {
        let a = algebra_from_json(read_str(json, "json")?)?;
        put(out, Box::into_raw(Box::new(FgAlgebra(a))), "out")
    })
}

/// Loads one of the shipped algebras: `trivial`, `even_sphere`, `odd_line`
/// or `twisted_2_1`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_algebra_fixture(
    name: *const c_char,
    out: *mut *mut FgAlgebra,
) -> FgStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let a = fixtures::by_name(name)
            .ok_or_else(|| Fail(FgStatus::Input, format!("no fixture named {name:?}")))?;
        put(out, Box::into_raw(Box::new(FgAlgebra(a))), "out")
    })
}

/// # Safety
/// `a` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_algebra_free(a: *mut FgAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Checks the form and the cyclic A-infinity relations. Writes 1 to `valid`
/// when every check passes and, if `report` is not null, the full report as JSON.
///
/// # Safety
/// `a` must be a live handle, `valid` a writable pointer, `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fg_algebra_validate(
    a: *const FgAlgebra,
    valid: *mut i32,
    report: *mut *mut c_char,
) -> FgStatus {
    guard(|| {
        let r = get(a, "algebra")?.0.validate();
        put(valid, i32::from(r.is_valid()), "valid")?;
        if !report.is_null() {
            put_string(report, json(&r)?)?;
        }
        Ok(())
    })
}

/// Parses a graph document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_from_json(
    json: *const c_char,
    out: *mut *mut FgGraph,
) -> FgStatus {
    guard(|| {
        let doc: GraphDoc = serde_json::from_str(read_str(json, "json")?).map_err(Error::from)?;
        let g = doc.to_graph()?;
        put(out, Box::into_raw(Box::new(FgGraph(g))), "out")
    })
}

/// # Safety
/// `g` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_free(g: *mut FgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Canonical form of a graph: representative, orientation sign and
/// automorphism count.
///
/// # Safety
/// `g` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_canonical_json(
    g: *const FgGraph,
    out: *mut *mut c_char,
) -> FgStatus {
    guard(|| {
        let doc = CanonicalDoc::of(&get(g, "graph")?.0);
        put_string(out, json(&doc)?)
    })
}

/// Partition function value on a closed graph, written as a decimal scalar
/// such as `-1/6` or `1/2+3i`.
///
/// # Safety
/// `a` and `g` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_partition_value(
    a: *const FgAlgebra,
    g: *const FgGraph,
    out: *mut *mut c_char,
) -> FgStatus {
    guard(|| {
        let z = get(a, "algebra")?.0.partition_value(&get(g, "graph")?.0)?;
        put_string(out, z.to_string())
    })
}

/// Partition function summed over all graphs with at most `max_vertices`
/// vertices and `max_edges` edges, as a JSON list of graph terms.
///
/// # Safety
/// `a` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_partition_function_json(
    a: *const FgAlgebra,
    max_vertices: usize,
    max_edges: usize,
    connected: bool,
    out: *mut *mut c_char,
) -> FgStatus {
    guard(|| {
        let z = get(a, "algebra")?
            .0
            .partition_function(max_vertices, max_edges, connected)?;
        put_string(out, json(&chain_to_doc(&z))?)
    })
}

/// Correlator of a legged graph as a tensor document.
///
/// # Safety
/// `a` and `g` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_correlation_json(
    a: *const FgAlgebra,
    g: *const FgGraph,
    out: *mut *mut c_char,
) -> FgStatus {
    guard(|| {
        let t = fatgraph::tcft::correlation(&get(a, "algebra")?.0, &get(g, "graph")?.0)?;
        put_string(out, json(&TensorDoc::from_tensor(&t))?)
    })
}

/// Betti numbers of the graph complex up to `max_edges` edges, as JSON rows.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fg_homology_json(
    max_edges: usize,
    connected: bool,
    out: *mut *mut c_char,
) -> FgStatus {
    guard(|| put_string(out, json(&homology_dims(max_edges, connected))?))
}

/// Runs a named identity suite. `max_edges` and `samples` of 0 select the
/// suite defaults; a null `a` runs against the shipped algebras. Returns
/// `FG_STATUS_IDENTITY_FAILED` when the suite finds a counterexample, in which
/// case the report is still written.
///
/// # Safety
/// `suite` must be a NUL-terminated string, `a` null or a live handle,
/// `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fg_verify(
    suite: *const c_char,
    a: *const FgAlgebra,
    max_edges: usize,
    samples: usize,
    seed: u64,
    report: *mut *mut c_char,
) -> FgStatus {
    let mut failed = false;
    let status = guard(|| {
        let suite: Suite = read_str(suite, "suite")?.parse()?;
        let algebras = match a.as_ref() {
            Some(a) => vec![("algebra".to_string(), a.0.clone())],
            None => Vec::new(),
        };
        let opts = VerifyOptions {
            max_edges: (max_edges > 0).then_some(max_edges),
            samples: (samples > 0).then_some(samples),
            seed,
            algebras,
            ..VerifyOptions::default()
        };
        let r = verify::run(suite, &opts)?;
        if !report.is_null() {
            put_string(report, json(&r)?)?;
        }
        failed = !r.passed();
        Ok(())
    });
    if status == FgStatus::Ok && failed {
        set_error(format!(
            "suite {} failed",
            CStr::from_ptr(suite).to_string_lossy()
        ));
        return FgStatus::IdentityFailed;
    }
    status
}
