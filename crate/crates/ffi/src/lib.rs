//! C ABI over the core library.
//!
//! Conventions, in the order a caller meets them:
//!
//! * Every function returns a [`TkStatus`]; `TK_STATUS_OK` is zero. Output
//!   parameters are written only on success.
//! * Documents are opaque `TkDocument*` handles: created by the `tk_document_*`
//!   constructors, released with [`tk_document_free`].
//! * Returned strings are NUL-terminated copies owned by the caller; release
//!   them with [`tk_string_free`]. Structured results come back as JSON, the
//!   same shapes the CLI prints.
//! * After any non-OK status, [`tk_last_error_message`] describes what went
//!   wrong. The pointer stays valid until the next failing call on the same
//!   thread; copy it if you keep it.
//! * Panics never unwind across the boundary; they surface as
//!   `TK_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tiekit::metrics::{temporal_awareness, InconsistencyPolicy};
use tiekit::model::Document;
use tiekit::readers::{document_from_json, read_timeml};
use tiekit::timegraph::{temporal_closure, Timegraph, TimegraphError};

/// Result of every call in this interface.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TkStatus {
    /// The call succeeded and all output parameters are set.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input could not be parsed; see `tk_last_error_message`.
    Parse = 3,
    /// The temporal constraints admit no timeline.
    Inconsistent = 4,
    /// An entity id is not part of the document or graph.
    UnknownEntity = 5,
    /// An unexpected internal failure; see `tk_last_error_message`.
    Internal = 6,
}

/// An opaque parsed document handle.
pub struct TkDocument {
    inner: Document,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: TkStatus, message: impl Into<String>) -> TkStatus {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(message).expect("NULs were stripped"));
    });
    status
}

/// Run a body with panic isolation: a panic becomes `TK_STATUS_INTERNAL`
/// instead of undefined behaviour at the language boundary.
fn guarded(body: impl FnOnce() -> TkStatus) -> TkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with a non-string payload".to_owned());
            fail(TkStatus::Internal, format!("internal panic: {message}"))
        }
    }
}

/// Read a `*const c_char` argument as UTF-8, reporting failure inline.
///
/// # Safety
/// `ptr` must be NULL or a NUL-terminated string.
unsafe fn utf8_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, TkStatus> {
    if ptr.is_null() {
        return Err(fail(TkStatus::NullArgument, format!("{name} is NULL")));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| fail(TkStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn give_string(s: String, out: *mut *mut c_char) -> TkStatus {
    let c = CString::new(s.replace('\0', " ")).expect("NULs were stripped");
    unsafe { *out = c.into_raw() };
    TkStatus::Ok
}

fn doc_ref<'a>(doc: *const TkDocument, name: &str) -> Result<&'a Document, TkStatus> {
    if doc.is_null() {
        return Err(fail(TkStatus::NullArgument, format!("{name} is NULL")));
    }
    Ok(unsafe { &(*doc).inner })
}

fn tuple_json(relation: &tiekit::relations::TemporalRelation) -> serde_json::Value {
    let [xs_ys, xs_ye, xe_ys, xe_ye] = relation.point().as_array().map(|o| o.symbol());
    serde_json::json!({
        "xs_ys": xs_ys, "xs_ye": xs_ye, "xe_ys": xe_ys, "xe_ye": xe_ye,
    })
}

fn links_json(links: &[tiekit::model::TLink]) -> String {
    let records: Vec<serde_json::Value> = links
        .iter()
        .map(|l| {
            serde_json::json!({
                "id": l.id(),
                "source": l.source(),
                "target": l.target(),
                "relation": tuple_json(l.relation()),
            })
        })
        .collect();
    serde_json::Value::Array(records).to_string()
}

/// Version of this library as a static string; do not free it.
#[no_mangle]
pub extern "C" fn tk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or NULL if none.
/// Valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn tk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Release a string returned by this interface. NULL is a no-op.
#[no_mangle]
pub extern "C" fn tk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parse one document from its canonical JSON record.
#[no_mangle]
pub extern "C" fn tk_document_from_json(
    json: *const c_char,
    out: *mut *mut TkDocument,
) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TkStatus::NullArgument, "out is NULL");
        }
        let json = match unsafe { utf8_arg(json, "json") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match document_from_json(json) {
            Ok(inner) => {
                let handle = Box::new(TkDocument { inner });
                unsafe { *out = Box::into_raw(handle) };
                TkStatus::Ok
            }
            Err(err) => fail(TkStatus::Parse, err.to_string()),
        }
    })
}

/// Parse one TimeML (`.tml`/`.xml`) file from disk. Recoverable annotation
/// problems are repaired silently here; use the CLI to see warnings.
#[no_mangle]
pub extern "C" fn tk_document_read_timeml(
    path: *const c_char,
    out: *mut *mut TkDocument,
) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TkStatus::NullArgument, "out is NULL");
        }
        let path = match unsafe { utf8_arg(path, "path") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match read_timeml(path) {
            Ok(inner) => {
                let handle = Box::new(TkDocument { inner });
                unsafe { *out = Box::into_raw(handle) };
                TkStatus::Ok
            }
            Err(err) => fail(TkStatus::Parse, err.to_string()),
        }
    })
}

/// Release a document handle. NULL is a no-op.
#[no_mangle]
pub extern "C" fn tk_document_free(doc: *mut TkDocument) {
    if !doc.is_null() {
        drop(unsafe { Box::from_raw(doc) });
    }
}

/// The document's name, as a fresh string.
#[no_mangle]
pub extern "C" fn tk_document_name(doc: *const TkDocument, out: *mut *mut c_char) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TkStatus::NullArgument, "out is NULL");
        }
        match doc_ref(doc, "doc") {
            Ok(d) => give_string(d.name().to_owned(), out),
            Err(status) => status,
        }
    })
}

/// Number of annotated entities (events and time expressions; the creation
/// time is not included).
#[no_mangle]
pub extern "C" fn tk_document_entity_count(
    doc: *const TkDocument,
    out: *mut usize,
) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TkStatus::NullArgument, "out is NULL");
        }
        match doc_ref(doc, "doc") {
            Ok(d) => {
                unsafe { *out = d.entities().len() };
                TkStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Number of temporal links.
#[no_mangle]
pub extern "C" fn tk_document_tlink_count(doc: *const TkDocument, out: *mut usize) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TkStatus::NullArgument, "out is NULL");
        }
        match doc_ref(doc, "doc") {
            Ok(d) => {
                unsafe { *out = d.tlinks().len() };
                TkStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Whether the document's tlinks admit at least one timeline.
#[no_mangle]
pub extern "C" fn tk_document_is_consistent(
    doc: *const TkDocument,
    out: *mut bool,
) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TkStatus::NullArgument, "out is NULL");
        }
        match doc_ref(doc, "doc") {
            Ok(d) => {
                unsafe { *out = tiekit::timegraph::is_consistent(d.tlinks()) };
                TkStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Temporal closure of the document's tlinks, as a JSON array of link
/// records (the same shape the interchange format uses). On inconsistency
/// the status is `TK_STATUS_INCONSISTENT` and the error message names the
/// size of the conflicting subset.
#[no_mangle]
pub extern "C" fn tk_document_closure_json(
    doc: *const TkDocument,
    out: *mut *mut c_char,
) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TkStatus::NullArgument, "out is NULL");
        }
        let d = match doc_ref(doc, "doc") {
            Ok(d) => d,
            Err(status) => return status,
        };
        match temporal_closure(d.tlinks()) {
            Ok(links) => give_string(links_json(&links), out),
            Err(err @ TimegraphError::Inconsistent { .. }) => {
                fail(TkStatus::Inconsistent, err.to_string())
            }
            Err(err) => fail(TkStatus::Internal, err.to_string()),
        }
    })
}

/// The entailed relation between two entities, as a JSON object of the four
/// endpoint-order slots (`null` where nothing is entailed).
#[no_mangle]
pub extern "C" fn tk_document_relation_between(
    doc: *const TkDocument,
    source: *const c_char,
    target: *const c_char,
    out: *mut *mut c_char,
) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TkStatus::NullArgument, "out is NULL");
        }
        let d = match doc_ref(doc, "doc") {
            Ok(d) => d,
            Err(status) => return status,
        };
        let source = match unsafe { utf8_arg(source, "source") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let target = match unsafe { utf8_arg(target, "target") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let graph = match Timegraph::build(d.tlinks()) {
            Ok(graph) => graph,
            Err(err @ TimegraphError::Inconsistent { .. }) => {
                return fail(TkStatus::Inconsistent, err.to_string())
            }
            Err(err) => return fail(TkStatus::Internal, err.to_string()),
        };
        match graph.relation_between(source, target) {
            Ok(relation) => give_string(tuple_json(&relation).to_string(), out),
            Err(err @ TimegraphError::UnknownEntity { .. }) => {
                fail(TkStatus::UnknownEntity, err.to_string())
            }
            Err(err) => fail(TkStatus::Internal, err.to_string()),
        }
    })
}

/// Entailment-based evaluation of one document's predicted tlinks against
/// gold. With `repair_predictions` true, inconsistent predictions are
/// greedily repaired (as the evaluator does); with it false they are an
/// error. Writes temporal precision, recall, and their harmonic mean.
#[no_mangle]
pub extern "C" fn tk_temporal_awareness(
    gold: *const TkDocument,
    predictions: *const TkDocument,
    repair_predictions: bool,
    precision: *mut f64,
    recall: *mut f64,
    f1: *mut f64,
) -> TkStatus {
    guarded(|| {
        if precision.is_null() || recall.is_null() || f1.is_null() {
            return fail(TkStatus::NullArgument, "a score output pointer is NULL");
        }
        let gold = match doc_ref(gold, "gold") {
            Ok(d) => d,
            Err(status) => return status,
        };
        let predictions = match doc_ref(predictions, "predictions") {
            Ok(d) => d,
            Err(status) => return status,
        };
        let policy = if repair_predictions {
            InconsistencyPolicy::DropGreedy
        } else {
            InconsistencyPolicy::FailHard
        };
        match temporal_awareness(gold.tlinks(), predictions.tlinks(), policy) {
            Ok(counts) => {
                unsafe {
                    *precision = counts.precision();
                    *recall = counts.recall();
                    *f1 = counts.tf1();
                }
                TkStatus::Ok
            }
            Err(err) => fail(TkStatus::Inconsistent, err.to_string()),
        }
    })
}
