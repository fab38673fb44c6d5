//! Canonical JSON-lines interchange.
//!
//! One JSON object per document:
//!
//! ```json
//! {"name":"...","text":"...","dct":{...},"entities":[{"id":"e1","kind":"event",
//!  "text":"went","span":[13,17],"attributes":{"class":"OCCURRENCE"}}],
//!  "tlinks":[{"id":"l1","source":"e1","target":"t0",
//!  "relation":{"xs_ys":"<","xs_ye":"<","xe_ys":"<","xe_ye":"<"}}],"split":"train"}
//! ```
//!
//! Relations are stored as their saturated point tuples with the symbols
//! `"<"`, `">"`, `"="` and `null`, never as labels, so a file means the
//! same thing regardless of which corpus convention produced it. Attribute
//! maps are omitted when empty; `split` is omitted for bare documents and
//! otherwise holds `"train"` or `"test"`. Reading inverts writing exactly.

use std::collections::BTreeMap;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{Dataset, Document, Entity, EntityKind, TLink};
use crate::relations::{PointOrder, PointRelation, TemporalRelation};

use super::{file_stem, ReadError};

#[derive(Serialize, Deserialize)]
struct RawDocument {
    name: String,
    text: String,
    dct: RawEntity,
    entities: Vec<RawEntity>,
    tlinks: Vec<RawTLink>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct RawEntity {
    id: String,
    kind: String,
    text: String,
    span: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    attributes: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct RawTLink {
    id: Option<String>,
    source: String,
    target: String,
    relation: RawRelation,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    attributes: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct RawRelation {
    xs_ys: Option<String>,
    xs_ye: Option<String>,
    xe_ys: Option<String>,
    xe_ye: Option<String>,
}

fn raw_entity(e: &Entity) -> RawEntity {
    RawEntity {
        id: e.id.clone(),
        kind: e.kind.name().to_owned(),
        text: e.text.clone(),
        span: e.span,
        attributes: e.attributes.clone(),
    }
}

fn raw_tlink(t: &TLink) -> RawTLink {
    let sym = |o: PointOrder| o.symbol().map(str::to_owned);
    let p = t.relation().point();
    RawTLink {
        id: t.id().map(str::to_owned),
        source: t.source().to_owned(),
        target: t.target().to_owned(),
        relation: RawRelation {
            xs_ys: sym(p.xs_ys),
            xs_ye: sym(p.xs_ye),
            xe_ys: sym(p.xe_ys),
            xe_ye: sym(p.xe_ye),
        },
        attributes: t.attributes().clone(),
    }
}

fn raw_document(doc: &Document, split: Option<&str>) -> RawDocument {
    RawDocument {
        name: doc.name().to_owned(),
        text: doc.text().to_owned(),
        dct: raw_entity(doc.dct()),
        entities: doc.entities().iter().map(raw_entity).collect(),
        tlinks: doc.tlinks().iter().map(raw_tlink).collect(),
        split: split.map(str::to_owned),
    }
}

fn entity_of_raw(raw: RawEntity, fail: &impl Fn(String) -> ReadError) -> Result<Entity, ReadError> {
    let kind = match raw.kind.as_str() {
        "event" => EntityKind::Event,
        "timex" => EntityKind::Timex,
        other => return Err(fail(format!("unknown entity kind {other:?}"))),
    };
    Ok(Entity {
        id: raw.id,
        kind,
        text: raw.text,
        span: raw.span,
        attributes: raw.attributes,
    })
}

fn tlink_of_raw(raw: RawTLink, fail: &impl Fn(String) -> ReadError) -> Result<TLink, ReadError> {
    let slot = |name: &str, v: &Option<String>| {
        PointOrder::from_symbol(v.as_deref())
            .ok_or_else(|| fail(format!("bad order symbol {v:?} in slot {name}")))
    };
    let tuple = PointRelation::new(
        slot("xs_ys", &raw.relation.xs_ys)?,
        slot("xs_ye", &raw.relation.xs_ye)?,
        slot("xe_ys", &raw.relation.xe_ys)?,
        slot("xe_ye", &raw.relation.xe_ye)?,
    );
    let relation =
        TemporalRelation::new(tuple, None).map_err(|e| fail(format!("bad relation: {e}")))?;
    let mut tlink =
        TLink::new(raw.source, raw.target, relation).map_err(|e| fail(e.to_string()))?;
    if let Some(id) = raw.id {
        tlink = tlink.with_id(id);
    }
    Ok(tlink.with_attributes(raw.attributes))
}

fn document_of_raw(
    raw: RawDocument,
    fail: &impl Fn(String) -> ReadError,
) -> Result<(Document, Option<String>), ReadError> {
    let dct = entity_of_raw(raw.dct, fail)?;
    let entities = raw
        .entities
        .into_iter()
        .map(|e| entity_of_raw(e, fail))
        .collect::<Result<Vec<_>, _>>()?;
    let tlinks = raw
        .tlinks
        .into_iter()
        .map(|t| tlink_of_raw(t, fail))
        .collect::<Result<Vec<_>, _>>()?;
    let doc = Document::new(raw.name, raw.text, dct, entities, tlinks)
        .map_err(|e| fail(e.to_string()))?;
    Ok((doc, raw.split))
}

/// Write the dataset as one JSON object per line, train split first.
pub fn write_jsonl(ds: &Dataset, path: impl AsRef<Path>) -> Result<(), ReadError> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| ReadError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut emit = |doc: &Document, split: &str| -> Result<(), ReadError> {
        let line = serde_json::to_string(&raw_document(doc, Some(split)))
            .expect("document serialization is infallible");
        writeln!(out, "{line}").map_err(|e| ReadError::io(path, e))
    };
    for doc in ds.train() {
        emit(doc, "train")?;
    }
    for doc in ds.test() {
        emit(doc, "test")?;
    }
    out.flush().map_err(|e| ReadError::io(path, e))
}

/// Read a JSON-lines file back into a dataset named after the file stem.
/// Documents without a split field land in train.
pub fn read_jsonl(path: impl AsRef<Path>) -> Result<Dataset, ReadError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| ReadError::io(path, e))?;
    let reader = std::io::BufReader::new(file);

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| ReadError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let number = i + 1;
        let fail = |message: String| ReadError::Line {
            path: path.to_owned(),
            line: number,
            message,
        };
        let raw: RawDocument = serde_json::from_str(&line).map_err(|e| fail(e.to_string()))?;
        let (doc, split) = document_of_raw(raw, &fail)?;
        match split.as_deref() {
            None | Some("train") => train.push(doc),
            Some("test") => test.push(doc),
            Some(other) => return Err(fail(format!("unknown split {other:?}"))),
        }
    }

    Dataset::new(file_stem(path), train, test).map_err(|source| ReadError::Model {
        path: path.to_owned(),
        source,
    })
}

/// One document as a single JSON line (no split field).
pub fn document_to_json(doc: &Document) -> String {
    serde_json::to_string(&raw_document(doc, None)).expect("document serialization is infallible")
}

/// Parse one document from its JSON form.
pub fn document_from_json(json: &str) -> Result<Document, ReadError> {
    let fail = |message: String| ReadError::Format {
        path: "<json>".into(),
        message,
    };
    let raw: RawDocument = serde_json::from_str(json).map_err(|e| fail(e.to_string()))?;
    document_of_raw(raw, &fail).map(|(doc, _)| doc)
}

/// JSON value for a set of tlinks, shaped like the `tlinks` field.
pub(crate) fn tlinks_to_json(tlinks: &[TLink]) -> serde_json::Value {
    serde_json::to_value(tlinks.iter().map(raw_tlink).collect::<Vec<_>>())
        .expect("tlink serialization is infallible")
}
