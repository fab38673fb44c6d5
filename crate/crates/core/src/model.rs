//! Documents, entities, temporal links, and datasets.
//!
//! A [`Document`] owns its raw text, a distinguished creation-time timex,
//! the annotated entities, and the tlinks between them. Construction
//! validates the invariants every downstream consumer relies on: ids are
//! unique (the creation time shares the namespace), tlink endpoints resolve,
//! and spans index the text exactly. Documents are immutable afterwards and
//! safe to share across threads.
//!
//! Spans are half-open `[start, end)` ranges counted in Unicode scalar
//! values, not bytes, so they survive serialization to other languages.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::Add;

use thiserror::Error;

use crate::relations::TemporalRelation;

/// Attribute marking the creation-time timex of a document.
pub const FUNCTION_IN_DOCUMENT: &str = "functionInDocument";
/// Value of [`FUNCTION_IN_DOCUMENT`] identifying the creation time.
pub const CREATION_TIME: &str = "CREATION_TIME";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Event,
    Timex,
}

impl EntityKind {
    pub fn name(self) -> &'static str {
        match self {
            EntityKind::Event => "event",
            EntityKind::Timex => "timex",
        }
    }
}

impl std::fmt::Display for EntityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An annotated temporal entity: an event or a time expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub id: String,
    pub kind: EntityKind,
    /// Surface form. For span-carrying entities this equals the text slice.
    pub text: String,
    /// Half-open character range into the owning document's text; absent for
    /// entities without a recoverable position (tabular corpora, creation
    /// times outside the text body).
    pub span: Option<(usize, usize)>,
    /// Open-ended annotation attributes (class, tense, timex type/value, ...).
    pub attributes: BTreeMap<String, String>,
}

impl Entity {
    pub fn new(id: impl Into<String>, kind: EntityKind, text: impl Into<String>) -> Self {
        Entity {
            id: id.into(),
            kind,
            text: text.into(),
            span: None,
            attributes: BTreeMap::new(),
        }
    }

    pub fn with_span(mut self, start: usize, end: usize) -> Self {
        self.span = Some((start, end));
        self
    }

    pub fn with_attribute(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attributes.insert(key.into(), value.into());
        self
    }

    /// True for the creation-time timex.
    pub fn is_creation_time(&self) -> bool {
        self.kind == EntityKind::Timex
            && self.attributes.get(FUNCTION_IN_DOCUMENT).map(String::as_str)
                == Some(CREATION_TIME)
    }

    /// A minimal creation-time placeholder for documents synthesized from
    /// formats that carry no timestamp of their own.
    pub fn placeholder_dct(id: impl Into<String>) -> Self {
        Entity::new(id, EntityKind::Timex, "")
            .with_attribute(FUNCTION_IN_DOCUMENT, CREATION_TIME)
    }
}

/// A directed temporal link between two entities of one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TLink {
    id: Option<String>,
    source: String,
    target: String,
    relation: TemporalRelation,
    attributes: BTreeMap<String, String>,
}

impl TLink {
    pub fn new(
        source: impl Into<String>,
        target: impl Into<String>,
        relation: TemporalRelation,
    ) -> Result<Self, ModelError> {
        let source = source.into();
        let target = target.into();
        if source.is_empty() || target.is_empty() {
            return Err(ModelError::EmptyId);
        }
        if source == target {
            return Err(ModelError::SelfLink { id: source });
        }
        Ok(TLink {
            id: None,
            source,
            target,
            relation,
            attributes: BTreeMap::new(),
        })
    }

    /// Construction for callers that guarantee distinct endpoints themselves.
    pub(crate) fn new_unchecked(source: String, target: String, relation: TemporalRelation) -> Self {
        debug_assert!(source != target && !source.is_empty());
        TLink {
            id: None,
            source,
            target,
            relation,
            attributes: BTreeMap::new(),
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn with_attributes(mut self, attributes: BTreeMap<String, String>) -> Self {
        self.attributes = attributes;
        self
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn relation(&self) -> &TemporalRelation {
        &self.relation
    }

    pub fn attributes(&self) -> &BTreeMap<String, String> {
        &self.attributes
    }

    /// The same link seen from the target: endpoints swapped, relation
    /// inverted. Id and attributes are preserved.
    pub fn inverted(&self) -> TLink {
        TLink {
            id: self.id.clone(),
            source: self.target.clone(),
            target: self.source.clone(),
            relation: crate::relations::invert(&self.relation),
            attributes: self.attributes.clone(),
        }
    }

    /// Total order key used for multiset comparison and stable output.
    fn sort_key(&self) -> (String, String, Vec<u8>, Option<String>) {
        let tuple = self
            .relation
            .point()
            .as_array()
            .iter()
            .map(|o| *o as u8)
            .collect();
        (
            self.source.clone(),
            self.target.clone(),
            tuple,
            self.id.clone(),
        )
    }
}

/// One annotated text with its creation time, entities, and tlinks.
#[derive(Debug, Clone)]
pub struct Document {
    name: String,
    text: String,
    dct: Entity,
    entities: Vec<Entity>,
    tlinks: Vec<TLink>,
}

impl Document {
    /// Validate and build a document. `entities` must not repeat the
    /// creation time; tlinks may reference it like any other entity.
    pub fn new(
        name: impl Into<String>,
        text: impl Into<String>,
        dct: Entity,
        entities: Vec<Entity>,
        tlinks: Vec<TLink>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        let text = text.into();

        if !dct.is_creation_time() {
            return Err(ModelError::InvalidCreationTime {
                document: name,
                id: dct.id,
            });
        }

        let mut ids: HashSet<&str> = HashSet::with_capacity(entities.len() + 1);
        for entity in std::iter::once(&dct).chain(&entities) {
            if entity.id.is_empty() {
                return Err(ModelError::EmptyId);
            }
            if !ids.insert(&entity.id) {
                return Err(ModelError::DuplicateEntityId {
                    document: name,
                    id: entity.id.clone(),
                });
            }
        }

        // Byte offset of every character boundary, so span checks are exact
        // in character space without re-walking the text per entity.
        let boundaries: Vec<usize> = text
            .char_indices()
            .map(|(b, _)| b)
            .chain(std::iter::once(text.len()))
            .collect();
        let n_chars = boundaries.len() - 1;
        for entity in std::iter::once(&dct).chain(&entities) {
            if let Some((start, end)) = entity.span {
                if start >= end || end > n_chars {
                    return Err(ModelError::InvalidSpan {
                        document: name,
                        id: entity.id.clone(),
                        start,
                        end,
                        text_len: n_chars,
                    });
                }
                let slice = &text[boundaries[start]..boundaries[end]];
                if slice != entity.text {
                    return Err(ModelError::SpanTextMismatch {
                        document: name,
                        id: entity.id.clone(),
                        span_text: slice.to_owned(),
                        entity_text: entity.text.clone(),
                    });
                }
            }
        }

        for tlink in &tlinks {
            for endpoint in [tlink.source(), tlink.target()] {
                if !ids.contains(endpoint) {
                    return Err(ModelError::UnresolvedEndpoint {
                        document: name,
                        tlink: tlink.id().unwrap_or("<unnamed>").to_owned(),
                        id: endpoint.to_owned(),
                    });
                }
            }
        }

        Ok(Document {
            name,
            text,
            dct,
            entities,
            tlinks,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn dct(&self) -> &Entity {
        &self.dct
    }

    /// Annotated entities, creation time excluded.
    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn tlinks(&self) -> &[TLink] {
        &self.tlinks
    }

    /// Look up an entity by id; the creation time is addressable too.
    pub fn entity_by_id(&self, id: &str) -> Option<&Entity> {
        if self.dct.id == id {
            return Some(&self.dct);
        }
        self.entities.iter().find(|e| e.id == id)
    }

    /// Slice the text by a character span.
    pub fn slice(&self, span: (usize, usize)) -> Option<&str> {
        slice_chars(&self.text, span)
    }
}

/// Slice `text` by a half-open character range.
pub fn slice_chars(text: &str, (start, end): (usize, usize)) -> Option<&str> {
    if start >= end {
        return None;
    }
    let mut indices = text.char_indices().map(|(b, _)| b);
    let from = indices.by_ref().nth(start)?;
    let to = match indices.nth(end - start - 1) {
        Some(b) => b,
        None if end == text.chars().count() => text.len(),
        None => return None,
    };
    Some(&text[from..to])
}

impl PartialEq for Document {
    /// Structural equality: same name, text, and creation time, and the same
    /// entity and tlink multisets regardless of order.
    fn eq(&self, other: &Self) -> bool {
        if self.name != other.name || self.text != other.text || self.dct != other.dct {
            return false;
        }
        let sorted = |v: &[Entity]| {
            let mut v: Vec<Entity> = v.to_vec();
            v.sort_by(|a, b| a.id.cmp(&b.id));
            v
        };
        if sorted(&self.entities) != sorted(&other.entities) {
            return false;
        }
        let sorted_links = |v: &[TLink]| {
            let mut v: Vec<TLink> = v.to_vec();
            v.sort_by_key(|t| t.sort_key());
            v
        };
        sorted_links(&self.tlinks) == sorted_links(&other.tlinks)
    }
}

impl Eq for Document {}

/// A named corpus with a train and a test split. Corpora without a split
/// keep everything in `train`.
#[derive(Debug, Clone)]
pub struct Dataset {
    name: String,
    train: Vec<Document>,
    test: Vec<Document>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        train: Vec<Document>,
        test: Vec<Document>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        let mut seen = HashSet::new();
        for doc in train.iter().chain(&test) {
            if !seen.insert(doc.name()) {
                return Err(ModelError::DuplicateDocumentName {
                    dataset: name,
                    document: doc.name().to_owned(),
                });
            }
        }
        Ok(Dataset { name, train, test })
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Dataset {
            name: name.into(),
            train: Vec::new(),
            test: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn train(&self) -> &[Document] {
        &self.train
    }

    pub fn test(&self) -> &[Document] {
        &self.test
    }

    /// All documents, train split first.
    pub fn documents(&self) -> impl Iterator<Item = &Document> {
        self.train.iter().chain(self.test.iter())
    }

    pub fn document_by_name(&self, name: &str) -> Option<&Document> {
        self.documents().find(|d| d.name() == name)
    }

    pub fn is_empty(&self) -> bool {
        self.train.is_empty() && self.test.is_empty()
    }

    /// Decompose into name and owned splits (train, then test).
    pub fn into_parts(self) -> (String, Vec<Document>, Vec<Document>) {
        (self.name, self.train, self.test)
    }
}

fn sorted_by_name(v: &[Document]) -> Vec<&Document> {
    let mut v: Vec<&Document> = v.iter().collect();
    v.sort_by(|a, b| a.name().cmp(b.name()));
    v
}

impl PartialEq for Dataset {
    /// Same name and the same documents per split, regardless of order.
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && sorted_by_name(&self.train) == sorted_by_name(&other.train)
            && sorted_by_name(&self.test) == sorted_by_name(&other.test)
    }
}

impl Eq for Dataset {}

/// Aggregate counts over a document collection. The creation time counts as
/// one timex per document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct DatasetStats {
    pub docs: usize,
    pub events: usize,
    pub timexs: usize,
    pub tlinks: usize,
}

impl Add for DatasetStats {
    type Output = DatasetStats;

    fn add(self, rhs: DatasetStats) -> DatasetStats {
        DatasetStats {
            docs: self.docs + rhs.docs,
            events: self.events + rhs.events,
            timexs: self.timexs + rhs.timexs,
            tlinks: self.tlinks + rhs.tlinks,
        }
    }
}

/// Counts for one document collection (one split, usually).
pub fn split_stats(docs: &[Document]) -> DatasetStats {
    let mut stats = DatasetStats::default();
    for doc in docs {
        stats.docs += 1;
        stats.timexs += 1; // the creation time
        for entity in doc.entities() {
            match entity.kind {
                EntityKind::Event => stats.events += 1,
                EntityKind::Timex => stats.timexs += 1,
            }
        }
        stats.tlinks += doc.tlinks().len();
    }
    stats
}

/// Counts aggregated over both splits.
pub fn dataset_stats(ds: &Dataset) -> DatasetStats {
    split_stats(ds.train()) + split_stats(ds.test())
}

/// Document pairs (across both splits) whose whitespace-collapsed text is
/// identical — the classic sign of a news article entering a corpus twice.
/// Each unordered pair is reported once, names sorted, output sorted.
pub fn find_duplicate_texts(ds: &Dataset) -> Vec<(String, String)> {
    let mut groups: HashMap<String, Vec<&str>> = HashMap::new();
    for doc in ds.documents() {
        let collapsed = doc.text().split_whitespace().collect::<Vec<_>>().join(" ");
        groups.entry(collapsed).or_default().push(doc.name());
    }
    let mut pairs = Vec::new();
    for (_, mut names) in groups {
        if names.len() < 2 {
            continue;
        }
        names.sort_unstable();
        for i in 0..names.len() {
            for j in (i + 1)..names.len() {
                pairs.push((names[i].to_owned(), names[j].to_owned()));
            }
        }
    }
    pairs.sort();
    pairs
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("entity and tlink ids must be non-empty")]
    EmptyId,
    #[error("document {document:?}: duplicate entity id {id:?}")]
    DuplicateEntityId { document: String, id: String },
    #[error("document {document:?}: tlink {tlink:?} references unknown entity {id:?}")]
    UnresolvedEndpoint {
        document: String,
        tlink: String,
        id: String,
    },
    #[error("tlink endpoints must differ (both are {id:?})")]
    SelfLink { id: String },
    #[error("document {document:?}: span {start}..{end} of entity {id:?} exceeds text length {text_len}")]
    InvalidSpan {
        document: String,
        id: String,
        start: usize,
        end: usize,
        text_len: usize,
    },
    #[error("document {document:?}: entity {id:?} text {entity_text:?} does not match its span slice {span_text:?}")]
    SpanTextMismatch {
        document: String,
        id: String,
        span_text: String,
        entity_text: String,
    },
    #[error("document {document:?}: creation time {id:?} must be a timex carrying functionInDocument=CREATION_TIME")]
    InvalidCreationTime { document: String, id: String },
    #[error("dataset {dataset:?}: duplicate document name {document:?}")]
    DuplicateDocumentName { dataset: String, document: String },
}
