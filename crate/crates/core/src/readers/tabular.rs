//! Delimiter-separated tlink tables (MATRES-style distributions).
//!
//! Each row names a document, two entity ids, and a relation label; a
//! [`TabularSchema`] says which column is which. Rows sharing a document
//! name are grouped into one document. Without a base dataset the documents
//! are synthesized — no text, span-less entities created on first mention,
//! a placeholder creation time. With a base, text and entities come from
//! the matching base document and only the tlinks are replaced.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::model::{Dataset, Document, Entity, EntityKind, TLink};
use crate::relations::{parse_relation, Convention};

use super::{file_stem, ReadError, ReaderWarning};

/// What a column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    DocName,
    SourceId,
    TargetId,
    Relation,
    Ignore,
}

impl ColumnRole {
    pub fn name(self) -> &'static str {
        match self {
            ColumnRole::DocName => "doc_name",
            ColumnRole::SourceId => "source_id",
            ColumnRole::TargetId => "target_id",
            ColumnRole::Relation => "relation",
            ColumnRole::Ignore => "ignore",
        }
    }
}

impl FromStr for ColumnRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "doc_name" => Ok(ColumnRole::DocName),
            "source_id" => Ok(ColumnRole::SourceId),
            "target_id" => Ok(ColumnRole::TargetId),
            "relation" => Ok(ColumnRole::Relation),
            "ignore" => Ok(ColumnRole::Ignore),
            other => Err(format!(
                "unknown column role {other:?} (expected doc_name, source_id, target_id, relation, or ignore)"
            )),
        }
    }
}

/// Column layout of a tabular tlink file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabularSchema {
    columns: Vec<ColumnRole>,
    delimiter: u8,
    has_header: bool,
}

impl TabularSchema {
    /// Validate a layout: each non-ignore role must appear exactly once.
    pub fn new(
        columns: Vec<ColumnRole>,
        delimiter: u8,
        has_header: bool,
    ) -> Result<Self, ReadError> {
        for role in [
            ColumnRole::DocName,
            ColumnRole::SourceId,
            ColumnRole::TargetId,
            ColumnRole::Relation,
        ] {
            let count = columns.iter().filter(|&&c| c == role).count();
            if count != 1 {
                return Err(ReadError::InvalidSchema {
                    message: format!("column role {} appears {count} times, need exactly 1", role.name()),
                });
            }
        }
        Ok(TabularSchema {
            columns,
            delimiter,
            has_header,
        })
    }

    /// The layout of the MATRES distribution files: document, two ignored
    /// verb surface-form columns, two instance ids, relation; tab-separated,
    /// no header.
    pub fn matres() -> Self {
        TabularSchema::new(
            vec![
                ColumnRole::DocName,
                ColumnRole::Ignore,
                ColumnRole::Ignore,
                ColumnRole::SourceId,
                ColumnRole::TargetId,
                ColumnRole::Relation,
            ],
            b'\t',
            false,
        )
        .expect("the built-in layout is valid")
    }

    pub fn columns(&self) -> &[ColumnRole] {
        &self.columns
    }

    pub fn delimiter(&self) -> u8 {
        self.delimiter
    }

    pub fn has_header(&self) -> bool {
        self.has_header
    }

    fn position(&self, role: ColumnRole) -> usize {
        self.columns
            .iter()
            .position(|&c| c == role)
            .expect("validated in TabularSchema::new")
    }
}

pub fn read_tabular(
    path: impl AsRef<Path>,
    schema: &TabularSchema,
    convention: Convention,
    base: Option<&Dataset>,
) -> Result<Dataset, ReadError> {
    read_tabular_with_warnings(path, schema, convention, base).map(|(ds, _)| ds)
}

/// Parse a tabular tlink file into a dataset named after the file stem.
///
/// With `base`, each document keeps the base document's text and entities
/// (plus span-less stubs for ids the base does not know) and its split
/// membership; tlink sets are replaced outright, and names missing from the
/// base are synthesized with a warning. Rows with an unparseable relation
/// label fail hard, naming the row.
pub fn read_tabular_with_warnings(
    path: impl AsRef<Path>,
    schema: &TabularSchema,
    convention: Convention,
    base: Option<&Dataset>,
) -> Result<(Dataset, Vec<ReaderWarning>), ReadError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(schema.has_header)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => ReadError::io(path, io),
            other => ReadError::Format {
                path: path.to_owned(),
                message: format!("{other:?}"),
            },
        })?;

    let mut warnings = Vec::new();

    // Tlinks per document, in file order for both keys and rows.
    let mut by_doc: BTreeMap<String, Vec<TLink>> = BTreeMap::new();
    let mut doc_order: Vec<String> = Vec::new();

    let (dc, sc, tc, rc) = (
        schema.position(ColumnRole::DocName),
        schema.position(ColumnRole::SourceId),
        schema.position(ColumnRole::TargetId),
        schema.position(ColumnRole::Relation),
    );

    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e
                .position()
                .map(|p| p.line() as usize)
                .unwrap_or_default();
            ReadError::Line {
                path: path.to_owned(),
                line,
                message: e.to_string(),
            }
        })?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or_default();
        let fail = |message: String| ReadError::Line {
            path: path.to_owned(),
            line,
            message,
        };

        let field = |idx: usize| {
            record
                .get(idx)
                .map(str::trim)
                .ok_or_else(|| fail(format!("missing column {idx}")))
        };
        let doc_name = field(dc)?;
        let source = field(sc)?;
        let target = field(tc)?;
        let label = field(rc)?;

        if doc_name.is_empty() || source.is_empty() || target.is_empty() {
            return Err(fail("empty document or entity id".to_owned()));
        }
        if source == target {
            warnings.push(ReaderWarning::new(
                doc_name,
                format!("row {line} links {source:?} to itself; skipped"),
            ));
            continue;
        }

        let relation =
            parse_relation(label, convention).map_err(|source| ReadError::Relation {
                context: format!("{} row {line}", path.display()),
                source,
            })?;
        let tlink = TLink::new(source, target, relation)
            .map_err(|e| fail(e.to_string()))?;

        by_doc
            .entry(doc_name.to_owned())
            .or_insert_with(|| {
                doc_order.push(doc_name.to_owned());
                Vec::new()
            })
            .push(tlink);
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for name in doc_order {
        let tlinks = by_doc.remove(&name).expect("inserted above");
        match base.and_then(|ds| ds.document_by_name(&name)) {
            Some(base_doc) => {
                let doc = overlay(base_doc, tlinks).map_err(|source| ReadError::Model {
                    path: path.to_owned(),
                    source,
                })?;
                let in_test = base
                    .map(|ds| ds.test().iter().any(|d| d.name() == name))
                    .unwrap_or(false);
                if in_test {
                    test.push(doc);
                } else {
                    train.push(doc);
                }
            }
            None => {
                if base.is_some() {
                    warnings.push(ReaderWarning::new(
                        &name,
                        "not found in the base dataset; synthesized without text",
                    ));
                }
                let doc = synthesize(&name, tlinks).map_err(|source| ReadError::Model {
                    path: path.to_owned(),
                    source,
                })?;
                train.push(doc);
            }
        }
    }

    let ds = Dataset::new(file_stem(path), train, test).map_err(|source| ReadError::Model {
        path: path.to_owned(),
        source,
    })?;
    Ok((ds, warnings))
}

/// Ids that look like time expressions get the timex kind; everything else
/// is an event. Tabular files carry no kind column, so this mirrors the
/// t-prefix naming used by the TimeML-derived corpora.
fn stub(id: &str) -> Entity {
    let kind = if id.starts_with('t') {
        EntityKind::Timex
    } else {
        EntityKind::Event
    };
    Entity::new(id, kind, "")
}

/// A text-less document holding only the tabular tlinks.
fn synthesize(name: &str, tlinks: Vec<TLink>) -> Result<Document, crate::model::ModelError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut entities = Vec::new();
    for t in &tlinks {
        for id in [t.source(), t.target()] {
            if seen.insert(id.to_owned()) {
                entities.push(stub(id));
            }
        }
    }
    // Pick a creation-time id that cannot collide with a row entity.
    let mut dct_id = String::from("dct");
    let mut n = 0;
    while seen.contains(&dct_id) {
        dct_id = format!("dct{n}");
        n += 1;
    }
    Document::new(name, "", Entity::placeholder_dct(dct_id), entities, tlinks)
}

/// The base document with its tlinks replaced; ids the base does not know
/// become span-less stubs so every row survives.
fn overlay(base: &Document, tlinks: Vec<TLink>) -> Result<Document, crate::model::ModelError> {
    let mut entities = base.entities().to_vec();
    let mut known: std::collections::BTreeSet<String> = entities
        .iter()
        .map(|e| e.id.clone())
        .chain(std::iter::once(base.dct().id.clone()))
        .collect();
    for t in &tlinks {
        for id in [t.source(), t.target()] {
            if known.insert(id.to_owned()) {
                entities.push(stub(id));
            }
        }
    }
    Document::new(
        base.name(),
        base.text(),
        base.dct().clone(),
        entities,
        tlinks,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CREATION_TIME, FUNCTION_IN_DOCUMENT};
    use crate::relations::PointOrder;

    fn write(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::with_suffix(".tsv").unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn start_point_rows_become_start_ordered_tuples() {
        let f = write("docA\tended\tcame\te1\te2\tBEFORE\n");
        let (ds, warnings) =
            read_tabular_with_warnings(f.path(), &TabularSchema::matres(), Convention::MatresStartPoint, None)
                .unwrap();
        assert!(warnings.is_empty());
        let doc = &ds.train()[0];
        assert_eq!(doc.name(), "docA");
        let p = doc.tlinks()[0].relation().point();
        assert_eq!(p.xs_ys, PointOrder::Before);
        assert_eq!(p.xs_ye, PointOrder::Before); // start(a) < start(b) < end(b)
        assert_eq!(p.xe_ys, PointOrder::Undefined);
        assert_eq!(p.xe_ye, PointOrder::Undefined);
    }

    #[test]
    fn rows_group_by_document() {
        let f = write(
            "docA\tx\ty\te1\te2\tBEFORE\n\
             docB\tx\ty\te3\te4\tAFTER\n\
             docA\tx\ty\te1\te5\tVAGUE\n",
        );
        let ds = read_tabular(
            f.path(),
            &TabularSchema::matres(),
            Convention::MatresStartPoint,
            None,
        )
        .unwrap();
        assert_eq!(ds.train().len(), 2);
        let doc_a = ds.document_by_name("docA").unwrap();
        assert_eq!(doc_a.tlinks().len(), 2);
        assert_eq!(doc_a.entities().len(), 3); // e1, e2, e5
        assert_eq!(ds.document_by_name("docB").unwrap().tlinks().len(), 1);
    }

    #[test]
    fn unknown_label_fails_naming_the_row() {
        let f = write("docA\tx\ty\te1\te2\tBEFORE\ndocA\tx\ty\te1\te3\tSOMETIME\n");
        match read_tabular(
            f.path(),
            &TabularSchema::matres(),
            Convention::MatresStartPoint,
            None,
        ) {
            Err(ReadError::Relation { context, .. }) => assert!(context.contains("row 2")),
            other => panic!("expected a relation error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_gives_an_empty_dataset() {
        let f = write("");
        let ds = read_tabular(
            f.path(),
            &TabularSchema::matres(),
            Convention::MatresStartPoint,
            None,
        )
        .unwrap();
        assert!(ds.is_empty());
    }

    #[test]
    fn header_row_is_skipped_when_declared() {
        let schema = TabularSchema::new(
            vec![ColumnRole::DocName, ColumnRole::SourceId, ColumnRole::TargetId, ColumnRole::Relation],
            b',',
            true,
        )
        .unwrap();
        let f = write("doc,src,tgt,rel\ndocA,e1,e2,BEFORE\n");
        let ds = read_tabular(f.path(), &schema, Convention::Interval, None).unwrap();
        assert_eq!(ds.train().len(), 1);
        assert_eq!(ds.train()[0].tlinks().len(), 1);
    }

    #[test]
    fn schema_requires_each_role_once() {
        assert!(matches!(
            TabularSchema::new(vec![ColumnRole::DocName, ColumnRole::SourceId], b'\t', false),
            Err(ReadError::InvalidSchema { .. })
        ));
        assert!(matches!(
            TabularSchema::new(
                vec![
                    ColumnRole::DocName,
                    ColumnRole::DocName,
                    ColumnRole::SourceId,
                    ColumnRole::TargetId,
                    ColumnRole::Relation
                ],
                b'\t',
                false
            ),
            Err(ReadError::InvalidSchema { .. })
        ));
    }

    #[test]
    fn base_documents_keep_text_and_gain_stubs() {
        let dct = Entity::new("t0", EntityKind::Timex, "2000-01-01")
            .with_attribute(FUNCTION_IN_DOCUMENT, CREATION_TIME);
        let base_doc = Document::new(
            "docA",
            "it rained",
            dct,
            vec![Entity::new("e1", EntityKind::Event, "rained").with_span(3, 9)],
            vec![],
        )
        .unwrap();
        let base = Dataset::new("base", vec![], vec![base_doc]).unwrap();

        let f = write("docA\tx\ty\tei1\te1\tBEFORE\ndocZ\tx\ty\te1\te2\tAFTER\n");
        let (ds, warnings) = read_tabular_with_warnings(
            f.path(),
            &TabularSchema::matres(),
            Convention::MatresStartPoint,
            Some(&base),
        )
        .unwrap();

        // docA keeps split membership (test), text, entities; ei1 is stubbed.
        assert_eq!(ds.test().len(), 1);
        let doc = &ds.test()[0];
        assert_eq!(doc.text(), "it rained");
        assert_eq!(doc.tlinks().len(), 1);
        let stub = doc.entity_by_id("ei1").unwrap();
        assert_eq!(stub.kind, EntityKind::Event);
        assert_eq!(stub.span, None);
        // docZ is unknown to the base: synthesized into train, with warning.
        assert_eq!(ds.train().len(), 1);
        assert_eq!(ds.train()[0].name(), "docZ");
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].detail.contains("base"));
    }

    #[test]
    fn self_link_rows_are_skipped_with_a_warning() {
        let f = write("docA\tx\ty\te1\te1\tBEFORE\ndocA\tx\ty\te1\te2\tBEFORE\n");
        let (ds, warnings) = read_tabular_with_warnings(
            f.path(),
            &TabularSchema::matres(),
            Convention::MatresStartPoint,
            None,
        )
        .unwrap();
        assert_eq!(ds.train()[0].tlinks().len(), 1);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].detail.contains("itself"));
    }
}
