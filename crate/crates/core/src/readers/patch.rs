//! Corrective patches for known corpus annotation errors.
//!
//! Corpora ship with a handful of long-known bad annotations. Rather than
//! editing distributed files (which breaks checksums) or hard-coding fixes,
//! a registry entry can point at a patch file applied after parsing:
//!
//! ```toml
//! version = 1
//!
//! [[patch]]
//! document = "wsj_0026"
//! drop_tlinks = ["l41"]          # tlink ids to remove
//! drop_entities = ["e12"]        # entity ids to remove, with their tlinks
//! ```
//!
//! Patches only remove annotations; they never invent or relabel. A patch
//! naming a document or id that does not exist produces a warning, not an
//! error, so one patch file can serve several corpus variants.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use crate::model::Document;

use super::{ReadError, ReaderWarning};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Patch {
    document: String,
    #[serde(default)]
    drop_tlinks: Vec<String>,
    #[serde(default)]
    drop_entities: Vec<String>,
}

/// A loaded patch file: per-document corrective removals.
#[derive(Debug, Clone)]
pub struct PatchSet {
    patches: Vec<Patch>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPatchFile {
    version: u32,
    #[serde(default, rename = "patch")]
    patches: Vec<Patch>,
}

impl PatchSet {
    pub fn load(path: impl AsRef<Path>) -> Result<PatchSet, ReadError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|e| ReadError::io(path, e))?;
        let raw: RawPatchFile = toml::from_str(&content).map_err(|e| ReadError::Registry {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        if raw.version != 1 {
            return Err(ReadError::Registry {
                path: path.to_owned(),
                message: format!(
                    "unsupported patch file version {}; this build understands version 1",
                    raw.version
                ),
            });
        }
        Ok(PatchSet {
            patches: raw.patches,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// Apply every patch across both splits. Returns warnings for patches
    /// whose document was never seen and for listed ids that were absent.
    pub fn apply_all(
        &self,
        train: &mut Vec<Document>,
        test: &mut Vec<Document>,
    ) -> Result<Vec<ReaderWarning>, ReadError> {
        let mut warnings = Vec::new();
        let mut matched: BTreeSet<usize> = BTreeSet::new();

        for docs in [train, test] {
            for doc in docs.iter_mut() {
                for (i, patch) in self.patches.iter().enumerate() {
                    if patch.document == doc.name() {
                        matched.insert(i);
                        *doc = apply_one(doc, patch, &mut warnings)?;
                    }
                }
            }
        }

        for (i, patch) in self.patches.iter().enumerate() {
            if !matched.contains(&i) {
                warnings.push(ReaderWarning::new(
                    &patch.document,
                    "patch target not present in the corpus; patch ignored",
                ));
            }
        }
        Ok(warnings)
    }
}

fn apply_one(
    doc: &Document,
    patch: &Patch,
    warnings: &mut Vec<ReaderWarning>,
) -> Result<Document, ReadError> {
    let drop_entities: BTreeSet<&str> = patch.drop_entities.iter().map(String::as_str).collect();
    let drop_tlinks: BTreeSet<&str> = patch.drop_tlinks.iter().map(String::as_str).collect();

    for id in &drop_entities {
        if doc.entity_by_id(id).is_none() {
            warnings.push(ReaderWarning::new(
                doc.name(),
                format!("patch drops entity {id:?}, which does not exist"),
            ));
        }
    }
    for id in &drop_tlinks {
        if !doc.tlinks().iter().any(|t| t.id() == Some(id)) {
            warnings.push(ReaderWarning::new(
                doc.name(),
                format!("patch drops tlink {id:?}, which does not exist"),
            ));
        }
    }

    let entities: Vec<_> = doc
        .entities()
        .iter()
        .filter(|e| !drop_entities.contains(e.id.as_str()))
        .cloned()
        .collect();
    // Tlinks fall with their endpoints: a link into a dropped entity
    // cannot stay.
    let tlinks: Vec<_> = doc
        .tlinks()
        .iter()
        .filter(|t| {
            t.id().is_none_or(|id| !drop_tlinks.contains(id))
                && !drop_entities.contains(t.source())
                && !drop_entities.contains(t.target())
        })
        .cloned()
        .collect();

    Document::new(
        doc.name(),
        doc.text(),
        doc.dct().clone(),
        entities,
        tlinks,
    )
    .map_err(|source| ReadError::Model {
        path: doc.name().into(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Entity, EntityKind, TLink, CREATION_TIME, FUNCTION_IN_DOCUMENT};
    use crate::relations::{IntervalRelation, TemporalRelation};

    fn doc() -> Document {
        let dct = Entity::new("t0", EntityKind::Timex, "2000-01-01")
            .with_attribute(FUNCTION_IN_DOCUMENT, CREATION_TIME);
        let before = |s: &str, t: &str, id: &str| {
            TLink::new(s, t, TemporalRelation::from_interval(IntervalRelation::Before))
                .unwrap()
                .with_id(id)
        };
        Document::new(
            "d1",
            "",
            dct,
            vec![
                Entity::new("e1", EntityKind::Event, "a"),
                Entity::new("e2", EntityKind::Event, "b"),
                Entity::new("e3", EntityKind::Event, "c"),
            ],
            vec![
                before("e1", "e2", "l1"),
                before("e2", "e3", "l2"),
                before("e1", "e3", "l3"),
            ],
        )
        .unwrap()
    }

    fn load(content: &str) -> PatchSet {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::with_suffix(".toml").unwrap();
        f.write_all(content.as_bytes()).unwrap();
        PatchSet::load(f.path()).unwrap()
    }

    #[test]
    fn drops_remove_links_and_entities_with_their_links() {
        let patch = load(
            "version = 1\n\n[[patch]]\ndocument = \"d1\"\ndrop_tlinks = [\"l3\"]\ndrop_entities = [\"e2\"]\n",
        );
        let mut train = vec![doc()];
        let mut test = vec![];
        let warnings = patch.apply_all(&mut train, &mut test).unwrap();
        assert!(warnings.is_empty());
        let patched = &train[0];
        assert_eq!(patched.entities().len(), 2);
        // l1 and l2 touched e2, l3 was dropped by id: nothing remains.
        assert!(patched.tlinks().is_empty());
    }

    #[test]
    fn missing_targets_warn_instead_of_failing() {
        let patch = load(
            "version = 1\n\n[[patch]]\ndocument = \"d1\"\ndrop_tlinks = [\"l9\"]\n\n[[patch]]\ndocument = \"ghost\"\ndrop_tlinks = [\"l1\"]\n",
        );
        let mut train = vec![doc()];
        let mut test = vec![];
        let warnings = patch.apply_all(&mut train, &mut test).unwrap();
        assert_eq!(warnings.len(), 2);
        assert!(warnings.iter().any(|w| w.detail.contains("l9")));
        assert!(warnings.iter().any(|w| w.document == "ghost"));
        assert_eq!(train[0].tlinks().len(), 3);
    }
}
