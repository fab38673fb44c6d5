//! Corpus input and output.
//!
//! Corpora arrive in three shapes: TimeML XML files ([`read_timeml`]),
//! delimiter-separated tlink tables ([`read_tabular`]), and this crate's own
//! JSON-lines interchange format ([`read_jsonl`] / [`write_jsonl`]). A
//! versioned registry file maps corpus names to download locations
//! ([`Registry`]), [`fetch`] materializes them on disk, and
//! [`read_dataset`] dispatches on either a registry name or a filesystem
//! path.
//!
//! Recoverable oddities in the input (a tlink pointing at a missing
//! instance, a duplicate instance declaration, an unknown document in a
//! patch file) never abort a parse: the affected item is skipped and
//! reported as a [`ReaderWarning`]. Anything that would silently change
//! meaning — an unknown relation label, a missing creation time, malformed
//! syntax — is a hard [`ReadError`].

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{Dataset, Document, ModelError};
use crate::relations::RelationError;

mod fetch;
mod jsonl;
mod patch;
mod registry;
mod tabular;
mod timeml;

pub use fetch::{fetch, is_fetched};
pub(crate) use jsonl::tlinks_to_json;
pub use jsonl::{document_from_json, document_to_json, read_jsonl, write_jsonl};
pub use patch::PatchSet;
pub use registry::{CorpusFormat, Registry, RegistryEntry, SplitSpec};
pub use tabular::{read_tabular, read_tabular_with_warnings, ColumnRole, TabularSchema};
pub use timeml::{read_timeml, read_timeml_with_warnings};

/// A recoverable irregularity found while reading a corpus. The offending
/// item was skipped (or a stated fallback applied); the document is still
/// usable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReaderWarning {
    /// Document (or file) the warning belongs to.
    pub document: String,
    pub detail: String,
}

impl ReaderWarning {
    pub(crate) fn new(document: impl Into<String>, detail: impl Into<String>) -> Self {
        ReaderWarning {
            document: document.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for ReaderWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.document, self.detail)
    }
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed XML: {message}")]
    Xml { path: PathBuf, message: String },
    #[error("{path}: no TIMEX3 carries functionInDocument=\"CREATION_TIME\" — every document needs a creation time")]
    MissingCreationTime { path: PathBuf },
    #[error("{context}: {source}")]
    Relation {
        context: String,
        #[source]
        source: RelationError,
    },
    #[error("{path}: {source}")]
    Model {
        path: PathBuf,
        #[source]
        source: ModelError,
    },
    #[error("{path} line {line}: {message}")]
    Line {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("invalid tabular schema: {message}")]
    InvalidSchema { message: String },
    #[error("registry {path}: {message}")]
    Registry { path: PathBuf, message: String },
    #[error("unknown dataset {name:?}; the registry provides: {}", available.join(", "))]
    UnknownDataset { name: String, available: Vec<String> },
    #[error("dataset {name:?} is not present under {dir} — fetch it first")]
    NotFetched { name: String, dir: PathBuf },
    #[error("GET {url} failed: {message}")]
    Http { url: String, message: String },
    #[error("GET {url} returned status {status}")]
    HttpStatus { url: String, status: u16 },
    #[error("checksum mismatch for {url}: expected {expected}, got {actual}; nothing was kept")]
    Checksum {
        url: String,
        expected: String,
        actual: String,
    },
    #[error("unsupported archive type at {url}: only .zip archives and plain files are handled")]
    UnsupportedArchive { url: String },
    #[error("archive from {url} is invalid: {message}")]
    Archive { url: String, message: String },
    #[error("cannot infer a corpus format for {path}: expected a directory of TimeML files, a .tml/.xml file, or a .jsonl file")]
    UnsupportedPath { path: PathBuf },
}

impl ReadError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ReadError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Load a corpus by registry name or filesystem path.
///
/// A name found in the registry resolves to `data_dir/<name>` as produced by
/// [`fetch`] and is parsed per its registry entry — format, relation
/// convention, train/test split, and optional patch file. Anything else is
/// treated as a path: a directory of TimeML files, a single `.tml`/`.xml`
/// file, or a `.jsonl` file, all landing in the train split unless the JSONL
/// says otherwise.
pub fn read_dataset(
    name_or_path: &str,
    registry: &Registry,
    data_dir: &Path,
) -> Result<Dataset, ReadError> {
    read_dataset_with_warnings(name_or_path, registry, data_dir).map(|(ds, _)| ds)
}

/// [`read_dataset`], also returning the warnings gathered along the way.
pub fn read_dataset_with_warnings(
    name_or_path: &str,
    registry: &Registry,
    data_dir: &Path,
) -> Result<(Dataset, Vec<ReaderWarning>), ReadError> {
    if let Some(entry) = registry.get(name_or_path) {
        return read_registry_entry(entry, registry, data_dir);
    }

    let path = Path::new(name_or_path);
    if path.is_dir() {
        let mut warnings = Vec::new();
        let docs = read_timeml_dir(path, &mut warnings)?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| name_or_path.to_owned());
        let ds = Dataset::new(name, docs, Vec::new())
            .map_err(|source| ReadError::Model {
                path: path.to_owned(),
                source,
            })?;
        return Ok((ds, warnings));
    }
    if path.is_file() {
        match extension_of(path).as_deref() {
            Some("jsonl") => {
                let ds = read_jsonl(path)?;
                return Ok((ds, Vec::new()));
            }
            Some("tml") | Some("xml") => {
                let (doc, warnings) = read_timeml_with_warnings(path)?;
                let name = file_stem(path);
                let ds = Dataset::new(name, vec![doc], Vec::new())
                    .map_err(|source| ReadError::Model {
                        path: path.to_owned(),
                        source,
                    })?;
                return Ok((ds, warnings));
            }
            _ => return Err(ReadError::UnsupportedPath {
                path: path.to_owned(),
            }),
        }
    }

    Err(ReadError::UnknownDataset {
        name: name_or_path.to_owned(),
        available: registry.names().iter().map(|s| s.to_string()).collect(),
    })
}

fn read_registry_entry(
    entry: &RegistryEntry,
    registry: &Registry,
    data_dir: &Path,
) -> Result<(Dataset, Vec<ReaderWarning>), ReadError> {
    let root = data_dir.join(&entry.name);
    if !root.is_dir() {
        return Err(ReadError::NotFetched {
            name: entry.name.clone(),
            dir: data_dir.to_owned(),
        });
    }

    let mut warnings = Vec::new();
    let (mut train, mut test): (Vec<Document>, Vec<Document>) = match entry.format {
        CorpusFormat::TimeML => {
            let files = timeml_files(&root)?;
            let mut train = Vec::new();
            let mut test = Vec::new();
            for file in files {
                let (doc, mut file_warnings) = read_timeml_with_warnings(&file)?;
                warnings.append(&mut file_warnings);
                match split_of_path(&root, &file, entry.split.as_ref()) {
                    Split::Test => test.push(doc),
                    Split::Train => train.push(doc),
                }
            }
            (train, test)
        }
        CorpusFormat::Tabular => {
            let file = fetched_file(&root, &entry.url, &entry.name, data_dir)?;
            let schema = entry
                .tabular
                .as_ref()
                .expect("registry validation requires a schema for tabular entries");
            let (ds, mut tab_warnings) =
                read_tabular_with_warnings(&file, schema, entry.relation_convention, None)?;
            warnings.append(&mut tab_warnings);
            let (_, docs, _) = ds.into_parts();
            match &entry.split {
                None => (docs, Vec::new()),
                Some(split) => {
                    let (mut train, mut test) = (Vec::new(), Vec::new());
                    for doc in docs {
                        if split.test.iter().any(|t| t == doc.name()) {
                            test.push(doc);
                        } else {
                            train.push(doc);
                        }
                    }
                    (train, test)
                }
            }
        }
        CorpusFormat::JsonLines => {
            let file = fetched_file(&root, &entry.url, &entry.name, data_dir)?;
            let (_, train, test) = read_jsonl(&file)?.into_parts();
            (train, test)
        }
    };

    if let Some(patch_path) = &entry.patch {
        let patch = PatchSet::load(&registry.dir().join(patch_path))?;
        let mut patch_warnings = patch.apply_all(&mut train, &mut test)?;
        warnings.append(&mut patch_warnings);
    }

    let ds = Dataset::new(entry.name.clone(), train, test)
        .map_err(|source| ReadError::Model {
            path: root,
            source,
        })?;
    Ok((ds, warnings))
}

/// The file a non-archive fetch saved for this entry.
fn fetched_file(
    root: &Path,
    url: &str,
    name: &str,
    data_dir: &Path,
) -> Result<PathBuf, ReadError> {
    let file = root.join(fetch::url_file_name(url));
    if file.is_file() {
        Ok(file)
    } else {
        Err(ReadError::NotFetched {
            name: name.to_owned(),
            dir: data_dir.to_owned(),
        })
    }
}

enum Split {
    Train,
    Test,
}

/// Match a corpus file against the registry split lists: a file belongs to
/// a split when any of its path components below the corpus root, or its
/// stem, appears in that split's token list. Test wins over train;
/// unmatched files default to train.
fn split_of_path(root: &Path, file: &Path, split: Option<&SplitSpec>) -> Split {
    let Some(split) = split else {
        return Split::Train;
    };
    let rel = file.strip_prefix(root).unwrap_or(file);
    let mut tokens: Vec<String> = rel
        .components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect();
    tokens.push(file_stem(file));
    if tokens.iter().any(|t| split.test.contains(t)) {
        Split::Test
    } else {
        Split::Train
    }
}

/// All TimeML files under `root`, recursively, path-sorted.
fn timeml_files(root: &Path) -> Result<Vec<PathBuf>, ReadError> {
    let mut files = Vec::new();
    let mut stack = vec![root.to_owned()];
    while let Some(dir) = stack.pop() {
        let entries = std::fs::read_dir(&dir).map_err(|e| ReadError::io(&dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| ReadError::io(&dir, e))?;
            let path = entry.path();
            if path.is_dir() {
                stack.push(path);
            } else if matches!(extension_of(&path).as_deref(), Some("tml") | Some("xml")) {
                files.push(path);
            }
        }
    }
    files.sort();
    Ok(files)
}

fn read_timeml_dir(
    dir: &Path,
    warnings: &mut Vec<ReaderWarning>,
) -> Result<Vec<Document>, ReadError> {
    let mut docs = Vec::new();
    for file in timeml_files(dir)? {
        let (doc, mut file_warnings) = read_timeml_with_warnings(&file)?;
        warnings.append(&mut file_warnings);
        docs.push(doc);
    }
    Ok(docs)
}

fn extension_of(path: &Path) -> Option<String> {
    path.extension().map(|e| e.to_string_lossy().to_lowercase())
}

pub(crate) fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned())
}
