//! The corpus registry: a versioned TOML file mapping corpus names to
//! where they live and how to parse them.
//!
//! ```toml
//! version = 1
//!
//! [[dataset]]
//! name = "fixture_corpus"
//! url = "crates/core/tests/fixtures/archives/fixture_corpus.zip"
//! checksum = "9f7d..."          # sha-256, optional
//! format = "timeml"             # timeml | tabular | jsonlines
//! relation_convention = "timeml"
//! patch = "patches/fixture_corpus.toml"   # optional corrective edits
//!
//! [dataset.split]               # optional; omitted = everything in train
//! train = ["train"]
//! test = ["test"]
//!
//! [[dataset]]
//! name = "matres_platinum"
//! url = "https://raw.githubusercontent.com/qiangning/MATRES/master/platinum.txt"
//! format = "tabular"
//! relation_convention = "matres_start_point"
//!
//! [dataset.tabular]             # required for tabular entries
//! columns = ["doc_name", "ignore", "ignore", "source_id", "target_id", "relation"]
//! delimiter = "\t"
//! has_header = false
//! ```
//!
//! Relative `url`s resolve against the registry file's directory, so a
//! repository can ship fixture corpora alongside remote ones.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::relations::Convention;

use super::tabular::{ColumnRole, TabularSchema};
use super::ReadError;

/// Corpus file format, a closed set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    TimeML,
    Tabular,
    JsonLines,
}

impl CorpusFormat {
    pub fn name(self) -> &'static str {
        match self {
            CorpusFormat::TimeML => "timeml",
            CorpusFormat::Tabular => "tabular",
            CorpusFormat::JsonLines => "jsonlines",
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "timeml" => Ok(CorpusFormat::TimeML),
            "tabular" => Ok(CorpusFormat::Tabular),
            "jsonlines" | "jsonl" => Ok(CorpusFormat::JsonLines),
            other => Err(format!(
                "unknown corpus format {other:?} (expected timeml, tabular, or jsonlines)"
            )),
        }
    }
}

/// Which train/test split corpus files (or document names) belong to.
/// Tokens match path components and file stems for file-based corpora, and
/// document names for tabular ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitSpec {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// One corpus the registry knows how to obtain and parse.
#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub name: String,
    pub url: String,
    /// Expected sha-256 of the downloaded bytes, lowercase hex.
    pub checksum: Option<String>,
    pub format: CorpusFormat,
    pub relation_convention: Convention,
    pub split: Option<SplitSpec>,
    /// Column layout; present exactly when `format` is tabular.
    pub tabular: Option<TabularSchema>,
    /// Corrective patch file, relative to the registry file.
    pub patch: Option<PathBuf>,
}

/// A loaded registry plus the directory its relative urls resolve against.
#[derive(Debug, Clone)]
pub struct Registry {
    dir: PathBuf,
    entries: Vec<RegistryEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegistry {
    version: u32,
    #[serde(default, rename = "dataset")]
    datasets: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    url: String,
    checksum: Option<String>,
    format: String,
    relation_convention: String,
    split: Option<RawSplit>,
    tabular: Option<RawTabular>,
    patch: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSplit {
    #[serde(default)]
    train: Vec<String>,
    #[serde(default)]
    test: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTabular {
    columns: Vec<String>,
    delimiter: String,
    #[serde(default)]
    has_header: bool,
}

impl Registry {
    /// Load and validate a registry file.
    pub fn load(path: impl AsRef<Path>) -> Result<Registry, ReadError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|e| ReadError::io(path, e))?;
        let fail = |message: String| ReadError::Registry {
            path: path.to_owned(),
            message,
        };

        let raw: RawRegistry = toml::from_str(&content).map_err(|e| fail(e.to_string()))?;
        if raw.version != 1 {
            return Err(fail(format!(
                "unsupported registry version {}; this build understands version 1",
                raw.version
            )));
        }

        let mut entries = Vec::with_capacity(raw.datasets.len());
        let mut names = std::collections::BTreeSet::new();
        for ds in raw.datasets {
            let fail_entry =
                |message: String| fail(format!("dataset {:?}: {message}", ds.name));
            if !names.insert(ds.name.clone()) {
                return Err(fail(format!("duplicate dataset name {:?}", ds.name)));
            }
            if ds.name.is_empty()
                || ds
                    .name
                    .chars()
                    .any(|c| !c.is_ascii_alphanumeric() && c != '_' && c != '-')
            {
                return Err(fail_entry(
                    "names are restricted to ASCII letters, digits, '_' and '-' because they become directory names".to_owned(),
                ));
            }

            let format: CorpusFormat = ds.format.parse().map_err(&fail_entry)?;
            let relation_convention: Convention =
                ds.relation_convention.parse().map_err(|e: crate::relations::RelationError| fail_entry(e.to_string()))?;

            if let Some(checksum) = &ds.checksum {
                let ok = checksum.len() == 64 && checksum.chars().all(|c| c.is_ascii_hexdigit());
                if !ok {
                    return Err(fail_entry(format!(
                        "checksum {checksum:?} is not a 64-character hex sha-256 digest"
                    )));
                }
            }

            let tabular = match (format, ds.tabular) {
                (CorpusFormat::Tabular, Some(raw)) => {
                    let columns = raw
                        .columns
                        .iter()
                        .map(|c| c.parse::<ColumnRole>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(&fail_entry)?;
                    let mut chars = raw.delimiter.chars();
                    let delimiter = match (chars.next(), chars.next()) {
                        (Some(c), None) if c.is_ascii() => c as u8,
                        _ => {
                            return Err(fail_entry(format!(
                                "delimiter {:?} must be a single ASCII character",
                                raw.delimiter
                            )))
                        }
                    };
                    Some(
                        TabularSchema::new(columns, delimiter, raw.has_header)
                            .map_err(|e| fail_entry(e.to_string()))?,
                    )
                }
                (CorpusFormat::Tabular, None) => {
                    return Err(fail_entry(
                        "tabular entries need a [dataset.tabular] schema".to_owned(),
                    ))
                }
                (_, Some(_)) => {
                    return Err(fail_entry(format!(
                        "a tabular schema makes no sense for format {:?}",
                        format.name()
                    )))
                }
                (_, None) => None,
            };

            entries.push(RegistryEntry {
                name: ds.name,
                url: ds.url,
                checksum: ds.checksum.map(|c| c.to_ascii_lowercase()),
                format,
                relation_convention,
                split: ds.split.map(|s| SplitSpec {
                    train: s.train,
                    test: s.test,
                }),
                tabular,
                patch: ds.patch.map(PathBuf::from),
            });
        }

        let dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or_else(|| Path::new("."))
            .to_owned();
        Ok(Registry { dir, entries })
    }

    /// Directory of the registry file; relative urls and patch paths
    /// resolve against it.
    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&RegistryEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    /// An empty registry for path-only workflows.
    pub fn empty() -> Registry {
        Registry {
            dir: PathBuf::from("."),
            entries: Vec::new(),
        }
    }
}
