//! Corpus retrieval: download (or copy), verify, extract, mark complete.
//!
//! Every corpus lands in its own directory under the destination root. A
//! `.complete` marker written after successful extraction makes the whole
//! operation idempotent — a second fetch sees the marker and returns
//! without touching the network. Checksums are verified on the raw bytes
//! before anything is written, so a mismatch leaves no partial state.

use std::io::Cursor;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{ReadError, Registry};

/// Marker file recording a completed fetch.
const MARKER: &str = ".complete";

/// Download limit; corpora are zip archives or text files, far below this.
const MAX_BODY: u64 = 4 << 30;

/// Whether `dest_dir/<name>` already holds a completed fetch.
pub fn is_fetched(name: &str, dest_dir: &Path) -> bool {
    dest_dir.join(name).join(MARKER).is_file()
}

/// Materialize a registry corpus under `dest_dir/<name>` and return that
/// directory. Remote `http(s)` urls are downloaded; `file://` urls and bare
/// relative paths (resolved against the registry file) are copied. Zip
/// archives are extracted; any other archive extension is refused; plain
/// files are stored as-is.
pub fn fetch(name: &str, registry: &Registry, dest_dir: &Path) -> Result<PathBuf, ReadError> {
    let entry = registry
        .get(name)
        .ok_or_else(|| ReadError::UnknownDataset {
            name: name.to_owned(),
            available: registry.names().iter().map(|s| s.to_string()).collect(),
        })?;

    let target = dest_dir.join(&entry.name);
    let marker = target.join(MARKER);
    if marker.is_file() {
        return Ok(target);
    }

    let bytes = obtain(&entry.url, registry.dir())?;

    if let Some(expected) = &entry.checksum {
        let actual = hex(&Sha256::digest(&bytes));
        if &actual != expected {
            return Err(ReadError::Checksum {
                url: entry.url.clone(),
                expected: expected.clone(),
                actual,
            });
        }
    }

    std::fs::create_dir_all(&target).map_err(|e| ReadError::io(&target, e))?;
    let file_name = url_file_name(&entry.url);
    if file_name.to_ascii_lowercase().ends_with(".zip") {
        let mut archive =
            zip::ZipArchive::new(Cursor::new(bytes)).map_err(|e| ReadError::Archive {
                url: entry.url.clone(),
                message: e.to_string(),
            })?;
        archive.extract(&target).map_err(|e| ReadError::Archive {
            url: entry.url.clone(),
            message: e.to_string(),
        })?;
    } else if is_archive_name(&file_name) {
        return Err(ReadError::UnsupportedArchive {
            url: entry.url.clone(),
        });
    } else {
        let dest = target.join(&file_name);
        std::fs::write(&dest, &bytes).map_err(|e| ReadError::io(&dest, e))?;
    }

    std::fs::write(&marker, format!("source: {}\n", entry.url))
        .map_err(|e| ReadError::io(&marker, e))?;
    Ok(target)
}

/// Raw bytes behind a registry url.
fn obtain(url: &str, registry_dir: &Path) -> Result<Vec<u8>, ReadError> {
    if url.starts_with("http://") || url.starts_with("https://") {
        let mut response = ureq::get(url).call().map_err(|e| match e {
            ureq::Error::StatusCode(status) => ReadError::HttpStatus {
                url: url.to_owned(),
                status,
            },
            other => ReadError::Http {
                url: url.to_owned(),
                message: other.to_string(),
            },
        })?;
        response
            .body_mut()
            .with_config()
            .limit(MAX_BODY)
            .read_to_vec()
            .map_err(|e| ReadError::Http {
                url: url.to_owned(),
                message: e.to_string(),
            })
    } else {
        let path = match url.strip_prefix("file://") {
            Some(rest) => PathBuf::from(rest),
            None => registry_dir.join(url),
        };
        std::fs::read(&path).map_err(|e| ReadError::io(&path, e))
    }
}

/// Last path segment of a url, query string stripped; used as the on-disk
/// name for plain-file corpora and to pick the extraction strategy.
pub(crate) fn url_file_name(url: &str) -> String {
    let no_query = url.split(['?', '#']).next().unwrap_or(url);
    no_query
        .trim_end_matches('/')
        .rsplit('/')
        .next()
        .filter(|s| !s.is_empty())
        .unwrap_or("download")
        .to_owned()
}

fn is_archive_name(name: &str) -> bool {
    let lower = name.to_ascii_lowercase();
    [".tar", ".tar.gz", ".tgz", ".tar.bz2", ".tar.xz", ".gz", ".bz2", ".xz", ".rar", ".7z"]
        .iter()
        .any(|ext| lower.ends_with(ext))
}

fn hex(digest: &[u8]) -> String {
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
